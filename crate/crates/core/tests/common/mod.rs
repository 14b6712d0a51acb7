#![allow(dead_code)]

use std::f64::consts::PI;

use sphervol::{c_lower_bound, c_upper_bound, AntiprismSpec};

pub type V3 = [f64; 3];

fn dot(u: &V3, v: &V3) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn cross(u: &V3, v: &V3) -> V3 {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn norm(u: &V3) -> f64 {
    dot(u, u).sqrt()
}

/// Angle between two vectors of R^3.
pub fn angle_between(u: &V3, v: &V3) -> f64 {
    norm(&cross(u, v)).atan2(dot(u, v))
}

/// Interior angle at `p` of the spherical polygon corner `q - p - r`.
pub fn corner_angle(p: &V3, q: &V3, r: &V3) -> f64 {
    // tangent directions at p are the components of q and r orthogonal to p
    let along = |w: &V3| {
        let s = dot(w, p);
        [w[0] - s * p[0], w[1] - s * p[1], w[2] - s * p[2]]
    };
    angle_between(&along(q), &along(r))
}

/// An isosceles spherical trapezoid drawn on the unit 2-sphere: bases of
/// lengths `x` and `z` centered on the great circle `X = 0`, their
/// midpoints `beta` apart.
#[derive(Debug, Clone, Copy)]
pub struct DrawnTrapezoid {
    pub x: f64,
    pub z: f64,
    pub beta: f64,
    pub p_plus: V3,
    pub p_minus: V3,
    pub q_plus: V3,
    pub q_minus: V3,
}

impl DrawnTrapezoid {
    pub fn new(x: f64, z: f64, beta: f64) -> Self {
        let (sx, cx) = (0.5 * x).sin_cos();
        let (sz, cz) = (0.5 * z).sin_cos();
        let (sb, cb) = beta.sin_cos();
        DrawnTrapezoid {
            x,
            z,
            beta,
            p_plus: [sx, cx, 0.0],
            p_minus: [-sx, cx, 0.0],
            q_plus: [sz, cz * cb, cz * sb],
            q_minus: [-sz, cz * cb, cz * sb],
        }
    }

    /// Length of the lateral sides.
    pub fn y(&self) -> f64 {
        angle_between(&self.p_plus, &self.q_plus)
    }

    pub fn y_other(&self) -> f64 {
        angle_between(&self.p_minus, &self.q_minus)
    }

    /// Measured angle at the ends of base `x`.
    pub fn angle_a(&self) -> f64 {
        corner_angle(&self.p_plus, &self.p_minus, &self.q_plus)
    }

    /// Measured angle at the ends of base `z`.
    pub fn angle_c(&self) -> f64 {
        corner_angle(&self.q_plus, &self.q_minus, &self.p_plus)
    }
}

/// `(c0, c_max)` for `(n, a)`.
pub fn c_range(n: u32, a: f64) -> (f64, f64) {
    (c_lower_bound(n, a).unwrap(), c_upper_bound(n, a).unwrap())
}

/// Upper end of the admissible `a` for gonality `n`.
pub fn a_max(n: u32) -> f64 {
    if n == 2 {
        PI
    } else {
        2.0 * PI / f64::from(n)
    }
}

/// `size x size` cell-centered grid strictly inside the existence region.
pub fn interior_grid(n: u32, size: usize) -> Vec<AntiprismSpec> {
    let mut specs = Vec::with_capacity(size * size);
    for i in 0..size {
        let a = a_max(n) * (i as f64 + 0.5) / size as f64;
        let (lo, hi) = c_range(n, a);
        for j in 0..size {
            let c = lo + (hi - lo) * (j as f64 + 0.5) / size as f64;
            specs.push(AntiprismSpec::new(n, a, c).unwrap());
        }
    }
    specs
}

/// Point a fraction `t` of the way from `c0` to `c_max`.
pub fn spec_at(n: u32, a_frac: f64, t: f64) -> AntiprismSpec {
    let a = a_max(n) * a_frac;
    let (lo, hi) = c_range(n, a);
    AntiprismSpec::new(n, a, lo + (hi - lo) * t).unwrap()
}
