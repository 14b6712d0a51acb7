//! Parameter model of the spherical antiprism `A_n(a, c)`.
//!
//! `n` is the gonality of the top and bottom faces, `a` the length of their
//! edges and `c` the length of the lateral edges, all lengths in radians on
//! the unit 3-sphere. The existence region is closed: points within
//! [`BOUNDARY_TOL`] of its boundary are admitted, but angles are only
//! defined strictly inside.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::trig::{
    cos_pi_over, cos_two_pi_over, isosceles_triangle_angles, regular_ngon_half_angle, safe_acos,
    safe_sqrt, trapezoid_cosines, CLAMP_TOL,
};

/// Margin below which a point counts as lying on the region boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Edge length of the regular tetrahedron whose vertices lie on a great
/// 2-sphere, `arccos(-1/3)`.
pub fn tetra_edge_max() -> f64 {
    (-1.0f64 / 3.0).acos()
}

/// The triple `(n, a, c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntiprismSpec {
    pub n: u32,
    pub a: f64,
    pub c: f64,
}

impl AntiprismSpec {
    /// Validates the raw ranges `n >= 2` and `a, c` in `[0, pi]`. Whether the
    /// antiprism exists is a separate question, see [`exists`].
    pub fn new(n: u32, a: f64, c: f64) -> Result<Self> {
        const OP: &str = "AntiprismSpec::new";
        if n < 2 {
            return Err(Error::domain(OP, format!("n = {n} < 2")));
        }
        for (name, v) in [("a", a), ("c", c)] {
            if !(v.is_finite() && (0.0..=PI).contains(&v)) {
                return Err(Error::domain(OP, format!("{name} = {v} outside [0, pi]")));
            }
        }
        Ok(AntiprismSpec { n, a, c })
    }

    pub fn cos_pi_n(&self) -> f64 {
        cos_pi_over(self.n)
    }

    pub fn with_a(self, a: f64) -> Self {
        AntiprismSpec { a, ..self }
    }

    pub fn with_c(self, c: f64) -> Self {
        AntiprismSpec { c, ..self }
    }

    fn outside(&self, margins: &ExistenceMargins) -> Error {
        let (violated, margin) = margins.most_violated();
        Error::OutsideRegion {
            n: self.n,
            a: self.a,
            c: self.c,
            violated,
            margin,
        }
    }

    /// Errors unless the spec is in the closed existence region.
    pub fn require_admissible(&self) -> Result<ExistenceMargins> {
        let margins = existence_margins(self);
        if margins.is_admissible() {
            Ok(margins)
        } else {
            Err(self.outside(&margins))
        }
    }

    /// Errors unless every margin exceeds [`BOUNDARY_TOL`].
    pub fn require_interior(&self) -> Result<ExistenceMargins> {
        let margins = existence_margins(self);
        if margins.min() > BOUNDARY_TOL {
            Ok(margins)
        } else {
            Err(self.outside(&margins))
        }
    }
}

/// Left-hand sides of the three existence inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExistenceMargins {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
}

impl ExistenceMargins {
    /// Margins in the `(cos a, cos c)` coordinates of the existence region.
    pub fn from_cosines(n: u32, cos_a: f64, cos_c: f64) -> Self {
        let k = cos_pi_over(n);
        ExistenceMargins {
            m1: 1.0 + cos_a - 2.0 * (1.0 + k) * cos_c + 2.0 * k,
            m2: 1.0 + cos_a + 2.0 * (1.0 - k) * cos_c - 2.0 * k,
            m3: cos_a - cos_two_pi_over(n),
        }
    }

    pub fn min(&self) -> f64 {
        self.m1.min(self.m2).min(self.m3)
    }

    pub fn is_admissible(&self) -> bool {
        self.min() >= -BOUNDARY_TOL
    }

    /// Name and value of the smallest margin.
    pub fn most_violated(&self) -> (&'static str, f64) {
        [("m1", self.m1), ("m2", self.m2), ("m3", self.m3)]
            .into_iter()
            .fold(("m1", f64::INFINITY), |best, cur| {
                if cur.1 < best.1 {
                    cur
                } else {
                    best
                }
            })
    }
}

pub fn existence_margins(spec: &AntiprismSpec) -> ExistenceMargins {
    ExistenceMargins::from_cosines(spec.n, spec.a.cos(), spec.c.cos())
}

/// Whether `A_n(a, c)` exists; boundary points count as existing.
pub fn exists(spec: &AntiprismSpec) -> bool {
    existence_margins(spec).is_admissible()
}

/// Dihedral angles along the `a` edges and the `c` edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DihedralAngles {
    pub a_edge: f64,
    pub c_edge: f64,
}

/// Construction quantities of the cylinder the antiprism is inscribed in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingFrame {
    /// Circumradius of the n-gon faces.
    pub circumradius: f64,
    /// Altitude of a lateral triangle, from its apex to the midpoint of the
    /// opposite `a` edge.
    pub lateral_height: f64,
    /// Apothem of the n-gon faces.
    pub apothem: f64,
    /// Distance between the centers of the two n-gon faces.
    pub center_distance: f64,
    pub cos_center_distance: f64,
    /// Angle at the pole where the geodesics through the face centers meet.
    /// Computed from the circumradius, apothem and lateral height alone;
    /// equals `center_distance`.
    pub pole_angle: f64,
}

/// `(sin R, cos R)` for the circumradius `R` of a regular `n`-gon with side
/// `a`: `sin R = sin(a/2) / sin(pi/n)` and
/// `cos^2 R = (cos a - cos(2pi/n)) / (1 - cos(2pi/n))`.
fn circumradius_sin_cos(op: &'static str, n: u32, a: f64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::domain(op, format!("n = {n} < 2")));
    }
    let half_turn = PI / f64::from(n);
    let sin_pn = half_turn.sin();
    // cos a - cos(2pi/n) = 2 sin(pi/n + a/2) sin(pi/n - a/2)
    let gap = 2.0 * (half_turn + 0.5 * a).sin() * (half_turn - 0.5 * a).sin();
    if gap < -CLAMP_TOL {
        return Err(Error::domain(
            op,
            format!("cos a - cos(2pi/n) = {gap:e} < 0: polygon larger than a great circle"),
        ));
    }
    let sin_r = ((0.5 * a).sin() / sin_pn).min(1.0);
    let cos_r = safe_sqrt(op, gap)? / (SQRT_2 * sin_pn);
    Ok((sin_r, cos_r.min(1.0)))
}

/// Spherical circumradius of a regular `n`-gon with side `a`.
pub fn circumradius(n: u32, a: f64) -> Result<f64> {
    let (sin_r, cos_r) = circumradius_sin_cos("circumradius", n, a)?;
    Ok(sin_r.atan2(cos_r))
}

/// Fills in the [`EmbeddingFrame`] of `spec`, including the distance `d`
/// between the face centers.
pub fn center_distance(spec: &AntiprismSpec) -> Result<EmbeddingFrame> {
    const OP: &str = "center_distance";
    let (ca, cc) = (spec.a.cos(), spec.c.cos());
    let k = spec.cos_pi_n();
    let denom = ca - cos_two_pi_over(spec.n);
    if denom <= 0.0 {
        return Err(Error::domain(
            OP,
            format!("cos a - cos(2pi/n) = {denom:e} <= 0"),
        ));
    }
    let cos_d = (2.0 * cc * (1.0 - k * k) - k * (1.0 - ca)) / denom;
    if cos_d.abs() > 1.0 + CLAMP_TOL {
        return Err(Error::Inconsistent {
            op: OP,
            detail: format!(
                "cos d = {cos_d} outside [-1, 1]: ({}, {}, {}) is outside the existence region",
                spec.n, spec.a, spec.c
            ),
        });
    }
    let cos_d = cos_d.clamp(-1.0, 1.0);

    let (sin_r, cos_r) = circumradius_sin_cos(OP, spec.n, spec.a)?;
    let (sin_half_a, cos_half_a) = (0.5 * spec.a).sin_cos();
    // sin h = tan(a/2) / tan(pi/n), cos h = cos R / cos(a/2)
    let sin_h = (sin_half_a * k / (cos_half_a * (PI / f64::from(spec.n)).sin())).min(1.0);
    let cos_h = cos_r / cos_half_a;
    // cos^2(a/2) - cos^2 c = spread / 2
    let cos_lat = cc / cos_half_a;
    let sin_lat = safe_sqrt(OP, 0.5 * lateral_spread(spec))? / cos_half_a;
    let pole_cos = (cos_lat - sin_h * sin_r) / (cos_h * cos_r);
    let pole_angle = safe_acos(OP, pole_cos)?;

    Ok(EmbeddingFrame {
        circumradius: sin_r.atan2(cos_r),
        lateral_height: sin_lat.atan2(cos_lat),
        apothem: sin_h.atan2(cos_h),
        center_distance: cos_d.acos(),
        cos_center_distance: cos_d,
        pole_angle,
    })
}

/// Dihedral angles of `A_n(a, c)` from its edge lengths.
///
/// For `n = 2` the `a_edge` angle is the one between the collapsed 2-gon
/// face and a lateral face; the tetrahedron's own dihedral angle along that
/// edge is `2 * a_edge - pi`.
pub fn dihedral_angles(spec: &AntiprismSpec) -> Result<DihedralAngles> {
    const OP: &str = "dihedral_angles";
    spec.require_interior()?;
    let (ca, cc) = (spec.a.cos(), spec.c.cos());
    let k = spec.cos_pi_n();
    let spread = lateral_spread(spec);
    let polygon_gap = ca - cos_two_pi_over(spec.n);
    if spread <= 0.0 {
        return Err(Error::domain(OP, "lateral triangle is degenerate"));
    }
    if polygon_gap <= 0.0 {
        return Err(Error::domain(OP, "n-gon face lies on a great circle"));
    }
    // sqrt(1 - cos a) = sqrt(2) sin(a/2)
    let cos_a_edge = SQRT_2 * (0.5 * spec.a).sin() * (2.0 * cc * k - ca - 1.0)
        / (2.0 * spread * polygon_gap).sqrt();
    let cos_c_edge = (cc - ca * cc + 2.0 * (cc * cc - 1.0) * k) / spread;
    Ok(DihedralAngles {
        a_edge: safe_acos(OP, cos_a_edge)?,
        c_edge: safe_acos(OP, cos_c_edge)?,
    })
}

/// `1 + cos a - 2 cos^2 c`, evaluated as `2 sin(c + a/2) sin(c - a/2)`.
fn lateral_spread(spec: &AntiprismSpec) -> f64 {
    2.0 * (spec.c + 0.5 * spec.a).sin() * (spec.c - 0.5 * spec.a).sin()
}

/// Dihedral angles obtained by composing the face-angle relations of the
/// n-gon and lateral triangle with the trapezoid angle formulas at a vertex.
pub fn dihedral_angles_from_vertex_figure(spec: &AntiprismSpec) -> Result<DihedralAngles> {
    const OP: &str = "dihedral_angles_from_vertex_figure";
    spec.require_interior()?;
    let half_x = regular_ngon_half_angle(spec.n, spec.a)?;
    let lateral = isosceles_triangle_angles(spec.a, spec.c)?;
    let (cos_a_edge, cos_c_edge) = trapezoid_cosines(
        half_x,
        (lateral.cos_y, lateral.sin_y),
        (lateral.cos_half_z, lateral.sin_half_z),
    )?;
    Ok(DihedralAngles {
        a_edge: safe_acos(OP, cos_a_edge)?,
        c_edge: safe_acos(OP, cos_c_edge)?,
    })
}

/// Partial derivatives `(dA/da, dC/da)` of the dihedral angles at fixed `c`.
pub fn dihedral_partials_in_a(spec: &AntiprismSpec) -> Result<(f64, f64)> {
    let angles = dihedral_angles(spec)?;
    let (sa, ca) = spec.a.sin_cos();
    let (sha, cha) = (0.5 * spec.a).sin_cos();
    let cc = spec.c.cos();
    let k = spec.cos_pi_n();
    let k2 = cos_two_pi_over(spec.n);
    let spread = lateral_spread(spec);

    let numer_c = cc * (1.0 - ca) + 2.0 * k * (cc * cc - 1.0);
    let dcos_c = sa * (cc * spread + numer_c) / (spread * spread);

    let q = 2.0 * cc * k - ca - 1.0;
    let s = (2.0 * spread * (ca - k2)).sqrt();
    let dcos_a = (FRAC_1_SQRT_2 * cha * q + SQRT_2 * sha * sa) / s
        + SQRT_2 * sha * q * sa * (spread + ca - k2) / (s * s * s);

    Ok((-dcos_a / angles.a_edge.sin(), -dcos_c / angles.c_edge.sin()))
}

/// Smallest admissible lateral edge `c0` for given `(n, a)`: the root of
/// `2 cos c (1 + cos(pi/n)) = 1 + cos a + 2 cos(pi/n)`, where the antiprism
/// flattens into a 2n-gon.
pub fn c_lower_bound(n: u32, a: f64) -> Result<f64> {
    const OP: &str = "c_lower_bound";
    check_polygon(OP, n, a)?;
    let k = cos_pi_over(n);
    // 1 - cos c0 = sin^2(a/2) / (1 + k)
    let half_sin = (0.5 * a).sin() / (2.0 * (1.0 + k)).sqrt();
    if half_sin > 1.0 + CLAMP_TOL {
        return Err(Error::domain(OP, format!("sin(c0/2) = {half_sin} > 1")));
    }
    let c0 = 2.0 * half_sin.min(1.0).asin();
    let m1 = ExistenceMargins::from_cosines(n, a.cos(), c0.cos()).m1;
    if m1.abs() > 1e-12 {
        return Err(Error::Inconsistent {
            op: OP,
            detail: format!("m1(c0) = {m1:e}"),
        });
    }
    Ok(c0)
}

/// Largest admissible lateral edge for given `(n, a)`, where `m2 = 0` and the
/// two face centers are a quarter circle apart on either side.
pub fn c_upper_bound(n: u32, a: f64) -> Result<f64> {
    const OP: &str = "c_upper_bound";
    check_polygon(OP, n, a)?;
    let k = cos_pi_over(n);
    // 1 + cos c_max = sin^2(a/2) / (1 - k)
    let half_sin = (0.5 * a).sin() / (2.0 * (1.0 - k)).sqrt();
    Ok(PI - 2.0 * half_sin.min(1.0).asin())
}

fn check_polygon(op: &'static str, n: u32, a: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(op, format!("n = {n} < 2")));
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::domain(op, format!("a = {a}")));
    }
    let gap = a.cos() - cos_two_pi_over(n);
    if gap < -CLAMP_TOL {
        return Err(Error::domain(
            op,
            format!("cos a - cos(2pi/n) = {gap:e} < 0"),
        ));
    }
    Ok(())
}

fn check_range(op: &'static str, name: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && value >= lo - CLAMP_TOL && value <= hi + CLAMP_TOL {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            format!("{name} = {value} outside [{lo}, {hi}]"),
        ))
    }
}

/// Dihedral angle of the regular spherical tetrahedron with edge `a`.
pub fn tetra_angle_from_edge(a: f64) -> Result<f64> {
    const OP: &str = "tetra_angle_from_edge";
    check_range(OP, "a", a, 0.0, tetra_edge_max())?;
    let ca = a.cos();
    safe_acos(OP, ca / (1.0 + 2.0 * ca))
}

/// Edge of the regular spherical tetrahedron with dihedral angle `angle`.
pub fn tetra_edge_from_angle(angle: f64) -> Result<f64> {
    const OP: &str = "tetra_edge_from_angle";
    check_range(OP, "A", angle, (1.0f64 / 3.0).acos(), PI)?;
    let cos = angle.cos();
    safe_acos(OP, cos / (1.0 - 2.0 * cos))
}

/// Dihedral angle of the regular spherical octahedron with edge `a`.
pub fn octa_angle_from_edge(a: f64) -> Result<f64> {
    const OP: &str = "octa_angle_from_edge";
    check_range(OP, "a", a, 0.0, PI / 2.0)?;
    safe_acos(OP, -1.0 / (1.0 + 2.0 * a.cos()))
}

/// Edge of the regular spherical octahedron with dihedral angle `angle`.
pub fn octa_edge_from_angle(angle: f64) -> Result<f64> {
    const OP: &str = "octa_edge_from_angle";
    check_range(OP, "A", angle, (-1.0f64 / 3.0).acos(), PI)?;
    let cos = angle.cos();
    if cos == 0.0 {
        return Err(Error::domain(OP, "cos A = 0"));
    }
    safe_acos(OP, -(cos + 1.0) / (2.0 * cos))
}
