//! Spherical trigonometry on the unit 2-sphere.
//!
//! Everything here works in radians. Arguments to `acos`/`sqrt` that leave
//! their domain by at most [`CLAMP_TOL`] are treated as rounding noise and
//! clamped; anything further out is reported as a domain error.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Largest domain excursion that is silently clamped.
pub const CLAMP_TOL: f64 = 1e-12;

/// Clamps a cosine into `[-1, 1]`, rejecting values further out than
/// [`CLAMP_TOL`].
pub fn clamp_cos(op: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::domain(op, format!("non-finite cosine {value}")));
    }
    if value.abs() > 1.0 + CLAMP_TOL {
        return Err(Error::domain(
            op,
            format!("cosine {value:e} outside [-1, 1]"),
        ));
    }
    Ok(value.clamp(-1.0, 1.0))
}

/// `acos` with the clamping policy applied.
pub fn safe_acos(op: &'static str, value: f64) -> Result<f64> {
    clamp_cos(op, value).map(f64::acos)
}

/// `sqrt` of a quantity that must be nonnegative up to rounding.
pub fn safe_sqrt(op: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() || value < -CLAMP_TOL {
        return Err(Error::domain(op, format!("negative radicand {value:e}")));
    }
    Ok(value.max(0.0).sqrt())
}

/// `cos(pi / n)`.
#[inline]
pub fn cos_pi_over(n: u32) -> f64 {
    (PI / f64::from(n)).cos()
}

/// `cos(2 pi / n)`.
#[inline]
pub fn cos_two_pi_over(n: u32) -> f64 {
    (2.0 * PI / f64::from(n)).cos()
}

fn check_arc(op: &'static str, name: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && value >= lo - CLAMP_TOL && value <= hi + CLAMP_TOL {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            format!("{name} = {value} outside [{lo}, {hi}]"),
        ))
    }
}

/// Angle opposite to side `opposite` in a spherical triangle with the other
/// two sides `b` and `c` (law of cosines for sides, in half-angle form so
/// that very thin and very flat triangles keep their accuracy).
pub fn angle_from_sides(opposite: f64, b: f64, c: f64) -> Result<f64> {
    const OP: &str = "angle_from_sides";
    check_arc(OP, "opposite", opposite, 0.0, PI)?;
    for (name, side) in [("b", b), ("c", c)] {
        if !(side > 0.0 && side < PI) {
            return Err(Error::domain(
                OP,
                format!("{name} = {side} outside (0, pi)"),
            ));
        }
    }
    let denom = b.sin() * c.sin();
    let sin2_half = (0.5 * (opposite - b + c)).sin() * (0.5 * (opposite + b - c)).sin() / denom;
    let cos2_half = (0.5 * (b + c + opposite)).sin() * (0.5 * (b + c - opposite)).sin() / denom;
    let sin_half = safe_sqrt(OP, sin2_half)?;
    let cos_half = safe_sqrt(OP, cos2_half)?;
    Ok(2.0 * sin_half.atan2(cos_half))
}

/// Interior angle of a regular spherical triangle with side `a`:
/// `cos alpha = cos a / (1 + cos a)`.
pub fn regular_triangle_face_angle(a: f64) -> Result<f64> {
    const OP: &str = "regular_triangle_face_angle";
    check_arc(OP, "a", a, 0.0, 2.0 * PI / 3.0)?;
    let ca = a.cos();
    safe_acos(OP, ca / (1.0 + ca))
}

/// Angle of a regular triangular vertex figure with sides `alpha`, i.e. the
/// dihedral angle of a regular tetrahedron whose face angle is `alpha`.
pub fn triangle_vertex_figure_angle(alpha: f64) -> Result<f64> {
    const OP: &str = "triangle_vertex_figure_angle";
    check_arc(OP, "alpha", alpha, 0.0, PI)?;
    let c = alpha.cos();
    if 1.0 + c <= 0.0 {
        return Err(Error::domain(OP, "alpha = pi"));
    }
    safe_acos(OP, c / (1.0 + c))
}

/// Angle of a regular square vertex figure with sides `alpha`. Inverts
/// `cos alpha = (1 + cos A) / (1 - cos A)`.
pub fn square_vertex_figure_angle(alpha: f64) -> Result<f64> {
    const OP: &str = "square_vertex_figure_angle";
    check_arc(OP, "alpha", alpha, 0.0, PI)?;
    let c = alpha.cos();
    if c < -CLAMP_TOL {
        return Err(Error::domain(
            OP,
            format!("cos alpha = {c:e} < 0: no regular square vertex figure"),
        ));
    }
    safe_acos(OP, (c - 1.0) / (c + 1.0))
}

/// Half of the interior angle `x` of a regular spherical `n`-gon with side
/// `a`, returned as `(cos(x/2), sin(x/2))`. Both components are
/// nonnegative because `x <= pi`.
pub fn regular_ngon_half_angle(n: u32, a: f64) -> Result<(f64, f64)> {
    const OP: &str = "regular_ngon_half_angle";
    if n < 2 {
        return Err(Error::domain(OP, format!("n = {n} < 2")));
    }
    check_arc(OP, "a", a, 0.0, PI)?;
    let ca = a.cos();
    if ca + 1.0 <= 0.0 {
        return Err(Error::domain(OP, "a = pi"));
    }
    let k2 = cos_two_pi_over(n);
    if ca - k2 < -CLAMP_TOL {
        return Err(Error::domain(
            OP,
            format!("cos a - cos(2pi/n) = {:e} < 0", ca - k2),
        ));
    }
    let cos_half = safe_sqrt(OP, (ca - k2) / (ca + 1.0))?;
    let sin_half = safe_sqrt(OP, (k2 + 1.0) / (ca + 1.0))?;
    Ok((cos_half.min(1.0), sin_half.min(1.0)))
}

/// Angles of the isosceles lateral triangle with base `a` and legs `c`:
/// `y` at the base, `z` at the apex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LateralTriangle {
    pub cos_y: f64,
    pub sin_y: f64,
    pub sin_half_z: f64,
    pub cos_half_z: f64,
}

impl LateralTriangle {
    pub fn y(&self) -> f64 {
        self.sin_y.atan2(self.cos_y)
    }

    pub fn z(&self) -> f64 {
        2.0 * self.sin_half_z.atan2(self.cos_half_z)
    }
}

/// Base and apex angles of the isosceles triangle with sides `(a, c, c)`.
///
/// Fails with [`Error::Degenerate`] when `1 + cos a - 2 cos^2 c <= 0`, the
/// line where the lateral triangle flattens.
pub fn isosceles_triangle_angles(a: f64, c: f64) -> Result<LateralTriangle> {
    const OP: &str = "isosceles_triangle_angles";
    check_arc(OP, "a", a, 0.0, PI)?;
    if !(c > 0.0 && c < PI) {
        return Err(Error::domain(OP, format!("c = {c} outside (0, pi)")));
    }
    let (sin_c, cos_c) = c.sin_cos();
    let (sin_ha, cos_ha) = (0.5 * a).sin_cos();
    // cos a - cos 2c = 2 (sin c - sin a/2)(sin c + sin a/2)
    let spread = (sin_c - sin_ha) * (sin_c + sin_ha);
    if spread <= 0.0 {
        return Err(Error::Degenerate {
            op: OP,
            detail: format!("1 + cos a - 2cos^2 c = {:e} <= 0", 2.0 * spread),
        });
    }
    let cos_y = clamp_cos(OP, cos_c * sin_ha / (sin_c * cos_ha))?;
    let sin_y = safe_sqrt(OP, 1.0 - cos_y * cos_y)?;
    let sin_half_z = (sin_ha / sin_c).min(1.0);
    let cos_half_z = (spread.sqrt() / sin_c).min(1.0);
    Ok(LateralTriangle {
        cos_y,
        sin_y,
        sin_half_z,
        cos_half_z,
    })
}

/// Isosceles spherical trapezoid: bases `x` and `z`, two lateral sides `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapezoidShape {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl TrapezoidShape {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        const OP: &str = "TrapezoidShape::new";
        for (name, base) in [("x", x), ("z", z)] {
            if !(0.0..PI).contains(&base) {
                return Err(Error::domain(
                    OP,
                    format!("base {name} = {base} outside [0, pi)"),
                ));
            }
        }
        if !(y > 0.0 && y < PI) {
            return Err(Error::domain(
                OP,
                format!("lateral side y = {y} outside (0, pi)"),
            ));
        }
        Ok(TrapezoidShape { x, y, z })
    }

    /// Swaps the two bases.
    pub fn flipped(self) -> Self {
        TrapezoidShape {
            x: self.z,
            y: self.y,
            z: self.x,
        }
    }
}

/// Cosine of the angle at a base of half-length `near` (given as
/// `(cos, sin)` of the half-length), with the opposite base half-length
/// `far_sin = sin(far)` and lateral side `(cos y, sin y)`.
fn base_angle_cos(near_cos: f64, near_sin: f64, far_sin: f64, cos_y: f64, sin_y: f64) -> f64 {
    (cos_y * near_sin - far_sin) / (sin_y * near_cos)
}

/// Angle cosines `(cos A, cos C)` of an isosceles trapezoid given in terms
/// of the half-base and lateral trigonometric values. Unclamped.
pub fn trapezoid_cosines(
    (cos_half_x, sin_half_x): (f64, f64),
    (cos_y, sin_y): (f64, f64),
    (cos_half_z, sin_half_z): (f64, f64),
) -> Result<(f64, f64)> {
    const OP: &str = "trapezoid_angles";
    if cos_half_x <= 0.0 || cos_half_z <= 0.0 {
        return Err(Error::domain(
            OP,
            "a base of length pi has no defined angle",
        ));
    }
    if sin_y <= 0.0 {
        return Err(Error::domain(OP, "lateral side has zero sine"));
    }
    Ok((
        base_angle_cos(cos_half_x, sin_half_x, sin_half_z, cos_y, sin_y),
        base_angle_cos(cos_half_z, sin_half_z, sin_half_x, cos_y, sin_y),
    ))
}

/// Angles `(A, C)` of an isosceles spherical trapezoid: `A` at base `x`,
/// `C` at base `z`.
pub fn trapezoid_angles(shape: TrapezoidShape) -> Result<(f64, f64)> {
    const OP: &str = "trapezoid_angles";
    let (sx, cx) = (0.5 * shape.x).sin_cos();
    let (sz, cz) = (0.5 * shape.z).sin_cos();
    let (sy, cy) = shape.y.sin_cos();
    if (0.5 * shape.x - FRAC_PI_2).abs() < CLAMP_TOL
        || (0.5 * shape.z - FRAC_PI_2).abs() < CLAMP_TOL
    {
        return Err(Error::domain(
            OP,
            "a base of length pi has no defined angle",
        ));
    }
    let (cos_a, cos_c) = trapezoid_cosines((cx, sx), (cy, sy), (cz, sz))?;
    Ok((safe_acos(OP, cos_a)?, safe_acos(OP, cos_c)?))
}
