//! Volumes of spherical antiprisms and of the regular tetrahedron and
//! octahedron, by quadrature of their Schläfli-derived integrals.

pub mod quadrature;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::antiprism::{
    c_lower_bound, c_upper_bound, dihedral_angles, dihedral_partials_in_a, existence_margins,
    tetra_edge_max, AntiprismSpec, BOUNDARY_TOL,
};
use crate::error::{Error, Result};
use crate::trig::{cos_pi_over, CLAMP_TOL};

use quadrature::{integrate, integrate_endpoint_singular, Abscissa};
pub use quadrature::{Integral, QuadratureConfig};

/// Volume of the whole 3-sphere.
pub const SPHERE_VOLUME: f64 = 2.0 * PI * PI;

/// How a [`VolumeEstimate`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    MonteCarlo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte-carlo",
        })
    }
}

/// A volume in units where the 3-sphere has volume `2 pi^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub method: Method,
    pub evaluations: usize,
}

impl VolumeEstimate {
    fn exact_zero() -> Self {
        VolumeEstimate {
            value: 0.0,
            error_bound: 0.0,
            method: Method::Quadrature,
            evaluations: 0,
        }
    }

    fn from_integral(integral: Integral) -> Self {
        VolumeEstimate {
            value: integral.value,
            error_bound: integral.error,
            method: Method::Quadrature,
            evaluations: integral.evaluations,
        }
    }

    fn scaled(integral: Integral, factor: f64) -> Self {
        VolumeEstimate {
            value: factor * integral.value,
            error_bound: factor * integral.error,
            method: Method::Quadrature,
            evaluations: integral.evaluations,
        }
    }
}

/// Pieces of the antiprism volume integrand at a running lateral edge `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandTerms {
    pub t: f64,
    pub g: f64,
    pub h_term: f64,
    /// Radicand; equals the product of the first two existence margins at
    /// `(a, t)`.
    pub r_rad: f64,
    /// `1 + cos a - 2 cos^2 t`.
    pub denom: f64,
    pub value: f64,
}

/// The `dV/dc` integrand for fixed `(n, a)`.
#[derive(Debug, Clone, Copy)]
struct LateralIntegrand {
    n: f64,
    a: f64,
    half_a: f64,
    sin_a: f64,
    one_minus_cos_a: f64,
    one_plus_cos_a: f64,
    k: f64,
    c_lo: f64,
    c_hi: f64,
}

impl LateralIntegrand {
    fn new(n: u32, a: f64) -> Result<Self> {
        let (sin_a, cos_a) = a.sin_cos();
        Ok(LateralIntegrand {
            n: f64::from(n),
            a,
            half_a: 0.5 * a,
            sin_a,
            one_minus_cos_a: 2.0 * (0.5 * a).sin().powi(2),
            one_plus_cos_a: 1.0 + cos_a,
            k: cos_pi_over(n),
            c_lo: c_lower_bound(n, a)?,
            c_hi: c_upper_bound(n, a)?,
        })
    }

    fn terms(&self, t: f64) -> Result<IntegrandTerms> {
        self.terms_at(t, t - self.c_lo, self.c_hi - t)
    }

    /// Terms at `t`, with `above = t - c0` and `below = c_max - t` supplied
    /// by the caller.
    fn terms_at(&self, t: f64, above: f64, below: f64) -> Result<IntegrandTerms> {
        const OP: &str = "antiprism_integrand";
        let (sin_t, cos_t) = t.sin_cos();
        let k = self.k;
        let g = -2.0 * (cos_t - k) * self.sin_a * sin_t;
        let h_term =
            self.one_minus_cos_a * (self.one_plus_cos_a + 2.0 * cos_t * cos_t - 4.0 * cos_t * k);
        // m1 = 2(1 + k)(cos c0 - cos t), m2 = 2(1 - k)(cos t - cos c_max), in
        // product form so the radicand keeps its relative accuracy near both
        // roots.
        let m1 = 4.0 * (1.0 + k) * (0.5 * (t + self.c_lo)).sin() * (0.5 * above).sin();
        let m2 = 4.0 * (1.0 - k) * (0.5 * (self.c_hi + t)).sin() * (0.5 * below).sin();
        let r_rad = m1 * m2;
        let denom = 2.0 * (t + self.half_a).sin() * (t - self.half_a).sin();
        if r_rad < -CLAMP_TOL {
            return Err(Error::domain(
                OP,
                format!("radicand {r_rad:e} < 0 at t = {t}"),
            ));
        }
        if denom <= 0.0 {
            return Err(Error::domain(
                OP,
                format!("1 + cos a - 2cos^2 t = {denom:e} <= 0 at t = {t}"),
            ));
        }
        let value = self.n * (self.a * g + t * h_term) / (denom * r_rad.max(0.0).sqrt());
        Ok(IntegrandTerms {
            t,
            g,
            h_term,
            r_rad,
            denom,
            value,
        })
    }
}

/// Evaluates the lateral-edge integrand of the antiprism volume at `t`.
pub fn antiprism_integrand(n: u32, a: f64, t: f64) -> Result<IntegrandTerms> {
    LateralIntegrand::new(n, a)?.terms(t)
}

/// Volume of `A_n(a, c)`, integrating `dV/dc` from the flat antiprism at
/// `c0(n, a)` up to `c`.
///
/// Returns exactly zero on the parts of the boundary where the antiprism
/// flattens (`c = c0`, or `a = 0`).
pub fn antiprism_volume(spec: &AntiprismSpec, cfg: &QuadratureConfig) -> Result<VolumeEstimate> {
    let margins = spec.require_admissible()?;
    if margins.m1 <= BOUNDARY_TOL || spec.a.cos() >= 1.0 - BOUNDARY_TOL {
        return Ok(VolumeEstimate::exact_zero());
    }
    let integrand = LateralIntegrand::new(spec.n, spec.a)?;
    // m2 >= -tol may leave c a hair above c_max
    let upper = spec.c.min(integrand.c_hi);
    if upper <= integrand.c_lo {
        return Ok(VolumeEstimate::exact_zero());
    }
    let slack = integrand.c_hi - upper;
    let integral = integrate_endpoint_singular(
        |p: Abscissa| {
            integrand
                .terms_at(p.t, p.from_lo, slack + p.from_hi)
                .map(|terms| terms.value)
        },
        integrand.c_lo,
        upper,
        cfg,
    )?;
    Ok(VolumeEstimate::from_integral(integral))
}

/// Volume of `A_n(a, c)` obtained along the other leg of the region: from
/// the degenerate segment at `a = 0` to `a` at fixed `c`, integrating
/// `n s dA/da + n c dC/da`. Requires `(n, a, c)` strictly inside the region.
pub fn antiprism_volume_along_a(
    spec: &AntiprismSpec,
    cfg: &QuadratureConfig,
) -> Result<VolumeEstimate> {
    spec.require_interior()?;
    let n = f64::from(spec.n);
    let integral = integrate(
        |s| {
            let (da, dc) = dihedral_partials_in_a(&spec.with_a(s))?;
            Ok(n * s * da + n * spec.c * dc)
        },
        0.0,
        spec.a,
        cfg,
    )?;
    Ok(VolumeEstimate::from_integral(integral))
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

/// Dihedral angle of the degenerate (point-like) regular tetrahedron,
/// `arccos(1/3)`.
pub fn tetra_angle_min() -> f64 {
    (1.0f64 / 3.0).acos()
}

/// Dihedral angle of the degenerate regular octahedron, `arccos(-1/3)`.
pub fn octa_angle_min() -> f64 {
    (-1.0f64 / 3.0).acos()
}

/// Regular tetrahedron volume from its dihedral angle, for `angle` in
/// `[arccos(1/3), pi]`.
pub fn tetra_volume_by_angle(angle: f64, cfg: &QuadratureConfig) -> Result<VolumeEstimate> {
    const OP: &str = "tetra_volume_by_angle";
    let lo = tetra_angle_min();
    check_range(OP, "A", angle, lo, PI)?;
    let hi = angle.clamp(lo, PI);
    // a(phi) = arccos(cos phi / (1 - 2 cos phi)) = 2 asin(sqrt((1 - 3cos phi) / (2(1 - 2cos phi))))
    // with 1 - 3 cos phi = 6 sin((phi + lo)/2) sin((phi - lo)/2)
    let integral = integrate_endpoint_singular(
        |p: Abscissa| {
            let phi = p.t;
            let gap = 6.0 * (0.5 * (phi + lo)).sin() * (0.5 * p.from_lo).sin();
            let ratio = gap / (2.0 * (1.0 - 2.0 * phi.cos()));
            Ok(2.0 * ratio.clamp(0.0, 1.0).sqrt().asin())
        },
        lo,
        hi,
        cfg,
    )?;
    Ok(VolumeEstimate::scaled(integral, 3.0))
}

/// Regular tetrahedron volume from its edge, for `a` in `[0, arccos(-1/3)]`.
/// At the upper end the tetrahedron fills a hemisphere.
pub fn tetra_volume_by_edge(a: f64, cfg: &QuadratureConfig) -> Result<VolumeEstimate> {
    const OP: &str = "tetra_volume_by_edge";
    let top = tetra_edge_max();
    check_range(OP, "a", a, 0.0, top)?;
    let hi = a.clamp(0.0, top);
    let integral = integrate_endpoint_singular(
        |p: Abscissa| {
            let t = p.t;
            let (sin_t, cos_t) = t.sin_cos();
            // 1 + 3 cos t = 6 sin((top + t)/2) sin((top - t)/2)
            let gap = 6.0 * (0.5 * (top + t)).sin() * (0.5 * (top - hi + p.from_hi)).sin();
            Ok(3.0 * t * sin_t / ((1.0 + 2.0 * cos_t) * ((1.0 + cos_t) * gap).sqrt()))
        },
        0.0,
        hi,
        cfg,
    )?;
    Ok(VolumeEstimate::from_integral(integral))
}

/// Regular octahedron volume from its dihedral angle, for `angle` in
/// `[arccos(-1/3), pi]`.
pub fn octa_volume_by_angle(angle: f64, cfg: &QuadratureConfig) -> Result<VolumeEstimate> {
    const OP: &str = "octa_volume_by_angle";
    let lo = octa_angle_min();
    check_range(OP, "A", angle, lo, PI)?;
    let hi = angle.clamp(lo, PI);
    // a(phi) = arccos(-(cos phi + 1) / (2 cos phi)); 1 - arg = (1 + 3 cos phi) / (2 cos phi)
    // with 1 + 3 cos phi = -6 sin((phi + lo)/2) sin((phi - lo)/2)
    let integral = integrate_endpoint_singular(
        |p: Abscissa| {
            let phi = p.t;
            let gap = -6.0 * (0.5 * (phi + lo)).sin() * (0.5 * p.from_lo).sin();
            let ratio = gap / (4.0 * phi.cos());
            Ok(2.0 * ratio.clamp(0.0, 1.0).sqrt().asin())
        },
        lo,
        hi,
        cfg,
    )?;
    Ok(VolumeEstimate::scaled(integral, 6.0))
}

/// Regular octahedron volume from its edge, for `a` in `[0, pi/2]`. At
/// `a = pi/2` the octahedron fills a hemisphere.
pub fn octa_volume_by_edge(a: f64, cfg: &QuadratureConfig) -> Result<VolumeEstimate> {
    const OP: &str = "octa_volume_by_edge";
    check_range(OP, "a", a, 0.0, FRAC_PI_2)?;
    let hi = a.clamp(0.0, FRAC_PI_2);
    let integral = integrate_endpoint_singular(
        |p: Abscissa| {
            let t = p.t;
            let sin_t = t.sin();
            // cos t = sin(pi/2 - t)
            let cos_t = (FRAC_PI_2 - hi + p.from_hi).sin();
            Ok(6.0 * t * sin_t / ((1.0 + 2.0 * cos_t) * (cos_t * (1.0 + cos_t)).sqrt()))
        },
        0.0,
        hi,
        cfg,
    )?;
    Ok(VolumeEstimate::from_integral(integral))
}

/// Moves `value` onto `lo` or `hi` when it lies outside `[lo, hi]` by at
/// most `tol`; other values are returned unchanged.
pub fn snap_to_interval(value: f64, lo: f64, hi: f64, tol: f64) -> f64 {
    if value < lo && value >= lo - tol {
        lo
    } else if value > hi && value <= hi + tol {
        hi
    } else {
        value
    }
}

/// Central-difference residuals of the Schläfli identity
/// `dV = n a dA + n c dC`, each divided by the full step `2h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchlafliResidual {
    pub along_c: f64,
    pub along_a: f64,
}

impl SchlafliResidual {
    pub fn max(&self) -> f64 {
        self.along_c.max(self.along_a)
    }
}

/// Tolerances used for the volume differences in [`schlafli_residual`].
pub fn schlafli_quadrature() -> QuadratureConfig {
    QuadratureConfig {
        rel_tol: 1e-14,
        abs_tol: 1e-16,
        max_subdivisions: 4000,
    }
}

/// Checks the Schläfli identity at `spec` by perturbing `c` (and separately
/// `a`) by `+-step`. All four perturbed specs must lie strictly inside the
/// existence region.
pub fn schlafli_residual(spec: &AntiprismSpec, step: f64) -> Result<SchlafliResidual> {
    const OP: &str = "schlafli_residual";
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::domain(OP, format!("step = {step}")));
    }
    let perturbed = [
        spec.with_c(spec.c - step),
        spec.with_c(spec.c + step),
        spec.with_a(spec.a - step),
        spec.with_a(spec.a + step),
    ];
    for p in &perturbed {
        let p = AntiprismSpec::new(p.n, p.a, p.c)
            .map_err(|_| Error::domain(OP, format!("perturbed spec {p:?} has invalid edges")))?;
        if existence_margins(&p).min() <= BOUNDARY_TOL {
            return Err(Error::domain(
                OP,
                format!("perturbed spec {p:?} leaves the interior of the existence region"),
            ));
        }
    }
    let cfg = schlafli_quadrature();
    let n = f64::from(spec.n);
    let residual = |lo: &AntiprismSpec, hi: &AntiprismSpec| -> Result<f64> {
        let dv = antiprism_volume(hi, &cfg)?.value - antiprism_volume(lo, &cfg)?.value;
        let (alo, ahi) = (dihedral_angles(lo)?, dihedral_angles(hi)?);
        let predicted =
            n * spec.a * (ahi.a_edge - alo.a_edge) + n * spec.c * (ahi.c_edge - alo.c_edge);
        Ok((dv - predicted).abs() / (2.0 * step))
    };
    Ok(SchlafliResidual {
        along_c: residual(&perturbed[0], &perturbed[1])?,
        along_a: residual(&perturbed[2], &perturbed[3])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn spec(n: u32, a: f64, c: f64) -> AntiprismSpec {
        AntiprismSpec::new(n, a, c).unwrap()
    }

    const ORTHANT: f64 = PI * PI / 8.0;

    #[test]
    fn integrand_at_orthant_point() {
        let terms = antiprism_integrand(2, FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!(terms.g.abs() < 1e-15);
        assert!((terms.h_term - 1.0).abs() < 1e-15);
        assert!((terms.denom - 1.0).abs() < 1e-15);
        assert!((terms.r_rad - 1.0).abs() < 1e-15);
        assert!((terms.value - PI).abs() < 1e-14);
    }

    #[test]
    fn radicand_matches_expanded_form() {
        for n in 2..=8u32 {
            let k = cos_pi_over(n);
            for i in 1..10 {
                let a = f64::from(i) * 0.2 * PI / f64::from(n);
                let lo = c_lower_bound(n, a).unwrap();
                let hi = c_upper_bound(n, a).unwrap();
                for j in 0..=10 {
                    let t = lo + (hi - lo) * f64::from(j) / 10.0;
                    let ca = a.cos();
                    let (st, ct) = t.sin_cos();
                    let expanded = (1.0 + ca).powi(2)
                        - 4.0 * (ct * ct + st * st * k * k - (1.0 - ca) * ct * k);
                    let terms = antiprism_integrand(n, a, t).unwrap();
                    assert!((terms.r_rad - expanded).abs() < 1e-14, "n={n} a={a} t={t}");
                    assert!((terms.denom - (1.0 + ca - 2.0 * ct * ct)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn radicand_vanishes_at_lower_bound() {
        let terms = antiprism_integrand(2, FRAC_PI_2, PI / 3.0).unwrap();
        assert!(terms.r_rad.abs() < 1e-15);
    }

    #[test]
    fn g_vanishes_where_cos_t_equals_cos_pi_n() {
        let terms = antiprism_integrand(4, 0.7, PI / 4.0).unwrap();
        assert!(terms.g.abs() < 1e-15);
    }

    #[test]
    fn orthant_volume() {
        let v = antiprism_volume(&spec(2, FRAC_PI_2, FRAC_PI_2), &cfg()).unwrap();
        assert!((v.value - ORTHANT).abs() < 1e-12, "{}", v.value);
        assert!(v.error_bound <= cfg().target(v.value));
        assert_eq!(v.method, Method::Quadrature);
    }

    #[test]
    fn flat_antiprism_has_zero_volume() {
        let c0 = c_lower_bound(5, 0.6).unwrap();
        let v = antiprism_volume(&spec(5, 0.6, c0), &cfg()).unwrap();
        assert_eq!(v.value, 0.0);
        let v = antiprism_volume(&spec(5, 0.0, 1.0), &cfg()).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn outside_region_is_rejected() {
        assert!(matches!(
            antiprism_volume(&spec(5, 0.6, 0.1), &cfg()),
            Err(Error::OutsideRegion { .. })
        ));
    }

    #[test]
    fn octahedron_family_reduction() {
        let v = antiprism_volume(&spec(3, 0.6, 0.6), &cfg()).unwrap().value;
        let o = octa_volume_by_edge(0.6, &cfg()).unwrap().value;
        assert!((v - o).abs() < 1e-10);
    }

    #[test]
    fn regular_solids_at_endpoints() {
        let cfg = cfg();
        assert_eq!(tetra_volume_by_edge(0.0, &cfg).unwrap().value, 0.0);
        assert_eq!(octa_volume_by_edge(0.0, &cfg).unwrap().value, 0.0);
        assert_eq!(
            tetra_volume_by_angle(tetra_angle_min(), &cfg)
                .unwrap()
                .value,
            0.0
        );
        assert_eq!(
            octa_volume_by_angle(octa_angle_min(), &cfg).unwrap().value,
            0.0
        );
        let t = tetra_volume_by_edge(FRAC_PI_2, &cfg).unwrap().value;
        assert!((t - ORTHANT).abs() < 1e-12);
        let t = tetra_volume_by_angle(FRAC_PI_2, &cfg).unwrap().value;
        assert!((t - ORTHANT).abs() < 1e-12);
        let o = octa_volume_by_edge(FRAC_PI_2, &cfg).unwrap().value;
        assert!((o - PI * PI).abs() < 1e-10);
        let o = octa_volume_by_angle(PI, &cfg).unwrap().value;
        assert!((o - PI * PI).abs() < 1e-10);
        let t = tetra_volume_by_edge(tetra_edge_max(), &cfg).unwrap().value;
        assert!((t - PI * PI).abs() < 1e-10);
    }

    #[test]
    fn regular_solid_domains() {
        let cfg = cfg();
        assert!(tetra_volume_by_edge(2.0, &cfg).is_err());
        assert!(tetra_volume_by_angle(1.0, &cfg).is_err());
        assert!(octa_volume_by_edge(1.6, &cfg).is_err());
        assert!(octa_volume_by_angle(1.8, &cfg).is_err());
        assert!(tetra_volume_by_edge(-0.1, &cfg).is_err());
    }

    #[test]
    fn hemisphere_limits_along_the_upper_boundary() {
        // on m2 = 0 the antiprism fills a hemisphere
        for n in [2u32, 3, 5] {
            let a = 0.5 * 2.0 * PI / f64::from(n);
            let cmax = c_upper_bound(n, a).unwrap();
            let v = antiprism_volume(&spec(n, a, cmax), &cfg()).unwrap().value;
            assert!((v - PI * PI).abs() < 1e-8, "n={n}: {v}");
        }
    }

    #[test]
    fn both_paths_agree() {
        for &(n, a, c) in &[
            (2, 0.7, 0.9),
            (3, 0.5, 0.6),
            (5, 0.8, 0.9),
            (7, 0.3, 1.2),
            (4, 1.1, 1.0),
        ] {
            let s = spec(n, a, c);
            let vertical = antiprism_volume(&s, &cfg()).unwrap().value;
            let horizontal = antiprism_volume_along_a(&s, &cfg()).unwrap().value;
            assert!(
                (vertical - horizontal).abs() <= 2e-10 * vertical.max(1.0),
                "{s:?}: {vertical} vs {horizontal}"
            );
        }
    }

    #[test]
    fn volume_increases_with_c() {
        for n in 2..=8u32 {
            let a = 0.4 * 2.0 * PI / f64::from(n);
            let lo = c_lower_bound(n, a).unwrap();
            let hi = c_upper_bound(n, a).unwrap();
            let values: Vec<f64> = (0..=20)
                .map(|j| lo + (hi - lo) * f64::from(j) / 20.0)
                .map(|c| antiprism_volume(&spec(n, a, c), &cfg()).unwrap().value)
                .collect();
            assert_eq!(values[0], 0.0);
            assert!(values.windows(2).all(|w| w[1] > w[0]), "n={n}: {values:?}");
            assert!(values.iter().all(|&v| (0.0..=SPHERE_VOLUME).contains(&v)));
        }
    }

    #[test]
    fn schlafli_is_second_order() {
        let s = spec(5, 0.8, 0.9);
        let coarse = schlafli_residual(&s, 1e-4).unwrap().max();
        let fine = schlafli_residual(&s, 5e-5).unwrap().max();
        assert!(coarse <= 1e-7, "{coarse}");
        let ratio = coarse / fine;
        assert!((3.5..=4.5).contains(&ratio), "{coarse} / {fine} = {ratio}");
    }

    #[test]
    fn schlafli_rejects_boundary_neighbours() {
        let c0 = c_lower_bound(4, 0.9).unwrap();
        assert!(schlafli_residual(&spec(4, 0.9, c0 + 5e-5), 1e-4).is_err());
    }

    #[test]
    fn snapping() {
        assert_eq!(snap_to_interval(0.999_999_999, 1.0, 2.0, 1e-8), 1.0);
        assert_eq!(snap_to_interval(0.99, 1.0, 2.0, 1e-8), 0.99);
        assert_eq!(snap_to_interval(1.5, 1.0, 2.0, 1e-8), 1.5);
        assert_eq!(snap_to_interval(2.000_000_001, 1.0, 2.0, 1e-8), 2.0);
    }
}
