//! Adaptive Gauss-Kronrod (10/21 point) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets the tolerance. The error of a panel is the raw difference
//! between the Kronrod and Gauss sums, which over-estimates the error of the
//! returned Kronrod value. Subintervals are processed in a fixed order so
//! results are reproducible bit for bit.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_subdivisions >= 1) {
            return Err(Error::domain(
                "QuadratureConfig",
                format!("invalid tolerances {self:?}"),
            ));
        }
        Ok(())
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Result of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

// Kronrod abscissae, descending; odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_745_570_855,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    // insertion order, breaks ties between equal errors
    seq: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn kronrod_panel<F>(f: &mut F, lo: f64, hi: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for (i, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    if !value.is_finite() {
        return Err(Error::domain(
            "quadrature",
            format!("non-finite integrand on [{lo}, {hi}]"),
        ));
    }
    Ok((value, error))
}

/// Integrates `f` over consecutive pieces `breaks[0]..breaks[1]..`; the
/// integrand is never evaluated at a breakpoint.
pub fn integrate_pieces<F>(mut f: F, breaks: &[f64], cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if breaks.len() < 2 {
        return Err(Error::domain("quadrature", "need at least one interval"));
    }
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    let mut evaluations = 0usize;
    for w in breaks.windows(2) {
        let (value, error) = kronrod_panel(&mut f, w[0], w[1])?;
        evaluations += 21;
        heap.push(Panel {
            lo: w[0],
            hi: w[1],
            value,
            error,
            seq,
        });
        seq += 1;
    }

    let mut subdivisions = 0usize;
    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if error <= cfg.target(value) {
            return Ok(Integral {
                value,
                error,
                evaluations,
                subdivisions,
            });
        }
        let worst = heap.peek().copied().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if subdivisions >= cfg.max_subdivisions || !(worst.lo < mid && mid < worst.hi) {
            return Err(Error::Convergence {
                subdivisions,
                error_estimate: error,
                requested: cfg.target(value),
            });
        }
        heap.pop();
        for (lo, hi) in [(worst.lo, mid), (mid, worst.hi)] {
            let (value, error) = kronrod_panel(&mut f, lo, hi)?;
            evaluations += 21;
            heap.push(Panel {
                lo,
                hi,
                value,
                error,
                seq,
            });
            seq += 1;
        }
        subdivisions += 1;
    }
}

/// Integrates `f` over `[lo, hi]`.
pub fn integrate<F>(f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_pieces(f, &[lo, hi], cfg)
}

/// Evaluation point handed to the integrand by
/// [`integrate_endpoint_singular`]. `from_lo = t - lo` and `from_hi = hi - t`
/// are exact in the half of the interval they refer to, so an integrand can
/// evaluate factors vanishing at the ends without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub t: f64,
    pub from_lo: f64,
    pub from_hi: f64,
}

/// Integrates `f` over `[lo, hi]` when `f` may blow up like an inverse square
/// root at either end.
///
/// The lower half is mapped through `t = lo + s^2` and the upper half through
/// `t = hi - s^2`, which turns `(t - lo)^(-1/2)` endpoint behaviour into an
/// analytic integrand in `s`.
pub fn integrate_endpoint_singular<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral>
where
    F: FnMut(Abscissa) -> Result<f64>,
{
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            subdivisions: 0,
        });
    }
    let width = hi - lo;
    let span = (0.5 * width).sqrt();
    // u in [0, 1]: lower half, u in [1, 2]: upper half, both with s = span * u'
    let mapped = |u: f64| -> Result<f64> {
        let (s, point) = if u <= 1.0 {
            let s = span * u;
            let d = s * s;
            (
                s,
                Abscissa {
                    t: lo + d,
                    from_lo: d,
                    from_hi: width - d,
                },
            )
        } else {
            let s = span * (2.0 - u);
            let d = s * s;
            (
                s,
                Abscissa {
                    t: hi - d,
                    from_lo: width - d,
                    from_hi: d,
                },
            )
        };
        Ok(f(point)? * 2.0 * s * span)
    };
    integrate_pieces(mapped, &[0.0, 1.0, 2.0], cfg)
}
