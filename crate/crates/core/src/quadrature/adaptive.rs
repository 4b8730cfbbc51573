//! Globally adaptive Gauss–Kronrod integration on a partitioned interval,
//! with power-law stretching at endpoints where the integrand behaves like
//! `(x - a)^γ`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
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
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// relative accuracy below which the error estimates are dominated by roundoff
const ROUNDOFF_REL: f64 = 200.0 * f64::EPSILON;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// Endpoint behaviour used to choose a stretching substitution.
///
/// An exponent `γ` declares that the integrand behaves like `|x - e|^γ`
/// near the endpoint `e`. Half-integer exponents are removed exactly by
/// `x = e + L w²`; integer exponents need no substitution; any other
/// exponent also gets the quadratic stretch and relies on subdivision.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Endpoints {
    pub left: Option<f64>,
    pub right: Option<f64>,
}

impl Endpoints {
    pub fn both(exponent: f64) -> Self {
        Self {
            left: Some(exponent),
            right: Some(exponent),
        }
    }

    pub fn left(exponent: f64) -> Self {
        Self {
            left: Some(exponent),
            right: None,
        }
    }

    pub fn right(exponent: f64) -> Self {
        Self {
            left: None,
            right: Some(exponent),
        }
    }
}

fn stretch_power(exponent: Option<f64>) -> u32 {
    match exponent {
        None => 1,
        Some(g) if g.fract() == 0.0 && g >= 0.0 => 1,
        Some(_) => 2,
    }
}

#[derive(Debug, Clone, Copy)]
enum Segment {
    /// x = a + (b - a) w
    Plain { a: f64, b: f64 },
    /// x = e + len * w^m, oriented from the singular endpoint `e` (len may be negative).
    Stretched { e: f64, len: f64, m: u32 },
}

impl Segment {
    fn new(a: f64, b: f64, left: Option<f64>, right: Option<f64>) -> Self {
        let ml = stretch_power(left);
        let mr = stretch_power(right);
        if ml > 1 {
            Segment::Stretched {
                e: a,
                len: b - a,
                m: ml,
            }
        } else if mr > 1 {
            Segment::Stretched {
                e: b,
                len: a - b,
                m: mr,
            }
        } else {
            Segment::Plain { a, b }
        }
    }

    #[inline]
    fn eval<F: Fn(f64) -> f64>(&self, f: &F, w: f64) -> f64 {
        match *self {
            Segment::Plain { a, b } => f(a + (b - a) * w) * (b - a),
            Segment::Stretched { e, len, m } => {
                let wm1 = w.powi(m as i32 - 1);
                // orientation: integrating from e outward flips sign when len < 0
                f(e + len * wm1 * w) * (len.abs() * m as f64 * wm1)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    seg: usize,
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn qk21<G: Fn(f64) -> f64>(g: &G, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = g(center);
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let x = half * XGK[jtw];
        let f1 = g(center - x);
        let f2 = g(center + x);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let x = half * XGK[jtwm1];
        let f1 = g(center - x);
        let f2 = g(center + x);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

/// Adaptive integrator configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_intervals: 20_000,
        }
    }
}

impl Integrator {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    /// Integrates `f` over `[breaks[0], breaks[last]]`, starting from the
    /// partition given by `breaks`. Endpoint behaviour applies to the first
    /// and last pieces only.
    pub fn integrate<F: Fn(f64) -> f64>(
        &self,
        f: F,
        breaks: &[f64],
        ends: Endpoints,
    ) -> Result<Estimate> {
        if breaks.len() < 2 {
            return Err(Error::Domain("need at least two breakpoints".into()));
        }
        if breaks.iter().any(|x| !x.is_finite()) || breaks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain(format!(
                "breakpoints must be finite and strictly increasing: {breaks:?}"
            )));
        }
        let last = breaks.len() - 2;
        let segments: Vec<Segment> = breaks
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let left = if i == 0 { ends.left } else { None };
                let right = if i == last { ends.right } else { None };
                if i == 0 && i == last && left.is_some() && right.is_some() {
                    // both ends singular on one piece: handled by split below
                    Segment::Plain { a: w[0], b: w[1] }
                } else {
                    Segment::new(w[0], w[1], left, right)
                }
            })
            .collect();

        // a single piece with two singular ends is split at its midpoint
        let segments = if segments.len() == 1 && ends.left.is_some() && ends.right.is_some() {
            let (a, b) = (breaks[0], breaks[1]);
            let m = 0.5 * (a + b);
            vec![
                Segment::new(a, m, ends.left, None),
                Segment::new(m, b, None, ends.right),
            ]
        } else {
            segments
        };

        let mut heap = BinaryHeap::with_capacity(64);
        let mut total = 0.0;
        let mut total_err = 0.0;
        let mut bad = false;
        for (i, seg) in segments.iter().enumerate() {
            let g = |w: f64| seg.eval(&f, w);
            let (v, e) = qk21(&g, 0.0, 1.0);
            bad |= !v.is_finite();
            total += v;
            total_err += e;
            heap.push(Piece {
                seg: i,
                lo: 0.0,
                hi: 1.0,
                value: v,
                error: e,
            });
        }
        if bad {
            return Err(Error::Domain("integrand is not finite".into()));
        }
        let mut intervals = heap.len();
        // pieces too narrow to split further keep their error but leave the heap
        let mut frozen_err = 0.0;
        loop {
            let tol = self
                .abs_tol
                .max(self.rel_tol.max(ROUNDOFF_REL) * total.abs());
            if total_err <= tol {
                break;
            }
            if intervals >= self.max_intervals {
                return Err(Error::ToleranceNotMet {
                    tol,
                    error: total_err,
                    intervals,
                });
            }
            let Some(p) = heap.pop() else {
                // everything frozen: accept if the residual error is roundoff-level
                if frozen_err <= 1e3 * tol {
                    break;
                }
                return Err(Error::ToleranceNotMet {
                    tol,
                    error: total_err,
                    intervals,
                });
            };
            let mid = 0.5 * (p.lo + p.hi);
            if mid <= p.lo || mid >= p.hi || (p.hi - p.lo) < 1e-14 * p.hi.abs().max(1e-300) {
                frozen_err += p.error;
                continue;
            }
            let seg = &segments[p.seg];
            let g = |w: f64| seg.eval(&f, w);
            let (v1, e1) = qk21(&g, p.lo, mid);
            let (v2, e2) = qk21(&g, mid, p.hi);
            if !(v1.is_finite() && v2.is_finite()) {
                return Err(Error::Domain("integrand is not finite".into()));
            }
            total += v1 + v2 - p.value;
            total_err += e1 + e2 - p.error;
            intervals += 1;
            heap.push(Piece {
                seg: p.seg,
                lo: p.lo,
                hi: mid,
                value: v1,
                error: e1,
            });
            heap.push(Piece {
                seg: p.seg,
                lo: mid,
                hi: p.hi,
                value: v2,
                error: e2,
            });
        }
        // resum to shed accumulated update rounding
        let value: f64 = {
            let mut pieces: Vec<Piece> = heap.into_vec();
            pieces.sort_by(|a, b| (a.seg, a.lo).partial_cmp(&(b.seg, b.lo)).unwrap());
            pieces.iter().map(|p| p.value).sum()
        };
        Ok(Estimate {
            value: if frozen_err > 0.0 { total } else { value },
            error: total_err.max(0.0),
            intervals,
        })
    }
}

/// Integrates `f` over `[a, b]` to an absolute-or-relative tolerance `tol`.
///
/// `endpoint_exponent` declares the algebraic behaviour `|x - e|^γ` of the
/// integrand at both ends; half-integer values trigger the `w²` stretch.
pub fn adaptive_1d<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    endpoint_exponent: f64,
) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Domain(format!("need a < b, got [{a}, {b}]")));
    }
    let integrator = Integrator::new(tol, tol);
    integrator
        .integrate(f, &[a, b], Endpoints::both(endpoint_exponent))
        .map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sqrt_one_minus_s() {
        let v = adaptive_1d(|s| (1.0 - s).sqrt(), 0.0, 1.0, 1e-13, 0.5).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn semicircle_area() {
        let v = adaptive_1d(|s| (1.0 - s * s).sqrt(), -1.0, 1.0, 1e-13, 0.5).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn inverse_sqrt_singularity() {
        let v = adaptive_1d(|s| 1.0 / s.sqrt(), 0.0, 1.0, 1e-13, -0.5).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn deterministic_bits() {
        let f = |s: f64| (1.0 - s).sqrt() / (1.0 - 0.9 * s).powi(3);
        let a = adaptive_1d(f, 0.0, 1.0, 1e-12, 0.5).unwrap();
        let b = adaptive_1d(f, 0.0, 1.0, 1e-12, 0.5).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn breakpoints_resolve_narrow_peak() {
        let eps = 1e-12_f64;
        let mut breaks = vec![0.0];
        let mut x = eps;
        while x < 0.5 {
            breaks.push(x);
            x *= 8.0;
        }
        breaks.push(1.0);
        let est = Integrator::default()
            .integrate(
                |s| s.sqrt() / (eps + s).powi(2),
                &breaks,
                Endpoints::left(0.5),
            )
            .unwrap();
        // substitute s = ε v: ε^{-1/2} (atan √X − √X/(1+X)) with X = 1/ε
        let x = 1.0 / eps;
        let exact = (x.sqrt().atan() - x.sqrt() / (1.0 + x)) / eps.sqrt();
        assert!(((est.value - exact) / exact).abs() < 1e-10, "{} {}", est.value, exact);
    }

    #[test]
    fn rejects_bad_interval() {
        assert!(adaptive_1d(|x| x, 1.0, 0.0, 1e-10, 0.0).is_err());
    }

    #[test]
    fn reports_unmet_tolerance() {
        let tight = Integrator {
            abs_tol: 1e-30,
            rel_tol: 1e-30,
            max_intervals: 4,
        };
        let r = tight.integrate(|x: f64| (50.0 * x).sin().abs(), &[0.0, 1.0], Endpoints::default());
        assert!(matches!(r, Err(Error::ToleranceNotMet { .. })));
    }
}
