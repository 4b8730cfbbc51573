//! Limits of sequences sampled on geometric parameter grids, by fitting a
//! single power-law correction `L + C·x^q`.

use serde::Serialize;

use crate::error::{Error, Result};

/// How the parameter approaches its limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitMode {
    /// t → ∞; the correction is `C·t^{−q}`.
    IncreasingT,
    /// δ → 0; the correction is `C·δ^{q}`.
    DecreasingDelta,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEstimate {
    pub samples: Vec<(f64, f64)>,
    pub limit: f64,
    pub exponent: f64,
    pub coefficient: f64,
    /// RMS of the fit deviations.
    pub residual: f64,
    /// Whether the values move monotonically toward the limit along the grid.
    pub monotone: bool,
}

const Q_MIN: f64 = 0.02;
const Q_MAX: f64 = 4.0;

/// Least-squares fit of `value = L + C·x^q` where `x = 1/t` or `x = δ`.
pub fn fit_power_law_limit(samples: &[(f64, f64)], mode: LimitMode) -> Result<LimitEstimate> {
    if samples.len() < 4 {
        return Err(Error::Domain(format!(
            "need at least 4 samples, got {}",
            samples.len()
        )));
    }
    if samples
        .iter()
        .any(|&(p, v)| !p.is_finite() || !v.is_finite() || p <= 0.0)
    {
        return Err(Error::Domain(
            "samples must be finite with positive parameters".into(),
        ));
    }
    let increasing = samples.windows(2).all(|w| w[1].0 > w[0].0);
    let decreasing = samples.windows(2).all(|w| w[1].0 < w[0].0);
    if !(increasing || decreasing) {
        return Err(Error::Domain(
            "sample parameters must be strictly monotone".into(),
        ));
    }

    // order points so that x decreases toward 0 (approach to the limit)
    let mut pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(p, v)| match mode {
            LimitMode::IncreasingT => (1.0 / p, v),
            LimitMode::DecreasingDelta => (p, v),
        })
        .collect();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let x_max = pts[0].0;
    let xs: Vec<f64> = pts.iter().map(|p| p.0 / x_max).collect();
    let vs: Vec<f64> = pts.iter().map(|p| p.1).collect();

    let monotone = vs.windows(2).all(|w| w[1] >= w[0]) || vs.windows(2).all(|w| w[1] <= w[0]);
    let vmax = vs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let vmin = vs.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = vmax - vmin;
    let mean = vs.iter().sum::<f64>() / vs.len() as f64;

    // below this relative spread the samples are constant to working accuracy
    if spread <= 1e-10 * mean.abs().max(f64::MIN_POSITIVE) {
        return Ok(LimitEstimate {
            samples: samples.to_vec(),
            limit: mean,
            exponent: 0.0,
            coefficient: 0.0,
            residual: rms(vs.iter().map(|v| v - mean)),
            monotone,
        });
    }

    let sse = |q: f64| linear_fit(&xs, &vs, q).2;
    // coarse scan on a log grid, then golden-section refinement
    let steps = 240;
    let qs: Vec<f64> = (0..=steps)
        .map(|i| Q_MIN * (Q_MAX / Q_MIN).powf(i as f64 / steps as f64))
        .collect();
    let (best, _) = qs
        .iter()
        .enumerate()
        .map(|(i, &q)| (i, sse(q)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    let lo = qs[best.saturating_sub(1)];
    let hi = qs[(best + 1).min(steps)];
    let q = golden_min(sse, lo, hi, 1e-13);
    let (limit, c, _) = linear_fit(&xs, &vs, q);
    let residual = rms(xs.iter().zip(&vs).map(|(&x, &v)| v - limit - c * x.powf(q)));
    if residual > 0.1 * spread {
        return Err(Error::IllConditionedFit { residual, spread });
    }
    Ok(LimitEstimate {
        samples: samples.to_vec(),
        limit,
        exponent: q,
        // undo the normalization x/x_max
        coefficient: c / x_max.powf(q),
        residual,
        monotone,
    })
}

fn rms<I: Iterator<Item = f64>>(it: I) -> f64 {
    let (s, n) = it.fold((0.0, 0usize), |(s, n), r| (s + r * r, n + 1));
    (s / n as f64).sqrt()
}

/// Ordinary least squares for v ≈ L + C·x^q with q fixed; returns (L, C, SSE).
fn linear_fit(xs: &[f64], vs: &[f64], q: f64) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let zs: Vec<f64> = xs.iter().map(|x| x.powf(q)).collect();
    let zm = zs.iter().sum::<f64>() / n;
    let vm = vs.iter().sum::<f64>() / n;
    let mut szz = 0.0;
    let mut szv = 0.0;
    for (z, v) in zs.iter().zip(vs) {
        szz += (z - zm) * (z - zm);
        szv += (z - zm) * (v - vm);
    }
    let c = if szz > 0.0 { szv / szz } else { 0.0 };
    let l = vm - c * zm;
    let sse = zs
        .iter()
        .zip(vs)
        .map(|(z, v)| (v - l - c * z).powi(2))
        .sum();
    (l, c, sse)
}

pub(crate) fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol * (1.0 + c.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        c
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_inverse_t() {
        let s: Vec<(f64, f64)> = [10.0, 20.0, 40.0, 80.0, 160.0]
            .iter()
            .map(|&t| (t, 5.0 + 1.0 / t))
            .collect();
        let e = fit_power_law_limit(&s, LimitMode::IncreasingT).unwrap();
        assert!((e.limit - 5.0).abs() < 1e-6, "{e:?}");
        assert!((e.exponent - 1.0).abs() < 1e-4);
        assert!((e.coefficient - 1.0).abs() < 1e-3);
        assert!(e.monotone);
    }

    #[test]
    fn constant_sequence() {
        let s: Vec<(f64, f64)> = [10.0, 20.0, 40.0, 80.0].iter().map(|&t| (t, 5.0)).collect();
        let e = fit_power_law_limit(&s, LimitMode::IncreasingT).unwrap();
        assert_eq!(e.limit, 5.0);
        assert_eq!(e.residual, 0.0);
    }

    #[test]
    fn recovers_delta_power() {
        let s: Vec<(f64, f64)> = [1e-2, 1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&d: &f64| (d, 2.0 - 3.0 * d.powf(0.5)))
            .collect();
        let e = fit_power_law_limit(&s, LimitMode::DecreasingDelta).unwrap();
        assert!((e.limit - 2.0).abs() < 1e-6 * 2.0);
        assert!((e.exponent - 0.5).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_power_law_limit(&[(1.0, 1.0), (2.0, 2.0)], LimitMode::IncreasingT).is_err());
        let s = [(1.0, 1.0), (3.0, 2.0), (2.0, 3.0), (4.0, 4.0)];
        assert!(fit_power_law_limit(&s, LimitMode::IncreasingT).is_err());
    }

    #[test]
    fn noise_is_ill_conditioned() {
        let s = [(1.0, 1.0), (2.0, -1.0), (4.0, 1.0), (8.0, -1.0), (16.0, 1.0)];
        assert!(matches!(
            fit_power_law_limit(&s, LimitMode::IncreasingT),
            Err(Error::IllConditionedFit { .. })
        ));
    }
}
