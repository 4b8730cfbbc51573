//! The borderline exponent β = (n+1)/2, where the deficit decays
//! exponentially in t.

use std::sync::Arc;

use serde::Serialize;

use super::level_set::LevelSetBody;
use super::phi::PhiField;
use crate::error::{Error, Result};
use crate::geometry::{Body, ConvexBody, Point};
use crate::quadrature::{default_rule, fit_power_law_limit, LimitEstimate, LimitMode};
use crate::surface::tilde_o_minus_n;

/// ln ∫ f_{K⁰}^{1/(n−1)} h_{K⁰}^{−(n+1)} exp(−t / (2^{(n−1)/2} h^{(n+1)/2} f^{1/2})) dσ,
/// accumulated in log space.
pub fn prop7_denominator_ln(polar: &dyn ConvexBody, t: f64) -> Result<f64> {
    let n = polar.dim();
    let nf = n as f64;
    let rule = default_rule(n)?;
    let logs = rule.evaluate(|u| {
        let f = polar.curvature_function(u)?;
        let h = polar.support(u);
        let g = 2f64.powf((nf - 1.0) / 2.0) * h.powf((nf + 1.0) / 2.0) * f.sqrt();
        Ok(f.ln() / (nf - 1.0) - (nf + 1.0) * h.ln() - t / g)
    })?;
    let terms: Vec<f64> = logs
        .iter()
        .zip(rule.weights())
        .map(|(l, w)| l + w.ln())
        .collect();
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return Err(Error::DenominatorUnderflow(format!("at t = {t}")));
    }
    Ok(m + terms.iter().map(|l| (l - m).exp()).sum::<f64>().ln())
}

/// n(|K| − |S_{(n+1)/2}(K,t)|) divided by the exponential integral.
pub fn prop7_ratio(base: &Body, t: f64) -> Result<f64> {
    let field = Arc::new(PhiField::new(base.clone())?);
    prop7_ratio_with(&field, t)
}

pub(crate) fn prop7_ratio_with(field: &Arc<PhiField>, t: f64) -> Result<f64> {
    let n = field.dim();
    check_level(field, t)?;
    let s = LevelSetBody::with_field(field.clone(), (n as f64 + 1.0) / 2.0, t)?;
    let deficit = s.volume_deficit()?;
    let den = prop7_denominator_ln(field.polar(), t)?;
    Ok(((n as f64 * deficit).ln() - den).exp())
}

fn check_level(field: &PhiField, t: f64) -> Result<()> {
    let floor = 10.0 * field.min_value();
    if t < floor {
        return Err(Error::PreconditionViolated(format!(
            "t = {t} is below 10·Φ(0) = {floor}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop7Rate {
    pub estimate: LimitEstimate,
    /// 2^{−(n−1)/2} / max_u h_{K⁰}^{(n+1)/2} f_{K⁰}^{1/2}.
    pub expected: f64,
    pub deficits: Vec<f64>,
    pub ratios: Vec<f64>,
}

/// Fits the limit of (1/t) ln(1/deficit) from (t, deficit) pairs.
pub fn rate_from_deficits(samples: &[(f64, f64)]) -> Result<LimitEstimate> {
    let rates: Vec<(f64, f64)> = samples.iter().map(|&(t, d)| (t, -d.ln() / t)).collect();
    fit_power_law_limit(&rates, LimitMode::IncreasingT)
}

pub fn prop7_log_rate(base: &Body, t_grid: &[f64]) -> Result<Prop7Rate> {
    let field = Arc::new(PhiField::new(base.clone())?);
    prop7_log_rate_with(&field, t_grid)
}

pub(crate) fn prop7_log_rate_with(field: &Arc<PhiField>, t_grid: &[f64]) -> Result<Prop7Rate> {
    let n = field.dim();
    let beta = (n as f64 + 1.0) / 2.0;
    let mut deficits = Vec::with_capacity(t_grid.len());
    let mut ratios = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        check_level(field, t)?;
        let s = LevelSetBody::with_field(field.clone(), beta, t)?;
        let d = s.volume_deficit()?;
        let den = prop7_denominator_ln(field.polar(), t)?;
        ratios.push(((n as f64 * d).ln() - den).exp());
        deficits.push(d);
    }
    let pairs: Vec<(f64, f64)> = t_grid.iter().copied().zip(deficits.iter().copied()).collect();
    let estimate = rate_from_deficits(&pairs)?;
    let polar = field.base().polar(&Point::zeros(n))?;
    let expected = 2f64.powf(-(n as f64 - 1.0) / 2.0) / tilde_o_minus_n(&polar)?;
    Ok(Prop7Rate {
        estimate,
        expected,
        deficits,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Ball, Ellipsoid};
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn disc_denominator() {
        let b = Ball::unit(2).unwrap();
        for &t in &[40.0, 400.0, 4000.0] {
            let d = prop7_denominator_ln(&b, t).unwrap();
            assert!((d - ((2.0 * PI).ln() - t / SQRT_2)).abs() < 1e-12);
        }
    }

    #[test]
    fn synthetic_rate() {
        let c = 0.37;
        let s: Vec<(f64, f64)> = (1..8).map(|i| (50.0 * i as f64, (-c * 50.0 * i as f64).exp())).collect();
        let e = rate_from_deficits(&s).unwrap();
        assert!((e.limit - c).abs() < 1e-6);
    }

    #[test]
    fn expected_rates() {
        let b: Body = Ball::unit(2).unwrap().into();
        let r = prop7_log_rate(&b, &[40.0, 80.0, 160.0, 320.0]).unwrap();
        assert!((r.expected - 1.0 / SQRT_2).abs() < 1e-12);
        let e: Body = Ellipsoid::diagonal(&[2.0, 1.0]).unwrap().into();
        let polar = e.polar(&Point::zeros(2)).unwrap();
        let m = tilde_o_minus_n(&polar).unwrap();
        let r = prop7_log_rate(&e, &[20.0, 40.0, 80.0, 160.0]).unwrap();
        assert!((r.expected - 1.0 / (SQRT_2 * m)).abs() < 1e-14);
    }

    #[test]
    fn disc_rate_is_half_the_stated_one() {
        // Φ(λu) ≈ 2√2 ln(1/ε) for the disc, so the deficit decays like
        // exp(−t/(2√2)) rather than exp(−t/√2)
        let b: Body = Ball::unit(2).unwrap().into();
        let r = prop7_log_rate(&b, &[100.0, 200.0, 400.0, 800.0, 1600.0]).unwrap();
        assert!((r.estimate.limit * 2.0 * SQRT_2 - 1.0).abs() < 1e-3, "{:?}", r.estimate);
        assert!(r.ratios.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn below_floor() {
        let b: Body = Ball::unit(2).unwrap().into();
        assert!(matches!(prop7_ratio(&b, 20.0), Err(Error::PreconditionViolated(_))));
    }
}
