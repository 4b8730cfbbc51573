//! Volume-deficit limit of S_β(K,t) as t → ∞.

use std::sync::Arc;

use serde::Serialize;

use super::level_set::LevelSetBody;
use super::phi::PhiField;
use crate::error::{Error, Result};
use crate::geometry::{polar_volume_about, Body, ConvexBody, Direction, Point};
use crate::quadrature::{
    beta_fn, brent, default_rule, fit_power_law_limit, unit_ball_volume, LimitEstimate, LimitMode,
};
use crate::surface::o_p;

/// c_{n,β} = 2^{(n−1)/2} v_{n−1} B((n+1)/2, β − (n+1)/2).
pub fn c_n_beta(n: usize, beta: f64) -> Result<f64> {
    let m = (n as f64 + 1.0) / 2.0;
    if !(beta > m) {
        return Err(Error::Domain(format!("need beta > (n+1)/2 = {m}, got {beta}")));
    }
    Ok(2f64.powf((n as f64 - 1.0) / 2.0) * unit_ball_volume(n - 1) * beta_fn(m, beta - m)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem6Rhs {
    pub c: f64,
    /// ∫ f_{K⁰}^{1/(2β−n−1)} h_{K⁰}^{(n+1)/(2β−n−1) − n} dσ.
    pub rhs: f64,
    /// O_{n(2β−n−2)}(K⁰) from the surface module.
    pub o_p_polar: f64,
    pub p: f64,
}

pub fn theorem6_rhs(base: &Body, beta: f64) -> Result<Theorem6Rhs> {
    let n = base.dim();
    let c = c_n_beta(n, beta)?;
    let nf = n as f64;
    let polar = base.polar(&Point::zeros(n))?;
    let q = 2.0 * beta - nf - 1.0;
    let rule = default_rule(n)?;
    let rhs = rule.try_integrate(|u| {
        let f = polar.curvature_function(u)?;
        let h = polar.support(u);
        Ok(f.powf(1.0 / q) * h.powf((nf + 1.0) / q - nf))
    })?;
    let p = nf * (2.0 * beta - nf - 2.0);
    Ok(Theorem6Rhs {
        c,
        rhs,
        o_p_polar: o_p(&polar, p)?,
        p,
    })
}

/// Samples (t, (t/c)^{1/(β−(n+1)/2)} (|K| − |S_β(K,t)|)) and their fitted limit.
pub fn theorem6_estimate(base: &Body, beta: f64, t_grid: &[f64]) -> Result<LimitEstimate> {
    let field = Arc::new(PhiField::new(base.clone())?);
    theorem6_estimate_with(&field, beta, t_grid)
}

pub(crate) fn theorem6_estimate_with(
    field: &Arc<PhiField>,
    beta: f64,
    t_grid: &[f64],
) -> Result<LimitEstimate> {
    let n = field.dim();
    let c = c_n_beta(n, beta)?;
    let rate = 1.0 / (beta - (n as f64 + 1.0) / 2.0);
    let floor = 10.0 * field.min_value();
    if let Some(&t) = t_grid.iter().find(|&&t| t < floor) {
        return Err(Error::PreconditionViolated(format!(
            "t = {t} is below 10·Φ(0) = {floor}"
        )));
    }
    let samples = t_grid
        .iter()
        .map(|&t| {
            let s = LevelSetBody::with_field(field.clone(), beta, t)?;
            Ok((t, (t / c).powf(rate) * s.volume_deficit()?))
        })
        .collect::<Result<Vec<_>>>()?;
    fit_power_law_limit(&samples, LimitMode::IncreasingT)
}

/// Largest relative discrepancy, over `rays` directions, between the
/// boundary of {x : |K||K^x|/v_n² ≤ t} found by root finding on the
/// polar volume and that of S_{n+1}(K, t v_n²/|K|).
pub fn eq1_check(base: &Body, t: f64, rays: usize) -> Result<f64> {
    let n = base.dim();
    let vn = unit_ball_volume(n);
    let field = Arc::new(PhiField::new(base.clone())?);
    let volume = field.base_volume();
    let level = LevelSetBody::with_field(field, n as f64 + 1.0, t * vn * vn / volume)?;
    let dirs = spread_directions(n, rays)?;
    let mut worst: f64 = 0.0;
    for u in &dirs {
        let r = base.radial(u)?;
        let g = |l: f64| -> Result<f64> {
            let x = u.as_vector() * l;
            Ok((volume * polar_volume_about(base, &x)? / (vn * vn)).ln() - t.ln())
        };
        let direct = if g(0.0)? >= 0.0 {
            0.0
        } else {
            brent(g, 0.0, r * (1.0 - 1e-9), 1e-16, 1e-15)?
        };
        let via_phi = level.santalo_radial(u)?;
        let scale = direct.abs().max(1e-300);
        worst = worst.max((direct - via_phi).abs() / scale);
    }
    Ok(worst)
}

/// Deterministic, roughly uniform directions: equally spaced in the plane,
/// a golden-angle spiral on S², and strided rule nodes beyond that.
pub fn spread_directions(n: usize, count: usize) -> Result<Vec<Direction>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    match n {
        2 => Ok((0..count)
            .map(|i| Direction::from_angle(std::f64::consts::TAU * (i as f64 + 0.5) / count as f64))
            .collect()),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let a = golden * i as f64;
                    Direction::from_slice(&[rho * a.cos(), rho * a.sin(), z])
                })
                .collect()
        }
        _ => {
            let rule = default_rule(n)?;
            let stride = (rule.len() / count).max(1);
            Ok(rule.nodes().iter().step_by(stride).take(count).cloned().collect())
        }
    }
}
