//! The normalized integrals
//!
//!   I(α) = α^{γ+1}(1−α)^{β−γ−1} / (2^γ B(γ+1, β−γ−1)) ∫_0^1 (1−x²)^γ (1−αx)^{−β} dx,
//!   J(α) = 1 / (2^γ ln(1/(1−α))) ∫_0^1 (1−x²)^γ (1−αx)^{−γ−1} dx.
//!
//! Close to α = 1 both are evaluated after substitutions that move the
//! peak at x = 1 to a fixed scale.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{beta_fn, Endpoints, Integrator};

/// Above this α the substituted forms are used.
const SWITCH: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma5Values {
    pub alpha: f64,
    pub i: f64,
    pub j: f64,
    pub j_bound: f64,
}

fn integrator() -> Integrator {
    Integrator::new(1e-300, 1e-13)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

pub fn lemma5_i(gamma: f64, beta: f64, alpha: f64) -> Result<f64> {
    if !(gamma > -1.0) || !(beta > gamma + 1.0) {
        return Err(Error::Domain(format!(
            "I needs γ > −1 and β > γ+1, got γ = {gamma}, β = {beta}"
        )));
    }
    check_alpha(alpha)?;
    let norm = 2f64.powf(gamma) * beta_fn(gamma + 1.0, beta - gamma - 1.0)?;
    if alpha < SWITCH {
        let q = integrator().integrate(
            |x| (1.0 - x * x).powf(gamma) * (1.0 - alpha * x).powf(-beta),
            &[0.0, 1.0],
            Endpoints::right(gamma),
        )?;
        let pre = ((gamma + 1.0) * alpha.ln() + (beta - gamma - 1.0) * (-alpha).ln_1p()).exp();
        return Ok(pre * q.value / norm);
    }
    // x = 1 − w(1−α)/α
    let k = (1.0 - alpha) / alpha;
    let upper = 1.0 / k;
    let f = |w: f64| (w * (2.0 - k * w)).powf(gamma) * (1.0 + w).powf(-beta);
    let mut breaks = vec![0.0];
    let mut s = 1.0;
    while s < 0.5 * upper {
        breaks.push(s);
        s *= 4.0;
    }
    breaks.push(upper);
    let q = integrator().integrate(f, &breaks, Endpoints::left(gamma))?;
    Ok(q.value / norm)
}

pub fn lemma5_j(gamma: f64, alpha: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("J needs γ > 0, got {gamma}")));
    }
    check_alpha(alpha)?;
    let q = -(-alpha).ln_1p();
    if alpha < SWITCH {
        let v = integrator().integrate(
            |x| (1.0 - x * x).powf(gamma) * (1.0 - alpha * x).powf(-gamma - 1.0),
            &[0.0, 1.0],
            Endpoints::right(gamma),
        )?;
        return Ok(v.value / (2f64.powf(gamma) * q));
    }
    // α = 1 − e^{−q}, x = 1 − e^{−qs}
    let f = |s: f64| {
        let num = (2.0 - (-q * s).exp()).powf(gamma);
        let den = (1.0 + (q * (s - 1.0)).exp() - (-q).exp()).powf(gamma + 1.0);
        num / den
    };
    let tail = 1.0 + 745.0 / (q * (gamma + 1.0));
    let mut breaks = vec![0.0];
    if 1.0 - 1.0 / q > 0.0 {
        breaks.push(1.0 - 1.0 / q);
    }
    breaks.extend([1.0, 1.0 + 1.0 / q, 1.0 + 8.0 / q, 1.0 + 64.0 / q]);
    breaks.retain(|&b| b < tail);
    breaks.push(tail);
    let v = integrator().integrate(f, &breaks, Endpoints::default())?;
    Ok(v.value / 2f64.powf(gamma))
}

/// 1 + 1/((γ+1) ln(1/(1−α))).
pub fn lemma5_j_bound(gamma: f64, alpha: f64) -> f64 {
    1.0 + 1.0 / ((gamma + 1.0) * -(-alpha).ln_1p())
}

pub fn lemma5(gamma: f64, beta: f64, alpha: f64) -> Result<Lemma5Values> {
    Ok(Lemma5Values {
        alpha,
        i: lemma5_i(gamma, beta, alpha)?,
        j: lemma5_j(gamma, alpha)?,
        j_bound: lemma5_j_bound(gamma, alpha),
    })
}
