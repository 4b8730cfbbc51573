//! p-affine surface areas O_p(K) = ∫ f_K^{n/(n+p)} h_K^{−n(p−1)/(n+p)} dσ and
//! their normalized forms.

use crate::error::{Error, Result};
use crate::geometry::{Body, ConvexBody, Direction, Point};
use crate::quadrature::{default_rule, golden_min, SphereRule};

/// O_p(K) for p > −n.
pub fn o_p(body: &dyn ConvexBody, p: f64) -> Result<f64> {
    let n = body.dim() as f64;
    if !(p > -n) || p.is_nan() {
        return Err(Error::Domain(format!(
            "O_p needs p > -n = {}, got {p}",
            -n
        )));
    }
    o_p_integral(body, p)
}

/// The O_p integral for any p ≠ −n, including p < −n where the quantity is
/// no longer an affine surface area but the integral is still defined.
pub fn o_p_integral(body: &dyn ConvexBody, p: f64) -> Result<f64> {
    let rule = default_rule(body.dim())?;
    o_p_with_rule(body, p, rule)
}

pub fn o_p_with_rule(body: &dyn ConvexBody, p: f64, rule: &SphereRule) -> Result<f64> {
    let n = body.dim() as f64;
    if p == -n || !p.is_finite() {
        return Err(Error::Domain(format!("O_p is undefined at p = {p}")));
    }
    let ef = n / (n + p);
    let eh = -n * (p - 1.0) / (n + p);
    rule.try_integrate(|u| {
        let f = body.curvature_function(u)?;
        let h = body.support(u);
        Ok(f.powf(ef) * h.powf(eh))
    })
}

/// õ_p(K) = O_p(K)^{(n+p)/(n−p)}, evaluated in log space so that the
/// approach p ↓ −n stays finite.
pub fn tilde_o_p(body: &dyn ConvexBody, p: f64) -> Result<f64> {
    let n = body.dim() as f64;
    if !(p > -n) || p.is_nan() {
        return Err(Error::Domain(format!("õ_p needs p > -n, got {p}")));
    }
    if p == n {
        return Err(Error::Domain("õ_p is undefined at p = n".into()));
    }
    let rule = default_rule(body.dim())?;
    let ef = n / (n + p);
    let eh = -n * (p - 1.0) / (n + p);
    let logs = rule.evaluate(|u| {
        let f = body.curvature_function(u)?;
        let h = body.support(u);
        Ok(ef * f.ln() + eh * h.ln())
    })?;
    let lw: Vec<f64> = logs
        .iter()
        .zip(rule.weights())
        .map(|(l, w)| l + w.ln())
        .collect();
    let m = lw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = lw.iter().map(|l| (l - m).exp()).sum();
    let log_o = m + s.ln();
    Ok(((n + p) / (n - p) * log_o).exp())
}

/// õ_{−n}(K) = max_u f_K(u)^{1/2} h_K(u)^{(n+1)/2}.
pub fn tilde_o_minus_n(body: &dyn ConvexBody) -> Result<f64> {
    let n = body.dim();
    let g = |u: &Direction| -> Result<f64> {
        let f = body.curvature_function(u)?;
        Ok(f.sqrt() * body.support(u).powf((n as f64 + 1.0) / 2.0))
    };
    let rule = default_rule(n)?;
    let values = rule.evaluate(g)?;
    let (best, &vmax) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty rule");
    let u0 = rule.nodes()[best].clone();
    if n == 2 {
        let step = std::f64::consts::TAU / rule.len() as f64;
        let theta0 = u0.angle();
        let neg = |t: f64| -g(&Direction::from_angle(t)).unwrap_or(f64::NEG_INFINITY);
        let t = golden_min(neg, theta0 - step, theta0 + step, 1e-12);
        return Ok((-neg(t)).max(vmax));
    }
    // compass search on the tangent plane around the best node
    let mut x = u0.into_vector();
    let mut fx = vmax;
    let mut step = 0.1;
    while step > 1e-9 {
        let mut improved = false;
        for i in 0..n {
            for sign in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += sign * step;
                let d = Direction::new(y)?;
                let fy = g(&d)?;
                if fy > fx {
                    x = d.into_vector();
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(fx)
}

/// |O_p(K) − O_{n²/p}(K⁰)| / O_p(K), with K⁰ the polar about the origin.
pub fn duality_residual(body: &Body, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Domain(format!("duality check needs p > 0, got {p}")));
    }
    let n = body.dim() as f64;
    let polar = body.polar(&Point::zeros(body.dim()))?;
    let lhs = o_p(body, p)?;
    let rhs = o_p(&polar, n * n / p)?;
    Ok((lhs - rhs).abs() / lhs)
}
