use std::f64::consts::PI;

use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};

/// The Beta function B(x, y) = Γ(x)Γ(y)/Γ(x+y).
pub fn beta_fn(x: f64, y: f64) -> Result<f64> {
    ln_beta(x, y).map(f64::exp)
}

pub fn ln_beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::Domain(format!(
            "beta function needs positive arguments, got ({x}, {y})"
        )));
    }
    if x + y < 100.0 {
        // gamma is accurate to a few ulps here and avoids the log round trip
        return Ok((gamma(x) * gamma(y) / gamma(x + y)).ln());
    }
    Ok(ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y))
}

/// Volume of the n-dimensional Euclidean unit ball, π^{n/2}/Γ(n/2+1).
pub fn unit_ball_volume(n: usize) -> f64 {
    // v_0 = 1, v_1 = 2, v_n = 2π/n · v_{n-2}: exact to rounding for small n
    let mut v = if n % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = 2 - n % 2;
    while k <= n {
        if k >= 2 {
            v *= 2.0 * PI / k as f64;
        }
        k += 2;
    }
    v
}

/// Surface area of S^{n−1}, n·v_n.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_1d;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn beta_values() {
        assert!(rel(beta_fn(1.0, 1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(beta_fn(1.5, 1.5).unwrap(), PI / 8.0) < 1e-13);
        assert!(rel(beta_fn(1.5, 0.5).unwrap(), PI / 2.0) < 1e-13);
    }

    #[test]
    fn beta_matches_defining_integral() {
        let q = adaptive_1d(|t| t.sqrt() * (1.0 - t).sqrt(), 0.0, 1.0, 1e-14, 0.5).unwrap();
        assert!(rel(q, beta_fn(1.5, 1.5).unwrap()) < 1e-12);
        let q = adaptive_1d(|t| t.sqrt() / (1.0 - t).sqrt(), 0.0, 1.0, 1e-14, 0.5).unwrap();
        assert!(rel(q, beta_fn(1.5, 0.5).unwrap()) < 1e-12);
    }

    #[test]
    fn beta_large_arguments() {
        // B(x, 1) = 1/x
        assert!(rel(beta_fn(250.0, 1.0).unwrap(), 1.0 / 250.0) < 1e-12);
    }

    #[test]
    fn beta_domain() {
        assert!(matches!(beta_fn(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(beta_fn(1.0, -2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn ball_volumes() {
        assert_eq!(unit_ball_volume(1), 2.0);
        assert!(rel(unit_ball_volume(2), PI) < 1e-15);
        assert!(rel(unit_ball_volume(3), 4.0 * PI / 3.0) < 1e-15);
        for n in 1..12 {
            let g = PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0 + 1.0);
            assert!(rel(unit_ball_volume(n), g) < 1e-13, "n={n}");
        }
    }
}
