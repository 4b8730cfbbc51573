//! Φ_K(x) = ∫_{K⁰} φ_β(⟨x,y⟩) dy with φ_β(s) = (1−s)^{−β}.
//!
//! Along a ray x = λu the integral reduces to sections of K⁰ orthogonal to
//! u. Writing s = h_{K⁰}(u) − σ and ε = 1 − λ h_{K⁰}(u),
//!
//!   Φ(λu) = ∫_0^{w} g_{K⁰,u}(h − σ) (ε + λσ)^{−β} dσ,
//!
//! which keeps the near-boundary regime (ε → 0) free of cancellation.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Body, ConvexBody, Direction, Point, SectionProfile};
use crate::quadrature::{default_rule, Endpoints, Integrator};

/// Relative gradient residual of the Santaló objective accepted as "centered".
pub const CENTERING_TOL: f64 = 1e-6;

const PHI_REL_TOL: f64 = 1e-12;

/// The kernel φ_β(s) = (1−s)^{−β}, β ≥ (n+1)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiBeta {
    beta: f64,
    n: usize,
}

impl PhiBeta {
    pub fn new(n: usize, beta: f64) -> Result<Self> {
        let min = (n as f64 + 1.0) / 2.0;
        if !(beta >= min) || !beta.is_finite() {
            return Err(Error::Domain(format!(
                "beta must be at least (n+1)/2 = {min}, got {beta}"
            )));
        }
        Ok(Self { beta, n })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// φ_β(s); infinite for s ≥ 1.
    pub fn eval(&self, s: f64) -> f64 {
        if s >= 1.0 {
            return f64::INFINITY;
        }
        (-self.beta * (-s).ln_1p()).exp()
    }

    /// β − (n+1)/2, the excess over the borderline exponent.
    pub fn excess(&self) -> f64 {
        self.beta - (self.n as f64 + 1.0) / 2.0
    }
}

/// A body with its Santaló point at the origin, together with its polar
/// K⁰ and |K⁰| = Φ_K(0).
#[derive(Debug)]
pub struct PhiField {
    base: Arc<Body>,
    polar: Body,
    polar_volume: f64,
    volume: f64,
}

impl PhiField {
    /// Fails with `NotSantaloCentered` unless ∇|K^x| vanishes at x = 0.
    pub fn new(base: Body) -> Result<Self> {
        Self::from_arc(Arc::new(base))
    }

    pub fn from_arc(base: Arc<Body>) -> Result<Self> {
        let residual = centering_residual(base.as_ref())?;
        if residual > CENTERING_TOL {
            return Err(Error::NotSantaloCentered(residual));
        }
        let n = base.dim();
        let polar = base.polar(&Point::zeros(n))?;
        let polar_volume = polar.volume()?;
        let volume = base.volume()?;
        Ok(Self {
            base,
            polar,
            polar_volume,
            volume,
        })
    }

    pub fn base(&self) -> &Body {
        &self.base
    }

    pub fn base_arc(&self) -> Arc<Body> {
        Arc::clone(&self.base)
    }

    pub fn polar(&self) -> &Body {
        &self.polar
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Φ_K(0) = |K⁰|.
    pub fn min_value(&self) -> f64 {
        self.polar_volume
    }

    pub fn base_volume(&self) -> f64 {
        self.volume
    }

    /// Φ_K(x).
    pub fn eval(&self, x: &Point, beta: f64) -> Result<f64> {
        let kernel = PhiBeta::new(self.dim(), beta)?;
        let norm = x.norm();
        if norm == 0.0 {
            return Ok(self.polar_volume);
        }
        let u = Direction::new(x.clone())?;
        let h = self.polar.support(&u);
        let eps = 1.0 - norm * h;
        if eps < -1e-12 {
            return Err(Error::PointNotInterior);
        }
        if eps <= 0.0 {
            return Err(Error::IntegralDiverged);
        }
        let ray = self.ray(&u)?;
        Ok(ray.ln_phi(&kernel, eps)?.exp())
    }

    /// Section data of K⁰ orthogonal to u.
    pub fn ray(&self, u: &Direction) -> Result<Ray<'_>> {
        let profile = self.polar.section_profile(u)?;
        Ok(Ray {
            h: profile.upper(),
            profile,
        })
    }
}

/// Φ along a single ray, parametrized by ε = 1 − λ h_{K⁰}(u).
pub struct Ray<'a> {
    profile: Box<dyn SectionProfile + 'a>,
    h: f64,
}

impl Ray<'_> {
    /// h_{K⁰}(u) = 1/r_K(u).
    pub fn polar_support(&self) -> f64 {
        self.h
    }

    /// λ at which 1 − λh = ε.
    pub fn lambda(&self, eps: f64) -> f64 {
        (1.0 - eps) / self.h
    }

    /// ln Φ(λu) with λ = (1 − ε)/h, for ε ∈ (0, 1].
    pub fn ln_phi(&self, kernel: &PhiBeta, eps: f64) -> Result<f64> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::Domain(format!("ε must lie in (0, 1], got {eps}")));
        }
        let width = self.profile.width();
        let gamma = (kernel.dim() as f64 - 1.0) / 2.0;
        let integrator = Integrator::new(1e-300, PHI_REL_TOL);
        let lambda = self.lambda(eps);
        if lambda == 0.0 {
            let q = integrator.integrate(|d| self.profile.from_top(d), &[0.0, width], Endpoints::both(gamma))?;
            return Ok(q.value.ln());
        }
        // scale by ε^κ so the integrand stays O(1/ε) for every β
        let beta = kernel.beta();
        let kappa = kernel.excess().max(0.0);
        let ln_eps = eps.ln();
        let f = |d: f64| {
            let g = self.profile.from_top(d);
            if g <= 0.0 {
                return 0.0;
            }
            // the kernel alone can exceed f64 range when ε is tiny
            (g.ln() + kappa * ln_eps - beta * (eps + lambda * d).ln()).exp()
        };
        // geometric breakpoints resolve the kernel's scale ε/λ
        let mut breaks = vec![0.0];
        let mut s = eps / lambda;
        while s < 0.5 * width {
            breaks.push(s);
            s *= 8.0;
        }
        breaks.push(width);
        let q = integrator.integrate(f, &breaks, Endpoints::both(gamma))?;
        if !(q.value > 0.0) {
            return Err(Error::DenominatorUnderflow(format!(
                "Φ integral vanished at ε = {eps:e}"
            )));
        }
        Ok(q.value.ln() - kappa * ln_eps)
    }
}

/// |∇F(0)| / Σ w h^{−n−1} for F(x) = |K^x|; zero exactly at the Santaló point.
pub fn centering_residual(body: &dyn ConvexBody) -> Result<f64> {
    let n = body.dim();
    let rule = default_rule(n)?;
    let h = rule.evaluate(|u| Ok(body.support(u)))?;
    if h.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::CenterNotInterior);
    }
    let p: Vec<f64> = h.iter().map(|v| v.powi(-(n as i32) - 1)).collect();
    let scale = rule.weighted_sum(&p);
    let mut grad = 0.0;
    for i in 0..n {
        let c: Vec<f64> = rule.nodes().iter().zip(&p).map(|(u, p)| u[i] * p).collect();
        grad += rule.weighted_sum(&c).powi(2);
    }
    Ok(grad.sqrt() / scale)
}

/// Φ_K(x) for a body whose Santaló point is the origin.
pub fn phi(base: &Body, x: &Point, beta: f64) -> Result<f64> {
    PhiField::new(base.clone())?.eval(x, beta)
}
