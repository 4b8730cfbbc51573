//! Generalized Santaló bodies S_β(K,t) = {x ∈ K : Φ_K(x) ≤ t}.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::phi::{PhiBeta, PhiField};
use crate::error::{Error, Result};
use crate::geometry::{Body, ConvexBody, Direction};
use crate::quadrature::{brent, default_rule, golden_min};

/// Smallest ε = 1 − λ h_{K⁰}(u) the radial solver will bracket.
pub const LN_EPS_FLOOR: f64 = -690.0;

/// S_β(K,t) as a radial function about the Santaló point of K (the origin).
///
/// Radii are stored as ε(u) = 1 − λ*(u) h_{K⁰}(u), which keeps full
/// relative precision when λ* is close to r_K(u).
#[derive(Debug)]
pub struct LevelSetBody {
    field: Arc<PhiField>,
    kernel: PhiBeta,
    t: f64,
    cache: RwLock<HashMap<Vec<u64>, f64>>,
}

impl LevelSetBody {
    pub fn new(base: Body, beta: f64, t: f64) -> Result<Self> {
        Self::with_field(Arc::new(PhiField::new(base)?), beta, t)
    }

    /// Shares the polar body and its volume across several levels.
    pub fn with_field(field: Arc<PhiField>, beta: f64, t: f64) -> Result<Self> {
        let kernel = PhiBeta::new(field.dim(), beta)?;
        let minimum = field.min_value();
        if !(t >= minimum) || !t.is_finite() {
            return Err(Error::LevelBelowMinimum { t, minimum });
        }
        Ok(Self {
            field,
            kernel,
            t,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn field(&self) -> &Arc<PhiField> {
        &self.field
    }

    pub fn beta(&self) -> f64 {
        self.kernel.beta()
    }

    pub fn level(&self) -> f64 {
        self.t
    }

    pub fn cached_directions(&self) -> usize {
        self.cache.read().map(|c| c.len()).unwrap_or(0)
    }

    /// ε(u) = 1 − λ*(u) h_{K⁰}(u) ∈ (0, 1].
    pub fn gap(&self, u: &Direction) -> Result<f64> {
        self.gap_near(u, None)
    }

    /// As [`gap`](Self::gap), starting the bracket search at a guess for ln ε.
    fn gap_near(&self, u: &Direction, hint: Option<f64>) -> Result<f64> {
        let key: Vec<u64> = u.iter().map(|x| x.to_bits()).collect();
        if let Some(e) = self.cache.read().ok().and_then(|c| c.get(&key).copied()) {
            return Ok(e);
        }
        let e = self.solve(u, hint)?;
        if let Ok(mut c) = self.cache.write() {
            c.insert(key, e);
        }
        Ok(e)
    }

    fn solve(&self, u: &Direction, hint: Option<f64>) -> Result<f64> {
        let ray = self.field.ray(u)?;
        let ln_t = self.t.ln();
        // ln Φ is decreasing in y = ln ε
        let mut f = |y: f64| Ok(ray.ln_phi(&self.kernel, y.exp())? - ln_t);
        if f(0.0)? >= 0.0 {
            // t is (numerically) Φ(0)
            return Ok(1.0);
        }
        let underflow = || {
            Error::DenominatorUnderflow(format!(
                "level t = {} needs 1 − λh below e^{LN_EPS_FLOOR}",
                self.t
            ))
        };
        let (mut lo, mut hi);
        match hint {
            Some(y0) if y0 < 0.0 && y0 > LN_EPS_FLOOR => {
                let mut step = 0.05 * (1.0 + y0.abs());
                hi = (y0 + step).min(0.0);
                while hi < 0.0 && f(hi)? > 0.0 {
                    step *= 2.0;
                    hi = (hi + step).min(0.0);
                }
                lo = (y0 - step).max(LN_EPS_FLOOR);
                while f(lo)? < 0.0 {
                    if lo <= LN_EPS_FLOOR {
                        return Err(underflow());
                    }
                    hi = lo;
                    step *= 2.0;
                    lo = (lo - step).max(LN_EPS_FLOOR);
                }
            }
            _ => {
                hi = 0.0;
                lo = -1.0;
                while f(lo)? < 0.0 {
                    if lo <= LN_EPS_FLOOR {
                        return Err(underflow());
                    }
                    hi = lo;
                    lo = (2.0 * lo).max(LN_EPS_FLOOR);
                }
            }
        }
        let y = brent(&mut f, lo, hi, 1e-13, 0.0)?;
        Ok(y.exp())
    }

    /// λ*(u): the boundary of S_β(K,t) along u.
    pub fn santalo_radial(&self, u: &Direction) -> Result<f64> {
        let e = self.gap(u)?;
        Ok((1.0 - e) / self.field.polar().support(u))
    }

    /// |K| − |S_β(K,t)| = (1/n) ∫ (r_K(u)ⁿ − λ*(u)ⁿ) dσ as one integral.
    pub fn volume_deficit(&self) -> Result<f64> {
        let n = self.field.dim();
        let rule = default_rule(n)?;
        let hint = self.gap(&rule.nodes()[0])?.ln();
        rule.try_integrate(|u| {
            let e = self.gap_near(u, Some(hint))?;
            let h = self.field.polar().support(u);
            Ok(h.powi(-(n as i32)) * -(n as f64 * (-e).ln_1p()).exp_m1())
        })
        .map(|q| q / n as f64)
    }
}

impl ConvexBody for LevelSetBody {
    fn dim(&self) -> usize {
        self.field.dim()
    }

    /// Maximum of ⟨λ*(v)v, u⟩ over the rule directions, refined in the plane.
    fn support(&self, u: &Direction) -> f64 {
        let n = self.dim();
        let Ok(rule) = default_rule(n) else {
            return f64::NAN;
        };
        let Ok(values) = rule.evaluate(|v| Ok(self.santalo_radial(v)? * v.dot(u))) else {
            return f64::NAN;
        };
        let (best, &vmax) = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty rule");
        if n != 2 {
            return vmax;
        }
        let theta0 = rule.nodes()[best].angle();
        let step = std::f64::consts::TAU / rule.len() as f64;
        let neg = |th: f64| {
            let v = Direction::from_angle(th);
            -self.santalo_radial(&v).map(|r| r * v.dot(u)).unwrap_or(f64::NEG_INFINITY)
        };
        let th = golden_min(neg, theta0 - step, theta0 + step, 1e-10);
        (-neg(th)).max(vmax)
    }

    fn radial(&self, u: &Direction) -> Result<f64> {
        self.santalo_radial(u)
    }

    fn is_centrally_symmetric(&self) -> bool {
        self.field.base().is_centrally_symmetric()
    }
}

/// λ*(u) for a single direction.
pub fn santalo_radial(base: &Body, beta: f64, t: f64, u: &Direction) -> Result<f64> {
    LevelSetBody::new(base.clone(), beta, t)?.santalo_radial(u)
}

/// |K| − |S_β(K,t)|.
pub fn volume_deficit(base: &Body, beta: f64, t: f64) -> Result<f64> {
    LevelSetBody::new(base.clone(), beta, t)?.volume_deficit()
}
