//! Convex floating bodies of centrally symmetric bodies and the polar-volume
//! limit as the cut-off volume goes to zero.
//!
//! For symmetric K the floating body K_δ has support function a_δ(u), the
//! level whose cap {⟨x,u⟩ ≥ a_δ(u)} has volume δ.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Body, ConvexBody, Direction, SectionProfile};
use crate::quadrature::{
    brent, default_rule, fit_power_law_limit, unit_ball_volume, Endpoints, Integrator,
    LimitEstimate, LimitMode,
};
use crate::surface::o_p_integral;

const CAP_REL_TOL: f64 = 1e-13;

/// Volume of the cap of depth d below the supporting hyperplane.
fn cap_volume(profile: &dyn SectionProfile, n: usize, depth: f64) -> Result<f64> {
    let width = profile.width();
    let gamma = (n as f64 - 1.0) / 2.0;
    let d = depth.min(width);
    let ends = if d >= width {
        Endpoints::both(gamma)
    } else {
        Endpoints::left(gamma)
    };
    Integrator::new(1e-300, CAP_REL_TOL)
        .integrate(|s| profile.from_top(s), &[0.0, d], ends)
        .map(|q| q.value)
}

/// Cap depth h_K(u) − a for a cap of the given volume.
pub fn cap_depth(base: &dyn ConvexBody, u: &Direction, capvol: f64) -> Result<f64> {
    let profile = base.section_profile(u)?;
    let n = base.dim();
    let total = cap_volume(profile.as_ref(), n, profile.width())?;
    let half = 0.5 * total;
    if !(capvol > 0.0) {
        return Err(Error::Domain(format!("cap volume must be positive, got {capvol}")));
    }
    if capvol > half * (1.0 + 1e-12) {
        return Err(Error::CapTooLarge { capvol, half });
    }
    let width = profile.width();
    let ln_c = capvol.ln();
    let mut f = |y: f64| Ok(cap_volume(profile.as_ref(), n, y.exp())?.ln() - ln_c);
    let mut hi = width.ln();
    let mut lo = hi - 8.0;
    while f(lo)? > 0.0 {
        hi = lo;
        lo -= 16.0;
        if lo < -700.0 {
            return Err(Error::Domain(format!("cap volume {capvol:e} too small to bracket")));
        }
    }
    Ok(brent(&mut f, lo, hi, 1e-15, 0.0)?.exp())
}

/// The level a with |{x ∈ K : ⟨x,u⟩ ≥ a}| = capvol.
pub fn cap_height(base: &dyn ConvexBody, u: &Direction, capvol: f64) -> Result<f64> {
    Ok(base.support(u) - cap_depth(base, u, capvol)?)
}

/// Cap depths of K_δ, cached per direction. δ is a fraction of |K|.
#[derive(Debug)]
pub struct FloatingProfile {
    base: Body,
    delta: f64,
    capvol: f64,
    cache: RwLock<HashMap<Vec<u64>, f64>>,
}

impl FloatingProfile {
    pub fn new(base: Body, delta: f64) -> Result<Self> {
        if !base.is_centrally_symmetric() {
            return Err(Error::SymmetryRequired);
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::Domain(format!("delta must lie in (0, 1/2), got {delta}")));
        }
        let capvol = delta * base.volume()?;
        Ok(Self {
            base,
            delta,
            capvol,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// δ|K|.
    pub fn cap_volume(&self) -> f64 {
        self.capvol
    }

    pub fn depth(&self, u: &Direction) -> Result<f64> {
        let key: Vec<u64> = u.iter().map(|x| x.to_bits()).collect();
        if let Some(d) = self.cache.read().ok().and_then(|c| c.get(&key).copied()) {
            return Ok(d);
        }
        let d = cap_depth(&self.base, u, self.capvol)?;
        if let Ok(mut c) = self.cache.write() {
            c.insert(key, d);
        }
        Ok(d)
    }

    /// a_δ(u) = h_{K_δ}(u).
    pub fn height(&self, u: &Direction) -> Result<f64> {
        Ok(self.base.support(u) - self.depth(u)?)
    }

    /// |(K_δ)⁰| − |K⁰| = (1/n) ∫ (a_δ^{−n} − h_K^{−n}) dσ as one integral.
    pub fn polar_excess(&self) -> Result<f64> {
        let n = self.base.dim();
        let rule = default_rule(n)?;
        rule.try_integrate(|u| {
            let h = self.base.support(u);
            let d = self.depth(u)?;
            Ok(h.powi(-(n as i32)) * (-(n as f64) * (-d / h).ln_1p()).exp_m1())
        })
        .map(|q| q / n as f64)
    }
}

/// |(K_{δ|K|})⁰| − |K⁰| for symmetric K.
pub fn floating_polar_excess(base: &Body, delta: f64) -> Result<f64> {
    FloatingProfile::new(base.clone(), delta)?.polar_excess()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem8Rhs {
    /// 2 v_{n−1} / (n+1).
    pub c: f64,
    /// ∫ f_K^{−1/(n+1)} h_K^{−(n+1)} dσ.
    pub rhs: f64,
    /// The same integral through the O_p formula at p = −n(n+2).
    pub o_p: f64,
}

pub fn theorem8_rhs(base: &Body) -> Result<Theorem8Rhs> {
    let n = base.dim();
    let nf = n as f64;
    let rule = default_rule(n)?;
    let rhs = rule.try_integrate(|u| {
        let f = base.curvature_function(u)?;
        let h = base.support(u);
        Ok(f.powf(-1.0 / (nf + 1.0)) * h.powf(-(nf + 1.0)))
    })?;
    Ok(Theorem8Rhs {
        c: 2.0 * unit_ball_volume(n - 1) / (nf + 1.0),
        rhs,
        o_p: o_p_integral(base, -nf * (nf + 2.0))?,
    })
}

/// Samples (δ, c_n (|(K_{δ|K|})⁰| − |K⁰|) / (δ|K|)^{2/(n+1)}) and their limit δ → 0.
pub fn theorem8_estimate(base: &Body, delta_grid: &[f64]) -> Result<LimitEstimate> {
    let n = base.dim();
    let c = theorem8_rhs_constant(n);
    let samples = delta_grid
        .iter()
        .map(|&delta| {
            let fp = FloatingProfile::new(base.clone(), delta)?;
            let excess = fp.polar_excess()?;
            Ok((delta, c * excess / fp.cap_volume().powf(2.0 / (n as f64 + 1.0))))
        })
        .collect::<Result<Vec<_>>>()?;
    fit_power_law_limit(&samples, LimitMode::DecreasingDelta)
}

/// c_n = 2 v_{n−1} / (n+1).
pub fn theorem8_rhs_constant(n: usize) -> f64 {
    2.0 * unit_ball_volume(n - 1) / (n as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Ball, Ellipsoid, FourierBody2D, Point};
    use std::f64::consts::PI;

    fn disc() -> Body {
        Ball::unit(2).unwrap().into()
    }

    #[test]
    fn half_volume_cap() {
        let a = cap_height(&disc(), &Direction::from_angle(0.3), PI / 2.0).unwrap();
        assert!(a.abs() < 1e-12, "{a}");
        assert!(matches!(
            cap_height(&disc(), &Direction::axis(2, 0), 2.0),
            Err(Error::CapTooLarge { .. })
        ));
    }

    #[test]
    fn small_cap_leading_order() {
        // a disc cap of depth d has area (4√2/3) d^{3/2} (1 + O(d))
        let v = 1e-4;
        let a = cap_height(&disc(), &Direction::axis(2, 1), v).unwrap();
        let lead = (4.0 * 2f64.sqrt() / 3.0) * (1.0 - a).powf(1.5);
        assert!((lead / v - 1.0).abs() < 0.01);
        // exact: area of a circular segment of depth d
        let d: f64 = 1.0 - a;
        let exact = (1.0 - d).acos() - (1.0 - d) * (d * (2.0 - d)).sqrt();
        assert!((exact / v - 1.0).abs() < 1e-10);
    }

    /// Area of the segment of depth d cut from the unit disc.
    fn unit_segment(d: f64) -> f64 {
        if d > 0.05 {
            let s = 1.0 - d;
            return s.acos() - s * (1.0 - s * s).sqrt();
        }
        // 2√2 Σ C(1/2,k) (−1/2)^k d^{k+3/2} / (k+3/2), free of cancellation
        let mut c = 1.0;
        let mut sum = 0.0;
        for k in 0..40 {
            let kf = k as f64;
            sum += c * d.powf(kf + 1.5) / (kf + 1.5);
            c *= (0.5 - kf) / (kf + 1.0) * -0.5;
        }
        2.0 * 2f64.sqrt() * sum
    }

    #[test]
    fn ellipse_cap_two_ways() {
        // semi-axes (2, 1); segment beyond x = a has area 2(acos s − s√(1−s²)), s = a/2
        let e = Ellipsoid::diagonal(&[2.0, 1.0]).unwrap();
        let u = Direction::axis(2, 0);
        let prof = e.section_profile(&u).unwrap();
        for &d in &[1e-6, 1e-3, 0.1, 1.0, 2.5] {
            let exact = 2.0 * unit_segment(d / 2.0);
            let q = cap_volume(prof.as_ref(), 2, d).unwrap();
            assert!((q / exact - 1.0).abs() < 1e-10, "d={d}");
        }
    }

    #[test]
    fn round_trip_and_symmetry() {
        let f: Body = FourierBody2D::new(vec![1.0, 0.0, 0.1, 0.0, 0.02], vec![0.0, 0.03])
            .unwrap()
            .into();
        let fp = FloatingProfile::new(f.clone(), 1e-3).unwrap();
        for i in 0..6 {
            let u = Direction::from_angle(0.5 + i as f64);
            let d = fp.depth(&u).unwrap();
            let prof = f.section_profile(&u).unwrap();
            let v = cap_volume(prof.as_ref(), 2, d).unwrap();
            assert!((v / fp.cap_volume() - 1.0).abs() < 1e-10);
            let back = fp.height(&u.opposite()).unwrap();
            assert!((back - fp.height(&u).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn excess_for_disc() {
        let delta = 1e-3;
        let e = floating_polar_excess(&disc(), delta).unwrap();
        let a = cap_height(&disc(), &Direction::axis(2, 0), PI * delta).unwrap();
        assert!((e - PI * (a.powi(-2) - 1.0)).abs() < 1e-12);
        let smaller = floating_polar_excess(&disc(), 1e-4).unwrap();
        assert!(smaller < e);
    }

    #[test]
    fn requires_symmetry() {
        let shifted = disc().translate(&Point::from_vec(vec![0.1, 0.0])).unwrap();
        assert_eq!(FloatingProfile::new(shifted, 1e-3).unwrap_err(), Error::SymmetryRequired);
        assert!(FloatingProfile::new(disc(), 0.5).is_err());
    }

    #[test]
    fn rhs_values() {
        let r = theorem8_rhs(&disc()).unwrap();
        assert!((r.c - 4.0 / 3.0).abs() < 1e-15);
        assert!((r.rhs - 2.0 * PI).abs() < 1e-12);
        let e: Body = Ellipsoid::diagonal(&[2.0, 1.0]).unwrap().into();
        let r = theorem8_rhs(&e).unwrap();
        assert!(((r.rhs - r.o_p) / r.rhs).abs() < 1e-8);
        // exponent algebra at p = −n(n+2)
        for n in 2..6 {
            let nf = n as f64;
            let p = -nf * (nf + 2.0);
            assert!((nf / (nf + p) + 1.0 / (nf + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn scaling_law() {
        // O_{−n(n+2)}(λK) = λ^{−n(n+3)/(n+1)} O_{−n(n+2)}(K), sample by sample
        let grid = [1e-2, 3e-3, 1e-3, 3e-4];
        let e: Body = Ellipsoid::diagonal(&[2.0, 1.0]).unwrap().into();
        let a = theorem8_estimate(&e, &grid).unwrap();
        let b = theorem8_estimate(&e.scale(2.0).unwrap(), &grid).unwrap();
        let factor = 2f64.powf(-10.0 / 3.0);
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert!((y.1 / x.1 - factor).abs() < 1e-9 * factor);
        }
    }
}
