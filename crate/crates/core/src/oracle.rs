//! Monte Carlo estimators used as independent checks of the quadrature
//! pipelines.
//!
//! Samples are drawn in fixed-size batches; batch `i` uses a ChaCha8 stream
//! seeded from the master seed with stream id `i`, so estimates do not
//! depend on the number of threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ray_exit, Body, ConvexBody, Direction, Point};

const BATCH: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        if samples < 10_000 {
            return Err(Error::Domain(format!(
                "Monte Carlo needs at least 10^4 samples, got {samples}"
            )));
        }
        Ok(Self { samples, seed })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    /// Set when stderr exceeds 5% of the estimate.
    pub high_variance: bool,
}

impl McEstimate {
    fn from_moments(sum: f64, sum_sq: f64, count: usize, scale: f64) -> Self {
        let m = count as f64;
        let mean = sum / m;
        let var = (sum_sq / m - mean * mean).max(0.0) * m / (m - 1.0);
        let estimate = scale * mean;
        let stderr = scale * (var / m).sqrt();
        Self {
            estimate,
            stderr,
            high_variance: stderr > 0.05 * estimate.abs(),
        }
    }

    /// |a − b| ≤ k √(σ_a² + σ_b²).
    pub fn agrees_with(&self, other: &McEstimate, k: f64) -> bool {
        (self.estimate - other.estimate).abs() <= k * self.stderr.hypot(other.stderr)
    }

    /// |a − value| ≤ k σ_a.
    pub fn agrees_with_value(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.stderr
    }
}

/// Mean of `g` over uniform samples of the box [lo, hi], times its volume.
fn box_average<G>(lo: &[f64], hi: &[f64], cfg: McConfig, g: G) -> Result<McEstimate>
where
    G: Fn(&Point) -> Result<f64> + Sync,
{
    let n = lo.len();
    let batches = cfg.samples.div_ceil(BATCH);
    let moments = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(b as u64);
            let count = BATCH.min(cfg.samples - b * BATCH);
            let mut s = 0.0;
            let mut s2 = 0.0;
            let mut x = Point::zeros(n);
            for _ in 0..count {
                for i in 0..n {
                    x[i] = rng.gen_range(lo[i]..hi[i]);
                }
                let v = g(&x)?;
                s += v;
                s2 += v * v;
            }
            Ok((s, s2))
        })
        .collect::<Result<Vec<_>>>()?;
    // merge in batch order
    let (s, s2) = moments
        .iter()
        .fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
    let volume: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
    Ok(McEstimate::from_moments(s, s2, cfg.samples, volume))
}

fn bounding_box(body: &dyn ConvexBody) -> (Vec<f64>, Vec<f64>) {
    let n = body.dim();
    let lo = (0..n).map(|i| -body.support(&Direction::axis(n, i).opposite())).collect();
    let hi = (0..n).map(|i| body.support(&Direction::axis(n, i))).collect();
    (lo, hi)
}

/// Hit-or-miss estimate of |K|.
pub fn mc_volume(body: &dyn ConvexBody, cfg: McConfig) -> Result<McEstimate> {
    let (lo, hi) = bounding_box(body);
    box_average(&lo, &hi, cfg, |x| Ok(if body.contains(x)? { 1.0 } else { 0.0 }))
}

/// y ∈ K^x, i.e. h_K(y) − ⟨x,y⟩ ≤ 1, by homogeneity of h.
fn in_polar(body: &dyn ConvexBody, x: &Point, y: &Point) -> Result<bool> {
    let r = y.norm();
    if r == 0.0 {
        return Ok(true);
    }
    let u = Direction::new(y.clone())?;
    Ok(r * (body.support(&u) - x.dot(&u)) <= 1.0)
}

/// The box [−1/r_{K−x}(−e_i), 1/r_{K−x}(e_i)] containing K^x.
fn polar_box(body: &dyn ConvexBody, x: &Point) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = body.dim();
    let reach = |u: &Direction| -> Result<f64> {
        let bound = body.support(u) - x.dot(u);
        if !(bound > 0.0) {
            return Err(Error::PointNotInterior);
        }
        let r = ray_exit(|s| body.contains(&(x + u.as_vector() * s)), bound)?;
        if !(r > 0.0) {
            return Err(Error::PointNotInterior);
        }
        Ok(r)
    };
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        let e = Direction::axis(n, i);
        // slack for the bisection tolerance
        lo.push(-1.0 / reach(&e.opposite())? * (1.0 + 1e-9));
        hi.push(1.0 / reach(&e)? * (1.0 + 1e-9));
    }
    Ok((lo, hi))
}

/// |K^x| by hit-or-miss with the support-function membership test.
pub fn mc_polar_volume(body: &dyn ConvexBody, x: &Point, cfg: McConfig) -> Result<McEstimate> {
    if !body.contains(x)? {
        return Err(Error::PointNotInterior);
    }
    let (lo, hi) = polar_box(body, x)?;
    box_average(&lo, &hi, cfg, |y| Ok(if in_polar(body, x, y)? { 1.0 } else { 0.0 }))
}

/// Φ_K(x) = ∫_{K⁰} (1 − ⟨x,y⟩)^{−β} dy from uniform samples of a box
/// around K⁰. The variance is finite when the kernel stays bounded on K⁰,
/// i.e. for x interior; it grows quickly as x approaches ∂K.
pub fn mc_phi(body: &Body, x: &Point, beta: f64, cfg: McConfig) -> Result<McEstimate> {
    let n = body.dim();
    if !beta.is_finite() {
        return Err(Error::Domain(format!("beta must be finite, got {beta}")));
    }
    if !body.contains(x)? {
        return Err(Error::PointNotInterior);
    }
    let origin = Point::zeros(n);
    let (lo, hi) = polar_box(body, &origin)?;
    box_average(&lo, &hi, cfg, |y| {
        if !in_polar(body, &origin, y)? {
            return Ok(0.0);
        }
        Ok((1.0 - x.dot(y)).powf(-beta))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Ball, Ellipsoid, FourierBody2D};
    use crate::santalo::phi;
    use std::f64::consts::PI;

    fn cfg(samples: usize) -> McConfig {
        McConfig::new(samples, 0x5eed).unwrap()
    }

    #[test]
    fn volumes() {
        let b = Ball::unit(2).unwrap();
        let e = mc_volume(&b, cfg(1_000_000)).unwrap();
        assert!(e.agrees_with_value(PI, 3.0), "{e:?}");
        let el = Ellipsoid::diagonal(&[2.0, 1.0]).unwrap();
        let e = mc_volume(&el, cfg(1_000_000)).unwrap();
        assert!(e.agrees_with_value(2.0 * PI, 3.0), "{e:?}");
        let f = FourierBody2D::new(vec![1.0, 0.0, 0.1], vec![]).unwrap();
        let e = mc_volume(&f, cfg(400_000)).unwrap();
        assert!(e.agrees_with_value(f.volume().unwrap(), 3.0), "{e:?}");
        let b3 = Ball::unit(3).unwrap();
        let e = mc_volume(&b3, cfg(200_000)).unwrap();
        assert!(e.agrees_with_value(4.0 * PI / 3.0, 3.0), "{e:?}");
    }

    #[test]
    fn deterministic() {
        let b = Ball::unit(2).unwrap();
        let a = mc_volume(&b, cfg(50_000)).unwrap();
        let c = mc_volume(&b, cfg(50_000)).unwrap();
        assert_eq!(a.estimate.to_bits(), c.estimate.to_bits());
        let other = mc_volume(&b, McConfig::new(50_000, 7).unwrap()).unwrap();
        assert_ne!(a.estimate, other.estimate);
        assert!(McConfig::new(100, 1).is_err());
    }

    #[test]
    fn stderr_scaling() {
        let b = Ball::unit(2).unwrap();
        let small = mc_volume(&b, cfg(20_000)).unwrap();
        let large = mc_volume(&b, cfg(2_000_000)).unwrap();
        let ratio = small.stderr / large.stderr;
        assert!(ratio > 5.0 && ratio < 20.0, "{ratio}");
    }

    #[test]
    fn disc_polar_about_point() {
        // |K^x| = π/(1 − |x|²)^{3/2} for the unit disc
        let b = Ball::unit(2).unwrap();
        let x = Point::from_vec(vec![0.5, 0.0]);
        let exact = PI / 0.75f64.powf(1.5);
        let p = mc_polar_volume(&b, &x, cfg(400_000)).unwrap();
        assert!(p.agrees_with_value(exact, 3.0), "{p:?}");
        // the closed form itself against the ellipse it describes
        let e = Ellipsoid::diagonal(&[1.0, 1.0]).unwrap().polar_about(&x).unwrap();
        assert!((e.volume().unwrap() - exact).abs() < 1e-12);
    }

    #[test]
    fn phi_cross_checks() {
        let b: Body = Ball::unit(2).unwrap().into();
        let x = Point::from_vec(vec![0.5, 0.0]);
        let m = mc_phi(&b, &x, 3.0, cfg(400_000)).unwrap();
        let q = phi(&b, &x, 3.0).unwrap();
        assert!(m.agrees_with_value(q, 3.0), "{m:?} vs {q}");
        assert!(!m.high_variance);
        let p = mc_polar_volume(&b, &x, McConfig::new(400_000, 99).unwrap()).unwrap();
        assert!(m.agrees_with(&p, 3.0));
        let z = mc_phi(&b, &Point::zeros(2), 2.0, cfg(200_000)).unwrap();
        assert!(z.agrees_with_value(PI, 3.0));
    }

    #[test]
    fn santalo_point_is_minimal() {
        use crate::geometry::santalo_point;
        let f = FourierBody2D::new(vec![1.0, 0.2, 0.1], vec![0.05]).unwrap();
        let sp = santalo_point(&f).unwrap().as_point();
        let base = mc_polar_volume(&f, &sp, cfg(200_000)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let dx = Point::from_vec(vec![rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)]);
            let other = mc_polar_volume(&f, &(&sp + dx), cfg(200_000)).unwrap();
            assert!(other.estimate > base.estimate - 3.0 * base.stderr.hypot(other.stderr));
        }
    }
}
