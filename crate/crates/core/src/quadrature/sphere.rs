//! Quadrature on the unit sphere S^{n−1}.
//!
//! The circle uses the uniform trapezoid rule. Higher spheres use a product
//! rule in hyperspherical coordinates: each polar angle φ_j contributes the
//! factor sin^{n−1−j} φ_j, which after t = cos φ_j is the Gegenbauer weight
//! (1 − t²)^{(n−2−j)/2}; the last angle is uniform.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use super::gauss::gauss_gegenbauer;
use super::neumaier_sum;
use crate::error::{Error, Result};
use crate::geometry::{Direction, Point};

pub const MAX_SPHERE_DIM: usize = 8;

#[derive(Debug, Clone)]
pub struct SphereRule {
    dim: usize,
    level: u32,
    nodes: Vec<Direction>,
    weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(n: usize, level: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        if n > MAX_SPHERE_DIM {
            return Err(Error::Unsupported(format!(
                "sphere rules are capped at n = {MAX_SPHERE_DIM}, got {n}"
            )));
        }
        if level < 1 {
            return Err(Error::Domain("sphere rule level must be at least 1".into()));
        }
        if n == 2 {
            let count = 64usize << level;
            let w = 2.0 * PI / count as f64;
            let nodes = (0..count)
                .map(|i| Direction::from_angle(2.0 * PI * i as f64 / count as f64))
                .collect();
            return Ok(Self {
                dim: 2,
                level,
                nodes,
                weights: vec![w; count],
            });
        }
        let azimuth = 8usize << level;
        let polar = 4usize << level;
        let polar_rules: Vec<(Vec<f64>, Vec<f64>)> = (1..=n - 2)
            .map(|j| gauss_gegenbauer(polar, (n - 2 - j) as f64 / 2.0))
            .collect();

        // (partial coordinates, running product of sines, weight)
        let mut partial: Vec<(Vec<f64>, f64, f64)> = vec![(Vec::new(), 1.0, 1.0)];
        for (ts, ws) in &polar_rules {
            let mut next = Vec::with_capacity(partial.len() * ts.len());
            for (coords, sines, weight) in &partial {
                for (&t, &w) in ts.iter().zip(ws) {
                    let mut c = coords.clone();
                    c.push(sines * t);
                    next.push((c, sines * (1.0 - t * t).sqrt(), weight * w));
                }
            }
            partial = next;
        }
        let dtheta = 2.0 * PI / azimuth as f64;
        let mut nodes = Vec::with_capacity(partial.len() * azimuth);
        let mut weights = Vec::with_capacity(partial.len() * azimuth);
        for (coords, sines, weight) in &partial {
            for k in 0..azimuth {
                let theta = dtheta * (k as f64 + 0.5);
                let mut c = coords.clone();
                c.push(sines * theta.cos());
                c.push(sines * theta.sin());
                let v = Point::from_vec(c);
                let v = &v / v.norm();
                nodes.push(Direction::from_unit_unchecked(v));
                weights.push(weight * dtheta);
            }
        }
        Ok(Self {
            dim: n,
            level,
            nodes,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Highest total degree of polynomials integrated exactly.
    pub fn degree(&self) -> usize {
        if self.dim == 2 {
            (64usize << self.level) - 1
        } else {
            (8usize << self.level) - 1
        }
    }

    pub fn nodes(&self) -> &[Direction] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Evaluates `f` at every node in parallel, preserving node order.
    pub fn evaluate<F>(&self, f: F) -> Result<Vec<f64>>
    where
        F: Fn(&Direction) -> Result<f64> + Sync,
    {
        self.nodes.par_iter().map(|u| f(u)).collect()
    }

    /// Weighted sum of per-node values, in node order.
    pub fn weighted_sum(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.weights.len());
        neumaier_sum(values.iter().zip(&self.weights).map(|(v, w)| v * w))
    }

    pub fn try_integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&Direction) -> Result<f64> + Sync,
    {
        let values = self.evaluate(f)?;
        Ok(self.weighted_sum(&values))
    }

    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&Direction) -> f64 + Sync,
    {
        self.try_integrate(|u| Ok(f(u))).expect("infallible")
    }
}

/// Levels used by [`default_rule`]: dense on the circle, coarser as the
/// product grid grows with n.
pub fn default_level(n: usize) -> u32 {
    match n {
        2 => 4,
        3 => 3,
        4 => 2,
        _ => 1,
    }
}

/// Cached rule at [`default_level`].
pub fn default_rule(n: usize) -> Result<&'static SphereRule> {
    static RULES: [OnceLock<SphereRule>; MAX_SPHERE_DIM + 1] =
        [const { OnceLock::new() }; MAX_SPHERE_DIM + 1];
    if !(2..=MAX_SPHERE_DIM).contains(&n) {
        // surfaces the same error as SphereRule::new
        SphereRule::new(n, 1)?;
    }
    if let Some(rule) = RULES[n].get() {
        return Ok(rule);
    }
    let rule = SphereRule::new(n, default_level(n))?;
    Ok(RULES[n].get_or_init(|| rule))
}

/// Product or trapezoid rule on S^{n−1} at the given refinement level.
pub fn sphere_rule(n: usize, level: u32) -> Result<SphereRule> {
    SphereRule::new(n, level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::special::sphere_area;

    #[test]
    fn circle_moments() {
        let r = sphere_rule(2, 1).unwrap();
        assert!((r.integrate(|_| 1.0) - 2.0 * PI).abs() < 1e-14);
        assert!((r.integrate(|u| u[0] * u[0]) - PI).abs() < 1e-14);
        // trig polynomial of degree below the node count
        let q = r.integrate(|u| (40.0 * u.angle()).cos().powi(2));
        assert!((q - PI).abs() < 1e-13);
    }

    #[test]
    fn sphere_area_weights() {
        for n in 2..=6 {
            let r = SphereRule::new(n, 1).unwrap();
            let s: f64 = r.weights().iter().sum();
            assert!((s - sphere_area(n)).abs() < 1e-12, "n={n}: {s}");
            assert!(r.weights().iter().all(|&w| w > 0.0));
            for u in r.nodes() {
                assert!((u.norm() - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn two_sphere_monomials() {
        let r = sphere_rule(3, 1).unwrap();
        assert!((r.integrate(|_| 1.0) - 4.0 * PI).abs() < 1e-12);
        // ∫x² dσ = 4π/3, ∫x⁴ = 4π/5, ∫x²y² = 4π/15, ∫x²y²z² = 4π/105
        assert!((r.integrate(|u| u[0].powi(2)) - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!((r.integrate(|u| u[2].powi(4)) - 4.0 * PI / 5.0).abs() < 1e-13);
        assert!((r.integrate(|u| u[0].powi(2) * u[1].powi(2)) - 4.0 * PI / 15.0).abs() < 1e-13);
        let q = r.integrate(|u| (u[0] * u[1] * u[2]).powi(2));
        assert!((q - 4.0 * PI / 105.0).abs() < 1e-13);
        // odd harmonics vanish
        assert!(r.integrate(|u| u[0] * u[1].powi(2) + u[2].powi(3)).abs() < 1e-13);
    }

    #[test]
    fn higher_sphere_second_moment() {
        for n in 4..=5 {
            let r = SphereRule::new(n, 1).unwrap();
            let q = r.integrate(|u| u[n - 1].powi(2));
            assert!((q - sphere_area(n) / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn caps() {
        assert!(matches!(SphereRule::new(9, 1), Err(Error::Unsupported(_))));
        assert!(matches!(SphereRule::new(1, 1), Err(Error::UnsupportedDimension(1))));
        assert!(default_rule(9).is_err());
        assert_eq!(default_rule(2).unwrap().len(), 1024);
    }
}
