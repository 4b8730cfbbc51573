//! The Santaló point: the interior x minimizing F(x) = |K^x|.
//!
//! In polar coordinates F(x) = (1/n) ∫ (h_K(u) − ⟨x,u⟩)^{−n} dσ(u), with
//! ∇F = ∫ u (h − ⟨x,u⟩)^{−n−1} dσ and ∇²F = (n+1) ∫ uuᵀ (h − ⟨x,u⟩)^{−n−2} dσ.
//! ∇F(x)/(n+1) is the first moment of K^x, so the minimizer is the point
//! about which the polar body has its centroid at the origin.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{ConvexBody, Point};
use crate::error::{Error, Result};
use crate::quadrature::{default_rule, neumaier_sum, SphereRule};

const GRAD_TOL: f64 = 1e-10;
const MAX_NEWTON: usize = 100;
const SIMPLEX_GRAD_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SantaloPoint {
    pub point: Vec<f64>,
    pub polar_volume: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub method: &'static str,
}

impl SantaloPoint {
    pub fn as_point(&self) -> Point {
        Point::from_column_slice(&self.point)
    }
}

/// Support values on a sphere rule, reused by every evaluation of F.
struct Objective<'a> {
    rule: &'a SphereRule,
    h: Vec<f64>,
    n: usize,
}

impl<'a> Objective<'a> {
    fn new(body: &dyn ConvexBody, rule: &'a SphereRule) -> Result<Self> {
        let h = rule.evaluate(|u| Ok(body.support(u)))?;
        if h.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("support function is not finite".into()));
        }
        Ok(Self {
            rule,
            h,
            n: body.dim(),
        })
    }

    fn gaps(&self, x: &Point) -> Option<Vec<f64>> {
        let g: Vec<f64> = self
            .rule
            .nodes()
            .iter()
            .zip(&self.h)
            .map(|(u, h)| h - x.dot(u))
            .collect();
        g.iter().all(|&v| v > 0.0).then_some(g)
    }

    fn value(&self, x: &Point) -> Option<f64> {
        let gaps = self.gaps(x)?;
        let n = self.n as i32;
        Some(self.rule.weighted_sum(&gaps.iter().map(|g| g.powi(-n)).collect::<Vec<_>>()) / self.n as f64)
    }

    /// (F, ∇F, ∇²F, gradient scale).
    fn derivatives(&self, x: &Point) -> Option<(f64, DVector<f64>, DMatrix<f64>, f64)> {
        let gaps = self.gaps(x)?;
        let n = self.n;
        let ni = n as i32;
        let mut grad = vec![Vec::with_capacity(gaps.len()); n];
        let mut hess = vec![Vec::with_capacity(gaps.len()); n * n];
        let mut f = Vec::with_capacity(gaps.len());
        let mut scale = Vec::with_capacity(gaps.len());
        for ((u, &g), &w) in self.rule.nodes().iter().zip(&gaps).zip(self.rule.weights()) {
            let p = g.powi(-ni);
            f.push(w * p);
            let p1 = p / g;
            scale.push(w * p1);
            let p2 = (n as f64 + 1.0) * p1 / g;
            for i in 0..n {
                grad[i].push(w * u[i] * p1);
                for j in 0..n {
                    hess[i * n + j].push(w * u[i] * u[j] * p2);
                }
            }
        }
        let value = neumaier_sum(f) / n as f64;
        let grad = DVector::from_iterator(n, grad.into_iter().map(neumaier_sum));
        let hess = DMatrix::from_row_iterator(n, n, hess.into_iter().map(neumaier_sum));
        Some((value, grad, hess, neumaier_sum(scale)))
    }
}

/// |K^x| by sphere quadrature of (h_K − ⟨x,·⟩)^{−n}.
pub fn polar_volume_about(body: &dyn ConvexBody, x: &Point) -> Result<f64> {
    let rule = default_rule(body.dim())?;
    Objective::new(body, rule)?
        .value(x)
        .ok_or(Error::PointNotInterior)
}

pub fn santalo_point(body: &dyn ConvexBody) -> Result<SantaloPoint> {
    let rule = default_rule(body.dim())?;
    let obj = Objective::new(body, rule)?;
    let n = body.dim();
    let x0 = Point::zeros(n);
    if obj.gaps(&x0).is_none() {
        return Err(Error::CenterNotInterior);
    }
    match newton(&obj, x0.clone()) {
        Ok(sp) => Ok(sp),
        Err(_) => nelder_mead(&obj, x0),
    }
}

fn newton(obj: &Objective, mut x: Point) -> Result<SantaloPoint> {
    for it in 0..MAX_NEWTON {
        let (f, g, h, scale) = obj.derivatives(&x).ok_or(Error::PointNotInterior)?;
        let gnorm = g.norm();
        if gnorm <= GRAD_TOL * scale.max(1.0) {
            return Ok(SantaloPoint {
                point: x.iter().copied().collect(),
                polar_volume: f,
                gradient_norm: gnorm,
                iterations: it,
                method: "newton",
            });
        }
        let step = h
            .cholesky()
            .ok_or(Error::NoConvergence {
                what: "santalo point newton (indefinite hessian)",
                iterations: it,
            })?
            .solve(&(-&g));
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial = &x + &step * alpha;
            if let Some(ft) = obj.value(&trial) {
                if ft <= f {
                    x = trial;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            // no descent at roundoff level: accept if the gradient is tiny
            if gnorm <= 1e3 * GRAD_TOL * scale.max(1.0) {
                return Ok(SantaloPoint {
                    point: x.iter().copied().collect(),
                    polar_volume: f,
                    gradient_norm: gnorm,
                    iterations: it,
                    method: "newton",
                });
            }
            return Err(Error::NoConvergence {
                what: "santalo point line search",
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence {
        what: "santalo point newton",
        iterations: MAX_NEWTON,
    })
}

/// Derivative-free fallback on the same objective.
fn nelder_mead(obj: &Objective, x0: Point) -> Result<SantaloPoint> {
    let n = x0.len();
    let f = |x: &Point| obj.value(x).unwrap_or(f64::INFINITY);
    let h_min = obj.h.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut simplex: Vec<(Point, f64)> = (0..=n)
        .map(|i| {
            let mut p = x0.clone();
            if i > 0 {
                p[i - 1] += 0.1 * h_min;
            }
            let v = f(&p);
            (p, v)
        })
        .collect();
    let max_iter = 2000 * n;
    for it in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0];
        if let Some((fv, g, _, scale)) = obj.derivatives(&best.0) {
            if g.norm() <= GRAD_TOL * scale.max(1.0) {
                return Ok(SantaloPoint {
                    point: best.0.iter().copied().collect(),
                    polar_volume: fv,
                    gradient_norm: g.norm(),
                    iterations: it,
                    method: "nelder-mead",
                });
            }
        }
        let diameter = simplex
            .iter()
            .skip(1)
            .map(|(p, _)| (p - &simplex[0].0).norm())
            .fold(0.0, f64::max);
        if diameter < 1e-13 * h_min {
            // collapsed at roundoff in F; the gradient test above is out of reach
            let (fv, g, _, scale) = obj.derivatives(&simplex[0].0).ok_or(Error::PointNotInterior)?;
            if g.norm() <= SIMPLEX_GRAD_TOL * scale.max(1.0) {
                return Ok(SantaloPoint {
                    point: simplex[0].0.iter().copied().collect(),
                    polar_volume: fv,
                    gradient_norm: g.norm(),
                    iterations: it,
                    method: "nelder-mead",
                });
            }
            break;
        }
        let centroid = simplex[..n]
            .iter()
            .fold(Point::zeros(n), |acc, (p, _)| acc + p)
            / n as f64;
        let worst = simplex[n].clone();
        let reflect = &centroid + (&centroid - &worst.0);
        let fr = f(&reflect);
        if fr < simplex[0].1 {
            let expand = &centroid + (&reflect - &centroid) * 2.0;
            let fe = f(&expand);
            simplex[n] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect, fr);
        } else {
            let contract = &centroid + (&worst.0 - &centroid) * 0.5;
            let fc = f(&contract);
            if fc < worst.1 {
                simplex[n] = (contract, fc);
            } else {
                let b = simplex[0].0.clone();
                for s in simplex.iter_mut().skip(1) {
                    s.0 = &b + (&s.0 - &b) * 0.5;
                    s.1 = f(&s.0);
                }
            }
        }
    }
    Err(Error::NoConvergence {
        what: "santalo point simplex search",
        iterations: max_iter,
    })
}
