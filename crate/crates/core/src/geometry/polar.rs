use std::f64::consts::TAU;
use std::sync::{Arc, OnceLock};

use super::{check_dim, ray_exit, Body, ConvexBody, Direction, FourierBody2D, Point, SectionProfile};
use crate::error::{Error, Result};
use crate::quadrature::{default_rule, golden_min};

const SEARCH_GRID: usize = 512;
const FIT_SAMPLES: usize = 1024;
const FIT_MAX_DEGREE: usize = 256;

/// Series for h_{K^x} in the plane, with an estimate of the truncated tail.
#[derive(Debug, Clone)]
struct Fitted {
    body: FourierBody2D,
    tail: f64,
}

/// The polar body K^x = (K − x)⁰ of a base body about an interior point.
///
/// Its radial function is 1/h_{K−x} and its support function is 1/r_{K−x}.
/// In the plane the support function is also expanded in a Fourier series,
/// which supplies curvature, boundary points and sections.
#[derive(Debug, Clone)]
pub struct PolarView {
    base: Arc<Body>,
    center: Point,
    fitted: OnceLock<std::result::Result<Fitted, Error>>,
}

impl PolarView {
    pub fn new(base: Body, center: Point) -> Result<Self> {
        Self::from_arc(Arc::new(base), center)
    }

    pub fn from_arc(base: Arc<Body>, center: Point) -> Result<Self> {
        check_dim(base.dim(), center.len())?;
        let rule = default_rule(base.dim())?;
        let interior = rule
            .nodes()
            .iter()
            .all(|u| base.support(u) - center.dot(u) > 0.0);
        if !interior {
            return Err(Error::CenterNotInterior);
        }
        Ok(Self {
            base,
            center,
            fitted: OnceLock::new(),
        })
    }

    pub fn base(&self) -> &Body {
        &self.base
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    /// r_{K−x}(u), the distance from the center to ∂K along u.
    fn base_radial_about(&self, u: &Direction) -> Result<f64> {
        if self.center.iter().all(|&c| c == 0.0) {
            return self.base.radial(u);
        }
        if let Body::Fourier(f) = self.base.as_ref() {
            return f.radial_about(&self.center, u);
        }
        let hi = self.base.support(u) - self.center.dot(u);
        ray_exit(
            |lam| self.base.contains(&(&self.center + u.as_vector() * lam)),
            hi,
        )
    }

    /// h_{K^x}(u) by maximizing ⟨u,v⟩·r_{K^x}(v) over a 512-point grid of
    /// directions v followed by golden-section refinement. Planar only.
    pub fn support_by_search(&self, u: &Direction) -> Result<f64> {
        check_dim(2, u.dim())?;
        let value = |phi: f64| {
            let v = Direction::from_angle(phi);
            let r = 1.0 / (self.base.support(&v) - self.center.dot(&v));
            u.dot(&v) * r
        };
        let step = TAU / SEARCH_GRID as f64;
        let (best, _) = (0..SEARCH_GRID)
            .map(|i| {
                let phi = step * i as f64;
                (phi, value(phi))
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty grid");
        let phi = golden_min(|p| -value(p), best - step, best + step, 1e-12);
        Ok(value(phi))
    }

    fn fitted(&self) -> Result<&Fitted> {
        if self.dim() != 2 {
            return Err(Error::Unsupported(
                "curvature of polar bodies is only reconstructed in the plane".into(),
            ));
        }
        self.fitted
            .get_or_init(|| self.fit())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn fit(&self) -> Result<Fitted> {
        let n = FIT_SAMPLES;
        let samples: Vec<f64> = (0..n)
            .map(|j| self.support(&Direction::from_angle(TAU * j as f64 / n as f64)))
            .collect();
        let a0 = samples.iter().sum::<f64>() / n as f64;
        let mut a = vec![a0];
        let mut b = Vec::new();
        for k in 1..=FIT_MAX_DEGREE {
            let (mut ca, mut cb) = (0.0, 0.0);
            for (j, h) in samples.iter().enumerate() {
                // exact reduction of kj mod n keeps the angles accurate
                let phase = TAU * ((k * j) % n) as f64 / n as f64;
                let (s, c) = phase.sin_cos();
                ca += h * c;
                cb += h * s;
            }
            a.push(2.0 * ca / n as f64);
            b.push(2.0 * cb / n as f64);
        }
        let threshold = 1e-15 * a0.abs();
        let degree = (1..=FIT_MAX_DEGREE)
            .rev()
            .find(|&k| a[k].abs().max(b[k - 1].abs()) > threshold)
            .unwrap_or(0);
        let tail = (degree + 1..=FIT_MAX_DEGREE)
            .map(|k| a[k].abs() + b[k - 1].abs())
            .sum::<f64>();
        a.truncate(degree + 1);
        b.truncate(degree);
        let body = FourierBody2D::new(a, b)?;
        Ok(Fitted { body, tail })
    }

    /// The planar Fourier series fitted to h_{K^x}.
    pub fn fitted_series(&self) -> Result<&FourierBody2D> {
        self.fitted().map(|f| &f.body)
    }

    /// Sum of magnitudes of the dropped coefficients of the fitted series,
    /// a bound on the truncation error of the reconstructed support function.
    pub fn fit_truncation_error(&self) -> Result<f64> {
        self.fitted().map(|f| f.tail)
    }
}

impl ConvexBody for PolarView {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn support(&self, u: &Direction) -> f64 {
        match self.base_radial_about(u) {
            Ok(r) => 1.0 / r,
            Err(_) => f64::NAN,
        }
    }

    fn radial(&self, u: &Direction) -> Result<f64> {
        check_dim(self.dim(), u.dim())?;
        let h = self.base.support(u) - self.center.dot(u);
        if h <= 0.0 {
            return Err(Error::CenterNotInterior);
        }
        Ok(1.0 / h)
    }

    fn curvature_function(&self, u: &Direction) -> Result<f64> {
        self.fitted()?.body.curvature_function(u)
    }

    fn boundary_point(&self, u: &Direction) -> Result<Point> {
        self.fitted()?.body.boundary_point(u)
    }

    fn section_profile(&self, u: &Direction) -> Result<Box<dyn SectionProfile + '_>> {
        self.fitted()?.body.section_profile(u)
    }

    fn is_centrally_symmetric(&self) -> bool {
        self.base.is_centrally_symmetric() && self.center.iter().all(|&c| c == 0.0)
    }
}

/// h_{K^x}(u) by direct search; see [`PolarView::support_by_search`].
pub fn polar_support_search(view: &PolarView, u: &Direction) -> Result<f64> {
    view.support_by_search(u)
}
