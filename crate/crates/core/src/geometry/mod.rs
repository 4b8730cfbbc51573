//! Convex bodies and their geometric functionals.

mod affine;
mod ball;
mod binet;
mod body;
mod description;
mod direction;
mod ellipsoid;
mod fourier;
mod polar;
mod santalo_point;

use std::fmt::Debug;

pub use affine::AffineImage;
pub use ball::Ball;
pub use binet::{binet_ellipsoid, BinetEllipsoid};
pub use body::Body;
pub use description::BodyDescription;
pub use direction::{Direction, Point};
pub(crate) use direction::{check_body_dim, check_dim};
pub use ellipsoid::Ellipsoid;
pub use fourier::FourierBody2D;
pub use polar::{polar_support_search, PolarView};
pub use santalo_point::{polar_volume_about, santalo_point, SantaloPoint};

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_1d, default_rule};

/// Section volumes g_{K,u}(s) along a fixed direction u, on the slab
/// [lower, upper] = [−h_K(−u), h_K(u)].
pub trait SectionProfile: Send + Sync {
    fn upper(&self) -> f64;

    fn lower(&self) -> f64;

    fn width(&self) -> f64 {
        self.upper() - self.lower()
    }

    /// g_{K,u}(upper − depth); zero outside 0 < depth < width.
    ///
    /// Measuring from the top keeps tiny depths exact, which matters for
    /// integrands that concentrate near the supporting hyperplane.
    fn from_top(&self, depth: f64) -> f64;

    fn at_level(&self, s: f64) -> Result<f64> {
        let (lo, hi) = (self.lower(), self.upper());
        if !(lo..=hi).contains(&s) {
            return Err(Error::OutOfSlab {
                s,
                lower: lo,
                upper: hi,
            });
        }
        Ok(self.from_top(hi - s))
    }
}

/// A convex body in ℝⁿ described by its evaluators.
pub trait ConvexBody: Send + Sync + Debug {
    fn dim(&self) -> usize;

    /// h_K(u) = sup_{x∈K} ⟨x, u⟩.
    fn support(&self, u: &Direction) -> f64;

    /// r_K(u) = max{λ ≥ 0 : λu ∈ K}.
    fn radial(&self, u: &Direction) -> Result<f64>;

    /// Reciprocal Gauss curvature at the boundary point with outer normal u.
    fn curvature_function(&self, _u: &Direction) -> Result<f64> {
        Err(Error::NotSmooth("body has no curvature evaluator"))
    }

    /// The boundary point whose outer normal is u.
    fn boundary_point(&self, _u: &Direction) -> Result<Point> {
        Err(Error::NotSmooth("body has no inverse Gauss map"))
    }

    fn section_profile(&self, _u: &Direction) -> Result<Box<dyn SectionProfile + '_>> {
        Err(Error::Unsupported("body has no section evaluator".into()))
    }

    /// (n−1)-volume of K ∩ {⟨x,u⟩ = s}.
    fn section_volume(&self, u: &Direction, s: f64) -> Result<f64> {
        self.section_profile(u)?.at_level(s)
    }

    /// |K| = (1/n) ∫ r_K(u)ⁿ dσ(u).
    fn volume(&self) -> Result<f64> {
        let n = self.dim();
        let rule = default_rule(n)?;
        let q = rule.try_integrate(|u| Ok(self.radial(u)?.powi(n as i32)))?;
        Ok(q / n as f64)
    }

    fn is_centrally_symmetric(&self) -> bool {
        false
    }

    /// Membership via the radial function; requires 0 ∈ int K.
    fn contains(&self, x: &Point) -> Result<bool> {
        let norm = x.norm();
        if norm == 0.0 {
            return Ok(true);
        }
        let u = Direction::new(x.clone())?;
        Ok(norm <= self.radial(&u)?)
    }
}

/// |K| by Cavalieri's principle along u.
pub fn cavalieri_volume(body: &dyn ConvexBody, u: &Direction, tol: f64) -> Result<f64> {
    let prof = body.section_profile(u)?;
    let n = body.dim();
    let width = prof.width();
    adaptive_1d(
        |d| prof.from_top(d),
        0.0,
        width,
        tol * width.powi(n as i32),
        (n as f64 - 1.0) / 2.0,
    )
}

/// Point where the ray from `center` in direction u leaves K, found by
/// bisection on a membership oracle. The bracket is [0, hi].
pub fn ray_exit<F>(inside: F, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<bool>,
{
    let mut lo = 0.0;
    let mut hi = hi;
    if inside(hi)? {
        return Ok(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
