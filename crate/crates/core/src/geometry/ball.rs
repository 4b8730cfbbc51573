use super::{check_body_dim, check_dim, ConvexBody, Direction, Point, SectionProfile};
use crate::error::{Error, Result};
use crate::quadrature::unit_ball_volume;

/// Euclidean ball of radius r centered at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    dim: usize,
    radius: f64,
}

impl Ball {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        check_body_dim(dim)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidBody(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self { dim, radius })
    }

    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(dim, 1.0)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

struct BallProfile {
    n: usize,
    r: f64,
}

impl SectionProfile for BallProfile {
    fn upper(&self) -> f64 {
        self.r
    }

    fn lower(&self) -> f64 {
        -self.r
    }

    fn width(&self) -> f64 {
        2.0 * self.r
    }

    fn from_top(&self, d: f64) -> f64 {
        if d <= 0.0 || d >= 2.0 * self.r {
            return 0.0;
        }
        // squared half-chord d(2r − d), no cancellation near either end
        let rho2 = d * (2.0 * self.r - d);
        unit_ball_volume(self.n - 1) * rho2.powf((self.n as f64 - 1.0) / 2.0)
    }
}

impl ConvexBody for Ball {
    fn dim(&self) -> usize {
        self.dim
    }

    fn support(&self, u: &Direction) -> f64 {
        debug_assert_eq!(u.dim(), self.dim);
        self.radius
    }

    fn radial(&self, u: &Direction) -> Result<f64> {
        check_dim(self.dim, u.dim())?;
        Ok(self.radius)
    }

    fn curvature_function(&self, u: &Direction) -> Result<f64> {
        check_dim(self.dim, u.dim())?;
        Ok(self.radius.powi(self.dim as i32 - 1))
    }

    fn boundary_point(&self, u: &Direction) -> Result<Point> {
        check_dim(self.dim, u.dim())?;
        Ok(u.as_vector() * self.radius)
    }

    fn section_profile(&self, u: &Direction) -> Result<Box<dyn SectionProfile + '_>> {
        check_dim(self.dim, u.dim())?;
        Ok(Box::new(BallProfile {
            n: self.dim,
            r: self.radius,
        }))
    }

    fn volume(&self) -> Result<f64> {
        Ok(unit_ball_volume(self.dim) * self.radius.powi(self.dim as i32))
    }

    fn is_centrally_symmetric(&self) -> bool {
        true
    }

    fn contains(&self, x: &Point) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        Ok(x.norm() <= self.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_disc() {
        let b = Ball::unit(2).unwrap();
        let u = Direction::axis(2, 0);
        assert_eq!(b.support(&u), 1.0);
        assert_eq!(b.radial(&Direction::from_angle(1.3)).unwrap(), 1.0);
        assert_eq!(b.curvature_function(&u).unwrap(), 1.0);
        let x = b.boundary_point(&Direction::axis(2, 1)).unwrap();
        assert_eq!(x.as_slice(), &[0.0, 1.0]);
        assert_eq!(b.section_volume(&u, 0.0).unwrap(), 2.0);
        assert!((b.volume().unwrap() - PI).abs() < 1e-15);
    }

    #[test]
    fn three_ball_section() {
        let b = Ball::unit(3).unwrap();
        let u = Direction::from_slice(&[1.0, 2.0, 2.0]).unwrap();
        let g = b.section_volume(&u, 0.5).unwrap();
        assert!((g - 3.0 * PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn out_of_slab() {
        let b = Ball::unit(2).unwrap();
        let u = Direction::axis(2, 0);
        assert!(matches!(
            b.section_volume(&u, 1.5),
            Err(Error::OutOfSlab { .. })
        ));
    }

    #[test]
    fn invalid() {
        assert!(Ball::new(1, 1.0).is_err());
        assert!(Ball::new(2, 0.0).is_err());
        assert!(Ball::new(2, f64::NAN).is_err());
    }
}
