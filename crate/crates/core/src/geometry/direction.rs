use std::ops::Deref;

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Points and vectors in ℝⁿ.
pub type Point = DVector<f64>;

/// A unit vector. Inputs are normalized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Point);

impl Direction {
    pub fn new(v: Point) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Domain(format!(
                "cannot normalize vector of norm {norm}"
            )));
        }
        Ok(Self(v / norm))
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        Self::new(Point::from_column_slice(v))
    }

    /// The planar direction (cos θ, sin θ).
    pub fn from_angle(theta: f64) -> Self {
        Self(Point::from_vec(vec![theta.cos(), theta.sin()]))
    }

    /// The i-th coordinate axis of ℝⁿ.
    pub fn axis(n: usize, i: usize) -> Self {
        let mut v = Point::zeros(n);
        v[i] = 1.0;
        Self(v)
    }

    /// Builds a direction from a vector already known to be unit length.
    pub(crate) fn from_unit_unchecked(v: Point) -> Self {
        debug_assert!((v.norm() - 1.0).abs() < 1e-10);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_vector(&self) -> &Point {
        &self.0
    }

    pub fn into_vector(self) -> Point {
        self.0
    }

    /// Polar angle of a planar direction, in (−π, π].
    pub fn angle(&self) -> f64 {
        self.0[1].atan2(self.0[0])
    }

    pub fn opposite(&self) -> Self {
        Self(-&self.0)
    }

    /// Rotation by +π/2 in the plane.
    pub fn perp(&self) -> Self {
        Self(Point::from_vec(vec![-self.0[1], self.0[0]]))
    }
}

impl Deref for Direction {
    type Target = Point;

    fn deref(&self) -> &Point {
        &self.0
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

pub(crate) fn check_body_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_input() {
        let d = Direction::from_slice(&[3.0, 4.0]).unwrap();
        assert!((d.norm() - 1.0).abs() < 1e-15);
        assert!((d[0] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn rejects_zero() {
        assert!(Direction::from_slice(&[0.0, 0.0]).is_err());
        assert!(Direction::from_slice(&[f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn perp_is_orthogonal() {
        let d = Direction::from_angle(0.7);
        assert!(d.dot(&d.perp()).abs() < 1e-16);
        assert!((d.perp().angle() - (0.7 + std::f64::consts::FRAC_PI_2)).abs() < 1e-15);
    }
}
