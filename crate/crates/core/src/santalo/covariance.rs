//! Affine covariance S_β(A(K), t) = A(S_β(K, |det A| t)).

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use super::level_set::LevelSetBody;
use super::phi::PhiField;
use super::recenter;
use super::theorem6::spread_directions;
use crate::error::{Error, Result};
use crate::geometry::{Body, ConvexBody, Direction, Point};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub residual: f64,
    pub abs_det: f64,
    /// Santaló point of A(K) found numerically; equals a when K's is 0.
    pub image_santalo_point: Vec<f64>,
    pub level: f64,
}

/// Largest relative distance over 32 directions between the boundary of
/// S_β(A(K), t) and the image under A(x) = Lx + a of the boundary of
/// S_β(K, |det L| t). K must have its Santaló point at the origin; the one
/// of A(K) is recomputed from scratch.
pub fn covariance_residual(
    base: &Body,
    linear: &DMatrix<f64>,
    shift: &Point,
    beta: f64,
    t: f64,
) -> Result<CovarianceReport> {
    let n = base.dim();
    let det = linear.determinant();
    if det == 0.0 || !det.is_finite() {
        return Err(Error::SingularMap);
    }
    let inverse = linear.clone().try_inverse().ok_or(Error::SingularMap)?;
    let image = base.affine_image(linear, shift)?;
    let (centered, sp) = recenter(&image)?;
    let x_star = sp.as_point();

    let source = LevelSetBody::with_field(Arc::new(PhiField::new(base.clone())?), beta, det.abs() * t)?;
    let target = LevelSetBody::with_field(Arc::new(PhiField::new(centered)?), beta, t)?;

    let mut residual: f64 = 0.0;
    for v in spread_directions(n, 32)? {
        let lam = target.santalo_radial(&v)?;
        let lhs = &x_star + v.as_vector() * lam;
        let w = &inverse * v.as_vector();
        let dir = Direction::new(w)?;
        let mapped = shift + linear * (dir.as_vector() * source.santalo_radial(&dir)?);
        residual = residual.max((lhs - mapped).norm() / lam.max(1e-300));
    }
    Ok(CovarianceReport {
        residual,
        abs_det: det.abs(),
        image_santalo_point: x_star.iter().copied().collect(),
        level: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Ball, Ellipsoid};

    fn disc() -> Body {
        Ball::unit(2).unwrap().into()
    }

    #[test]
    fn identity_map() {
        let r = covariance_residual(&disc(), &DMatrix::identity(2, 2), &Point::zeros(2), 3.0, 30.0)
            .unwrap();
        assert!(r.residual < 1e-14, "{}", r.residual);
    }

    #[test]
    fn dilation() {
        let l = DMatrix::identity(2, 2) * 2.0;
        let r = covariance_residual(&disc(), &l, &Point::zeros(2), 3.0, 10.0).unwrap();
        assert!(r.residual < 1e-8, "{}", r.residual);
    }

    #[test]
    fn full_affine_ellipse() {
        let e: Body = Ellipsoid::diagonal(&[1.5, 1.0]).unwrap().into();
        let l = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let a = Point::from_vec(vec![0.1, 0.0]);
        let r = covariance_residual(&e, &l, &a, 2.5, 20.0).unwrap();
        assert!(r.residual < 1e-6, "{}", r.residual);
        assert!((r.image_santalo_point[0] - 0.1).abs() < 1e-9);
    }

    #[test]
    fn singular() {
        let l = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(
            covariance_residual(&disc(), &l, &Point::zeros(2), 3.0, 10.0).unwrap_err(),
            Error::SingularMap
        );
    }
}
