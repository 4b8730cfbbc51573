use nalgebra::DMatrix;

use super::{ConvexBody, Direction, Ellipsoid, Point};
use crate::error::{Error, Result};
use crate::quadrature::{default_rule, neumaier_sum};

/// The Binet ellipsoid E(K) = {u : uᵀMu ≤ 1}, where
/// M = (1/|K|) ∫_K x xᵀ dx is the second-moment matrix of K.
#[derive(Debug, Clone, PartialEq)]
pub struct BinetEllipsoid {
    matrix: DMatrix<f64>,
}

impl BinetEllipsoid {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidBody("moment matrix must be square".into()));
        }
        let scale = matrix.abs().max();
        if (&matrix - matrix.transpose()).abs().max() > 1e-12 * scale {
            return Err(Error::InvalidBody("moment matrix is not symmetric".into()));
        }
        let sym = 0.5 * (&matrix + matrix.transpose());
        if sym.clone().cholesky().is_none() {
            return Err(Error::InvalidBody("moment matrix is not positive definite".into()));
        }
        Ok(Self { matrix: sym })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// ‖u‖²_{E(K)} = uᵀMu.
    pub fn norm_squared(&self, u: &Point) -> f64 {
        u.dot(&(&self.matrix * u))
    }

    pub fn radial(&self, u: &Direction) -> f64 {
        1.0 / self.norm_squared(u).sqrt()
    }

    /// E(K) as an ellipsoid body, with shape matrix M⁻¹.
    pub fn to_ellipsoid(&self) -> Result<Ellipsoid> {
        let n = self.matrix.nrows();
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or(Error::SingularMap)?;
        Ellipsoid::from_shape(inv, Point::zeros(n))
    }
}

/// M_ij = (1/|K|)(1/(n+2)) ∫ r_K(u)^{n+2} u_i u_j dσ(u), with |K| from the
/// same rule.
pub fn binet_ellipsoid(body: &dyn ConvexBody) -> Result<BinetEllipsoid> {
    let n = body.dim();
    let rule = default_rule(n)?;
    let r = rule.evaluate(|u| body.radial(u))?;
    let volume = rule.weighted_sum(&r.iter().map(|r| r.powi(n as i32)).collect::<Vec<_>>())
        / n as f64;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let s = neumaier_sum(
                rule.nodes()
                    .iter()
                    .zip(rule.weights())
                    .zip(&r)
                    .map(|((u, w), r)| w * r.powi(n as i32 + 2) * u[i] * u[j]),
            );
            let v = s / (n as f64 + 2.0) / volume;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    BinetEllipsoid::new(m)
}
