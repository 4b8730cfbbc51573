use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{Ball, Body, Ellipsoid, FourierBody2D};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierCoeffs {
    pub a: Vec<f64>,
    #[serde(default)]
    pub b: Vec<f64>,
}

/// JSON description of a body:
/// `{"kind":"ball","dim":2,"radius":1}`,
/// `{"kind":"ellipsoid","dim":2,"matrix":[[2,0],[0,1]]}` or
/// `{"kind":"fourier2d","dim":2,"coeffs":{"a":[1,0,0.1],"b":[]}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodyDescription {
    Ball {
        dim: usize,
        radius: f64,
    },
    Ellipsoid {
        dim: usize,
        matrix: Vec<Vec<f64>>,
    },
    #[serde(rename = "fourier2d")]
    Fourier2D {
        #[serde(default = "two")]
        dim: usize,
        coeffs: FourierCoeffs,
    },
}

fn two() -> usize {
    2
}

impl BodyDescription {
    pub fn dim(&self) -> usize {
        match self {
            Self::Ball { dim, .. } | Self::Ellipsoid { dim, .. } | Self::Fourier2D { dim, .. } => *dim,
        }
    }

    pub fn build(&self) -> Result<Body> {
        match self {
            Self::Ball { dim, radius } => Ok(Body::Ball(Ball::new(*dim, *radius)?)),
            Self::Ellipsoid { dim, matrix } => {
                if matrix.len() != *dim || matrix.iter().any(|row| row.len() != *dim) {
                    return Err(Error::InvalidBody(format!(
                        "ellipsoid matrix must be {dim}x{dim}"
                    )));
                }
                let flat: Vec<f64> = matrix.iter().flatten().copied().collect();
                let a = DMatrix::from_row_slice(*dim, *dim, &flat);
                Ok(Body::Ellipsoid(Ellipsoid::new(a)?))
            }
            Self::Fourier2D { dim, coeffs } => {
                if *dim != 2 {
                    return Err(Error::UnsupportedDimension(*dim));
                }
                Ok(Body::Fourier(FourierBody2D::new(
                    coeffs.a.clone(),
                    coeffs.b.clone(),
                )?))
            }
        }
    }

    /// A short identifier used in reports.
    pub fn id(&self) -> String {
        match self {
            Self::Ball { dim, radius } => format!("ball{dim}_r{radius}"),
            Self::Ellipsoid { dim, matrix } => {
                let diag: Vec<String> = (0..*dim)
                    .map(|i| matrix.get(i).and_then(|r| r.get(i)).copied().unwrap_or(0.0))
                    .map(|x| format!("{x}"))
                    .collect();
                format!("ellipsoid{dim}_{}", diag.join("x"))
            }
            Self::Fourier2D { coeffs, .. } => format!("fourier2d_deg{}", coeffs.a.len().max(coeffs.b.len() + 1) - 1),
        }
    }
}
