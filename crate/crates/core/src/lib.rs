//! Numerical convex geometry around p-affine surface areas: support and
//! curvature evaluators for smooth convex bodies, polar duality, generalized
//! Santaló bodies and convex floating bodies, with the quadrature and
//! extrapolation kernels needed to evaluate their limiting volume behaviour.

pub mod cli;
pub mod error;
pub mod floating;
pub mod geometry;
pub mod quadrature;
pub mod oracle;
pub mod santalo;
pub mod surface;

pub use error::{Error, Result};
