use nalgebra::{Cholesky, DMatrix, Dyn};

use super::{check_body_dim, check_dim, ConvexBody, Direction, Point, SectionProfile};
use crate::error::{Error, Result};
use crate::quadrature::unit_ball_volume;

/// The ellipsoid A(B(0,1)) + c, stored through the lower Cholesky factor
/// of Q = AAᵀ. Every quantity below depends on A only through Q.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    dim: usize,
    chol: DMatrix<f64>,
    chol_inv: DMatrix<f64>,
    det: f64,
    center: Point,
}

impl Ellipsoid {
    /// The image of the unit ball under the matrix A.
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        Self::from_matrix_and_center(a, Point::zeros(n))
    }

    pub fn from_matrix_and_center(a: DMatrix<f64>, center: Point) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidBody("ellipsoid matrix must be square".into()));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidBody("ellipsoid matrix has non-finite entries".into()));
        }
        let det = a.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::SingularMap);
        }
        Self::from_shape(&a * a.transpose(), center)
    }

    /// The ellipsoid {x : (x−c)ᵀQ⁻¹(x−c) ≤ 1} for symmetric positive definite Q.
    pub fn from_shape(q: DMatrix<f64>, center: Point) -> Result<Self> {
        let n = q.nrows();
        check_body_dim(n)?;
        check_dim(n, center.len())?;
        if !q.is_square() {
            return Err(Error::InvalidBody("shape matrix must be square".into()));
        }
        let sym = 0.5 * (&q + q.transpose());
        let chol = Cholesky::<f64, Dyn>::new(sym).ok_or(Error::SingularMap)?;
        let l = chol.l();
        let det: f64 = l.diagonal().iter().product();
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::SingularMap);
        }
        let chol_inv = l
            .clone()
            .solve_lower_triangular(&DMatrix::identity(n, n))
            .ok_or(Error::SingularMap)?;
        Ok(Self {
            dim: n,
            chol: l,
            chol_inv,
            det,
            center,
        })
    }

    pub fn diagonal(axes: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&Point::from_column_slice(axes)))
    }

    /// Q = AAᵀ.
    pub fn shape(&self) -> DMatrix<f64> {
        &self.chol * self.chol.transpose()
    }

    pub fn cholesky_factor(&self) -> &DMatrix<f64> {
        &self.chol
    }

    /// |det A|.
    pub fn abs_det(&self) -> f64 {
        self.det
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    /// ‖Aᵀu‖, the half-width of the ellipsoid in direction u.
    pub fn half_width(&self, u: &Point) -> f64 {
        (self.chol.transpose() * u).norm()
    }

    /// The image L(E) + a.
    pub fn affine_image(&self, l: &DMatrix<f64>, a: &Point) -> Result<Self> {
        check_dim(self.dim, l.nrows())?;
        check_dim(self.dim, a.len())?;
        if l.determinant() == 0.0 {
            return Err(Error::SingularMap);
        }
        let lc = l * &self.chol;
        Self::from_shape(&lc * lc.transpose(), l * &self.center + a)
    }

    /// The polar body E^x = (E − x)⁰, itself an ellipsoid.
    ///
    /// With d = c − x and P = Q − ddᵀ, E^x = {y : yᵀPy + 2⟨d,y⟩ ≤ 1}, whose
    /// center is −P⁻¹d and whose shape is (1 + dᵀP⁻¹d)·P⁻¹.
    pub fn polar_about(&self, x: &Point) -> Result<Self> {
        check_dim(self.dim, x.len())?;
        let d = &self.center - x;
        let w = &self.chol_inv * &d;
        if w.norm_squared() >= 1.0 {
            return Err(Error::CenterNotInterior);
        }
        let p = self.shape() - &d * d.transpose();
        let pc = Cholesky::<f64, Dyn>::new(p).ok_or(Error::CenterNotInterior)?;
        let pinv_d = pc.solve(&d);
        let scale = 1.0 + d.dot(&pinv_d);
        let mut pinv = pc.inverse();
        pinv *= scale;
        Self::from_shape(pinv, -pinv_d)
    }

    /// The gauge ‖L⁻¹(x − c)‖ of the ellipsoid.
    pub fn gauge(&self, x: &Point) -> f64 {
        (&self.chol_inv * (x - &self.center)).norm()
    }
}

struct EllipsoidProfile {
    n: usize,
    m: f64,
    upper: f64,
    coef: f64,
}

impl SectionProfile for EllipsoidProfile {
    fn upper(&self) -> f64 {
        self.upper
    }

    fn lower(&self) -> f64 {
        self.upper - 2.0 * self.m
    }

    fn width(&self) -> f64 {
        2.0 * self.m
    }

    fn from_top(&self, d: f64) -> f64 {
        if d <= 0.0 || d >= 2.0 * self.m {
            return 0.0;
        }
        let q = d * (2.0 * self.m - d) / (self.m * self.m);
        self.coef * q.powf((self.n as f64 - 1.0) / 2.0)
    }
}

impl ConvexBody for Ellipsoid {
    fn dim(&self) -> usize {
        self.dim
    }

    fn support(&self, u: &Direction) -> f64 {
        self.half_width(u) + self.center.dot(u)
    }

    fn radial(&self, u: &Direction) -> Result<f64> {
        check_dim(self.dim, u.dim())?;
        let w = &self.chol_inv * u.as_vector();
        let d = &self.chol_inv * &self.center;
        let dd = d.norm_squared();
        if dd >= 1.0 {
            return Err(Error::CenterNotInterior);
        }
        let ww = w.norm_squared();
        let wd = w.dot(&d);
        // larger root of ww λ² − 2 wd λ + (dd − 1) = 0, in the stable form
        let disc = (wd * wd + ww * (1.0 - dd)).sqrt();
        if wd >= 0.0 {
            Ok((wd + disc) / ww)
        } else {
            Ok((1.0 - dd) / (disc - wd))
        }
    }

    fn curvature_function(&self, u: &Direction) -> Result<f64> {
        check_dim(self.dim, u.dim())?;
        let m = self.half_width(u);
        Ok(self.det * self.det / m.powi(self.dim as i32 + 1))
    }

    fn boundary_point(&self, u: &Direction) -> Result<Point> {
        check_dim(self.dim, u.dim())?;
        let lt = self.chol.transpose() * u.as_vector();
        let m = lt.norm();
        Ok(&self.chol * lt / m + &self.center)
    }

    fn section_profile(&self, u: &Direction) -> Result<Box<dyn SectionProfile + '_>> {
        check_dim(self.dim, u.dim())?;
        let m = self.half_width(u);
        Ok(Box::new(EllipsoidProfile {
            n: self.dim,
            m,
            upper: m + self.center.dot(u),
            coef: unit_ball_volume(self.dim - 1) * self.det / m,
        }))
    }

    fn volume(&self) -> Result<f64> {
        Ok(unit_ball_volume(self.dim) * self.det)
    }

    fn is_centrally_symmetric(&self) -> bool {
        self.center.iter().all(|&c| c == 0.0)
    }

    fn contains(&self, x: &Point) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        Ok(self.gauge(x) <= 1.0)
    }
}
