use std::sync::Arc;

use nalgebra::DMatrix;

use super::{check_dim, ray_exit, Body, ConvexBody, Direction, Point, SectionProfile};
use crate::error::{Error, Result};

/// The image L(K) + a of a base body under an invertible affine map.
///
/// With w = Lᵀu and v = w/|w|: h(u) = |w|·h_K(v) + ⟨a,u⟩ and
/// f(u) = det(L)²·f_K(v)/|w|^{n+1}.
#[derive(Debug, Clone)]
pub struct AffineImage {
    base: Arc<Body>,
    linear: DMatrix<f64>,
    inverse: DMatrix<f64>,
    abs_det: f64,
    shift: Point,
}

impl AffineImage {
    pub fn new(base: Body, linear: DMatrix<f64>, shift: Point) -> Result<Self> {
        let n = base.dim();
        check_dim(n, linear.nrows())?;
        check_dim(n, linear.ncols())?;
        check_dim(n, shift.len())?;
        let det = linear.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::SingularMap);
        }
        let inverse = linear.clone().try_inverse().ok_or(Error::SingularMap)?;
        Ok(Self {
            base: Arc::new(base),
            linear,
            inverse,
            abs_det: det.abs(),
            shift,
        })
    }

    pub fn base(&self) -> &Body {
        &self.base
    }

    pub fn linear(&self) -> &DMatrix<f64> {
        &self.linear
    }

    pub fn shift(&self) -> &Point {
        &self.shift
    }

    fn pull_back(&self, u: &Direction) -> (f64, Direction) {
        let w = self.linear.transpose() * u.as_vector();
        let m = w.norm();
        (m, Direction::from_unit_unchecked(w / m))
    }

    /// Preimage L⁻¹(x − a) of a point.
    pub fn preimage(&self, x: &Point) -> Point {
        &self.inverse * (x - &self.shift)
    }
}

struct AffineProfile<'a> {
    inner: Box<dyn SectionProfile + 'a>,
    scale: f64,
    offset: f64,
    jac: f64,
}

impl SectionProfile for AffineProfile<'_> {
    fn upper(&self) -> f64 {
        self.scale * self.inner.upper() + self.offset
    }

    fn lower(&self) -> f64 {
        self.scale * self.inner.lower() + self.offset
    }

    fn width(&self) -> f64 {
        self.scale * self.inner.width()
    }

    fn from_top(&self, d: f64) -> f64 {
        self.jac * self.inner.from_top(d / self.scale)
    }
}

impl ConvexBody for AffineImage {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn support(&self, u: &Direction) -> f64 {
        let (m, v) = self.pull_back(u);
        m * self.base.support(&v) + self.shift.dot(u)
    }

    fn radial(&self, u: &Direction) -> Result<f64> {
        check_dim(self.dim(), u.dim())?;
        if self.shift.iter().all(|&a| a == 0.0) {
            let w = &self.inverse * u.as_vector();
            let norm = w.norm();
            let r = self.base.radial(&Direction::from_unit_unchecked(w / norm))?;
            return Ok(r / norm);
        }
        if self.base.contains(&self.preimage(&Point::zeros(self.dim())))? {
            let hi = self.support(u);
            ray_exit(|lam| self.base.contains(&self.preimage(&(u.as_vector() * lam))), hi)
        } else {
            Err(Error::CenterNotInterior)
        }
    }

    fn curvature_function(&self, u: &Direction) -> Result<f64> {
        let (m, v) = self.pull_back(u);
        let f = self.base.curvature_function(&v)?;
        Ok(self.abs_det * self.abs_det * f / m.powi(self.dim() as i32 + 1))
    }

    fn boundary_point(&self, u: &Direction) -> Result<Point> {
        let (_, v) = self.pull_back(u);
        Ok(&self.linear * self.base.boundary_point(&v)? + &self.shift)
    }

    fn section_profile(&self, u: &Direction) -> Result<Box<dyn SectionProfile + '_>> {
        let (m, v) = self.pull_back(u);
        let inner = self.base.section_profile(&v)?;
        Ok(Box::new(AffineProfile {
            inner,
            scale: m,
            offset: self.shift.dot(u),
            jac: self.abs_det / m,
        }))
    }

    fn volume(&self) -> Result<f64> {
        Ok(self.abs_det * self.base.volume()?)
    }

    fn is_centrally_symmetric(&self) -> bool {
        self.base.is_centrally_symmetric() && self.shift.iter().all(|&a| a == 0.0)
    }

    fn contains(&self, x: &Point) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        self.base.contains(&self.preimage(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cavalieri_volume, Ellipsoid, FourierBody2D};

    fn oval() -> Body {
        Body::Fourier(FourierBody2D::new(vec![1.0, 0.0, 0.1], vec![]).unwrap())
    }

    fn map() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[1.3, 0.4, -0.2, 0.9])
    }

    #[test]
    fn ball_image_matches_ellipsoid() {
        // a generic affine image of the disc against the closed form
        let disc = Body::Fourier(FourierBody2D::disc(1.0).unwrap());
        let a = Point::from_vec(vec![0.1, -0.2]);
        let img = AffineImage::new(disc, map(), a.clone()).unwrap();
        let e = Ellipsoid::from_matrix_and_center(map(), a).unwrap();
        for i in 0..12 {
            let u = Direction::from_angle(0.53 * i as f64);
            assert!((img.support(&u) - e.support(&u)).abs() < 1e-14);
            assert!((img.radial(&u).unwrap() - e.radial(&u).unwrap()).abs() < 1e-12);
            let fa = img.curvature_function(&u).unwrap();
            let fb = e.curvature_function(&u).unwrap();
            assert!((fa - fb).abs() < 1e-13 * fb);
            let xa = img.boundary_point(&u).unwrap();
            let xb = e.boundary_point(&u).unwrap();
            assert!((xa - xb).norm() < 1e-13);
            let s = 0.3 * e.support(&u);
            let ga = img.section_volume(&u, s).unwrap();
            let gb = e.section_volume(&u, s).unwrap();
            assert!((ga - gb).abs() < 1e-12, "{ga} vs {gb}");
        }
    }

    #[test]
    fn volume_and_cavalieri() {
        let img = AffineImage::new(oval(), map(), Point::from_vec(vec![0.05, 0.1])).unwrap();
        let v = img.volume().unwrap();
        assert!((v - map().determinant().abs() * oval().volume().unwrap()).abs() < 1e-14);
        let u = Direction::from_angle(0.9);
        let c = cavalieri_volume(&img, &u, 1e-12).unwrap();
        assert!((c - v).abs() < 1e-8 * v);
    }

    #[test]
    fn translated_support() {
        let a = Point::from_vec(vec![0.3, -0.4]);
        let img = AffineImage::new(oval(), DMatrix::identity(2, 2), a.clone()).unwrap();
        let u = Direction::from_angle(2.0);
        assert!((img.support(&u) - oval().support(&u) - a.dot(&u)).abs() < 1e-15);
    }

    #[test]
    fn singular() {
        let l = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            AffineImage::new(oval(), l, Point::zeros(2)),
            Err(Error::SingularMap)
        ));
    }
}
