use nalgebra::DMatrix;

use super::{
    check_dim, AffineImage, Ball, ConvexBody, Direction, Ellipsoid, FourierBody2D, Point,
    PolarView, SectionProfile,
};
use crate::error::{Error, Result};

/// The concrete body kinds, with closed forms preserved where the algebra
/// allows (balls and ellipsoids stay ellipsoids under polarity and affine
/// maps).
#[derive(Debug, Clone)]
pub enum Body {
    Ball(Ball),
    Ellipsoid(Ellipsoid),
    Fourier(FourierBody2D),
    Polar(PolarView),
    Affine(AffineImage),
}

macro_rules! dispatch {
    ($self:ident, $b:ident => $e:expr) => {
        match $self {
            Body::Ball($b) => $e,
            Body::Ellipsoid($b) => $e,
            Body::Fourier($b) => $e,
            Body::Polar($b) => $e,
            Body::Affine($b) => $e,
        }
    };
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Ball(_) => "ball",
            Body::Ellipsoid(_) => "ellipsoid",
            Body::Fourier(_) => "fourier2d",
            Body::Polar(_) => "polar",
            Body::Affine(_) => "affine",
        }
    }

    /// The polar body K^x = (K − x)⁰.
    pub fn polar(&self, center: &Point) -> Result<Body> {
        check_dim(self.dim(), center.len())?;
        let at_origin = center.iter().all(|&c| c == 0.0);
        match self {
            Body::Ball(b) if at_origin => Ok(Body::Ball(Ball::new(b.dim(), 1.0 / b.radius())?)),
            Body::Ball(b) => {
                let e = Ellipsoid::new(DMatrix::identity(b.dim(), b.dim()) * b.radius())?;
                Ok(Body::Ellipsoid(e.polar_about(center)?))
            }
            Body::Ellipsoid(e) => Ok(Body::Ellipsoid(e.polar_about(center)?)),
            _ => Ok(Body::Polar(PolarView::new(self.clone(), center.clone())?)),
        }
    }

    /// The image L(K) + a.
    pub fn affine_image(&self, linear: &DMatrix<f64>, shift: &Point) -> Result<Body> {
        let n = self.dim();
        check_dim(n, linear.nrows())?;
        check_dim(n, linear.ncols())?;
        check_dim(n, shift.len())?;
        let det = linear.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::SingularMap);
        }
        match self {
            Body::Ball(b) => {
                let e = Ellipsoid::new(DMatrix::identity(n, n) * b.radius())?;
                Ok(Body::Ellipsoid(e.affine_image(linear, shift)?))
            }
            Body::Ellipsoid(e) => Ok(Body::Ellipsoid(e.affine_image(linear, shift)?)),
            Body::Fourier(f) if *linear == DMatrix::identity(n, n) => match f.translated(shift) {
                Ok(t) => Ok(Body::Fourier(t)),
                // the translate no longer contains the origin
                Err(_) => Ok(Body::Affine(AffineImage::new(
                    self.clone(),
                    linear.clone(),
                    shift.clone(),
                )?)),
            },
            _ => Ok(Body::Affine(AffineImage::new(
                self.clone(),
                linear.clone(),
                shift.clone(),
            )?)),
        }
    }

    /// K − x.
    pub fn translate(&self, shift: &Point) -> Result<Body> {
        let n = self.dim();
        self.affine_image(&DMatrix::identity(n, n), shift)
    }

    /// λK.
    pub fn scale(&self, lambda: f64) -> Result<Body> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("scale must be positive, got {lambda}")));
        }
        let n = self.dim();
        match self {
            Body::Ball(b) => Ok(Body::Ball(Ball::new(n, b.radius() * lambda)?)),
            Body::Fourier(f) => Ok(Body::Fourier(f.scaled(lambda)?)),
            _ => self.affine_image(&(DMatrix::identity(n, n) * lambda), &Point::zeros(n)),
        }
    }
}

impl From<Ball> for Body {
    fn from(b: Ball) -> Self {
        Body::Ball(b)
    }
}

impl From<Ellipsoid> for Body {
    fn from(e: Ellipsoid) -> Self {
        Body::Ellipsoid(e)
    }
}

impl From<FourierBody2D> for Body {
    fn from(f: FourierBody2D) -> Self {
        Body::Fourier(f)
    }
}

impl From<PolarView> for Body {
    fn from(p: PolarView) -> Self {
        Body::Polar(p)
    }
}

impl From<AffineImage> for Body {
    fn from(a: AffineImage) -> Self {
        Body::Affine(a)
    }
}

impl ConvexBody for Body {
    fn dim(&self) -> usize {
        dispatch!(self, b => b.dim())
    }

    fn support(&self, u: &Direction) -> f64 {
        dispatch!(self, b => b.support(u))
    }

    fn radial(&self, u: &Direction) -> Result<f64> {
        dispatch!(self, b => b.radial(u))
    }

    fn curvature_function(&self, u: &Direction) -> Result<f64> {
        dispatch!(self, b => b.curvature_function(u))
    }

    fn boundary_point(&self, u: &Direction) -> Result<Point> {
        dispatch!(self, b => b.boundary_point(u))
    }

    fn section_profile(&self, u: &Direction) -> Result<Box<dyn SectionProfile + '_>> {
        dispatch!(self, b => b.section_profile(u))
    }

    fn section_volume(&self, u: &Direction, s: f64) -> Result<f64> {
        dispatch!(self, b => b.section_volume(u, s))
    }

    fn volume(&self) -> Result<f64> {
        dispatch!(self, b => b.volume())
    }

    fn is_centrally_symmetric(&self) -> bool {
        dispatch!(self, b => b.is_centrally_symmetric())
    }

    fn contains(&self, x: &Point) -> Result<bool> {
        dispatch!(self, b => b.contains(x))
    }
}
