//! Planar convex bodies given by a trigonometric support function
//! h(θ) = a₀ + Σ_{k≥1} (a_k cos kθ + b_k sin kθ).
//!
//! The boundary is parametrized by the normal angle: x(θ) = h e(θ) + h' e⊥(θ),
//! with x'(θ) = (h + h'') e⊥(θ).

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use super::{check_dim, ConvexBody, Direction, Point, SectionProfile};
use crate::error::{Error, Result};
use crate::quadrature::gauss::gauss_legendre;

const CHECK_GRID: usize = 4096;
const CHECK_MARGIN: f64 = 1e-8;
// beyond this angle from the top normal, depths and chords are taken from
// boundary points directly
const FAR_ANGLE: f64 = 0.3;

#[derive(Debug, Clone, PartialEq)]
pub struct FourierBody2D {
    a: Vec<f64>,
    // b[0] is the coefficient of sin θ
    b: Vec<f64>,
}

fn gl10() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(10))
}

impl FourierBody2D {
    /// `a = [a₀, a₁, …]`, `b = [b₁, b₂, …]`; missing terms are zero.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidBody("need at least the constant term a0".into()));
        }
        if a.iter().chain(&b).any(|c| !c.is_finite()) {
            return Err(Error::InvalidBody("non-finite Fourier coefficient".into()));
        }
        let degree = (a.len() - 1).max(b.len());
        let mut a = a;
        let mut b = b;
        a.resize(degree + 1, 0.0);
        b.resize(degree, 0.0);
        let body = Self { a, b };
        body.validate()?;
        Ok(body)
    }

    /// The disc of radius r.
    pub fn disc(r: f64) -> Result<Self> {
        Self::new(vec![r], vec![])
    }

    fn validate(&self) -> Result<()> {
        for i in 0..CHECK_GRID {
            let theta = TAU * i as f64 / CHECK_GRID as f64;
            let (h, _, h2) = self.eval(theta);
            if h <= CHECK_MARGIN {
                return Err(Error::InvalidBody(format!(
                    "support function {h:.3e} at θ = {theta:.4} does not exceed the margin; origin is not interior"
                )));
            }
            if h + h2 <= CHECK_MARGIN {
                return Err(Error::InvalidBody(format!(
                    "radius of curvature {:.3e} at θ = {theta:.4} is not positive",
                    h + h2
                )));
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.b.len()
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.a
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.b
    }

    /// (h, h', h'') at θ.
    pub fn eval(&self, theta: f64) -> (f64, f64, f64) {
        let (s1, c1) = theta.sin_cos();
        let mut h = self.a[0];
        let mut h1 = 0.0;
        let mut h2 = 0.0;
        let (mut ck, mut sk) = (1.0, 0.0);
        for k in 1..self.a.len() {
            let c = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = c;
            let kf = k as f64;
            let (ak, bk) = (self.a[k], self.b[k - 1]);
            h += ak * ck + bk * sk;
            h1 += kf * (bk * ck - ak * sk);
            h2 -= kf * kf * (ak * ck + bk * sk);
        }
        (h, h1, h2)
    }

    pub fn h(&self, theta: f64) -> f64 {
        self.eval(theta).0
    }

    /// Radius of curvature h + h''.
    pub fn f(&self, theta: f64) -> f64 {
        let (h, _, h2) = self.eval(theta);
        h + h2
    }

    pub fn boundary_at(&self, theta: f64) -> Point {
        let (h, h1, _) = self.eval(theta);
        let (s, c) = theta.sin_cos();
        Point::from_vec(vec![h * c - h1 * s, h * s + h1 * c])
    }

    /// Odd harmonics vanish exactly.
    pub fn is_symmetric(&self) -> bool {
        (1..self.a.len())
            .step_by(2)
            .all(|k| self.a[k] == 0.0 && self.b[k - 1] == 0.0)
    }

    /// Area πa₀² + (π/2) Σ (1 − k²)(a_k² + b_k²).
    pub fn area(&self) -> f64 {
        let mut s = PI * self.a[0] * self.a[0];
        for k in 1..self.a.len() {
            let kf = k as f64;
            s += 0.5 * PI * (1.0 - kf * kf) * (self.a[k].powi(2) + self.b[k - 1].powi(2));
        }
        s
    }

    /// λK for λ > 0.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(
            self.a.iter().map(|c| c * lambda).collect(),
            self.b.iter().map(|c| c * lambda).collect(),
        )
    }

    /// K + shift, which only moves the first harmonic.
    pub fn translated(&self, shift: &Point) -> Result<Self> {
        check_dim(2, shift.len())?;
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        if a.len() < 2 {
            a.push(0.0);
            b.push(0.0);
        }
        a[1] += shift[0];
        b[0] += shift[1];
        Self::new(a, b)
    }

    /// Angle, about c, of the boundary point with normal angle θ, unwrapped
    /// so that it increases with θ: θ + atan((h' − ⟨c,e⊥⟩)/(h − ⟨c,e⟩)).
    fn boundary_angle(&self, theta: f64, c: &Point) -> (f64, f64) {
        let (h, h1, h2) = self.eval(theta);
        let (s, co) = theta.sin_cos();
        let along = h - (c[0] * co + c[1] * s);
        let across = h1 - (-c[0] * s + c[1] * co);
        let angle = theta + (across / along).atan();
        // d/dθ angle = f·along / |x − c|²
        let deriv = (h + h2) * along / (along * along + across * across);
        (angle, deriv)
    }

    /// Normal angle of the boundary point seen from c in direction φ.
    pub(crate) fn normal_angle_toward(&self, phi: f64, c: &Point) -> Result<f64> {
        // the offset atan(...) lies in (−π/2, π/2), so the root is bracketed
        let mut lo = phi - 0.5 * PI;
        let mut hi = phi + 0.5 * PI;
        let mut theta = phi;
        for _ in 0..100 {
            let (angle, deriv) = self.boundary_angle(theta, c);
            let g = angle - phi;
            if !g.is_finite() {
                return Err(Error::CenterNotInterior);
            }
            if g > 0.0 {
                hi = theta;
            } else {
                lo = theta;
            }
            let step = g / deriv;
            let mut next = theta - step;
            if !(next > lo && next < hi) || !step.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - theta).abs() <= 1e-15 * (1.0 + theta.abs()) || hi - lo < 1e-15 {
                return Ok(next);
            }
            theta = next;
        }
        Ok(theta)
    }

    /// Radial function about an interior point c.
    pub fn radial_about(&self, c: &Point, u: &Direction) -> Result<f64> {
        check_dim(2, u.dim())?;
        for i in 0..64 {
            // cheap interior test on a coarse set of normals
            let th = TAU * i as f64 / 64.0;
            if self.h(th) - (c[0] * th.cos() + c[1] * th.sin()) <= 0.0 {
                return Err(Error::CenterNotInterior);
            }
        }
        let theta = self.normal_angle_toward(u.angle(), c)?;
        let x = self.boundary_at(theta) - c;
        Ok(x.norm())
    }

    /// ∫_{θ₀}^{θ₁} g(φ) dφ by composite 10-point Gauss–Legendre, with panels
    /// short enough to resolve the highest harmonic.
    fn panel_integral<G: Fn(f64) -> f64>(&self, g: G, t0: f64, t1: f64) -> f64 {
        let (x, w) = gl10();
        let span = t1 - t0;
        let max_width = (0.5f64).min(3.0 / (self.degree() as f64 + 1.0));
        let panels = ((span.abs() / max_width).ceil() as usize).max(1);
        let step = span / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let a = t0 + step * p as f64;
            let mid = a + 0.5 * step;
            let mut s = 0.0;
            for (xi, wi) in x.iter().zip(w) {
                s += wi * g(mid + 0.5 * step * xi);
            }
            total += 0.5 * step * s;
        }
        total
    }

    /// h(θ_u) − ⟨x(θ_u + s), e(θ_u)⟩ = ∫_0^s f(θ_u + σ) sin σ dσ, evaluated
    /// without cancellation. Offsets are kept separate from θ_u so that
    /// depths far below machine epsilon stay resolved.
    fn depth(&self, theta_u: f64, s: f64) -> f64 {
        if s.abs() > FAR_ANGLE {
            // deep enough that the direct difference loses nothing
            let (sn, c) = theta_u.sin_cos();
            let x = self.boundary_at(theta_u + s);
            return self.h(theta_u) - (x[0] * c + x[1] * sn);
        }
        self.panel_integral(|o| self.f(theta_u + o) * o.sin(), 0.0, s)
    }

    /// Signed offset from θ_u, on the side `sign`, of the normal angle whose
    /// boundary point lies at the given depth below the supporting line.
    fn depth_offset(&self, theta_u: f64, depth: f64, sign: f64) -> f64 {
        // initial guess from the osculating circle, bracketed nearby so the
        // fallback bisection works on the guess's own scale
        let f0 = self.f(theta_u);
        let mut t = (2.0 * depth / f0).sqrt().min(0.5 * PI);
        let mut lo = 0.0;
        let mut hi = (4.0 * t).min(PI);
        while hi < PI && self.depth(theta_u, sign * hi) < depth {
            lo = hi;
            hi = (2.0 * hi).min(PI);
        }
        if !(t > lo && t < hi) {
            t = 0.5 * (lo + hi);
        }
        for _ in 0..200 {
            let g = self.depth(theta_u, sign * t) - depth;
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let deriv = self.f(theta_u + sign * t) * t.sin();
            let mut next = t - g / deriv;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = if lo > 0.0 { (lo * hi).sqrt() } else { 0.5 * hi };
            }
            if (next - t).abs() <= 1e-15 * t.max(1e-300) || hi - lo <= 1e-15 * hi {
                t = next;
                break;
            }
            t = next;
        }
        sign * t
    }

    /// Length of the chord at the given depth below the top along θ_u.
    pub(crate) fn chord_from_top(&self, theta_u: f64, depth: f64) -> f64 {
        let s1 = self.depth_offset(theta_u, depth, 1.0);
        let s2 = self.depth_offset(theta_u, depth, -1.0);
        if s1 - s2 > 2.0 * FAR_ANGLE {
            return (self.boundary_at(theta_u + s1) - self.boundary_at(theta_u + s2)).norm();
        }
        // x(θ_u+s1) − x(θ_u+s2) = ∫ f e⊥, written in the frame rotated by θ_u
        let dx = self.panel_integral(|o| -self.f(theta_u + o) * o.sin(), s2, s1);
        let dy = self.panel_integral(|o| self.f(theta_u + o) * o.cos(), s2, s1);
        dx.hypot(dy)
    }
}

struct FourierProfile<'a> {
    body: &'a FourierBody2D,
    theta: f64,
    upper: f64,
    lower: f64,
    // Chebyshev coefficients of G(w) on [0, π], see `chebyshev_chords`
    chebyshev: Option<Vec<f64>>,
}

/// The chord at depth d = W sin²(w/2) is G(w) sin w with G analytic and
/// positive on [0, π], since the chord behaves like √d at the top and like
/// √(W − d) at the bottom. G is interpolated at Chebyshev roots, doubling
/// the node count until the coefficient tail drops below roundoff; `None`
/// when it never does.
fn chebyshev_chords(body: &FourierBody2D, theta: f64, width: f64) -> Option<Vec<f64>> {
    let mut n = 32;
    while n <= 512 {
        let values: Vec<f64> = (0..n)
            .map(|j| {
                let x = (PI * (j as f64 + 0.5) / n as f64).cos();
                let w = 0.5 * PI * (x + 1.0);
                let (sh, ch) = (0.5 * w).sin_cos();
                // the lower half is measured from the opposite supporting line
                let chord = if w <= 0.5 * PI {
                    body.chord_from_top(theta, width * sh * sh)
                } else {
                    body.chord_from_top(theta + PI, width * ch * ch)
                };
                chord / (2.0 * sh * ch)
            })
            .collect();
        let mut c: Vec<f64> = (0..n)
            .map(|k| {
                let s: f64 = values
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos())
                    .sum();
                2.0 * s / n as f64
            })
            .collect();
        c[0] *= 0.5;
        let top = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let tail = c[n - 8..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if values.iter().all(|v| v.is_finite()) && tail <= 1e-14 * top {
            let keep = c.iter().rposition(|x| x.abs() > 1e-17 * top).map_or(1, |i| i + 1);
            c.truncate(keep);
            return Some(c);
        }
        n *= 2;
    }
    None
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b;
    }
    x * b1 - b2 + c[0]
}

impl SectionProfile for FourierProfile<'_> {
    fn upper(&self) -> f64 {
        self.upper
    }

    fn lower(&self) -> f64 {
        self.lower
    }

    fn from_top(&self, d: f64) -> f64 {
        let width = self.upper - self.lower;
        if d <= 0.0 || d >= width {
            return 0.0;
        }
        match &self.chebyshev {
            Some(c) => {
                let sh = (d / width).sqrt();
                let ch = ((width - d) / width).sqrt();
                let w = 2.0 * sh.atan2(ch);
                clenshaw(c, 2.0 * w / PI - 1.0) * 2.0 * sh * ch
            }
            None => self.body.chord_from_top(self.theta, d),
        }
    }
}

impl ConvexBody for FourierBody2D {
    fn dim(&self) -> usize {
        2
    }

    fn support(&self, u: &Direction) -> f64 {
        self.h(u.angle())
    }

    fn radial(&self, u: &Direction) -> Result<f64> {
        check_dim(2, u.dim())?;
        let theta = self.normal_angle_toward(u.angle(), &Point::zeros(2))?;
        let (h, h1, _) = self.eval(theta);
        Ok(h.hypot(h1))
    }

    fn curvature_function(&self, u: &Direction) -> Result<f64> {
        check_dim(2, u.dim())?;
        Ok(self.f(u.angle()))
    }

    fn boundary_point(&self, u: &Direction) -> Result<Point> {
        check_dim(2, u.dim())?;
        Ok(self.boundary_at(u.angle()))
    }

    fn section_profile(&self, u: &Direction) -> Result<Box<dyn SectionProfile + '_>> {
        check_dim(2, u.dim())?;
        let theta = u.angle();
        let upper = self.h(theta);
        let lower = -self.h(theta + PI);
        Ok(Box::new(FourierProfile {
            body: self,
            theta,
            upper,
            lower,
            chebyshev: chebyshev_chords(self, theta, upper - lower),
        }))
    }

    fn volume(&self) -> Result<f64> {
        Ok(self.area())
    }

    fn is_centrally_symmetric(&self) -> bool {
        self.is_symmetric()
    }
}
