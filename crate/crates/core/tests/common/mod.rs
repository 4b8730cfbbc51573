//! Randomized property suites shared by the `properties` and `acceptance`
//! targets. Every suite runs 100 cases from a fixed master seed.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use paffine::floating::FloatingProfile;
use paffine::geometry::{
    cavalieri_volume, polar_support_search, polar_volume_about, Body, ConvexBody, Direction,
    Ellipsoid, FourierBody2D, Point, PolarView,
};
use paffine::oracle::{mc_phi, mc_polar_volume, mc_volume, McConfig};
use paffine::santalo::{phi, LevelSetBody, PhiField};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const CASES: u32 = 100;
pub const MASTER_SEED: [u8; 32] = *b"paffine property suites, seed 02";

pub fn runner() -> TestRunner {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &MASTER_SEED))
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn ok<T>(r: paffine::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| fail(e.to_string()))
}

/// Parameters of a random smooth body: rotated ellipses and ellipsoids, and
/// planar Fourier bodies with the given harmonics.
#[derive(Debug, Clone)]
pub enum BodySpec {
    Ellipse { axes: [f64; 2], angle: f64 },
    Ellipsoid3 { axes: [f64; 3], angle: f64 },
    Fourier { a: Vec<f64>, b: Vec<f64> },
}

impl BodySpec {
    pub fn build(&self) -> Body {
        match self {
            Self::Ellipse { axes, angle } => {
                let (s, c) = angle.sin_cos();
                let r = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
                let a = r * DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(axes));
                Ellipsoid::new(a).unwrap().into()
            }
            Self::Ellipsoid3 { axes, angle } => {
                let (s, c) = angle.sin_cos();
                let r = DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
                let a = r * DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(axes));
                Ellipsoid::new(a).unwrap().into()
            }
            Self::Fourier { a, b } => FourierBody2D::new(a.clone(), b.clone()).unwrap().into(),
        }
    }
}

fn ellipse() -> impl Strategy<Value = BodySpec> {
    (0.5f64..2.0, 0.5f64..2.0, 0.0..PI).prop_map(|(a, b, angle)| BodySpec::Ellipse { axes: [a, b], angle })
}

fn ellipsoid3() -> impl Strategy<Value = BodySpec> {
    (0.5f64..2.0, 0.5f64..2.0, 0.5f64..2.0, 0.0..PI)
        .prop_map(|(a, b, c, angle)| BodySpec::Ellipsoid3 { axes: [a, b, c], angle })
}

/// h = 1 + a₁cos θ + b₁sin θ + a₂cos 2θ + b₂sin 2θ + a₃cos 3θ; the bounds keep
/// h + h'' ≥ 0.15.
fn fourier() -> impl Strategy<Value = BodySpec> {
    (-0.2f64..0.2, -0.2f64..0.2, -0.1f64..0.1, -0.05f64..0.05, -0.05f64..0.05)
        .prop_map(|(a1, b1, a2, b2, a3)| BodySpec::Fourier { a: vec![1.0, a1, a2, a3], b: vec![b1, b2] })
}

/// Centrally symmetric planar Fourier bodies (even harmonics only).
fn symmetric_fourier() -> impl Strategy<Value = BodySpec> {
    (-0.1f64..0.1, -0.1f64..0.1).prop_map(|(a2, b2)| BodySpec::Fourier { a: vec![1.0, 0.0, a2], b: vec![0.0, b2] })
}

fn any_body() -> impl Strategy<Value = BodySpec> {
    prop_oneof![ellipse(), ellipsoid3(), fourier()]
}

fn planar_body() -> impl Strategy<Value = BodySpec> {
    prop_oneof![ellipse(), fourier()]
}

fn symmetric_planar() -> impl Strategy<Value = BodySpec> {
    prop_oneof![ellipse(), symmetric_fourier()]
}

fn direction(n: usize, raw: &[f64; 3], angle: f64) -> Direction {
    if n == 2 {
        Direction::from_angle(angle)
    } else {
        Direction::from_slice(raw).unwrap_or_else(|_| Direction::axis(3, 0))
    }
}

fn unit_raw() -> impl Strategy<Value = [f64; 3]> {
    [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0].prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-2)
}

fn report<V: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<V>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// r_{K⁰}(u) h_K(u) = 1, also about an interior point x ≠ 0.
pub fn polar_radial_law() -> Result<(), String> {
    report(runner().run(&(any_body(), unit_raw(), 0.0..TAU, 0.0f64..0.3), |(spec, raw, angle, shrink)| {
        let k = spec.build();
        let n = k.dim();
        let u = direction(n, &raw, angle);
        let polar = ok(k.polar(&Point::zeros(n)))?;
        let prod = ok(polar.radial(&u))? * k.support(&u);
        prop_assert!((prod - 1.0).abs() < 1e-12, "r_K0 h_K = {prod}");
        // an interior center: a fraction of the boundary point in direction v
        let v = direction(n, &[raw[1], raw[2], raw[0]], angle + 1.0);
        let x = v.as_vector() * (shrink * ok(k.radial(&v))?);
        let px = ok(k.polar(&x))?;
        let prod = ok(px.radial(&u))? * (k.support(&u) - x.dot(u.as_vector()));
        prop_assert!((prod - 1.0).abs() < 1e-12, "about x: {prod}");
        Ok(())
    }))
}

/// ∫ g_{K,u}(s) ds = |K| in every direction.
pub fn cavalieri() -> Result<(), String> {
    report(runner().run(&(any_body(), unit_raw(), 0.0..TAU), |(spec, raw, angle)| {
        let k = spec.build();
        let u = direction(k.dim(), &raw, angle);
        let v = ok(cavalieri_volume(&k, &u, 1e-12))?;
        let exact = ok(k.volume())?;
        prop_assert!((v / exact - 1.0).abs() < 1e-8, "{v} vs {exact}");
        Ok(())
    }))
}

/// (K⁰)⁰ = K: the support function of K⁰, found by searching its radial
/// function 1/h_K, equals 1/r_K.
pub fn bipolarity() -> Result<(), String> {
    report(runner().run(&(planar_body(), 0.0..TAU), |(spec, angle)| {
        let k = spec.build();
        let u = Direction::from_angle(angle);
        let view = ok(PolarView::new(k.clone(), Point::zeros(2)))?;
        let h_polar = ok(polar_support_search(&view, &u))?;
        let r = ok(k.radial(&u))?;
        prop_assert!((h_polar * r - 1.0).abs() < 1e-10, "h_K0 r_K = {}", h_polar * r);
        Ok(())
    }))
}

fn interior_point(k: &Body, angle: f64, frac: f64) -> Result<Point, TestCaseError> {
    let v = Direction::from_angle(angle);
    Ok(v.as_vector() * (frac * ok(k.radial(&v))?))
}

/// Φ((x₁+x₂)/2) < (Φ(x₁) + Φ(x₂))/2 for distinct interior points.
pub fn phi_midpoint_convexity() -> Result<(), String> {
    let strategy = (symmetric_planar(), 0.0..TAU, 0.0..0.8, 0.0..TAU, 0.0..0.8, 1.5f64..4.0);
    report(runner().run(&strategy, |(spec, a1, f1, a2, f2, beta)| {
        let k = spec.build();
        let x1 = interior_point(&k, a1, f1)?;
        let x2 = interior_point(&k, a2, f2)?;
        prop_assume!((&x1 - &x2).norm() > 1e-3);
        let mid = (&x1 + &x2) * 0.5;
        let p1 = ok(phi(&k, &x1, beta))?;
        let p2 = ok(phi(&k, &x2, beta))?;
        let pm = ok(phi(&k, &mid, beta))?;
        let gap = 0.5 * (p1 + p2) - pm;
        prop_assert!(gap > 0.0, "gap {gap} at {x1:?}, {x2:?}");
        Ok(())
    }))
}

/// t₁ < t₂ ⇒ S_β(K,t₁) ⊂ S_β(K,t₂) ⊂ K along every ray.
pub fn level_set_nesting() -> Result<(), String> {
    let strategy = (symmetric_planar(), 0.0..TAU, 1.5f64..4.0, 0.1f64..50.0, 1.01f64..10.0);
    report(runner().run(&strategy, |(spec, angle, beta, s1, factor)| {
        let k = spec.build();
        let field = std::sync::Arc::new(ok(PhiField::new(k.clone()))?);
        let t1 = field.min_value() * (1.0 + s1);
        let t2 = t1 * factor;
        let u = Direction::from_angle(angle);
        let r1 = ok(ok(LevelSetBody::with_field(field.clone(), beta, t1))?.santalo_radial(&u))?;
        let r2 = ok(ok(LevelSetBody::with_field(field, beta, t2))?.santalo_radial(&u))?;
        let rk = ok(k.radial(&u))?;
        // at large t the gap to ∂K drops below f64 resolution, so only
        // the non-strict inclusions are checked, up to a few ulps
        let slack = 1.0 + 4.0 * f64::EPSILON;
        prop_assert!(0.0 < r1 && r1 <= r2 * slack && r2 <= rk * slack, "{r1} {r2} {rk}");
        Ok(())
    }))
}

/// δ₁ < δ₂ ⇒ K_{δ₂} ⊂ K_{δ₁} ⊂ K, compared through the cap heights.
pub fn floating_nesting() -> Result<(), String> {
    let strategy = (symmetric_planar(), 0.0..TAU, -4.0f64..-0.5, 0.1f64..2.0);
    report(runner().run(&strategy, |(spec, angle, log_d1, step)| {
        let k = spec.build();
        let d1 = 10f64.powf(log_d1);
        let d2 = (d1 * 10f64.powf(step)).min(0.45);
        prop_assume!(d2 > d1);
        let u = Direction::from_angle(angle);
        let a1 = ok(ok(FloatingProfile::new(k.clone(), d1))?.height(&u))?;
        let a2 = ok(ok(FloatingProfile::new(k.clone(), d2))?.height(&u))?;
        let h = k.support(&u);
        prop_assert!(0.0 <= a2 && a2 < a1 && a1 < h, "{a2} {a1} {h}");
        Ok(())
    }))
}

/// Monte Carlo volume, polar volume and Φ agree with quadrature within 3σ.
pub fn monte_carlo_agreement() -> Result<(), String> {
    let strategy = (planar_body(), 0u8..3, 0.0..TAU, 0.0..0.5, any::<u64>());
    report(runner().run(&strategy, |(spec, which, angle, frac, seed)| {
        let k = spec.build();
        let cfg = ok(McConfig::new(20_000, seed))?;
        let (mc, exact) = match which {
            0 => (ok(mc_volume(&k, cfg))?, ok(k.volume())?),
            1 => {
                let x = interior_point(&k, angle, frac)?;
                (ok(mc_polar_volume(&k, &x, cfg))?, ok(polar_volume_about(&k, &x))?)
            }
            _ => {
                // Φ needs the Santaló point at the origin, which holds for
                // the symmetric ellipses; β = n+1 keeps the variance bounded
                let k = match spec {
                    BodySpec::Fourier { .. } => BodySpec::Ellipse { axes: [1.5, 0.7], angle }.build(),
                    _ => k,
                };
                let x = interior_point(&k, angle, frac)?;
                (ok(mc_phi(&k, &x, 3.0, cfg))?, ok(phi(&k, &x, 3.0))?)
            }
        };
        prop_assert!(
            mc.agrees_with_value(exact, 3.0),
            "kind {which}: {} ± {} vs {exact}",
            mc.estimate,
            mc.stderr
        );
        Ok(())
    }))
}

pub const SUITES: &[(&str, fn() -> Result<(), String>)] = &[
    ("polar radial law", polar_radial_law),
    ("cavalieri", cavalieri),
    ("bipolarity", bipolarity),
    ("phi midpoint convexity", phi_midpoint_convexity),
    ("level-set nesting", level_set_nesting),
    ("floating-body nesting", floating_nesting),
    ("monte carlo 3 sigma", monte_carlo_agreement),
];
