//! Ellipsoidal sandwich d_n E(K⁰) ⊆ S_β(K,t) ⊆ c_n E(K⁰).

use std::f64::consts::{E, SQRT_2};
use std::sync::Arc;

use serde::Serialize;

use super::level_set::LevelSetBody;
use super::phi::PhiField;
use super::theorem6::spread_directions;
use crate::error::{Error, Result};
use crate::geometry::{binet_ellipsoid, ConvexBody, Body};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop4Constants {
    pub d: f64,
    /// The bound valid for every body.
    pub c_general: f64,
    /// √2 (1 − (|K⁰|/t)^{1/(β−1)})^{1/2}, valid for symmetric bodies.
    pub c_symmetric: Option<f64>,
    pub c: f64,
}

/// d_n(t,β) and c_n(t,β) from n, β and the ratio |K⁰|/t.
pub fn prop4_constants(n: usize, beta: f64, polar_over_t: f64, symmetric: bool) -> Result<Prop4Constants> {
    let nf = n as f64;
    if !((nf + 1.0) / 2.0..=nf + 1.0).contains(&beta) {
        return Err(Error::PreconditionViolated(format!(
            "beta = {beta} must lie in [(n+1)/2, n+1] = [{}, {}]",
            (nf + 1.0) / 2.0,
            nf + 1.0
        )));
    }
    let inner = 1.0 - nf * polar_over_t / (beta - 1.0);
    if !(inner > 0.0) || !(polar_over_t > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "t must exceed n|K⁰|/(β−1) = {} |K⁰| for d_n to be real",
            nf / (beta - 1.0)
        )));
    }
    let d = inner.sqrt() / (3f64.sqrt() * nf);
    let c_general = 2.0 * SQRT_2 / ((E - 2.0) * beta * (beta + 1.0)).sqrt()
        * (1.0 / polar_over_t).sqrt()
        * (1.0 - polar_over_t).sqrt();
    let c_symmetric =
        symmetric.then(|| SQRT_2 * (1.0 - polar_over_t.powf(1.0 / (beta - 1.0))).sqrt());
    let c = c_symmetric.map_or(c_general, |s| s.min(c_general));
    Ok(Prop4Constants {
        d,
        c_general,
        c_symmetric,
        c,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop4Report {
    pub beta: f64,
    pub t: f64,
    pub constants: Prop4Constants,
    pub binet_matrix: Vec<Vec<f64>>,
    /// Coordinates of the sampled directions.
    pub directions: Vec<Vec<f64>>,
    pub radii: Vec<f64>,
    pub ellipsoid_radii: Vec<f64>,
    pub inner_margins: Vec<f64>,
    pub outer_margins: Vec<f64>,
}

impl Prop4Report {
    pub fn min_inner_margin(&self) -> f64 {
        self.inner_margins.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn min_outer_margin(&self) -> f64 {
        self.outer_margins.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn holds(&self) -> bool {
        self.min_inner_margin() >= 0.0 && self.min_outer_margin() >= 0.0
    }
}

/// Checks the sandwich along `directions` rays. Margins are
/// λ*(u) − d·r_E(u) and c·r_E(u) − λ*(u), both relative to r_E(u).
pub fn prop4_check(base: &Body, beta: f64, t: f64, directions: usize) -> Result<Prop4Report> {
    let field = Arc::new(PhiField::new(base.clone())?);
    prop4_check_with(&field, beta, t, directions)
}

pub(crate) fn prop4_check_with(
    field: &Arc<PhiField>,
    beta: f64,
    t: f64,
    directions: usize,
) -> Result<Prop4Report> {
    let n = field.dim();
    let constants = prop4_constants(
        n,
        beta,
        field.min_value() / t,
        field.base().is_centrally_symmetric(),
    )?;
    let binet = binet_ellipsoid(field.polar())?;
    let level = LevelSetBody::with_field(field.clone(), beta, t)?;
    let dirs = spread_directions(n, directions)?;
    let mut report = Prop4Report {
        beta,
        t,
        constants,
        binet_matrix: binet
            .matrix()
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect(),
        directions: Vec::with_capacity(dirs.len()),
        radii: Vec::with_capacity(dirs.len()),
        ellipsoid_radii: Vec::with_capacity(dirs.len()),
        inner_margins: Vec::with_capacity(dirs.len()),
        outer_margins: Vec::with_capacity(dirs.len()),
    };
    for u in &dirs {
        let l = level.santalo_radial(u)?;
        let re = binet.radial(u);
        report.directions.push(u.iter().copied().collect());
        report.radii.push(l);
        report.ellipsoid_radii.push(re);
        report.inner_margins.push(l / re - constants.d);
        report.outer_margins.push(constants.c - l / re);
    }
    Ok(report)
}
