//! The functional Φ_K, generalized Santaló bodies S_β(K,t) and the limit
//! experiments built on them.

mod covariance;
mod lemma5;
mod level_set;
mod phi;
mod prop4;
mod prop7;
mod theorem6;

pub use covariance::{covariance_residual, CovarianceReport};
pub use lemma5::{lemma5, lemma5_i, lemma5_j, lemma5_j_bound, Lemma5Values};
pub use level_set::{santalo_radial, volume_deficit, LevelSetBody, LN_EPS_FLOOR};
pub use phi::{centering_residual, phi, PhiBeta, PhiField, Ray, CENTERING_TOL};
pub use prop4::{prop4_check, prop4_constants, Prop4Constants, Prop4Report};
pub use prop7::{prop7_denominator_ln, prop7_log_rate, prop7_ratio, rate_from_deficits, Prop7Rate};
pub use theorem6::{
    c_n_beta, eq1_check, theorem6_estimate, theorem6_rhs, Theorem6Rhs,
};

use crate::error::Result;
use crate::geometry::{santalo_point, Body, ConvexBody, SantaloPoint};

/// K translated so that its Santaló point sits at the origin.
pub fn recenter(body: &Body) -> Result<(Body, SantaloPoint)> {
    let sp = santalo_point(body)?;
    if sp.point.iter().all(|&x| x == 0.0) || body.is_centrally_symmetric() {
        return Ok((body.clone(), sp));
    }
    Ok((body.translate(&(-sp.as_point()))?, sp))
}
