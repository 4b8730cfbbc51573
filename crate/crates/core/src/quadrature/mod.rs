//! Numerical kernels: sphere rules, adaptive 1D integration, special
//! functions, root finding and limit extrapolation.

mod adaptive;
mod extrapolate;
pub mod gauss;
mod roots;
mod special;
mod sphere;

pub use adaptive::{adaptive_1d, Endpoints, Estimate, Integrator};
pub use extrapolate::{fit_power_law_limit, LimitEstimate, LimitMode};
pub(crate) use extrapolate::golden_min;
pub use roots::brent;
pub use special::{beta_fn, ln_beta, sphere_area, unit_ball_volume};
pub use sphere::{default_level, default_rule, sphere_rule, SphereRule, MAX_SPHERE_DIM};

/// Neumaier-compensated sum in iteration order.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
