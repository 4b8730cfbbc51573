//! The scaled volume deficit of S_beta(K,t) for an ellipse approaching the
//! polar affine-surface integral.

use paffine::geometry::{Body, Ellipsoid};
use paffine::santalo::{theorem6_estimate, theorem6_rhs};

fn main() -> paffine::Result<()> {
    let e: Body = Ellipsoid::diagonal(&[2.0, 1.0])?.into();
    for beta in [2.0, 3.0] {
        let grid: Vec<f64> = (0..7).map(|i| 1e2 * 10f64.powf(0.5 * i as f64)).collect();
        let est = theorem6_estimate(&e, beta, &grid)?;
        let rhs = theorem6_rhs(&e, beta)?;
        for (t, v) in &est.samples {
            println!("beta={beta} t={t:>12.1} scaled deficit {v:.10}");
        }
        println!(
            "beta={beta}: fitted limit {:.10}, rhs {:.10}, exponent {:.3}",
            est.limit, rhs.rhs, est.exponent
        );
    }
    Ok(())
}
