//! At beta = (n+1)/2 the deficit decays like exp(-rate * t). The measured
//! rate for the disc is compared with the predicted one.

use paffine::geometry::{Ball, Body};
use paffine::santalo::prop7_log_rate;

fn main() -> paffine::Result<()> {
    let disc: Body = Ball::unit(2)?.into();
    let grid = [40.0, 80.0, 160.0, 320.0];
    let rate = prop7_log_rate(&disc, &grid)?;
    for ((t, d), r) in grid.iter().zip(&rate.deficits).zip(&rate.ratios) {
        println!("t={t:>5}: deficit {d:.4e}, ratio to exponential integral {r:.4e}");
    }
    println!(
        "fitted rate {:.8}, predicted {:.8}",
        rate.estimate.limit, rate.expected
    );
    Ok(())
}
