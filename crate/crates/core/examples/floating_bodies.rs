//! Cap heights of the floating body of an ellipse and the growth of its
//! polar volume as delta -> 0.

use paffine::floating::{theorem8_estimate, theorem8_rhs, FloatingProfile};
use paffine::geometry::{Body, Direction, Ellipsoid};

fn main() -> paffine::Result<()> {
    let e: Body = Ellipsoid::diagonal(&[2.0, 1.0])?.into();
    let fp = FloatingProfile::new(e.clone(), 1e-3)?;
    for i in 0..4 {
        let u = Direction::from_angle(i as f64 * 0.4);
        println!("theta={:.1}: cap height {:.12}", u.angle(), fp.height(&u)?);
    }
    let grid: Vec<f64> = (0..7).map(|i| 1e-2 * 10f64.powf(-0.5 * i as f64)).collect();
    let est = theorem8_estimate(&e, &grid)?;
    let rhs = theorem8_rhs(&e)?;
    println!("fitted limit {:.8}, rhs {:.8}, ratio {:.6}", est.limit, rhs.rhs, est.limit / rhs.rhs);
    Ok(())
}
