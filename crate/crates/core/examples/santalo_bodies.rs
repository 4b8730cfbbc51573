//! Radial functions of S_beta(K,t) for an off-centre ellipse, after moving
//! its Santalo point to the origin.

use paffine::geometry::{Body, ConvexBody, Direction, Ellipsoid, Point};
use paffine::santalo::{recenter, LevelSetBody};

fn main() -> paffine::Result<()> {
    let e: Body = Ellipsoid::diagonal(&[2.0, 1.0])?.into();
    let shifted = e.translate(&Point::from_vec(vec![0.3, -0.2]))?;
    let (k, sp) = recenter(&shifted)?;
    println!("Santalo point {:?}, |K^x*| = {:.12}", sp.point, sp.polar_volume);
    for t in [10.0, 100.0, 1000.0] {
        let s = LevelSetBody::new(k.clone(), 3.0, t)?;
        let u = Direction::from_angle(0.4);
        println!(
            "t = {t:>6}: r_S = {:.10}, r_K = {:.10}, deficit = {:.6e}",
            s.santalo_radial(&u)?,
            k.radial(&u)?,
            s.volume_deficit()?
        );
    }
    Ok(())
}
