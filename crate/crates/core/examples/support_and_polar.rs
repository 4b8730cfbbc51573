//! Support, radial and curvature evaluators, and the polar body of an oval.

use paffine::geometry::{Body, ConvexBody, Direction, FourierBody2D, Point};

fn main() -> paffine::Result<()> {
    let oval: Body = FourierBody2D::new(vec![1.0, 0.0, 0.1], vec![])?.into();
    let polar = oval.polar(&Point::zeros(2))?;
    println!("{:>6} {:>10} {:>10} {:>10} {:>12}", "theta", "h_K", "r_K", "f_K", "r_K0 * h_K");
    for i in 0..8 {
        let u = Direction::from_angle(i as f64 * std::f64::consts::PI / 8.0);
        println!(
            "{:>6.3} {:>10.6} {:>10.6} {:>10.6} {:>12.3e}",
            u.angle(),
            oval.support(&u),
            oval.radial(&u)?,
            oval.curvature_function(&u)?,
            polar.radial(&u)? * oval.support(&u),
        );
    }
    println!("|K| = {:.12}, |K0| = {:.12}", oval.volume()?, polar.volume()?);
    Ok(())
}
