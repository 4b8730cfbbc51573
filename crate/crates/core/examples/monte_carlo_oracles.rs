//! Seeded Monte Carlo estimates next to the quadrature values.

use paffine::geometry::{Body, ConvexBody, Ellipsoid, Point};
use paffine::geometry::polar_volume_about;
use paffine::oracle::{mc_phi, mc_polar_volume, mc_volume, McConfig};
use paffine::santalo::phi;

fn main() -> paffine::Result<()> {
    let e: Body = Ellipsoid::diagonal(&[2.0, 1.0])?.into();
    let cfg = McConfig::new(200_000, 7)?;
    let x = Point::from_vec(vec![0.3, 0.1]);

    let v = mc_volume(&e, cfg)?;
    println!("|K|:   mc {:.5} ± {:.5}, quadrature {:.5}", v.estimate, v.stderr, e.volume()?);
    let p = mc_polar_volume(&e, &x, cfg)?;
    println!("|K^x|: mc {:.5} ± {:.5}, quadrature {:.5}", p.estimate, p.stderr, polar_volume_about(&e, &x)?);
    let f = mc_phi(&e, &x, 3.0, cfg)?;
    println!("Phi:   mc {:.5} ± {:.5}, quadrature {:.5}", f.estimate, f.stderr, phi(&e, &x, 3.0)?);
    Ok(())
}
