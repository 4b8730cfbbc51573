//! Product rules on S^{n-1}: total mass, a polynomial moment and the ball
//! volume formula.

use paffine::quadrature::{default_rule, sphere_area, unit_ball_volume};

fn main() -> paffine::Result<()> {
    for n in 2..=4 {
        let rule = default_rule(n)?;
        let mass = rule.integrate(|_| 1.0);
        // ∫ u_1² dσ = |S^{n-1}| / n
        let second = rule.integrate(|u| u[0] * u[0]);
        println!(
            "n={n}: {} nodes, mass err {:.1e}, moment err {:.1e}, v_n = {:.12}",
            rule.len(),
            (mass - sphere_area(n)).abs(),
            (second - sphere_area(n) / n as f64).abs(),
            unit_ball_volume(n)
        );
    }
    Ok(())
}
