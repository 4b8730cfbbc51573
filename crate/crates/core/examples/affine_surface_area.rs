//! O_p for an ellipse against its closed form, the p -> -n limit and the
//! duality O_p(K) = O_{n²/p}(K⁰).

use std::f64::consts::PI;

use paffine::geometry::{Body, Ellipsoid, FourierBody2D};
use paffine::surface::{duality_residual, o_p, tilde_o_minus_n, tilde_o_p};

fn main() -> paffine::Result<()> {
    let ellipse: Body = Ellipsoid::diagonal(&[2.0, 1.0])?.into();
    for p in [0.0, 1.0, 2.0, 4.0] {
        let exact = 2.0 * PI * 2f64.powf((2.0 - p) / (2.0 + p));
        println!("O_{p}(E) = {:.14} (closed form {exact:.14})", o_p(&ellipse, p)?);
    }
    let oval: Body = FourierBody2D::new(vec![1.0, 0.0, 0.1], vec![])?.into();
    println!("tilde o_-2(oval) = {:.10}", tilde_o_minus_n(&oval)?);
    for j in 1..=5 {
        let p = -2.0 + 10f64.powi(-j);
        println!("  p = {p:.5}: tilde o_p = {:.10}", tilde_o_p(&oval, p)?);
    }
    println!("duality residual, oval p=2: {:.2e}", duality_residual(&oval, 2.0)?);
    Ok(())
}
