//! The normalized integrals I(alpha), J(alpha) and the bound on J.

use paffine::santalo::lemma5;

fn main() -> paffine::Result<()> {
    for (gamma, beta) in [(0.5, 3.0), (1.0, 4.0)] {
        println!("gamma={gamma} beta={beta}");
        for k in 1..=8 {
            let alpha = 1.0 - 10f64.powi(-k);
            let v = lemma5(gamma, beta, alpha)?;
            println!(
                "  1-alpha=1e-{k}: I={:.10} J={:.10} bound={:.10}",
                v.i, v.j, v.j_bound
            );
        }
    }
    Ok(())
}
