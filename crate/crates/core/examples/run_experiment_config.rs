//! Runs a JSON experiment config through the library entry point, as the
//! binary does, and prints the summary row.
//!
//! cargo run --release --example run_experiment_config -- configs/theorem6_ellipse.json

use std::path::PathBuf;

use paffine::cli::run;

fn main() {
    let config = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/lemma5.json"));
    let out = std::env::temp_dir().join("paffine_example");
    match run(&config, &out, 0, 1) {
        Ok(reports) => {
            for r in reports {
                let summary = r.csv_rows().pop().expect("summary row");
                println!(
                    "{} {}: limit {:?} rhs {:?} rel_err {:?} passed {}",
                    r.experiment, r.body_id, summary.fitted_limit, summary.rhs, summary.rel_err, r.passed
                );
            }
            println!("wrote {}", out.display());
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
