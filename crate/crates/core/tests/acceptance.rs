//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release --test acceptance`. Tolerances and sample
//! counts are fixed here and must not be relaxed.

use std::process::ExitCode;
use std::time::Instant;

use a2ops::catalog::KValue;
use a2ops::elliptic::PotentialBackend;
use a2ops::verify::{self, CheckSpec, VerificationReport};

const SEED: u64 = 0;
const COMMUTE_TOL: f64 = 1e-9;
const FUNCEQ_TOL: f64 = 1e-11;
const CONTROL: f64 = 1e-3;
const EXACT_BUDGET_S: f64 = 1.0;
const NUMERIC_BUDGET_S: f64 = 30.0;

type Criterion = (&'static str, fn() -> a2ops::Result<Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn failures(reports: &[VerificationReport]) -> String {
    let bad: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    if bad.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", bad.join(", "))
    }
}

fn ops(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn exact_commutativity() -> a2ops::Result<Outcome> {
    let start = Instant::now();
    let mut reports = Vec::new();
    for pair in [["P1", "Q1"], ["P1", "P2"]] {
        let spec = CheckSpec { ops: ops(&pair), ..Default::default() };
        reports.push(verify::check_commutativity(&spec)?);
    }
    let secs = start.elapsed().as_secs_f64();
    let exact = reports.iter().all(|r| r.pass && r.mode == verify::Mode::Exact);
    Ok(outcome(
        exact && secs < EXACT_BUDGET_S,
        format!(
            "[P1,Q1] = [P1,P2] = 0 for symbolic k: {exact}; {secs:.3} s (budget {EXACT_BUDGET_S} s){}",
            failures(&reports)
        ),
    ))
}

fn numeric_backends() -> a2ops::Result<Vec<PotentialBackend>> {
    Ok(vec![
        PotentialBackend::rational(),
        PotentialBackend::hyperbolic(),
        PotentialBackend::trig(),
        PotentialBackend::elliptic(1.0, 0.3)?,
        PotentialBackend::elliptic(0.7, 0.8)?,
        PotentialBackend::elliptic(1.5, 0.1)?,
    ])
}

fn numeric_commutativity() -> a2ops::Result<Outcome> {
    let start = Instant::now();
    let ks = vec![KValue::rational(1, 2), KValue::rational(1, 1), KValue::rational(2, 1), KValue::rational(37, 100)];
    let mut reports = Vec::new();
    for backend in numeric_backends()? {
        let spec = CheckSpec {
            ops: ops(&["Q1", "P2"]),
            backend,
            k_values: ks.clone(),
            samples: 200,
            seed: SEED,
            tolerance: COMMUTE_TOL,
            ..Default::default()
        };
        reports.push(verify::check_commutativity(&spec)?);
    }
    let secs = start.elapsed().as_secs_f64();
    let worst = reports.iter().map(|r| r.worst_residual).fold(0.0, f64::max);
    let samples: usize = reports.iter().map(|r| r.samples).sum();
    let ok = verify::all_pass(&reports) && reports.iter().all(|r| r.samples == 200 * ks.len());
    Ok(outcome(
        ok && secs < NUMERIC_BUDGET_S,
        format!(
            "[Q1,P2] on 6 backends x 4 k, {samples} points: worst {worst:.2e} (tol {COMMUTE_TOL:e}); {secs:.2} s (budget {NUMERIC_BUDGET_S} s){}",
            failures(&reports)
        ),
    ))
}

fn negative_control() -> a2ops::Result<Outcome> {
    let spec = CheckSpec {
        ops: ops(&["Q1", "P2"]),
        backend: PotentialBackend::inv_cosh(),
        k_values: vec![KValue::rational(1, 1)],
        samples: 200,
        seed: SEED,
        tolerance: COMMUTE_TOL,
        ..Default::default()
    };
    let comm = verify::check_commutativity(&spec)?;
    let fe = verify::check_functional_equation(&PotentialBackend::inv_cosh(), 100, SEED, FUNCEQ_TOL)?;
    let ok = comm.worst_residual > CONTROL && fe.worst_residual > CONTROL;
    Ok(outcome(
        ok,
        format!(
            "beta = 1/cosh: commutator residual {:.3e}, functional equation residual {:.3e} (need > {CONTROL:e})",
            comm.worst_residual, fe.worst_residual
        ),
    ))
}

fn functional_equation() -> a2ops::Result<Outcome> {
    let mut reports = Vec::new();
    for backend in numeric_backends()? {
        reports.push(verify::check_functional_equation(&backend, 100, SEED, FUNCEQ_TOL)?);
    }
    let worst = reports.iter().map(|r| r.worst_residual).fold(0.0, f64::max);
    let exact = verify::rational_funceq_exact();
    let rational_max = reports[0].worst_residual;
    let ok = verify::all_pass(&reports) && exact && rational_max <= 1e-14;
    Ok(outcome(
        ok,
        format!(
            "worst {worst:.2e} over 6 backends x 100 pairs (tol {FUNCEQ_TOL:e}); rational exact over Q: {exact}, sampled {rational_max:.1e}{}",
            failures(&reports)
        ),
    ))
}

fn gauge() -> a2ops::Result<Outcome> {
    let r = verify::check_gauge(&KValue::Symbolic)?;
    Ok(outcome(r.pass, format!("conj by delta^(1/2): {}", r.notes.join("; "))))
}

fn equivariance() -> a2ops::Result<Outcome> {
    let mut reports = Vec::new();
    for name in ["P1", "Q1", "P2", "RtauD1", "RtauD2"] {
        reports.push(verify::check_equivariance(name, &KValue::Symbolic)?);
    }
    Ok(outcome(
        verify::all_pass(&reports) && reports.iter().all(|r| r.samples == 6),
        format!("P1, Q1, P2, RtauD1, RtauD2 under all 6 elements of S3{}", failures(&reports)),
    ))
}

fn group_consistency() -> a2ops::Result<Outcome> {
    let r = verify::check_group_consistency()?;
    Ok(outcome(
        r.pass && r.samples == 6,
        format!("{} of 6 group-case operators equal on shell{}", r.samples - r.worst_residual as usize, failures(&[r])),
    ))
}

fn elliptic() -> a2ops::Result<Outcome> {
    let r = verify::check_elliptic(1000, SEED)?;
    let detail: Vec<String> = r.notes.iter().take(4).cloned().collect();
    Ok(outcome(r.pass, detail.join("; ")))
}

fn oracle_convergence() -> a2ops::Result<Outcome> {
    let r = verify::check_fd_convergence()?;
    Ok(outcome(r.pass, format!("smallest observed order {:.3} (need >= 1.8)", r.worst_residual)))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("exact commutativity", exact_commutativity),
        ("numeric commutativity", numeric_commutativity),
        ("negative control", negative_control),
        ("functional equation", functional_equation),
        ("gauge identity", gauge),
        ("equivariance", equivariance),
        ("group-case consistency", group_consistency),
        ("elliptic numerics", elliptic),
        ("oracle convergence", oracle_convergence),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        all &= o.pass;
        println!("criterion {}: {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
