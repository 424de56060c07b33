//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Criteria 1-10 run in-process; 11 drives the binary.

use std::process::Command;
use std::time::Instant;

use triband_core::verify::{self, CriterionOutcome};
use triband_core::Execution;

fn cli_determinism() -> CriterionOutcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_triband"))
            .args(["verify", "--preset", "paper"])
            .output()
            .expect("triband binary runs")
    };
    let (a, b) = (run(), run());
    let identical = a.stdout == b.stdout && a.stderr == b.stderr;
    let codes = (a.status.code(), b.status.code());
    CriterionOutcome {
        id: 11,
        name: "verify --preset paper is byte-identical across runs and exits 0",
        passed: identical && codes == (Some(0), Some(0)),
        measured: format!(
            "identical {identical} ({} bytes) exit codes {:?} {:?}",
            a.stdout.len(),
            codes.0,
            codes.1
        ),
        threshold: "identical true, exit codes 0 0".into(),
    }
}

fn main() {
    let exec = Execution::default();
    let criteria: Vec<Box<dyn Fn() -> CriterionOutcome>> = vec![
        Box::new(move || verify::kernel_oracle_equivalence(exec)),
        Box::new(move || verify::defining_equation_residual(exec)),
        Box::new(verify::shifted_kernel_witness),
        Box::new(move || verify::classification_consistency(exec)),
        Box::new(move || verify::empty_point_spectrum(exec)),
        Box::new(verify::norm_sandwich),
        Box::new(move || verify::finite_section_convergence(exec)),
        Box::new(move || verify::bvp_conjugation(exec)),
        Box::new(verify::basis_reconstruction),
        Box::new(verify::resolvent_norm_ladder),
        Box::new(cli_determinism),
    ];

    let mut failed = Vec::new();
    for criterion in &criteria {
        let start = Instant::now();
        let o = criterion();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "acceptance {:>2} {verdict}  {}  measured: {}  threshold: {}  ({:.2}s)",
            o.id,
            o.name,
            o.measured,
            o.threshold,
            start.elapsed().as_secs_f64()
        );
        if !o.passed {
            failed.push(o.id);
        }
    }
    println!(
        "{}/{} acceptance criteria passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
