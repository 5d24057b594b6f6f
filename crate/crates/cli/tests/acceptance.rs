//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always show; it exits nonzero unless every criterion
//! lands on its expected status, so a known mismatch with a
//! stored formula is reported as FAIL without breaking the build.

use std::process::Command;

use g2hitchin::verify::{run_check, CheckRecord, Status, VerifyConfig};

struct Criterion {
    number: u8,
    title: &'static str,
    checks: &'static [&'static str],
    /// Wall-clock ceiling for the symbolic part, in milliseconds.
    budget_ms: Option<u64>,
    expect_pass: bool,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "determinant identity, literal table = F*det",
        checks: &["higgs.determinant-identity"],
        budget_ms: Some(60_000),
        // the stored table carries the opposite overall sign
        expect_pass: false,
    },
    Criterion { number: 2, title: "Poisson commutation", checks: &["higgs.poisson-commutation"], budget_ms: Some(60_000), expect_pass: true },
    Criterion { number: 3, title: "parametrized Kummer", checks: &["kummer.parametrization"], budget_ms: Some(120_000), expect_pass: true },
    Criterion {
        number: 4,
        title: "torsion representation",
        checks: &["torsion.group-law", "torsion.multiplication-table", "torsion.generator-trace", "torsion.conjugation"],
        budget_ms: Some(120_000),
        expect_pass: true,
    },
    Criterion { number: 5, title: "Kummer in nice coordinates", checks: &["kummer.nice-coordinates"], budget_ms: None, expect_pass: true },
    Criterion { number: 6, title: "classifying round trip", checks: &["chart.round-trip"], budget_ms: None, expect_pass: true },
    Criterion { number: 7, title: "discriminant and Kummer", checks: &["chart.discriminant-kummer"], budget_ms: None, expect_pass: true },
    Criterion { number: 8, title: "Higgs residue structure", checks: &["higgs.residue-structure"], budget_ms: Some(10_000), expect_pass: true },
    Criterion { number: 9, title: "duality", checks: &["higgs.duality"], budget_ms: Some(10_000), expect_pass: true },
    Criterion {
        number: 10,
        title: "chart consistency of the u-chart table",
        checks: &["chart-consistency.oracle-agreement", "chart-consistency.derived-table", "chart-consistency.general-oracle"],
        budget_ms: None,
        expect_pass: true,
    },
    Criterion { number: 11, title: "vgp evaluations", checks: &["hitchin.vgp"], budget_ms: None, expect_pass: true },
    Criterion { number: 12, title: "Weddle and Kummer", checks: &["chart.weddle-kummer"], budget_ms: None, expect_pass: true },
    Criterion { number: 13, title: "expansion budget and emit stability", checks: &["algebra.expansion-budget"], budget_ms: Some(60_000), expect_pass: true },
];

const EMIT_OBJECTS: [&str; 13] = [
    "kummer-v",
    "kummer-u",
    "weddle",
    "classify",
    "inverse",
    "involution",
    "torsion-v",
    "torsion-u",
    "nice-basis",
    "higgs-basis",
    "hamiltonians-rst",
    "hamiltonians-u",
    "vgp",
];

fn emit_once(object: &str, source: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_g2hitchin"))
        .args(["emit", "--object", object, "--format", "canonical", "--source", source])
        .output()
        .expect("spawn g2hitchin");
    assert!(out.status.success(), "emit {object} failed");
    out.stdout
}

/// Canonical output of every object, byte-compared across two processes.
fn emit_stable_across_processes() -> Result<(), String> {
    for object in EMIT_OBJECTS {
        let sources: &[&str] = if object == "hamiltonians-u" { &["table", "derived"] } else { &["derived"] };
        for source in sources {
            if emit_once(object, source) != emit_once(object, source) {
                return Err(format!("{object}/{source} differs between runs"));
            }
        }
    }
    Ok(())
}

fn main() {
    let cfg = VerifyConfig { timings: true, ..VerifyConfig::default() };
    let mut mismatched = Vec::new();
    for c in CRITERIA {
        let records: Vec<CheckRecord> = c.checks.iter().map(|id| run_check(id, &cfg).unwrap()).collect();
        let mut notes = Vec::new();
        let mut pass = records.iter().all(|r| r.status == Status::Pass);
        for r in &records {
            if r.status != Status::Pass {
                notes.push(format!("{} {:?}: {}", r.id, r.status, r.witness));
            }
        }
        let elapsed: u64 = records.iter().filter_map(|r| r.elapsed_ms).sum();
        if let Some(budget) = c.budget_ms {
            if elapsed > budget {
                pass = false;
                notes.push(format!("{elapsed} ms over the {budget} ms budget"));
            }
        }
        if c.number == 13 {
            if let Err(e) = emit_stable_across_processes() {
                pass = false;
                notes.push(e);
            }
        }
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {} ({elapsed} ms)", c.number, c.title);
        for n in &notes {
            println!("    {n}");
        }
        if pass != c.expect_pass {
            mismatched.push(c.number);
        }
    }
    if !mismatched.is_empty() {
        eprintln!("criteria with unexpected status: {mismatched:?}");
        std::process::exit(1);
    }
}
