//! Arrow's theorem at two voters and three alternatives.
//!
//! Asks both engines for a weakly Paretian, independent, non-dictatorial ASWF,
//! then shows why an obvious candidate fails.

use choicecheck::axioms::{first_violation, parse_axioms};
use choicecheck::rules::{Family, RuleTable, Setting};
use choicecheck::search::SearchSpec;
use choicecheck::theorems::{decide, run_arrow, RunOptions};

fn main() -> choicecheck::error::Result<()> {
    let opts = RunOptions::default();
    let report = run_arrow(2, 3, &opts)?;
    println!("status: {:?} (expected {:?})", report.status, report.expected);
    println!("engines agree: {:?}", report.engines_agree);
    for c in &report.checks {
        println!("  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }

    // Dropping non-dictatorship makes the problem satisfiable again.
    let setting = Setting::full(2, 3)?;
    let spec = SearchSpec::new(Family::Aswf, setting.clone(), parse_axioms("wp,iia")?);
    let q = decide(&spec, &opts)?;
    if let Some(w) = q.witnesses.first() {
        println!("a {{wp, iia}} rule: {}", w.signature());
    }

    // A constant rule is independent but ignores unanimity.
    let constant = RuleTable::aswf_constant(setting, 0)?;
    let axioms = parse_axioms("wp,iia,!dict")?;
    match first_violation(&axioms, &constant)? {
        Some(cert) => println!("constant abc fails {}: {:?}", cert.axiom, cert.evidence),
        None => println!("constant abc satisfies everything?"),
    }
    Ok(())
}
