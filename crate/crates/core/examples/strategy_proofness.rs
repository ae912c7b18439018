//! Gibbard-Satterthwaite and Muller-Satterthwaite on the complete domain.

use choicecheck::axioms::{parse_axioms, scf_dictator};
use choicecheck::rules::{Family, Setting};
use choicecheck::search::SearchSpec;
use choicecheck::theorems::{enumerate, run_gs, run_ms, RunOptions};

fn main() -> choicecheck::error::Result<()> {
    let opts = RunOptions::default();
    for report in [run_gs(2, 3, &opts)?, run_ms(2, 3, &opts)?] {
        println!("{}: {:?}", report.scenario, report.verdict());
        for c in &report.checks {
            println!("  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
        }
    }

    // Without ontoness, constant rules are strategy-proof too.
    let spec = SearchSpec::new(Family::Scf, Setting::full(2, 3)?, parse_axioms("sp")?);
    let q = enumerate(&spec, 100, &opts)?;
    let dictatorial = q.witnesses.iter().filter(|r| scf_dictator(*r).is_some()).count();
    println!("strategy-proof SCFs: {:?}, of which dictatorial: {dictatorial}", q.count);
    for r in &q.witnesses {
        println!("  range {:?}", r.range());
    }
    Ok(())
}
