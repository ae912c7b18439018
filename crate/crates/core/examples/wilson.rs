//! Wilson's theorem: IIA plus non-imposition leaves the dictatorships and the
//! anti-dictatorships, and nothing else.

use choicecheck::axioms::{anti_dictator, dictator, parse_axioms};
use choicecheck::rules::{Family, Setting};
use choicecheck::search::SearchSpec;
use choicecheck::theorems::{enumerate, run_wilson, RunOptions};

fn main() -> choicecheck::error::Result<()> {
    let opts = RunOptions::default();
    let report = run_wilson(2, 3, &opts)?;
    println!("verdict: {:?}", report.verdict());
    for c in &report.checks {
        println!("  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }

    let spec = SearchSpec::new(Family::Aswf, Setting::full(2, 3)?, parse_axioms("iia,ni")?);
    let q = enumerate(&spec, 16, &opts)?;
    for rule in &q.witnesses {
        let kind = match (dictator(rule), anti_dictator(rule)) {
            (Some(i), _) => format!("dictatorship of voter {i}"),
            (_, Some(i)) => format!("anti-dictatorship of voter {i}"),
            _ => "other".to_string(),
        };
        println!("{kind}");
    }
    Ok(())
}
