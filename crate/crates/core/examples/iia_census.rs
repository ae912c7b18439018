//! Enumerates every IIA rule at n=2, m=3 and sorts them by shape.

use choicecheck::theorems::{iia_pairwise_oracle, run_iia_census, RunOptions};

fn main() -> choicecheck::error::Result<()> {
    let report = run_iia_census(2, 3, &RunOptions { witness_limit: 2, ..RunOptions::default() })?;
    println!("IIA rules: {:?}", report.count);
    println!("pairwise oracle: {}", iia_pairwise_oracle(2, 3)?);
    if let Some(c) = &report.classification {
        println!("{}", serde_json::to_string_pretty(c).unwrap());
    }
    for c in &report.checks {
        println!("  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    println!("first witnesses:");
    for w in &report.witnesses {
        println!("  {w}");
    }
    Ok(())
}
