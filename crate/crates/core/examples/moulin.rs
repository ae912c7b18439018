//! Moulin's median rules on the single-peaked domain over the axis a < b < c.

use choicecheck::prefcore::{alt_letter, Domain, LinearOrder};
use choicecheck::rules::Setting;
use choicecheck::theorems::{median_rules, run_moulin, RunOptions};

fn main() -> choicecheck::error::Result<()> {
    let axis = LinearOrder::parse("abc")?;
    let setting = Setting::new(2, Domain::single_peaked(3, &axis)?)?;
    println!("domain: {}", setting.domain().words().join(","));
    for (rule, table) in median_rules(&setting, &axis)? {
        let phantom: String = rule.phantoms().iter().map(|&p| alt_letter(p)).collect();
        println!("phantom {phantom}: {}", table.signature());
    }

    let report = run_moulin(2, 3, &RunOptions::default())?;
    println!("census of {{anon, eff, sp}}: {:?}", report.count);
    for c in &report.checks {
        println!("  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(())
}
