//! Ranking non-empty subsets: GF and IND together become impossible at six
//! elements.

use std::time::Instant;

use choicecheck::setrank::{kp_check, subset_string, verify_set_witness, KpOutcome};

fn main() -> choicecheck::error::Result<()> {
    for size in 1..=6 {
        let start = Instant::now();
        let outcome = kp_check(size)?;
        let ms = start.elapsed().as_millis();
        match outcome {
            KpOutcome::Unsat => println!("|X|={size}: no ranking ({ms} ms)"),
            KpOutcome::Sat(order) => {
                assert!(verify_set_witness(&order).is_empty());
                let classes = order.ranking()?;
                print!("|X|={size}: {} classes ({ms} ms)", classes.len());
                if size <= 3 {
                    let shown: Vec<String> = classes
                        .iter()
                        .map(|c| c.iter().map(|&s| subset_string(s)).collect::<Vec<_>>().join("~"))
                        .collect();
                    print!("  {}", shown.join(" > "));
                }
                println!();
            }
        }
    }
    Ok(())
}
