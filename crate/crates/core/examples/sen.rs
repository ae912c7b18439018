//! Sen's liberal paradox under three readings of "decisive".
//!
//! A voter is decisive over `(a, b)` when their ranking of the pair decides
//! it. `liberal` compares with membership in the social relation,
//! `liberal:strict` with its strict part, and `liberal:pair` asks the voter's
//! ranking of `{a, b}` to be society's strict ranking in both directions.

use choicecheck::axioms::parse_axioms;
use choicecheck::rules::{enumerate_choice_relations, Family, Setting};
use choicecheck::search::SearchSpec;
use choicecheck::theorems::{brute_force_relation_count, check_witness, decide, RunOptions};

fn main() -> choicecheck::error::Result<()> {
    let opts = RunOptions::default();
    println!(
        "choice-generating relations on 3 alternatives: {} (brute force {})",
        enumerate_choice_relations(3)?.len(),
        brute_force_relation_count(3)?
    );
    let setting = Setting::full(2, 3)?;
    for reading in ["liberal", "liberal:pair", "liberal:strict"] {
        let spec = SearchSpec::new(Family::Sdf, setting.clone(), parse_axioms(&format!("u,{reading}"))?);
        let q = decide(&spec, &opts)?;
        print!("{{u, {reading}}}: {:?}, engines agree {:?}", q.status, q.engines_agree);
        if let Some(w) = q.witnesses.first() {
            check_witness(&spec, w)?;
            print!(" (witness checked)");
        }
        println!();
    }
    Ok(())
}
