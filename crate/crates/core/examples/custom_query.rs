//! A hand-built query: which SCFs on a three-order domain are anonymous and
//! strategy-proof? Runs each engine separately and the generate-and-test
//! oracle, then prints the rules.

use choicecheck::axioms::parse_axioms;
use choicecheck::prefcore::Domain;
use choicecheck::rules::{Family, Setting};
use choicecheck::search::SearchSpec;
use choicecheck::theorems::{count, enumerate, oracle_count, Engine, RunOptions};

fn main() -> choicecheck::error::Result<()> {
    let domain = Domain::parse("abc,bac,cba")?;
    let setting = Setting::new(2, domain)?;
    let spec = SearchSpec::new(Family::Scf, setting, parse_axioms("anon,sp,u_scf")?);

    for engine in [Engine::Search, Engine::Sat] {
        let q = count(&spec, &RunOptions::default().with_engine(engine))?;
        println!("{engine}: {:?} rules, {} nodes", q.count, q.nodes());
    }
    println!("oracle: {}", oracle_count(&spec)?);

    let q = enumerate(&spec, 10, &RunOptions::default())?;
    for rule in &q.witnesses {
        println!("{}", serde_json::to_string(&rule.to_witness()).unwrap());
    }
    Ok(())
}
