//! Scans all 63 non-empty domains over three alternatives for the ones on
//! which unanimity and strategy-proofness force a dictator.

use choicecheck::theorems::{scan_dictatorial_domains, Engine, RunOptions};

fn main() -> choicecheck::error::Result<()> {
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let opts = RunOptions { workers, ..RunOptions::default().with_engine(Engine::Sat) };
    let scan = scan_dictatorial_domains(3, 2, &opts)?;
    println!("{} domains scanned", scan.domains.len());
    for d in scan.dictatorial() {
        let note = match d.common_top {
            Some(t) => format!("every order tops {t}"),
            None => "distinct tops".to_string(),
        };
        println!("  dictatorial: {:<24} {note}", d.domain.join(","));
    }
    let escape = scan.domains.iter().find(|d| !d.dictatorial && d.domain.len() >= 4);
    if let Some(d) = escape {
        let w = d.witness.as_ref().expect("non-dictatorial domains carry a witness");
        println!("a non-dictatorial rule on {}: {}", d.domain.join(","), w.signature());
    }
    Ok(())
}
