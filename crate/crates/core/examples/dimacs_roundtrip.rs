//! Exports a scenario as DIMACS, reads it back, solves it and decodes the
//! model into a rule.

use choicecheck::axioms::first_violation;
use choicecheck::sat::{header_spec, solve_cnf, CnfFormula, SatOutcome};
use choicecheck::theorems::{scenario_formula, ScenarioParams};

fn main() -> choicecheck::error::Result<()> {
    let params = ScenarioParams::default();
    for name in ["arrow", "iia-census", "moulin"] {
        let text = scenario_formula(name, params)?.write_dimacs();
        let f = CnfFormula::parse_dimacs(&text)?;
        assert_eq!(f.write_dimacs(), text);
        let header = text.lines().find(|l| l.starts_with("p cnf")).unwrap_or_default();
        print!("{name}: {header} -> ");
        match solve_cnf(&f) {
            SatOutcome::Sat(model) => {
                let (family, setting, axioms) = header_spec(&f)?;
                let rule = choicecheck::sat::decode_rule(family, &setting, &model)?;
                let ok = first_violation(&axioms, &rule)?.is_none();
                println!("sat, decoded {family} rule satisfies the header axioms: {ok}");
            }
            SatOutcome::Unsat => println!("unsat"),
            SatOutcome::Unknown => println!("unknown"),
        }
    }
    Ok(())
}
