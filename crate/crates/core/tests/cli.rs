//! The command-line front end, driven in-process.

use choicecheck::cli::run;
use choicecheck::sat::{solve_cnf, CnfFormula};
use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Out {
    let mut so = Vec::new();
    let mut se = Vec::new();
    let argv = std::iter::once("choicecheck").chain(args.iter().copied());
    let code = run(argv, &mut so, &mut se);
    Out { code, stdout: String::from_utf8(so).unwrap(), stderr: String::from_utf8(se).unwrap() }
}

fn json(o: &Out) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

#[test]
fn arrow_json_report() {
    let o = cli(&["theorem", "arrow", "--voters", "2", "--alts", "3", "--engine", "both", "--format", "json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["scenario"], "arrow");
    assert_eq!(v["status"], "unsat");
    assert_eq!(v["count"], 2);
    assert_eq!(v["engines_agree"], true);
    for key in ["params", "witnesses", "stats"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    for key in ["nodes", "time_ms", "workers"] {
        assert!(v["stats"][key].is_u64(), "stats.{key}");
    }
}

#[test]
fn iia_count_is_94() {
    let o = cli(&["count", "--axioms", "iia", "--voters", "2", "--alts", "3"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let line = o.stdout.lines().find(|l| l.starts_with("count")).unwrap();
    assert_eq!(line.split_whitespace().nth(1), Some("94"));
    let v = json(&cli(&["count", "--axioms", "iia", "--format", "json"]));
    assert_eq!(v["count"], 94);
}

#[test]
fn unknown_axiom_is_a_usage_error() {
    let o = cli(&["count", "--axioms", "bogus", "--voters", "2", "--alts", "3"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("bogus"));
    for name in ["wp", "iia", "liberal", "dict_scf"] {
        assert!(o.stderr.contains(name), "accepted list lacks {name}: {}", o.stderr);
    }
    assert!(o.stdout.is_empty());
}

#[test]
fn other_usage_errors() {
    assert_eq!(cli(&["theorem", "fermat"]).code, 2);
    assert_eq!(cli(&["count", "--axioms", "wp,sp"]).code, 2, "mixed families");
    assert_eq!(cli(&["count", "--axioms", "iia", "--domain", "abc,abd"]).code, 2);
    assert_eq!(cli(&["count", "--axioms", "iia", "--workers", "0"]).code, 2);
    assert_eq!(cli(&["count"]).code, 2, "empty axiom set without a family");
    assert_eq!(cli(&["frobnicate"]).code, 2);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn empty_axiom_set_with_family() {
    let o = cli(&["count", "--family", "scf", "--domain", "abc,cba", "--format", "json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json(&o)["count"], 81);
}

#[test]
fn contradicted_expectation_exits_one() {
    let o = cli(&["theorem", "sen"]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("CONTRADICTED"));
}

#[test]
fn exhausted_budget_exits_three() {
    let o = cli(&["theorem", "arrow", "--engine", "search", "--node-budget", "5"]);
    assert_eq!(o.code, 3, "{}{}", o.stdout, o.stderr);
}

#[test]
fn enumerate_lists_verified_witnesses() {
    let o = cli(&["enumerate", "--axioms", "iia,ni", "--limit", "10", "--format", "json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["count"], 4);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 4);
    let o = cli(&["enumerate", "--axioms", "iia", "--limit", "5", "--format", "json"]);
    assert_eq!(json(&o)["witnesses"].as_array().unwrap().len(), 5);
}

#[test]
fn export_then_check_external_models() {
    let dir = tempfile::tempdir().unwrap();
    let arrow = dir.path().join("arrow.cnf");
    let o = cli(&["cnf-export", "arrow", "--voters", "2", "--alts", "3", "--out", arrow.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let text = std::fs::read_to_string(&arrow).unwrap();
    let header = text.lines().find(|l| l.starts_with("p cnf")).unwrap();
    assert_eq!(header.split_whitespace().nth(2), Some("108"));
    assert_eq!(CnfFormula::parse_dimacs(&text).unwrap().write_dimacs(), text);

    let iia = dir.path().join("iia.cnf");
    assert_eq!(cli(&["cnf-export", "--axioms", "iia", "--out", iia.to_str().unwrap()]).code, 0);
    let f = CnfFormula::parse_dimacs(&std::fs::read_to_string(&iia).unwrap()).unwrap();
    let model = solve_cnf(&f).model().cloned().unwrap();
    let good = dir.path().join("good.model");
    std::fs::write(&good, model.to_dimacs()).unwrap();
    let o = cli(&["cnf-check", iia.to_str().unwrap(), good.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.starts_with("pass"));

    // flip every decision variable of the first profile
    let mut lits = model.literals();
    for l in lits.iter_mut().take(3) {
        *l = -*l;
    }
    let bad = dir.path().join("bad.model");
    let body: Vec<String> = lits.iter().map(i32::to_string).collect();
    std::fs::write(&bad, format!("v {} 0\n", body.join(" "))).unwrap();
    let o = cli(&["cnf-check", iia.to_str().unwrap(), bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.code, 1);
    let v = json(&o);
    assert_eq!(v["pass"], false);
    assert!(!v["problems"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_dimacs_reports_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.cnf");
    std::fs::write(&f, "p cnf 2 1\n1 x 0\n").unwrap();
    let m = dir.path().join("m");
    std::fs::write(&m, "v 1 2 0\n").unwrap();
    let o = cli(&["cnf-check", f.to_str().unwrap(), m.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 2"), "{}", o.stderr);
}

#[test]
fn setrank_solve_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(&["setrank", "--size", "5", "--format", "json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["status"], "sat");
    let witness = dir.path().join("w.json");
    std::fs::write(&witness, v["witnesses"][0].to_string()).unwrap();
    let o = cli(&["setrank", "--size", "5", "--check", witness.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stdout);

    let mut ranking = v["witnesses"][0]["ranking"].as_array().unwrap().clone();
    ranking.reverse();
    let flipped = serde_json::json!({ "size": 5, "ranking": ranking });
    std::fs::write(&witness, flipped.to_string()).unwrap();
    assert_eq!(cli(&["setrank", "--size", "5", "--check", witness.to_str().unwrap()]).code, 1);

    let o = cli(&["setrank", "--size", "6", "--format", "json"]);
    assert_eq!(o.code, 0);
    assert_eq!(json(&o)["status"], "unsat");
    assert_eq!(json(&cli(&["setrank", "--size", "6", "--drop", "ind", "--format", "json"]))["status"], "sat");
}

#[test]
fn json_is_deterministic_apart_from_stats() {
    let strip = |o: Out| {
        let mut v = json(&o);
        v.as_object_mut().unwrap().remove("stats");
        v.to_string()
    };
    for args in [
        &["theorem", "iia-census", "--engine", "search", "--format", "json"][..],
        &["theorem", "moulin", "--format", "json"][..],
        &["enumerate", "--axioms", "sp,onto", "--format", "json"][..],
    ] {
        assert_eq!(strip(cli(args)), strip(cli(args)), "{args:?}");
    }
}

#[test]
fn report_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = cli(&["theorem", "wilson", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["count"], 4);
}
