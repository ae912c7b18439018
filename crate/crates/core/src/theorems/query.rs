//! Runs a rule query on the search engine, the SAT engine, or both.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::axioms::first_violation;
use crate::error::{Error, Result};
use crate::rules::RuleTable;
use crate::sat::count::{count_models as sat_count_models, enumerate_models as sat_enumerate};
use crate::sat::encode::{encode, Encoding};
use crate::sat::solver::{SatOutcome, Solver, SolverConfig};
use crate::search::{self, Mode, SearchSpec, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Search,
    Sat,
    Both,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Search => "search",
            Engine::Sat => "sat",
            Engine::Both => "both",
        })
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "search" => Ok(Engine::Search),
            "sat" => Ok(Engine::Sat),
            "both" => Ok(Engine::Both),
            _ => Err(Error::InvalidArgument(format!("unknown engine `{s}` (accepted: search, sat, both)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub engine: Engine,
    pub workers: usize,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    /// Witnesses to keep in reports.
    pub witness_limit: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { engine: Engine::Both, workers: 1, node_budget: None, time_budget: None, witness_limit: 3 }
    }
}

impl RunOptions {
    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    fn apply(&self, spec: &SearchSpec) -> SearchSpec {
        spec.clone().with_workers(self.workers).with_node_budget(self.node_budget).with_time_budget(self.time_budget)
    }

    fn sat_config(&self) -> SolverConfig {
        SolverConfig { time_budget: self.time_budget, ..SolverConfig::default() }
    }
}

/// What one engine produced.
#[derive(Clone, Debug, Serialize)]
pub struct EngineRun {
    pub engine: Engine,
    pub status: Status,
    pub count: Option<u128>,
    /// Search nodes or solver decisions.
    pub nodes: u64,
    /// Search only.
    pub prunes_by_axiom: BTreeMap<String, u64>,
    pub time_ms: u64,
}

#[derive(Clone, Debug)]
pub struct QueryResult {
    pub status: Status,
    pub count: Option<u128>,
    /// Every entry has passed the axiom evaluators.
    pub witnesses: Vec<RuleTable>,
    pub runs: Vec<EngineRun>,
    /// Set when both engines ran.
    pub engines_agree: Option<bool>,
}

impl QueryResult {
    pub fn nodes(&self) -> u64 {
        self.runs.iter().map(|r| r.nodes).sum()
    }

    pub fn time_ms(&self) -> u64 {
        self.runs.iter().map(|r| r.time_ms).sum()
    }
}

/// Fails unless `rule` satisfies every axiom of `spec`.
pub fn check_witness(spec: &SearchSpec, rule: &RuleTable) -> Result<()> {
    match first_violation(&spec.axioms, rule)? {
        None => Ok(()),
        Some(c) => Err(Error::Witness(format!("{} violated: {:?}", c.axiom, c.evidence))),
    }
}

enum Want {
    Decide,
    Count,
    Enumerate(usize),
}

/// Is there a rule satisfying the axioms? Keeps one witness when there is.
pub fn decide(spec: &SearchSpec, opts: &RunOptions) -> Result<QueryResult> {
    run(spec, opts, Want::Decide)
}

/// Exact number of satisfying rules.
pub fn count(spec: &SearchSpec, opts: &RunOptions) -> Result<QueryResult> {
    run(spec, opts, Want::Count)
}

/// Up to `limit` satisfying rules; with `Both`, the engines must find the same set.
pub fn enumerate(spec: &SearchSpec, limit: usize, opts: &RunOptions) -> Result<QueryResult> {
    run(spec, opts, Want::Enumerate(limit))
}

fn run(spec: &SearchSpec, opts: &RunOptions, want: Want) -> Result<QueryResult> {
    spec.validate()?;
    let mut results = Vec::new();
    if matches!(opts.engine, Engine::Search | Engine::Both) {
        results.push(run_search(spec, opts, &want)?);
    }
    if matches!(opts.engine, Engine::Sat | Engine::Both) {
        results.push(run_sat(spec, opts, &want)?);
    }
    for (_, witnesses) in &results {
        for w in witnesses {
            check_witness(spec, w)?;
        }
    }
    let engines_agree = (results.len() == 2).then(|| {
        let (a, b) = (&results[0], &results[1]);
        let same_status = a.0.status == b.0.status;
        let same_count = a.0.count == b.0.count;
        let same_set = match want {
            Want::Enumerate(_) if a.0.count.is_some() => {
                let mut x: Vec<&[u32]> = a.1.iter().map(|r| r.outcomes()).collect();
                let mut y: Vec<&[u32]> = b.1.iter().map(|r| r.outcomes()).collect();
                x.sort();
                y.sort();
                x == y
            }
            _ => true,
        };
        same_status && same_count && same_set
    });
    let status =
        if results.iter().any(|r| r.0.status == Status::Exhausted) { Status::Exhausted } else { results[0].0.status };
    let count = results.iter().find_map(|r| r.0.count);
    let witnesses = results[0].1.clone();
    Ok(QueryResult { status, count, witnesses, runs: results.into_iter().map(|r| r.0).collect(), engines_agree })
}

fn run_search(spec: &SearchSpec, opts: &RunOptions, want: &Want) -> Result<(EngineRun, Vec<RuleTable>)> {
    let mode = match *want {
        Want::Decide => Mode::Decide,
        Want::Count => Mode::Count,
        Want::Enumerate(limit) => Mode::Enumerate { limit },
    };
    let r = search::solve(&opts.apply(spec).with_mode(mode))?;
    let count = match want {
        Want::Decide => None,
        _ if r.status == Status::Exhausted => None,
        // a full batch may have stopped early
        Want::Enumerate(limit) if r.witnesses.len() >= *limit => None,
        _ => r.count,
    };
    let run = EngineRun {
        engine: Engine::Search,
        status: r.status,
        count,
        nodes: r.stats.nodes,
        prunes_by_axiom: r.stats.prunes_by_axiom,
        time_ms: r.stats.time_ms,
    };
    Ok((run, r.witnesses))
}

/// Above this many models, counting switches from blocking clauses to the component counter.
const BLOCKING_LIMIT: usize = 20_000;

fn run_sat(spec: &SearchSpec, opts: &RunOptions, want: &Want) -> Result<(EngineRun, Vec<RuleTable>)> {
    let start = Instant::now();
    let enc = encode(spec)?;
    let finish = |status, count, nodes| EngineRun {
        engine: Engine::Sat,
        status,
        count,
        nodes,
        prunes_by_axiom: BTreeMap::new(),
        time_ms: start.elapsed().as_millis() as u64,
    };
    match *want {
        Want::Decide => {
            let mut solver = Solver::new(enc.formula.num_vars(), opts.sat_config());
            for c in enc.formula.clauses() {
                solver.add_clause(c);
            }
            let outcome = solver.solve();
            let nodes = solver.stats.decisions;
            match outcome {
                SatOutcome::Sat(m) => Ok((finish(Status::Sat, None, nodes), vec![enc.decode(&m)?])),
                SatOutcome::Unsat => Ok((finish(Status::Unsat, None, nodes), vec![])),
                SatOutcome::Unknown => Ok((finish(Status::Exhausted, None, nodes), vec![])),
            }
        }
        Want::Enumerate(limit) => {
            let e = match sat_enumerate(&enc.formula, enc.decision_vars, Some(limit), opts.sat_config()) {
                Ok(e) => e,
                Err(Error::ResourceExhausted(_)) => return Ok((finish(Status::Exhausted, None, 0), vec![])),
                Err(e) => return Err(e),
            };
            let rules: Vec<RuleTable> = e.models.iter().map(|m| enc.decode(m)).collect::<Result<_>>()?;
            let status = if rules.is_empty() { Status::Unsat } else { Status::Sat };
            let count = e.complete.then_some(rules.len() as u128);
            Ok((finish(status, count, 0), rules))
        }
        Want::Count => match sat_count(&enc, opts) {
            Ok(n) => Ok((finish(if n == 0 { Status::Unsat } else { Status::Sat }, Some(n), 0), vec![])),
            Err(Error::ResourceExhausted(_)) => Ok((finish(Status::Exhausted, None, 0), vec![])),
            Err(e) => Err(e),
        },
    }
}

/// Blocking-clause count, falling back to the component counter for large model sets.
pub fn sat_count(enc: &Encoding, opts: &RunOptions) -> Result<u128> {
    let e = sat_enumerate(&enc.formula, enc.decision_vars, Some(BLOCKING_LIMIT), opts.sat_config())?;
    if e.complete {
        return Ok(e.models.len() as u128);
    }
    sat_count_models(&enc.formula, opts.time_budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::parse_axioms;
    use crate::rules::{Family, Setting};

    fn spec(ax: &str) -> SearchSpec {
        SearchSpec::new(Family::Aswf, Setting::full(2, 3).unwrap(), parse_axioms(ax).unwrap())
    }

    #[test]
    fn engines_agree_on_arrow() {
        let r = decide(&spec("wp,iia,!dict"), &RunOptions::default()).unwrap();
        assert_eq!(r.status, Status::Unsat);
        assert_eq!(r.engines_agree, Some(true));
        let c = count(&spec("iia"), &RunOptions::default()).unwrap();
        assert_eq!(c.count, Some(94));
        assert_eq!(c.engines_agree, Some(true));
    }

    #[test]
    fn enumerated_sets_match() {
        let r = enumerate(&spec("wp,iia"), 10, &RunOptions::default()).unwrap();
        assert_eq!(r.witnesses.len(), 2);
        assert_eq!(r.engines_agree, Some(true));
        assert_eq!(r.count, Some(2));
    }

    #[test]
    fn engine_names() {
        assert_eq!("both".parse::<Engine>().unwrap(), Engine::Both);
        assert!("fast".parse::<Engine>().is_err());
    }
}
