//! Named theorem scenarios: each binds axioms, engines and oracles into one
//! reproducible run and reports whether the expected outcome was confirmed.

mod domains;
mod median;
mod oracle;
mod query;
mod scenarios;

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

pub use domains::{scan_dictatorial_domains, DomainScan, DomainVerdict};
pub use median::{is_median_rule, median_rules, MedianRule};
pub use oracle::{brute_force_relation_count, iia_pairwise_oracle, iia_pairwise_rules, oracle_count, ORACLE_LIMIT};
pub use query::{check_witness, count, decide, enumerate, sat_count, Engine, EngineRun, QueryResult, RunOptions};
pub use scenarios::{
    run_arrow, run_dict_domains, run_gs, run_iia_census, run_kp, run_moulin, run_ms, run_scenario, run_sen, run_wilson,
    scenario_formula, ScenarioParams, SCENARIOS,
};

use crate::search::Status;

/// One named sub-result of a scenario.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ReportStats {
    pub nodes: u64,
    pub prunes_by_axiom: BTreeMap<String, u64>,
    pub time_ms: u64,
    pub workers: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub params: Map<String, Value>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u128>,
    pub witnesses: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Value>,
    pub stats: ReportStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engines_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Status>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every check passed and the status is the expected one.
    Confirmed,
    /// Some expectation failed, or the engines disagreed.
    Contradicted,
    /// A budget ran out.
    Exhausted,
}

impl ScenarioReport {
    pub(crate) fn new(scenario: &str, params: Map<String, Value>, workers: usize) -> Self {
        Self {
            scenario: scenario.to_string(),
            params,
            status: Status::Unsat,
            count: None,
            witnesses: Vec::new(),
            classification: None,
            stats: ReportStats { workers, ..ReportStats::default() },
            engines_agree: None,
            expected: None,
            checks: Vec::new(),
        }
    }

    pub(crate) fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    /// Folds a query's statistics and engine agreement into the report.
    pub(crate) fn absorb(&mut self, q: &QueryResult) {
        self.stats.nodes += q.nodes();
        self.stats.time_ms += q.time_ms();
        for run in &q.runs {
            for (axiom, n) in &run.prunes_by_axiom {
                *self.stats.prunes_by_axiom.entry(axiom.clone()).or_default() += n;
            }
        }
        if let Some(agree) = q.engines_agree {
            self.engines_agree = Some(self.engines_agree.unwrap_or(true) && agree);
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.status == Status::Exhausted {
            return Verdict::Exhausted;
        }
        let expected_ok = self.expected.is_none_or(|e| e == self.status);
        if expected_ok && self.engines_agree != Some(false) && self.checks.iter().all(|c| c.passed) {
            Verdict::Confirmed
        } else {
            Verdict::Contradicted
        }
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}
