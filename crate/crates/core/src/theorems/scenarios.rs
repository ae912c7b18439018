//! The scenario registry.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::domains::scan_dictatorial_domains;
use super::median::{is_median_rule, median_rules};
use super::oracle::{brute_force_relation_count, iia_pairwise_oracle};
use super::query::{decide, enumerate, Engine, QueryResult, RunOptions};
use super::ScenarioReport;
use crate::axioms::{anti_dictator, dictator, parse_axioms, scf_dictator};
use crate::error::{Error, Result};
use crate::prefcore::{kendall_distance, Domain, LinearOrder};
use crate::rules::{enumerate_choice_relations, Family, RuleTable, Setting};
use crate::sat::cnf::CnfFormula;
use crate::sat::encode::encode;
use crate::search::{SearchSpec, Status};
use crate::setrank::{self, GroundSet, KpOutcome, SetAxioms};

pub const SCENARIOS: &[&str] = &["arrow", "iia-census", "wilson", "sen", "gs", "ms", "moulin", "kp", "dict-domains"];

/// Enough to hold any census at desk scale.
const CENSUS_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScenarioParams {
    pub voters: usize,
    pub alts: usize,
    /// Ground-set size for `kp`.
    pub size: usize,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self { voters: 2, alts: 3, size: 6 }
    }
}

pub fn run_scenario(name: &str, params: ScenarioParams, opts: &RunOptions) -> Result<ScenarioReport> {
    let (n, m) = (params.voters, params.alts);
    match name {
        "arrow" => run_arrow(n, m, opts),
        "iia-census" => run_iia_census(n, m, opts),
        "wilson" => run_wilson(n, m, opts),
        "sen" => run_sen(n, m, opts),
        "gs" => run_gs(n, m, opts),
        "ms" => run_ms(n, m, opts),
        "moulin" => run_moulin(n, m, opts),
        "kp" => run_kp(params.size, opts),
        "dict-domains" => run_dict_domains(n, m, opts),
        _ => Err(unknown(name)),
    }
}

fn unknown(name: &str) -> Error {
    Error::InvalidArgument(format!("unknown scenario `{name}` (accepted: {})", SCENARIOS.join(", ")))
}

/// The formula behind a scenario's headline query.
pub fn scenario_formula(name: &str, params: ScenarioParams) -> Result<CnfFormula> {
    let (n, m) = (params.voters, params.alts);
    let spec = match name {
        "arrow" => full_spec(Family::Aswf, n, m, "wp,iia,!dict")?,
        "iia-census" => full_spec(Family::Aswf, n, m, "iia")?,
        "wilson" => full_spec(Family::Aswf, n, m, "iia,ni,!dict,!antidict")?,
        "sen" => full_spec(Family::Sdf, n, m, "u,liberal")?,
        "gs" => full_spec(Family::Scf, n, m, "sp,onto,!dict_scf")?,
        "ms" => full_spec(Family::Scf, n, m, "eff,m,!dict_scf")?,
        "moulin" => {
            let (setting, _) = single_peaked(n, m)?;
            SearchSpec::new(Family::Scf, setting, parse_axioms("anon,eff,sp")?)
        }
        "kp" => return Ok(setrank::encode(GroundSet::new(params.size)?, SetAxioms::BOTH)),
        "dict-domains" => {
            return Err(Error::InvalidArgument(
                "dict-domains solves one formula per domain; export a single domain with `--domain`".into(),
            ))
        }
        _ => return Err(unknown(name)),
    };
    Ok(encode(&spec)?.formula)
}

fn desk_scale(n: usize, m: usize) -> Result<()> {
    if !(1..=3).contains(&n) || m != 3 {
        return Err(Error::InvalidArgument(format!("scenarios run at 1 <= voters <= 3 and alts = 3, got {n} and {m}")));
    }
    Ok(())
}

fn pinned(scenario: &str, n: usize, m: usize) -> Result<()> {
    if (n, m) != (2, 3) {
        return Err(Error::InvalidArgument(format!("{scenario} runs at voters = 2, alts = 3, got {n} and {m}")));
    }
    Ok(())
}

fn full_spec(family: Family, n: usize, m: usize, axioms: &str) -> Result<SearchSpec> {
    Ok(SearchSpec::new(family, Setting::full(n, m)?, parse_axioms(axioms)?))
}

fn single_peaked(n: usize, m: usize) -> Result<(Arc<Setting>, LinearOrder)> {
    let axis = LinearOrder::from_word(&(0..m).collect::<Vec<_>>())?;
    Ok((Setting::new(n, Domain::single_peaked(m, &axis)?)?, axis))
}

fn params(n: usize, m: usize, opts: &RunOptions) -> Map<String, Value> {
    let mut p = Map::new();
    p.insert("voters".into(), json!(n));
    p.insert("alts".into(), json!(m));
    p.insert("engine".into(), json!(opts.engine));
    p
}

fn witness_values(rules: &[RuleTable], limit: usize) -> Vec<Value> {
    rules.iter().take(limit).map(|r| serde_json::to_value(r.to_witness()).expect("witness serializes")).collect()
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Sat => "sat",
        Status::Unsat => "unsat",
        Status::Exhausted => "exhausted",
    }
}

/// Runs `q` and records a check that its status is `want`.
fn expect_status(report: &mut ScenarioReport, label: &str, q: &QueryResult, want: Status) {
    report.absorb(q);
    report.check(label, q.status == want, format!("{} (expected {})", status_name(q.status), status_name(want)));
}

/// Enumerates a census and records its size check.
fn census(
    report: &mut ScenarioReport,
    spec: &SearchSpec,
    opts: &RunOptions,
    label: &str,
    expected: Option<u128>,
) -> Result<Vec<RuleTable>> {
    let q = enumerate(spec, CENSUS_LIMIT, opts)?;
    report.absorb(&q);
    let got = q.count;
    let detail = match (got, expected) {
        (Some(c), Some(e)) => format!("{c} rules (expected {e})"),
        (Some(c), None) => format!("{c} rules"),
        (None, _) => "count unavailable".to_string(),
    };
    report.check(label, got.is_some() && (expected.is_none() || got == expected), detail);
    report.count = got;
    Ok(q.witnesses)
}

/// Arrow: no weakly Paretian, independent, non-dictatorial ASWF; the census of
/// `{WP, IIA}` is the `n` dictatorships.
pub fn run_arrow(n: usize, m: usize, opts: &RunOptions) -> Result<ScenarioReport> {
    desk_scale(n, m)?;
    let mut r = ScenarioReport::new("arrow", params(n, m, opts), opts.workers);
    r.expected = Some(Status::Unsat);
    let main = decide(&full_spec(Family::Aswf, n, m, "wp,iia,!dict")?, opts)?;
    expect_status(&mut r, "{wp, iia, !dict} is unsatisfiable", &main, Status::Unsat);
    r.status = main.status;
    r.witnesses = witness_values(&main.witnesses, opts.witness_limit);
    let members = census(&mut r, &full_spec(Family::Aswf, n, m, "wp,iia")?, opts, "census {wp, iia}", Some(n as u128))?;
    let dictators: BTreeSet<usize> = members.iter().filter_map(dictator).collect();
    r.check(
        "census members are the dictatorships",
        dictators.len() == members.len() && dictators.len() == n,
        format!("dictators {dictators:?}"),
    );
    Ok(r)
}

/// The census of IIA rules and the shape of the non-dictatorial ones.
pub fn run_iia_census(n: usize, m: usize, opts: &RunOptions) -> Result<ScenarioReport> {
    desk_scale(n, m)?;
    let mut r = ScenarioReport::new("iia-census", params(n, m, opts), opts.workers);
    r.expected = Some(Status::Sat);
    let expected = ((n, m) == (2, 3)).then_some(94);
    let members = census(&mut r, &full_spec(Family::Aswf, n, m, "iia")?, opts, "census {iia}", expected)?;
    r.status = if members.is_empty() { Status::Unsat } else { Status::Sat };
    if n <= 2 {
        let oracle = iia_pairwise_oracle(n, m)?;
        r.check("pairwise-decomposition oracle agrees", Some(oracle) == r.count, format!("oracle counts {oracle}"));
    }
    let mut dict = 0;
    let mut anti = 0;
    let mut constant = 0;
    let mut ranges: BTreeMap<usize, usize> = BTreeMap::new();
    let mut max_kendall = 0;
    for rule in &members {
        if dictator(rule).is_some() {
            dict += 1;
            continue;
        }
        if anti_dictator(rule).is_some() {
            anti += 1;
            continue;
        }
        let range: Vec<LinearOrder> =
            rule.range().into_iter().map(|i| rule.setting().order(i as usize).clone()).collect();
        if range.len() == 1 {
            constant += 1;
        }
        *ranges.entry(range.len()).or_default() += 1;
        for p in &range {
            for q in &range {
                max_kendall = max_kendall.max(kendall_distance(p, q)?);
            }
        }
    }
    let other = members.len() - dict - anti;
    r.check("dictatorships", dict == n, format!("{dict}"));
    r.check("anti-dictatorships", anti == n, format!("{anti}"));
    let max_range = ranges.keys().max().copied().unwrap_or(0);
    r.check("remaining rules have a range of at most two", max_range <= 2, format!("largest range {max_range}"));
    r.check(
        "range orders are within Kendall distance one",
        max_kendall <= 1,
        format!("largest distance {max_kendall}"),
    );
    r.classification = Some(json!({
        "dictatorial": dict,
        "anti_dictatorial": anti,
        "constant": constant,
        "other": other,
        "range_sizes": ranges,
        "max_kendall_within_range": max_kendall,
    }));
    r.witnesses = witness_values(&members, opts.witness_limit);
    Ok(r)
}

/// Wilson: IIA with NI leaves only dictatorships and anti-dictatorships.
pub fn run_wilson(n: usize, m: usize, opts: &RunOptions) -> Result<ScenarioReport> {
    desk_scale(n, m)?;
    let mut r = ScenarioReport::new("wilson", params(n, m, opts), opts.workers);
    r.expected = Some(Status::Unsat);
    let main = decide(&full_spec(Family::Aswf, n, m, "iia,ni,!dict,!antidict")?, opts)?;
    expect_status(&mut r, "{iia, ni, !dict, !antidict} is unsatisfiable", &main, Status::Unsat);
    r.status = main.status;
    r.witnesses = witness_values(&main.witnesses, opts.witness_limit);
    let with_null = decide(&full_spec(Family::Aswf, n, m, "iia,ni,!dict,!antidict,!const")?, opts)?;
    expect_status(&mut r, "{iia, ni, !dict, !antidict, !const} is unsatisfiable", &with_null, Status::Unsat);
    let members =
        census(&mut r, &full_spec(Family::Aswf, n, m, "iia,ni")?, opts, "census {iia, ni}", Some(2 * n as u128))?;
    let d = members.iter().filter(|x| dictator(*x).is_some()).count();
    let a = members.iter().filter(|x| anti_dictator(*x).is_some()).count();
    r.check("census splits into dictatorships and anti-dictatorships", d == n && a == n, format!("{d} + {a}"));
    r.classification = Some(json!({ "dictatorial": d, "anti_dictatorial": a }));
    Ok(r)
}

/// Sen: no SDF satisfies unanimity and liberalism. Runs the default
/// decisiveness reading and reports the others alongside.
pub fn run_sen(n: usize, m: usize, opts: &RunOptions) -> Result<ScenarioReport> {
    pinned("sen", n, m)?;
    let mut r = ScenarioReport::new("sen", params(n, m, opts), opts.workers);
    r.expected = Some(Status::Unsat);
    let main = decide(&full_spec(Family::Sdf, n, m, "u,liberal")?, opts)?;
    expect_status(&mut r, "{u, liberal} is unsatisfiable", &main, Status::Unsat);
    r.status = main.status;
    r.witnesses = witness_values(&main.witnesses, opts.witness_limit);
    let mut readings = Map::new();
    readings.insert("liberal".into(), json!(main.status));
    for (name, want) in [("liberal:strict", None), ("liberal:pair", Some(Status::Unsat))] {
        let q = decide(&full_spec(Family::Sdf, n, m, &format!("u,{name}"))?, opts)?;
        match want {
            Some(w) => expect_status(&mut r, &format!("{{u, {name}}} is unsatisfiable"), &q, w),
            None => r.absorb(&q),
        }
        readings.insert(name.into(), json!(q.status));
    }
    for (ax, label) in [("u", "{u} alone is satisfiable"), ("liberal", "{liberal} alone is satisfiable")] {
        let q = decide(&full_spec(Family::Sdf, n, m, ax)?, opts)?;
        expect_status(&mut r, label, &q, Status::Sat);
    }
    let relations = enumerate_choice_relations(m)?.len() as u64;
    let brute = brute_force_relation_count(m)?;
    r.check("choice relations match brute force", relations == brute, format!("{relations} vs {brute}"));
    r.classification = Some(json!({ "readings": readings, "choice_relations": relations }));
    Ok(r)
}

fn dictatorial_census(
    r: &mut ScenarioReport,
    spec: &SearchSpec,
    opts: &RunOptions,
    label: &str,
    expected: Option<u128>,
) -> Result<()> {
    let members = census(r, spec, opts, label, expected)?;
    let dictators: BTreeSet<usize> = members.iter().filter_map(scf_dictator).collect();
    r.check(
        format!("{label} members are dictatorships"),
        dictators.len() == members.len(),
        format!("dictators {dictators:?} among {} rules", members.len()),
    );
    Ok(())
}

/// Gibbard-Satterthwaite: strategy-proof onto SCFs are dictatorial.
pub fn run_gs(n: usize, m: usize, opts: &RunOptions) -> Result<ScenarioReport> {
    pinned("gs", n, m)?;
    let mut r = ScenarioReport::new("gs", params(n, m, opts), opts.workers);
    r.expected = Some(Status::Unsat);
    let main = decide(&full_spec(Family::Scf, n, m, "sp,onto,!dict_scf")?, opts)?;
    expect_status(&mut r, "{sp, onto, !dict_scf} is unsatisfiable", &main, Status::Unsat);
    r.status = main.status;
    r.witnesses = witness_values(&main.witnesses, opts.witness_limit);
    dictatorial_census(&mut r, &full_spec(Family::Scf, n, m, "sp,onto")?, opts, "census {sp, onto}", Some(n as u128))?;
    Ok(r)
}

/// Muller-Satterthwaite: efficient monotone SCFs are dictatorial.
pub fn run_ms(n: usize, m: usize, opts: &RunOptions) -> Result<ScenarioReport> {
    pinned("ms", n, m)?;
    let mut r = ScenarioReport::new("ms", params(n, m, opts), opts.workers);
    r.expected = Some(Status::Unsat);
    let main = decide(&full_spec(Family::Scf, n, m, "eff,m,!dict_scf")?, opts)?;
    expect_status(&mut r, "{eff, m, !dict_scf} is unsatisfiable", &main, Status::Unsat);
    r.status = main.status;
    r.witnesses = witness_values(&main.witnesses, opts.witness_limit);
    dictatorial_census(&mut r, &full_spec(Family::Scf, n, m, "eff,m")?, opts, "census {eff, m}", Some(n as u128))?;
    Ok(r)
}

/// Moulin: on the single-peaked domain, anonymous efficient strategy-proof
/// SCFs are exactly the median rules.
pub fn run_moulin(n: usize, m: usize, opts: &RunOptions) -> Result<ScenarioReport> {
    pinned("moulin", n, m)?;
    let mut r = ScenarioReport::new("moulin", params(n, m, opts), opts.workers);
    r.expected = Some(Status::Sat);
    let (setting, axis) = single_peaked(n, m)?;
    r.params.insert("domain".into(), json!(setting.domain().words()));
    let spec = SearchSpec::new(Family::Scf, setting.clone(), parse_axioms("anon,eff,sp")?);
    let medians = median_rules(&setting, &axis)?;
    let distinct: BTreeSet<Vec<u32>> = medians.iter().map(|(_, t)| t.outcomes().to_vec()).collect();
    let members = census(&mut r, &spec, opts, "census {anon, eff, sp}", Some(3))?;
    r.status = if members.is_empty() { Status::Unsat } else { Status::Sat };
    let mut matched = Vec::new();
    for rule in &members {
        matched.push(is_median_rule(rule, &axis)?);
    }
    r.check(
        "every census member is a median rule",
        matched.iter().all(Option::is_some),
        format!("{} of {} matched", matched.iter().flatten().count(), members.len()),
    );
    let census_set: BTreeSet<Vec<u32>> = members.iter().map(|t| t.outcomes().to_vec()).collect();
    r.check(
        "every median rule is in the census",
        distinct.is_subset(&census_set),
        format!("{} distinct median rules", distinct.len()),
    );
    let phantoms: Vec<Value> =
        matched.iter().zip(&members).map(|(p, t)| json!({ "phantoms": p, "outcomes": t.outcomes() })).collect();
    r.classification = Some(json!({ "median_rules": phantoms }));
    r.witnesses = witness_values(&members, opts.witness_limit);
    Ok(r)
}

/// Kannai-Peleg: no weak order on the non-empty subsets satisfies GF and IND
/// once the ground set has six elements.
pub fn run_kp(size: usize, opts: &RunOptions) -> Result<ScenarioReport> {
    let ground = GroundSet::new(size)?;
    let mut p = Map::new();
    p.insert("size".into(), json!(size));
    p.insert("engine".into(), json!(Engine::Sat));
    let mut r = ScenarioReport::new("kp", p, 1);
    r.expected = (size >= 6).then_some(Status::Unsat);
    let config = crate::sat::solver::SolverConfig { time_budget: opts.time_budget, ..Default::default() };
    let start = std::time::Instant::now();
    let run = |axioms: SetAxioms| match setrank::kp_check_with(size, axioms, config.clone()) {
        Ok(o) => Ok(Some(o)),
        Err(Error::ResourceExhausted(_)) => Ok(None),
        Err(e) => Err(e),
    };
    let status_of = |o: &Option<KpOutcome>| match o {
        Some(KpOutcome::Sat(_)) => Status::Sat,
        Some(KpOutcome::Unsat) => Status::Unsat,
        None => Status::Exhausted,
    };
    let main = run(SetAxioms::BOTH)?;
    r.status = status_of(&main);
    if let Some(KpOutcome::Sat(w)) = &main {
        r.witnesses.push(serde_json::to_value(w.to_witness()?).expect("witness serializes"));
        r.check("witness passes the direct check", setrank::verify_set_witness(w).is_empty(), "GF, IND, weak order");
    }
    if let Some(e) = r.expected {
        r.check("{gf, ind} status", r.status == e, status_name(r.status));
    }
    let mut drops = Map::new();
    for (label, axioms) in
        [("gf only", SetAxioms { gf: true, ind: false }), ("ind only", SetAxioms { gf: false, ind: true })]
    {
        let o = run(axioms)?;
        drops.insert(label.into(), json!(status_of(&o)));
        r.check(
            format!("{label} is satisfiable"),
            o.as_ref().is_some_and(KpOutcome::is_sat),
            status_name(status_of(&o)),
        );
    }
    r.stats.time_ms = start.elapsed().as_millis() as u64;
    r.classification = Some(json!({ "subsets": ground.subset_count(), "single_axiom": drops }));
    Ok(r)
}

pub fn run_dict_domains(n: usize, m: usize, opts: &RunOptions) -> Result<ScenarioReport> {
    pinned("dict-domains", n, m)?;
    let mut r = ScenarioReport::new("dict-domains", params(n, m, opts), opts.workers);
    let start = std::time::Instant::now();
    let scan = scan_dictatorial_domains(m, n, opts)?;
    r.stats.time_ms = start.elapsed().as_millis() as u64;
    r.stats.nodes = scan.domains.iter().map(|d| d.nodes).sum();
    if opts.engine == Engine::Both {
        r.engines_agree = Some(scan.domains.iter().all(|d| d.engines_agree == Some(true)));
    }
    let full_words = Domain::full(m)?.words();
    let words = |ds: Vec<&super::DomainVerdict>| ds.into_iter().map(|d| d.domain.join(",")).collect::<Vec<_>>();
    let dictatorial = words(scan.dictatorial());
    let rich = words(scan.non_degenerate_dictatorial());
    let full = full_words.join(",");
    r.status = if dictatorial.contains(&full) { Status::Unsat } else { Status::Sat };
    r.expected = Some(Status::Unsat);
    r.check(
        "complete domain is dictatorial",
        dictatorial.contains(&full),
        format!("{} dictatorial domains", dictatorial.len()),
    );
    r.check(
        "no other domain is dictatorial",
        dictatorial == vec![full.clone()],
        format!("dictatorial: {}", dictatorial.join(" | ")),
    );
    r.check(
        "no other domain with two or more tops is dictatorial",
        rich == vec![full.clone()],
        format!("dictatorial with distinct tops: {}", rich.join(" | ")),
    );
    let missing = scan.domains.iter().filter(|d| !d.dictatorial && d.witness.is_none()).count();
    r.check("every non-dictatorial domain has a witness", missing == 0, format!("{missing} missing"));
    r.count = Some(dictatorial.len() as u128);
    r.witnesses = scan
        .domains
        .iter()
        .filter_map(|d| d.witness.as_ref())
        .take(opts.witness_limit)
        .map(|w| serde_json::to_value(w.to_witness()).expect("witness serializes"))
        .collect();
    r.classification = Some(json!({
        "dictatorial": dictatorial,
        "dictatorial_with_distinct_tops": rich,
        "domains": scan.domains,
    }));
    Ok(r)
}
