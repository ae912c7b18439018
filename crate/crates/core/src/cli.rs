//! Command-line front end.
//!
//! Exit codes: 0 when the run completes (and matches a registered
//! expectation), 1 when an expectation or certificate check fails, 2 on usage
//! or input errors, 3 when a budget runs out.

use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::axioms::{first_violation, parse_axioms, Axiom};
use crate::error::{Error, Result};
use crate::prefcore::{Domain, LinearOrder};
use crate::rules::{Family, Setting};
use crate::sat::cnf::{CnfFormula, Model};
use crate::sat::encode::{decode_rule, encode, header_spec};
use crate::search::{SearchSpec, Status};
use crate::setrank::{self, GroundSet, KpOutcome, SetAxioms, SetWeakOrder, SetWitness};
use crate::theorems::{self, Engine, RunOptions, ScenarioParams, ScenarioReport, Verdict};

#[derive(Parser, Debug)]
#[command(name = "choicecheck", version, about = "Finite verification of social-choice theorems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a registered theorem scenario.
    Theorem(TheoremArgs),
    /// Count the rules satisfying a set of axioms.
    Count(QueryArgs),
    /// List rules satisfying a set of axioms.
    Enumerate(QueryArgs),
    /// Write a scenario's or query's CNF encoding in DIMACS format.
    CnfExport(ExportArgs),
    /// Check an external model against a DIMACS file written by `cnf-export`.
    CnfCheck(CheckArgs),
    /// Scan all preference domains for dictatorial ones.
    Domains(DomainsArgs),
    /// Decide the set-ranking problem under GF and IND.
    Setrank(SetrankArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Budget {
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub node_budget: Option<u64>,
    #[arg(long)]
    pub time_budget_ms: Option<u64>,
}

#[derive(Args, Debug)]
pub struct TheoremArgs {
    /// One of: arrow, iia-census, wilson, sen, gs, ms, moulin, kp, dict-domains.
    pub name: String,
    #[arg(long, default_value_t = 2)]
    pub voters: usize,
    #[arg(long, default_value_t = 3)]
    pub alts: usize,
    /// Ground-set size for `kp`.
    #[arg(long, default_value_t = 6)]
    pub size: usize,
    #[arg(long, default_value = "both")]
    pub engine: Engine,
    /// Witnesses to include in the report.
    #[arg(long, default_value_t = 3)]
    pub limit: usize,
    #[command(flatten)]
    pub budget: Budget,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    /// Comma-separated axiom names; prefix `!` negates.
    #[arg(long, default_value = "")]
    pub axioms: String,
    /// Rule family; inferred from the axioms when omitted.
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long, default_value_t = 2)]
    pub voters: usize,
    #[arg(long, default_value_t = 3)]
    pub alts: usize,
    /// `full`, `sp` (single-peaked on abc…), `sp:<axis>`, or a list such as `abc,bca`.
    #[arg(long, default_value = "full")]
    pub domain: String,
    #[arg(long, default_value = "both")]
    pub engine: Engine,
    /// Largest number of rules to list.
    #[arg(long, default_value_t = 10)]
    pub limit: usize,
    #[command(flatten)]
    pub budget: Budget,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    /// Registered scenario; omit to export the `--axioms` query instead.
    pub scenario: Option<String>,
    #[arg(long)]
    pub axioms: Option<String>,
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long, default_value_t = 2)]
    pub voters: usize,
    #[arg(long, default_value_t = 3)]
    pub alts: usize,
    #[arg(long, default_value = "full")]
    pub domain: String,
    #[arg(long, default_value_t = 6)]
    pub size: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub formula: PathBuf,
    /// Model as `v` lines or bare literals.
    pub model: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct DomainsArgs {
    #[arg(long, default_value_t = 2)]
    pub voters: usize,
    #[arg(long, default_value_t = 3)]
    pub alts: usize,
    #[arg(long, default_value = "both")]
    pub engine: Engine,
    #[arg(long, default_value_t = 3)]
    pub limit: usize,
    #[command(flatten)]
    pub budget: Budget,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Drop {
    Gf,
    Ind,
}

#[derive(Args, Debug)]
pub struct SetrankArgs {
    #[arg(long, default_value_t = 6)]
    pub size: usize,
    /// Leave one axiom out.
    #[arg(long, value_enum)]
    pub drop: Option<Drop>,
    /// Verify a witness file instead of solving.
    #[arg(long)]
    pub check: Option<PathBuf>,
    #[arg(long)]
    pub time_budget_ms: Option<u64>,
    #[command(flatten)]
    pub output: Output,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceExhausted(_) => 3,
        Error::Witness(_) => 1,
        _ => 2,
    }
}

fn budget_options(engine: Engine, b: &Budget, witness_limit: usize) -> Result<RunOptions> {
    if b.workers == 0 {
        return Err(Error::InvalidArgument("--workers must be at least 1".into()));
    }
    Ok(RunOptions {
        engine,
        workers: b.workers,
        node_budget: b.node_budget,
        time_budget: b.time_budget_ms.map(Duration::from_millis),
        witness_limit,
    })
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Theorem(a) => {
            if !theorems::SCENARIOS.contains(&a.name.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "unknown scenario `{}` (accepted: {})",
                    a.name,
                    theorems::SCENARIOS.join(", ")
                )));
            }
            let opts = budget_options(a.engine, &a.budget, a.limit)?;
            let params = ScenarioParams { voters: a.voters, alts: a.alts, size: a.size };
            let report = theorems::run_scenario(&a.name, params, &opts)?;
            emit_report(&report, &a.output, stdout)?;
            Ok(verdict_code(&report))
        }
        Command::Count(a) => query(a, false, stdout),
        Command::Enumerate(a) => query(a, true, stdout),
        Command::CnfExport(a) => export(a, stdout),
        Command::CnfCheck(a) => check(a, stdout),
        Command::Domains(a) => {
            let opts = budget_options(a.engine, &a.budget, a.limit)?;
            let report = theorems::run_dict_domains(a.voters, a.alts, &opts)?;
            emit_report(&report, &a.output, stdout)?;
            Ok(verdict_code(&report))
        }
        Command::Setrank(a) => setrank_cmd(a, stdout),
    }
}

fn verdict_code(r: &ScenarioReport) -> i32 {
    match r.verdict() {
        Verdict::Confirmed => 0,
        Verdict::Contradicted => 1,
        Verdict::Exhausted => 3,
    }
}

/// `full`, `sp`, `sp:<axis>` or an explicit list of orders.
pub fn parse_domain(s: &str, m: usize) -> Result<Domain> {
    let d = match s {
        "full" => Domain::full(m)?,
        "sp" => Domain::single_peaked(m, &LinearOrder::from_word(&(0..m).collect::<Vec<_>>())?)?,
        _ => match s.strip_prefix("sp:") {
            Some(axis) => Domain::single_peaked(m, &LinearOrder::parse(axis)?)?,
            None => Domain::parse(s)?,
        },
    };
    if d.m() != m {
        return Err(Error::InvalidArgument(format!("domain `{s}` has {} alternatives, --alts is {m}", d.m())));
    }
    Ok(d)
}

fn query_spec(
    axioms: &str,
    family: Option<Family>,
    voters: usize,
    alts: usize,
    domain: &str,
) -> Result<(SearchSpec, Vec<Axiom>)> {
    let axioms = if axioms.trim().is_empty() { Vec::new() } else { parse_axioms(axioms)? };
    let family = match (family, axioms.first()) {
        (Some(f), _) => f,
        (None, Some(a)) => a.family(),
        (None, None) => {
            return Err(Error::InvalidArgument("an empty axiom set needs --family (aswf, scf or sdf)".into()))
        }
    };
    if voters == 0 {
        return Err(Error::InvalidArgument("--voters must be at least 1".into()));
    }
    let setting = Setting::new(voters, parse_domain(domain, alts)?)?;
    let spec = SearchSpec::new(family, setting, axioms.clone());
    spec.validate()?;
    Ok((spec, axioms))
}

fn query(a: QueryArgs, list: bool, stdout: &mut dyn Write) -> Result<i32> {
    if list && a.limit == 0 {
        return Err(Error::InvalidArgument("--limit must be positive".into()));
    }
    let (spec, axioms) = query_spec(&a.axioms, a.family, a.voters, a.alts, &a.domain)?;
    let opts = budget_options(a.engine, &a.budget, a.limit)?;
    let q = if list { theorems::enumerate(&spec, a.limit, &opts)? } else { theorems::count(&spec, &opts)? };
    let mut params = Map::new();
    params.insert("axioms".into(), json!(axioms.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
    params.insert("family".into(), json!(spec.family));
    params.insert("voters".into(), json!(a.voters));
    params.insert("alts".into(), json!(a.alts));
    params.insert("domain".into(), json!(spec.setting.domain().words()));
    params.insert("engine".into(), json!(a.engine));
    if list {
        params.insert("limit".into(), json!(a.limit));
    }
    let mut r = ScenarioReport::new(if list { "enumerate" } else { "count" }, params, a.budget.workers);
    r.absorb(&q);
    r.status = q.status;
    r.count = q.count;
    if list {
        r.witnesses = q.witnesses.iter().map(|w| serde_json::to_value(w.to_witness())).collect::<Result<_, _>>()?;
    }
    emit_report(&r, &a.output, stdout)?;
    Ok(verdict_code(&r))
}

fn export(a: ExportArgs, stdout: &mut dyn Write) -> Result<i32> {
    let formula = match (&a.scenario, &a.axioms) {
        (Some(_), Some(_)) => return Err(Error::InvalidArgument("give a scenario or --axioms, not both".into())),
        (Some(name), None) => {
            theorems::scenario_formula(name, ScenarioParams { voters: a.voters, alts: a.alts, size: a.size })?
        }
        (None, Some(ax)) => encode(&query_spec(ax, a.family, a.voters, a.alts, &a.domain)?.0)?.formula,
        (None, None) => return Err(Error::InvalidArgument("cnf-export needs a scenario name or --axioms".into())),
    };
    let text = formula.write_dimacs();
    match &a.out {
        Some(path) => std::fs::write(path, &text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn check(a: CheckArgs, stdout: &mut dyn Write) -> Result<i32> {
    let formula = CnfFormula::parse_dimacs(&std::fs::read_to_string(&a.formula)?)?;
    let model = Model::parse(&std::fs::read_to_string(&a.model)?, formula.num_vars())?;
    let mut problems: Vec<String> = formula
        .violated_clauses(&model)
        .into_iter()
        .map(|i| {
            let lits: Vec<String> = formula.clauses()[i].iter().map(|l| l.to_string()).collect();
            format!("clause {} violated: {} 0", i + 1, lits.join(" "))
        })
        .collect();
    let mut decoded = Value::Null;
    if let Some((ground, axioms)) = setrank::header(&formula) {
        let w = setrank::decode(ground, &model)?;
        problems.extend(setrank::verify_set_witness_with(&w, axioms).iter().map(|v| v.to_string()));
        if let Ok(wit) = w.to_witness() {
            decoded = serde_json::to_value(wit)?;
        }
    } else if formula.meta_value("family").is_some() {
        let (family, setting, axioms) = header_spec(&formula)?;
        match decode_rule(family, &setting, &model) {
            Ok(rule) => {
                if let Some(c) = first_violation(&axioms, &rule)? {
                    problems.push(format!("axiom {} violated: {}", c.axiom, serde_json::to_string(&c.evidence)?));
                }
                decoded = serde_json::to_value(rule.to_witness())?;
            }
            Err(e) => problems.push(e.to_string()),
        }
    }
    let pass = problems.is_empty();
    match a.format {
        Format::Json => {
            let v = json!({ "pass": pass, "problems": problems, "decoded": decoded });
            writeln!(stdout, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Format::Text => {
            writeln!(stdout, "{}", if pass { "pass" } else { "fail" })?;
            for p in &problems {
                writeln!(stdout, "  {p}")?;
            }
        }
    }
    Ok(if pass { 0 } else { 1 })
}

fn setrank_cmd(a: SetrankArgs, stdout: &mut dyn Write) -> Result<i32> {
    let ground = GroundSet::new(a.size)?;
    let axioms = match a.drop {
        None => SetAxioms::BOTH,
        Some(Drop::Gf) => SetAxioms { gf: false, ind: true },
        Some(Drop::Ind) => SetAxioms { gf: true, ind: false },
    };
    let mut params = Map::new();
    params.insert("size".into(), json!(a.size));
    params.insert("gf".into(), json!(axioms.gf));
    params.insert("ind".into(), json!(axioms.ind));
    if let Some(path) = &a.check {
        let w: SetWitness = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if w.size != ground.size() {
            return Err(Error::InvalidArgument(format!("witness has size {}, --size is {}", w.size, ground.size())));
        }
        let order = SetWeakOrder::from_witness(&w)?;
        let violations = setrank::verify_set_witness_with(&order, axioms);
        let mut r = ScenarioReport::new("setrank-check", params, 1);
        r.status = Status::Sat;
        for v in &violations {
            r.check("witness", false, v.to_string());
        }
        if violations.is_empty() {
            r.check("witness", true, "weak order satisfying the selected axioms");
        }
        emit_report(&r, &a.output, stdout)?;
        return Ok(verdict_code(&r));
    }
    let config = crate::sat::solver::SolverConfig {
        time_budget: a.time_budget_ms.map(Duration::from_millis),
        ..Default::default()
    };
    let start = std::time::Instant::now();
    let outcome = setrank::kp_check_with(a.size, axioms, config)?;
    let mut r = ScenarioReport::new("setrank", params, 1);
    r.stats.time_ms = start.elapsed().as_millis() as u64;
    if axioms == SetAxioms::BOTH && a.size >= 6 {
        r.expected = Some(Status::Unsat);
    }
    match &outcome {
        KpOutcome::Sat(w) => {
            r.status = Status::Sat;
            r.witnesses.push(serde_json::to_value(w.to_witness()?)?);
        }
        KpOutcome::Unsat => r.status = Status::Unsat,
    }
    emit_report(&r, &a.output, stdout)?;
    Ok(verdict_code(&r))
}

fn emit_report(r: &ScenarioReport, out: &Output, stdout: &mut dyn Write) -> Result<()> {
    let text = match out.format {
        Format::Json => serde_json::to_string_pretty(r)? + "\n",
        Format::Text => text_report(r),
    };
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Sat => "sat",
        Status::Unsat => "unsat",
        Status::Exhausted => "exhausted",
    }
}

fn text_report(r: &ScenarioReport) -> String {
    let mut rows: Vec<(String, String)> = Vec::new();
    rows.push(("scenario".into(), r.scenario.clone()));
    let params: Vec<String> = r
        .params
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            Value::Array(items) => {
                let parts: Vec<String> =
                    items.iter().map(|i| i.as_str().map(str::to_string).unwrap_or_else(|| i.to_string())).collect();
                format!("{k}={}", parts.join(","))
            }
            other => format!("{k}={other}"),
        })
        .collect();
    rows.push(("params".into(), params.join(" ")));
    let status = match r.expected {
        Some(e) => format!("{} (expected {})", status_word(r.status), status_word(e)),
        None => status_word(r.status).to_string(),
    };
    rows.push(("status".into(), status));
    if let Some(c) = r.count {
        rows.push(("count".into(), c.to_string()));
    }
    if let Some(agree) = r.engines_agree {
        rows.push(("engines".into(), if agree { "agree" } else { "DISAGREE" }.into()));
    }
    rows.push(("nodes".into(), r.stats.nodes.to_string()));
    rows.push(("time_ms".into(), r.stats.time_ms.to_string()));
    rows.push(("witnesses".into(), r.witnesses.len().to_string()));
    let verdict = match r.verdict() {
        Verdict::Confirmed => "confirmed",
        Verdict::Contradicted => "CONTRADICTED",
        Verdict::Exhausted => "budget exhausted",
    };
    rows.push(("verdict".into(), verdict.into()));
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<10} {v}\n"));
    }
    for c in &r.checks {
        out.push_str(&format!("  {:<4} {}: {}\n", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail));
    }
    out
}
