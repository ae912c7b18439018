//! Depth-first backtracking over partial rule tables.
//!
//! Every cell keeps a bitset of still-possible outcomes. Assigning a cell runs
//! the propagators of the required axioms (IIA pair directions, anonymity
//! classes, strategy-proofness and monotonicity neighbours), then a set of
//! existential look-aheads (a dictator candidate must survive, NI pairs must
//! stay reachable, ...). Leaves are re-checked with the evaluators in
//! [`crate::axioms`], so a witness is only ever reported after a full check.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::axioms::{
    decisive_agrees, evaluate, pareto_dominator, shared_top, weakly_improves, Axiom, AxiomId, Decisiveness, TriState,
};
use crate::error::{Error, Result};
use crate::rules::{Family, PartialRule, RuleTable, Setting};

/// Largest number of outcomes per cell the engine handles (one `u128` bitset).
pub const MAX_VALUES: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Stop at the first witness.
    Decide,
    /// Count all satisfying rules.
    Count,
    /// Collect up to `limit` witnesses in DFS order.
    Enumerate { limit: usize },
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub family: Family,
    pub setting: Arc<Setting>,
    pub axioms: Vec<Axiom>,
    pub mode: Mode,
    /// When false, the engine is plain generate-and-test.
    pub pruning: bool,
    pub workers: usize,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl SearchSpec {
    pub fn new(family: Family, setting: Arc<Setting>, axioms: Vec<Axiom>) -> Self {
        Self {
            family,
            setting,
            axioms,
            mode: Mode::Decide,
            pruning: true,
            workers: 1,
            node_budget: None,
            time_budget: None,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn counting(self) -> Self {
        self.with_mode(Mode::Count)
    }

    pub fn enumerating(self, limit: usize) -> Self {
        self.with_mode(Mode::Enumerate { limit })
    }

    pub fn with_pruning(mut self, pruning: bool) -> Self {
        self.pruning = pruning;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_node_budget(mut self, nodes: Option<u64>) -> Self {
        self.node_budget = nodes;
        self
    }

    pub fn with_time_budget(mut self, budget: Option<Duration>) -> Self {
        self.time_budget = budget;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.axioms {
            if a.family() != self.family {
                return Err(Error::FamilyMismatch { axiom: a.to_string(), family: self.family.to_string() });
            }
        }
        if let Mode::Enumerate { limit: 0 } = self.mode {
            return Err(Error::InvalidArgument("enumeration limit must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("worker count must be positive".into()));
        }
        let k = self.setting.value_count(self.family)?;
        if k > MAX_VALUES {
            return Err(Error::TooLarge(format!("{k} outcomes per profile exceed {MAX_VALUES}")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Sat,
    Unsat,
    /// A node or time budget ran out before the answer was known.
    Exhausted,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes_by_axiom: BTreeMap<String, u64>,
    pub time_ms: u64,
    pub workers: usize,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub status: Status,
    /// Exact in `Count` and `Enumerate` modes unless exhausted.
    pub count: Option<u128>,
    pub witnesses: Vec<RuleTable>,
    pub stats: SearchStats,
}

/// Runs the search described by `spec`.
pub fn solve(spec: &SearchSpec) -> Result<SearchResult> {
    spec.validate()?;
    let start = Instant::now();
    let plan = Plan::new(spec)?;
    let mut result = plan.run(start)?;
    result.stats.time_ms = start.elapsed().as_millis() as u64;
    Ok(result)
}

/// Exact number of total rules satisfying the spec's axioms.
pub fn count_models(spec: &SearchSpec) -> Result<u128> {
    let r = solve(&spec.clone().counting())?;
    match r.status {
        Status::Exhausted => Err(Error::ResourceExhausted(format!("after {} nodes", r.stats.nodes))),
        _ => Ok(r.count.unwrap_or(0)),
    }
}

pub fn enumerate_models(spec: &SearchSpec, limit: usize) -> Result<Vec<RuleTable>> {
    let r = solve(&spec.clone().enumerating(limit))?;
    match r.status {
        Status::Exhausted => Err(Error::ResourceExhausted(format!("after {} nodes", r.stats.nodes))),
        _ => Ok(r.witnesses),
    }
}

type Bits = u128;

fn bit(v: u32) -> Bits {
    1u128 << v
}

fn each_bit(mut d: Bits) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if d == 0 {
            None
        } else {
            let v = d.trailing_zeros();
            d &= d - 1;
            Some(v)
        }
    })
}

/// Social pair directions learned under IIA: for every unordered pair and
/// every pattern of the voters' restrictions to it, the social direction
/// once some profile with that pattern is assigned.
#[derive(Clone, Debug)]
pub struct PairPropagator {
    group_of: Vec<Vec<u32>>,
    members: Vec<Vec<Vec<u32>>>,
    forced: Vec<Vec<Option<bool>>>,
    upper_masks: Vec<Bits>,
    trail: Vec<(u32, u32)>,
}

impl PairPropagator {
    pub fn new(setting: &Setting) -> Self {
        let pairs = setting.pairs();
        let mut group_of = Vec::with_capacity(pairs.len());
        let mut members = Vec::with_capacity(pairs.len());
        let mut upper_masks = Vec::with_capacity(pairs.len());
        for (k, &(a, b)) in pairs.iter().enumerate() {
            let mut ids: BTreeMap<u64, u32> = BTreeMap::new();
            let mut groups: Vec<Vec<u32>> = Vec::new();
            let mut of = Vec::with_capacity(setting.cells());
            for cell in 0..setting.cells() {
                let next = ids.len() as u32;
                let g = *ids.entry(setting.pattern(cell, k)).or_insert(next);
                if g as usize == groups.len() {
                    groups.push(Vec::new());
                }
                groups[g as usize].push(cell as u32);
                of.push(g);
            }
            group_of.push(of);
            members.push(groups);
            upper_masks
                .push(setting.orders().iter().filter(|o| o.prefers(a, b)).fold(0, |m, o| m | bit(o.index() as u32)));
        }
        let forced = members.iter().map(|g| vec![None; g.len()]).collect();
        Self { group_of, members, forced, upper_masks, trail: Vec::new() }
    }

    /// The social direction (`true` = lower-indexed alternative on top)
    /// recorded for pair `k` at `cell`'s restriction pattern.
    pub fn forced(&self, k: usize, cell: usize) -> Option<bool> {
        self.forced[k][self.group_of[k][cell] as usize]
    }

    /// Profiles sharing `cell`'s restriction pattern on pair `k`.
    pub fn group(&self, k: usize, cell: usize) -> &[u32] {
        &self.members[k][self.group_of[k][cell] as usize]
    }

    /// Values (order indices) ranking pair `k` in direction `upper`.
    pub fn mask(&self, k: usize, upper: bool, full: Bits) -> Bits {
        if upper {
            self.upper_masks[k]
        } else {
            full & !self.upper_masks[k]
        }
    }

    fn record(&mut self, k: usize, cell: usize, upper: bool) -> bool {
        let g = self.group_of[k][cell];
        match self.forced[k][g as usize] {
            Some(d) => d == upper,
            None => {
                self.forced[k][g as usize] = Some(upper);
                self.trail.push((k as u32, g));
                false
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (k, g) = self.trail.pop().expect("non-empty trail");
            self.forced[k as usize][g as usize] = None;
        }
    }
}

/// Which voter-tracking predicate a dictatorship-style axiom compares against.
#[derive(Clone)]
struct Tracker {
    slot: usize,
    negated: bool,
    /// `target[cell * n + i]`: the value voter `i` would impose at `cell`.
    target: Vec<u32>,
}

struct LiberalCheck {
    slot: usize,
    /// `agree[(i * npairs + p) * cells + cell]`
    agree: Vec<Bits>,
    ordered: usize,
    voters: Vec<usize>,
    joint: bool,
}

/// Static precomputation shared by all workers.
struct Plan<'a> {
    spec: &'a SearchSpec,
    s: &'a Setting,
    nvals: usize,
    full: Bits,
    names: Vec<String>,
    iia: Option<(usize, PairPropagator)>,
    anon: Option<(usize, Vec<u32>, Vec<Vec<u32>>)>,
    sp: Option<usize>,
    mono: Option<usize>,
    trackers: Vec<Tracker>,
    ni: Option<(usize, Vec<Bits>)>,
    onto: Option<usize>,
    constant: Option<(usize, bool)>,
    liberal: Vec<LiberalCheck>,
    /// Axioms evaluated tri-state at every node (no dedicated propagator).
    node_checks: Vec<usize>,
}

impl<'a> Plan<'a> {
    fn new(spec: &'a SearchSpec) -> Result<Self> {
        let s: &Setting = &spec.setting;
        let nvals = s.value_count(spec.family)?;
        let full = if nvals == 128 { Bits::MAX } else { (1u128 << nvals) - 1 };
        let mut plan = Plan {
            spec,
            s,
            nvals,
            full,
            names: spec.axioms.iter().map(|a| a.to_string()).collect(),
            iia: None,
            anon: None,
            sp: None,
            mono: None,
            trackers: Vec::new(),
            ni: None,
            onto: None,
            constant: None,
            liberal: Vec::new(),
            node_checks: Vec::new(),
        };
        for (slot, a) in spec.axioms.iter().enumerate() {
            let mut handled = true;
            match (a.id, a.negated) {
                (AxiomId::Iia, false) => plan.iia = Some((slot, PairPropagator::new(s))),
                (AxiomId::Anon, false) => {
                    let mut ids: BTreeMap<Vec<usize>, u32> = BTreeMap::new();
                    let mut classes: Vec<Vec<u32>> = Vec::new();
                    let mut of = Vec::with_capacity(s.cells());
                    for cell in 0..s.cells() {
                        let next = ids.len() as u32;
                        let id = *ids.entry(crate::axioms::anonymity_class(s, cell)).or_insert(next);
                        if id as usize == classes.len() {
                            classes.push(Vec::new());
                        }
                        classes[id as usize].push(cell as u32);
                        of.push(id);
                    }
                    plan.anon = Some((slot, of, classes));
                }
                (AxiomId::Sp, false) => plan.sp = Some(slot),
                (AxiomId::M, false) => plan.mono = Some(slot),
                (id @ (AxiomId::Dict | AxiomId::AntiDict | AxiomId::DictScf), negated) => {
                    let mut target = Vec::with_capacity(s.cells() * s.n());
                    for cell in 0..s.cells() {
                        for i in 0..s.n() {
                            let o = s.voter_order(cell, i);
                            target.push(match id {
                                AxiomId::Dict => o.index(),
                                AxiomId::AntiDict => o.reversed().index(),
                                _ => o.top(),
                            } as u32);
                        }
                    }
                    plan.trackers.push(Tracker { slot, negated, target });
                }
                (AxiomId::Ni, false) => {
                    let m = s.m();
                    let masks = (0..m)
                        .flat_map(|x| (0..m).map(move |y| (x, y)))
                        .filter(|(x, y)| x != y)
                        .map(|(x, y)| {
                            s.orders().iter().filter(|o| o.prefers(x, y)).fold(0, |acc, o| acc | bit(o.index() as u32))
                        })
                        .collect();
                    plan.ni = Some((slot, masks));
                }
                (AxiomId::Onto, false) => plan.onto = Some(slot),
                (AxiomId::Const, negated) => plan.constant = Some((slot, negated)),
                (AxiomId::Liberal(_) | AxiomId::Decisive(_), false) => {
                    let (mode, voters, joint) = match a.id {
                        AxiomId::Liberal(mode) => (mode, (0..s.n()).collect::<Vec<_>>(), true),
                        AxiomId::Decisive(i) => (Decisiveness::Relation, vec![i], false),
                        _ => unreachable!(),
                    };
                    plan.liberal.push(LiberalCheck::new(s, nvals, slot, mode, voters, joint));
                }
                (AxiomId::Wp | AxiomId::USdf | AxiomId::Eff | AxiomId::UScf, false) => {}
                _ => handled = false,
            }
            if !handled {
                plan.node_checks.push(slot);
            }
        }
        Ok(plan)
    }

    /// Single-cell restriction imposed by unanimity-type axioms.
    fn unary_ok(&self, cell: usize, v: u32) -> bool {
        let s = self.s;
        self.spec.axioms.iter().filter(|a| !a.negated).all(|a| match a.id {
            AxiomId::Wp => s.pairs().iter().enumerate().all(|(k, &(x, y))| {
                let pat = s.pattern(cell, k);
                let o = s.order(v as usize);
                (pat != s.all_voters_mask() || o.prefers(x, y)) && (pat != 0 || o.prefers(y, x))
            }),
            AxiomId::USdf => {
                let rel = s.relations().expect("sdf relations")[v as usize];
                s.pairs().iter().enumerate().all(|(k, &(x, y))| {
                    let pat = s.pattern(cell, k);
                    (pat != s.all_voters_mask() || rel.strict(x, y)) && (pat != 0 || rel.strict(y, x))
                })
            }
            AxiomId::Eff => pareto_dominator(s, cell, v as usize).is_none(),
            AxiomId::UScf => shared_top(s, cell).is_none_or(|t| t == v as usize),
            _ => true,
        })
    }

    fn root_domains(&self) -> Vec<Bits> {
        (0..self.s.cells())
            .map(|cell| {
                if !self.spec.pruning {
                    return self.full;
                }
                (0..self.nvals as u32).filter(|&v| self.unary_ok(cell, v)).fold(0, |d, v| d | bit(v))
            })
            .collect()
    }

    fn run(&self, start: Instant) -> Result<SearchResult> {
        let shared = Shared {
            nodes: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
            best_root: AtomicUsize::new(usize::MAX),
            deadline: self.spec.time_budget.map(|d| start + d),
            budget: self.spec.node_budget,
        };
        let mut root = Worker::new(self, &shared, self.root_domains())?;
        let workers = self.spec.workers;
        let mut stats = SearchStats { workers, ..Default::default() };
        let mut prunes = vec![0u64; self.spec.axioms.len()];

        let root_ok = !self.spec.pruning || root.lookahead();
        let mut parts: Vec<Part> = Vec::new();
        if !root_ok {
            prunes.iter_mut().zip(&root.prunes).for_each(|(p, r)| *p += r);
        } else {
            let first: Vec<u32> = each_bit(root.dom[0]).collect();
            let slots: Vec<Mutex<Option<Part>>> = first.iter().map(|_| Mutex::new(None)).collect();
            let next = AtomicUsize::new(0);
            let error: Mutex<Option<Error>> = Mutex::new(None);
            let shared = &shared;
            std::thread::scope(|scope| {
                for _ in 0..workers.min(first.len().max(1)) {
                    let root = &root;
                    let (first, slots, next, error) = (&first, &slots, &next, &error);
                    std::thread::Builder::new()
                        .stack_size(256 << 20)
                        .spawn_scoped(scope, move || {
                            let mut w = root.fork();
                            loop {
                                let idx = next.fetch_add(1, Ordering::SeqCst);
                                if idx >= first.len() {
                                    break;
                                }
                                if self.spec.mode == Mode::Decide && shared.best_root.load(Ordering::SeqCst) < idx {
                                    continue;
                                }
                                match w.subtree(first[idx], idx) {
                                    Ok(part) => *slots[idx].lock().unwrap() = Some(part),
                                    Err(e) => {
                                        error.lock().unwrap().get_or_insert(e);
                                        break;
                                    }
                                }
                            }
                        })
                        .expect("spawn search worker");
                }
            });
            if let Some(e) = error.into_inner().unwrap() {
                return Err(e);
            }
            parts = slots.into_iter().filter_map(|m| m.into_inner().unwrap()).collect();
        }

        let mut count: u128 = 0;
        let mut witnesses = Vec::new();
        let limit = match self.spec.mode {
            Mode::Decide => 1,
            Mode::Count => 0,
            Mode::Enumerate { limit } => limit,
        };
        for part in &parts {
            count += part.count;
            for (p, r) in prunes.iter_mut().zip(&part.prunes) {
                *p += r;
            }
            for w in &part.witnesses {
                if witnesses.len() < limit {
                    witnesses.push(w.clone());
                }
            }
        }
        stats.nodes = shared.nodes.load(Ordering::SeqCst);
        for (name, p) in self.names.iter().zip(prunes) {
            if p > 0 {
                *stats.prunes_by_axiom.entry(name.clone()).or_insert(0) += p;
            }
        }
        let found = count > 0 || !witnesses.is_empty();
        let exhausted = shared.exhausted.load(Ordering::SeqCst);
        let status = if found && self.spec.mode == Mode::Decide {
            Status::Sat
        } else if exhausted {
            Status::Exhausted
        } else if found {
            Status::Sat
        } else {
            Status::Unsat
        };
        let count = match (self.spec.mode, status) {
            (_, Status::Exhausted) => None,
            (Mode::Decide, _) => None,
            (Mode::Count, _) => Some(count),
            (Mode::Enumerate { .. }, _) => Some(count.min(limit as u128)),
        };
        Ok(SearchResult { status, count, witnesses, stats })
    }
}

impl LiberalCheck {
    fn new(s: &Setting, nvals: usize, slot: usize, mode: Decisiveness, voters: Vec<usize>, joint: bool) -> Self {
        let m = s.m();
        let ordered: Vec<(usize, usize)> =
            (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
        let voters: Vec<usize> = voters.into_iter().filter(|&i| i < s.n()).collect();
        let mut agree = Vec::with_capacity(voters.len() * ordered.len() * s.cells());
        for &i in &voters {
            for &(a1, a2) in &ordered {
                for cell in 0..s.cells() {
                    let mask = (0..nvals as u32)
                        .filter(|&v| decisive_agrees(s, mode, cell, i, v, a1, a2))
                        .fold(0, |d, v| d | bit(v));
                    agree.push(mask);
                }
            }
        }
        Self { slot, agree, ordered: ordered.len(), voters, joint }
    }

    fn mask(&self, vi: usize, p: usize, cells: usize, cell: usize) -> Bits {
        self.agree[(vi * self.ordered + p) * cells + cell]
    }

    /// Can the remaining domains still realise enough decisive voters?
    fn alive(&self, dom: &[Bits]) -> bool {
        let cells = dom.len();
        let single: Vec<Vec<usize>> = (0..self.voters.len())
            .map(|vi| {
                (0..self.ordered).filter(|&p| (0..cells).all(|c| dom[c] & self.mask(vi, p, cells, c) != 0)).collect()
            })
            .collect();
        if !self.joint {
            return single.iter().any(|ps| !ps.is_empty());
        }
        for vi in 0..self.voters.len() {
            for vj in vi + 1..self.voters.len() {
                for &p in &single[vi] {
                    for &q in &single[vj] {
                        if (0..cells).all(|c| dom[c] & self.mask(vi, p, cells, c) & self.mask(vj, q, cells, c) != 0) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

struct Shared {
    nodes: AtomicU64,
    exhausted: AtomicBool,
    best_root: AtomicUsize,
    deadline: Option<Instant>,
    budget: Option<u64>,
}

struct Part {
    count: u128,
    witnesses: Vec<RuleTable>,
    prunes: Vec<u64>,
}

struct Worker<'p> {
    plan: &'p Plan<'p>,
    shared: &'p Shared,
    dom: Vec<Bits>,
    trail: Vec<(u32, Bits)>,
    partial: PartialRule,
    iia: Option<PairPropagator>,
    prunes: Vec<u64>,
    count: u128,
    witnesses: Vec<RuleTable>,
    root_index: usize,
}

enum Flow {
    Continue,
    Stop,
}

impl<'p> Worker<'p> {
    fn new(plan: &'p Plan<'p>, shared: &'p Shared, dom: Vec<Bits>) -> Result<Self> {
        Ok(Self {
            plan,
            shared,
            dom,
            trail: Vec::new(),
            partial: PartialRule::empty(plan.spec.family, plan.spec.setting.clone())?,
            iia: plan.iia.as_ref().map(|(_, p)| p.clone()),
            prunes: vec![0; plan.spec.axioms.len()],
            count: 0,
            witnesses: Vec::new(),
            root_index: 0,
        })
    }

    fn fork(&self) -> Self {
        Self {
            plan: self.plan,
            shared: self.shared,
            dom: self.dom.clone(),
            trail: Vec::new(),
            partial: self.partial.clone(),
            iia: self.iia.clone(),
            prunes: vec![0; self.prunes.len()],
            count: 0,
            witnesses: Vec::new(),
            root_index: 0,
        }
    }

    fn subtree(&mut self, value: u32, root_index: usize) -> Result<Part> {
        self.count = 0;
        self.witnesses.clear();
        self.prunes.iter_mut().for_each(|p| *p = 0);
        self.root_index = root_index;
        self.branch(0, value)?;
        Ok(Part { count: self.count, witnesses: std::mem::take(&mut self.witnesses), prunes: self.prunes.clone() })
    }

    fn set_dom(&mut self, cell: usize, d: Bits) {
        if self.dom[cell] != d {
            self.trail.push((cell as u32, self.dom[cell]));
            self.dom[cell] = d;
        }
    }

    fn restrict(&mut self, cell: usize, mask: Bits) -> bool {
        let d = self.dom[cell] & mask;
        self.set_dom(cell, d);
        d != 0
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (cell, old) = self.trail.pop().expect("non-empty trail");
            self.dom[cell as usize] = old;
        }
    }

    fn tick(&self) -> bool {
        let n = self.shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.shared.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        let over_nodes = self.shared.budget.is_some_and(|b| n > b);
        let over_time = n.is_multiple_of(256) && self.shared.deadline.is_some_and(|d| Instant::now() > d);
        if over_nodes || over_time {
            self.shared.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn dfs(&mut self, cell: usize) -> Result<Flow> {
        if cell == self.dom.len() {
            return self.leaf();
        }
        for v in each_bit(self.dom[cell]).collect::<Vec<_>>() {
            if let Flow::Stop = self.branch(cell, v)? {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }

    fn branch(&mut self, cell: usize, v: u32) -> Result<Flow> {
        if !self.tick() {
            return Ok(Flow::Stop);
        }
        if self.plan.spec.mode == Mode::Decide && self.shared.best_root.load(Ordering::Relaxed) < self.root_index {
            return Ok(Flow::Stop);
        }
        let mark = self.trail.len();
        let iia_mark = self.iia.as_ref().map_or(0, |p| p.trail.len());
        self.set_dom(cell, bit(v));
        self.partial.set_unchecked(cell, v);
        let ok = !self.plan.spec.pruning || (self.propagate(cell, v) && self.lookahead() && self.node_checks());
        let flow = if ok { self.dfs(cell + 1)? } else { Flow::Continue };
        self.partial.unassign(cell);
        self.undo_to(mark);
        if let Some(p) = self.iia.as_mut() {
            p.undo_to(iia_mark);
        }
        Ok(flow)
    }

    fn prune(&mut self, slot: usize) -> bool {
        self.prunes[slot] += 1;
        false
    }

    fn propagate(&mut self, cell: usize, v: u32) -> bool {
        let plan = self.plan;
        let s = plan.s;
        if let Some((slot, _)) = plan.iia {
            let mut iia = self.iia.take().expect("pair propagator");
            let mut ok = true;
            'pairs: for (k, &(a, b)) in s.pairs().iter().enumerate() {
                let upper = s.order(v as usize).prefers(a, b);
                if iia.record(k, cell, upper) {
                    continue;
                }
                let mask = iia.mask(k, upper, plan.full);
                for &c in iia.group(k, cell) {
                    if !self.restrict(c as usize, mask) {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            self.iia = Some(iia);
            if !ok {
                return self.prune(slot);
            }
        }
        if let Some((slot, of, classes)) = &plan.anon {
            for &c in &classes[of[cell] as usize] {
                if !self.restrict(c as usize, bit(v)) {
                    return self.prune(*slot);
                }
            }
        }
        if let Some(slot) = plan.sp {
            let d = s.domain().len();
            for i in 0..s.n() {
                let own = s.voter_position(cell, i);
                let truth = s.voter_order(cell, i);
                let above_v = (0..s.m()).filter(|&y| truth.prefers(y, v as usize)).fold(0, |m, y| m | bit(y as u32));
                for pos in (0..d).filter(|&p| p != own) {
                    let other = s.with_voter(cell, i, pos);
                    // `other` as a misreport from `cell`, and `cell` as a misreport from `other`
                    let other_truth = s.voter_order(other, i);
                    let below_v =
                        (0..s.m()).filter(|&x| other_truth.prefers(v as usize, x)).fold(0, |m, x| m | bit(x as u32));
                    if !self.restrict(other, plan.full & !above_v & !below_v) {
                        return self.prune(slot);
                    }
                }
            }
        }
        if let Some(slot) = plan.mono {
            for other in (0..s.cells()).filter(|&c| c != cell) {
                let mut keep = plan.full;
                if weakly_improves(s, cell, other, v as usize) {
                    keep &= bit(v);
                }
                for x in each_bit(self.dom[other] & !bit(v)) {
                    if weakly_improves(s, other, cell, x as usize) {
                        keep &= !bit(x);
                    }
                }
                if !self.restrict(other, keep) {
                    return self.prune(slot);
                }
            }
        }
        true
    }

    /// Existential conditions that must stay reachable from the domains.
    fn lookahead(&mut self) -> bool {
        let plan = self.plan;
        let s = plan.s;
        let (n, cells) = (s.n(), s.cells());
        for t in &plan.trackers {
            if t.negated {
                let pinned = (0..n).any(|i| (0..cells).all(|c| self.dom[c] == bit(t.target[c * n + i])));
                if pinned {
                    return self.prune(t.slot);
                }
            } else {
                let candidates: Vec<usize> =
                    (0..n).filter(|&i| (0..cells).all(|c| self.dom[c] & bit(t.target[c * n + i]) != 0)).collect();
                match candidates.as_slice() {
                    [] => return self.prune(t.slot),
                    [i] => {
                        let i = *i;
                        for c in 0..cells {
                            self.restrict(c, bit(t.target[c * n + i]));
                        }
                    }
                    _ => {}
                }
            }
        }
        if let Some((slot, negated)) = plan.constant {
            if negated {
                let first = self.dom[0];
                if first.count_ones() == 1 && self.dom.iter().all(|&d| d == first) {
                    return self.prune(slot);
                }
            } else {
                let common = self.dom.iter().fold(plan.full, |acc, &d| acc & d);
                if common == 0 {
                    return self.prune(slot);
                }
                for c in 0..cells {
                    self.restrict(c, common);
                }
            }
        }
        if let Some((slot, masks)) = &plan.ni {
            if !masks.iter().all(|&m| self.dom.iter().any(|&d| d & m != 0)) {
                return self.prune(*slot);
            }
        }
        if let Some(slot) = plan.onto {
            let reach = self.dom.iter().fold(0, |acc, &d| acc | d);
            if reach != plan.full {
                return self.prune(slot);
            }
        }
        for l in &plan.liberal {
            if !l.alive(&self.dom) {
                return self.prune(l.slot);
            }
        }
        true
    }

    fn node_checks(&mut self) -> bool {
        for &slot in &self.plan.node_checks {
            let a = &self.plan.spec.axioms[slot];
            if let Ok(TriState::Violated(_)) = evaluate(a, &self.partial) {
                return self.prune(slot);
            }
        }
        true
    }

    fn leaf(&mut self) -> Result<Flow> {
        for (slot, a) in self.plan.spec.axioms.iter().enumerate() {
            if !evaluate(a, &self.partial)?.is_satisfied() {
                self.prunes[slot] += 1;
                return Ok(Flow::Continue);
            }
        }
        self.count += 1;
        match self.plan.spec.mode {
            Mode::Count => Ok(Flow::Continue),
            Mode::Decide => {
                self.witnesses.push(self.partial.to_total()?);
                self.shared.best_root.fetch_min(self.root_index, Ordering::SeqCst);
                Ok(Flow::Stop)
            }
            Mode::Enumerate { limit } => {
                self.witnesses.push(self.partial.to_total()?);
                Ok(if self.witnesses.len() >= limit { Flow::Stop } else { Flow::Continue })
            }
        }
    }
}
