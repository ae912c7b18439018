//! A complete CDCL solver: two watched literals, first-UIP learning with
//! local minimisation, LBD-based clause deletion, Luby restarts.
//!
//! Branching is either the lowest-index unassigned variable (false first) or
//! VSIDS with phase saving; ties in VSIDS break towards the lower index, so
//! both are deterministic. With learning disabled the solver runs plain
//! chronological DPLL.

use std::time::{Duration, Instant};

use super::cnf::{CnfFormula, Lit, Model};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branching {
    /// Lowest-index unassigned variable, value false first.
    Lowest,
    Vsids,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub learning: bool,
    pub branching: Branching,
    pub conflict_budget: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { learning: true, branching: Branching::Lowest, conflict_budget: None, time_budget: None }
    }
}

impl SolverConfig {
    pub fn vsids() -> Self {
        Self { branching: Branching::Vsids, ..Self::default() }
    }

    pub fn dpll() -> Self {
        Self { learning: false, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatOutcome {
    Sat(Model),
    Unsat,
    /// A conflict or time budget ran out.
    Unknown,
}

impl SatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SatOutcome::Unsat)
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            SatOutcome::Sat(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolverStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learnt_clauses: u64,
}

/// Solves with the default configuration.
pub fn solve_cnf(f: &CnfFormula) -> SatOutcome {
    solve_with(f, SolverConfig::default())
}

pub fn solve_with(f: &CnfFormula, config: SolverConfig) -> SatOutcome {
    let mut s = Solver::new(f.num_vars(), config);
    for c in f.clauses() {
        s.add_clause(c);
    }
    s.solve()
}

const UNDEF: i8 = 0;
const NO_REASON: u32 = u32::MAX;

// Internal literal: 2 * var + (1 if negative), var 0-based.
type ILit = u32;

fn ilit(l: Lit) -> ILit {
    let v = l.unsigned_abs() - 1;
    2 * v + (l < 0) as u32
}

fn var(l: ILit) -> usize {
    (l >> 1) as usize
}

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: ILit,
}

struct Clause {
    lits: Vec<ILit>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
    activity: f64,
}

pub struct Solver {
    config: SolverConfig,
    nvars: usize,
    clauses: Vec<Clause>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<ILit>,
    trail_lim: Vec<usize>,
    flipped: Vec<bool>,
    qhead: usize,
    ok: bool,
    cursor: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    max_learnts: f64,
    pub stats: SolverStats,
}

impl Solver {
    pub fn new(nvars: usize, config: SolverConfig) -> Self {
        let mut heap = VarHeap::new(nvars);
        for v in 0..nvars {
            heap.insert(v, &vec![0.0; nvars]);
        }
        Self {
            config,
            nvars,
            clauses: Vec::new(),
            learnts: Vec::new(),
            watches: vec![Vec::new(); 2 * nvars],
            assigns: vec![UNDEF; nvars],
            level: vec![0; nvars],
            reason: vec![NO_REASON; nvars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            flipped: vec![false],
            qhead: 0,
            ok: true,
            cursor: 0,
            activity: vec![0.0; nvars],
            var_inc: 1.0,
            cla_inc: 1.0,
            heap,
            phase: vec![false; nvars],
            seen: vec![false; nvars],
            max_learnts: 0.0,
            stats: SolverStats::default(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.nvars
    }

    fn value(&self, l: ILit) -> i8 {
        let a = self.assigns[var(l)];
        if l & 1 == 1 {
            -a
        } else {
            a
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    /// Adds a clause (DIMACS literals). Returns false once the formula is
    /// known to be unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        let mut c: Vec<ILit> = lits.iter().map(|&l| ilit(l)).collect();
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return true;
        }
        if c.iter().any(|&l| self.value(l) == 1) {
            return true;
        }
        c.retain(|&l| self.value(l) != -1);
        match c.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(c[0], NO_REASON);
                self.ok = self.propagate().is_none();
                self.ok
            }
            _ => {
                self.attach(c, false, 0);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<ILit>, learnt: bool, lbd: u32) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[lits[0] as usize].push(Watcher { cref, blocker: lits[1] });
        self.watches[lits[1] as usize].push(Watcher { cref, blocker: lits[0] });
        self.clauses.push(Clause { lits, learnt, deleted: false, lbd, activity: 0.0 });
        if learnt {
            self.learnts.push(cref);
            self.stats.learnt_clauses += 1;
        }
        cref
    }

    fn enqueue(&mut self, l: ILit, reason: u32) {
        let v = var(l);
        self.assigns[v] = if l & 1 == 1 { -1 } else { 1 };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() && conflict.is_none() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                if self.clauses[cref].deleted {
                    continue;
                }
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                let kept = Watcher { cref: w.cref, blocker: first };
                if first != w.blocker && self.value(first) == 1 {
                    ws[j] = kept;
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref].lits[k];
                    if self.value(l) != -1 {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[l as usize].push(kept);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = kept;
                j += 1;
                if self.value(first) == -1 {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
        }
        conflict
    }

    fn cancel_until(&mut self, lvl: usize) {
        if self.decision_level() <= lvl {
            return;
        }
        let start = self.trail_lim[lvl];
        for idx in (start..self.trail.len()).rev() {
            let l = self.trail[idx];
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.assigns[v] = UNDEF;
            self.reason[v] = NO_REASON;
            if !self.heap.contains(v) {
                self.heap.insert(v, &self.activity);
            }
            self.cursor = self.cursor.min(v);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(lvl);
        self.flipped.truncate(lvl + 1);
        self.qhead = self.trail.len();
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: usize) {
        let c = &mut self.clauses[cref];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &r in &self.learnts {
                self.clauses[r as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP analysis. Returns the learnt clause (asserting literal
    /// first) and the level to backjump to.
    fn analyze(&mut self, mut confl: u32) -> (Vec<ILit>, usize) {
        let mut learnt: Vec<ILit> = vec![0];
        let mut path = 0usize;
        let mut p: Option<ILit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level() as u32;
        loop {
            let cref = confl as usize;
            if self.clauses[cref].learnt {
                self.bump_clause(cref);
            }
            let start = usize::from(p.is_some());
            for k in start..self.clauses[cref].lits.len() {
                let q = self.clauses[cref].lits[k];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[var(self.trail[index])] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            confl = self.reason[var(lit)];
            self.seen[var(lit)] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = p.expect("conflict has a UIP") ^ 1;

        // drop literals implied by the rest of the clause through their reason
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(k, &l)| {
                if k == 0 {
                    return true;
                }
                let r = self.reason[var(l)];
                if r == NO_REASON {
                    return true;
                }
                self.clauses[r as usize].lits[1..].iter().any(|&q| !self.seen[var(q)] && self.level[var(q)] > 0)
            })
            .collect();
        for &l in &learnt {
            self.seen[var(l)] = false;
        }
        let mut learnt: Vec<ILit> = learnt.into_iter().zip(keep).filter(|(_, k)| *k).map(|(l, _)| l).collect();

        let back = if learnt.len() == 1 {
            0
        } else {
            let (mut best, mut lvl) = (1, self.level[var(learnt[1])]);
            for (k, &l) in learnt.iter().enumerate().skip(2) {
                if self.level[var(l)] > lvl {
                    best = k;
                    lvl = self.level[var(l)];
                }
            }
            learnt.swap(1, best);
            lvl as usize
        };
        (learnt, back)
    }

    fn lbd(&mut self, lits: &[ILit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|&l| self.level[var(l)]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn pick_branch(&mut self) -> Option<ILit> {
        match self.config.branching {
            Branching::Lowest => {
                while self.cursor < self.nvars && self.assigns[self.cursor] != UNDEF {
                    self.cursor += 1;
                }
                (self.cursor < self.nvars).then(|| 2 * self.cursor as u32 + 1)
            }
            Branching::Vsids => {
                while let Some(v) = self.heap.pop(&self.activity) {
                    if self.assigns[v] == UNDEF {
                        return Some(2 * v as u32 + u32::from(!self.phase[v]));
                    }
                }
                None
            }
        }
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<u32> = self
            .learnts
            .iter()
            .copied()
            .filter(|&c| {
                let cl = &self.clauses[c as usize];
                !cl.deleted && cl.lbd > 2 && !self.locked(c)
            })
            .collect();
        cands.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            cb.lbd.cmp(&ca.lbd).then(ca.activity.partial_cmp(&cb.activity).unwrap()).then(a.cmp(&b))
        });
        for &c in cands.iter().take(cands.len() / 2) {
            let cl = &mut self.clauses[c as usize];
            cl.deleted = true;
            cl.lits = Vec::new();
        }
        let clauses = &self.clauses;
        self.learnts.retain(|&c| !clauses[c as usize].deleted);
    }

    fn locked(&self, cref: u32) -> bool {
        let l0 = self.clauses[cref as usize].lits[0];
        self.value(l0) == 1 && self.reason[var(l0)] == cref
    }

    fn luby(mut x: u64) -> u64 {
        let (mut size, mut seq) = (1u64, 0u32);
        while size < x + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != x {
            size = (size - 1) >> 1;
            seq -= 1;
            x %= size;
        }
        1 << seq
    }

    pub fn solve(&mut self) -> SatOutcome {
        if !self.ok {
            return SatOutcome::Unsat;
        }
        self.cancel_until(0);
        if self.propagate().is_some() {
            self.ok = false;
            return SatOutcome::Unsat;
        }
        let deadline = self.config.time_budget.map(|d| Instant::now() + d);
        let start_conflicts = self.stats.conflicts;
        let restarts = self.config.learning && self.config.branching == Branching::Vsids;
        self.max_learnts = (self.clauses.len() as f64 / 3.0).max(5000.0);
        let mut restart_idx = 0u64;
        let mut until_restart = 100 * Self::luby(restart_idx);
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SatOutcome::Unsat;
                }
                if self.config.learning {
                    let (learnt, back) = self.analyze(confl);
                    self.cancel_until(back);
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], NO_REASON);
                    } else {
                        let lbd = self.lbd(&learnt);
                        let first = learnt[0];
                        let cref = self.attach(learnt, true, lbd);
                        self.bump_clause(cref as usize);
                        self.enqueue(first, cref);
                    }
                    self.var_inc /= 0.95;
                    self.cla_inc /= 0.999;
                } else {
                    // chronological backtracking: flip the deepest unflipped decision
                    let mut lvl = self.decision_level();
                    while lvl > 0 && self.flipped[lvl] {
                        lvl -= 1;
                    }
                    if lvl == 0 {
                        self.ok = false;
                        return SatOutcome::Unsat;
                    }
                    let decision = self.trail[self.trail_lim[lvl - 1]];
                    self.cancel_until(lvl - 1);
                    self.trail_lim.push(self.trail.len());
                    self.flipped.push(true);
                    self.enqueue(decision ^ 1, NO_REASON);
                }
                if self.config.conflict_budget.is_some_and(|b| self.stats.conflicts - start_conflicts >= b)
                    || (self.stats.conflicts.is_multiple_of(64) && deadline.is_some_and(|d| Instant::now() > d))
                {
                    self.cancel_until(0);
                    return SatOutcome::Unknown;
                }
                if restarts {
                    until_restart = until_restart.saturating_sub(1);
                    if until_restart == 0 {
                        restart_idx += 1;
                        until_restart = 100 * Self::luby(restart_idx);
                        self.stats.restarts += 1;
                        self.cancel_until(0);
                    }
                }
            } else {
                if self.config.learning && self.learnts.len() as f64 >= self.max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                    self.max_learnts *= 1.1;
                }
                match self.pick_branch() {
                    None => {
                        let model = Model::new(self.assigns.iter().map(|&a| a == 1).collect());
                        self.cancel_until(0);
                        return SatOutcome::Sat(model);
                    }
                    Some(l) => {
                        self.stats.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        self.flipped.push(false);
                        self.enqueue(l, NO_REASON);
                    }
                }
            }
        }
    }
}

/// Max-heap of variables by activity, ties to the lower index.
struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<usize>,
}

impl VarHeap {
    const ABSENT: usize = usize::MAX;

    fn new(n: usize) -> Self {
        Self { heap: Vec::with_capacity(n), pos: vec![Self::ABSENT; n] }
    }

    fn above(a: usize, b: usize, act: &[f64]) -> bool {
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v] != Self::ABSENT
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        self.pos[v] = self.heap.len();
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn increased(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.pos[v], act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        self.pos[top] = Self::ABSENT;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::above(v, self.heap[parent], act) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i]] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = i;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let child = if r < self.heap.len() && Self::above(self.heap[r], self.heap[l], act) { r } else { l };
            if !Self::above(self.heap[child], v, act) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i]] = i;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v] = i;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn formula(n: usize, clauses: &[&[Lit]]) -> CnfFormula {
        let mut f = CnfFormula::with_vars(n);
        for c in clauses {
            f.add_clause(c.to_vec()).unwrap();
        }
        f
    }

    fn all_configs() -> Vec<SolverConfig> {
        vec![SolverConfig::default(), SolverConfig::vsids(), SolverConfig::dpll()]
    }

    #[test]
    fn contradiction_is_unsat() {
        for cfg in all_configs() {
            assert!(solve_with(&formula(1, &[&[1], &[-1]]), cfg).is_unsat());
        }
    }

    #[test]
    fn unit_propagation_forces_x2() {
        for cfg in all_configs() {
            let out = solve_with(&formula(2, &[&[1, 2], &[-1]]), cfg);
            let m = out.model().expect("sat");
            assert!(m.value(2) && !m.value(1));
        }
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 4 pigeons, 3 holes
        let (p, h) = (4, 3);
        let v = |i: usize, j: usize| (i * h + j + 1) as Lit;
        let mut f = CnfFormula::with_vars(p * h);
        for i in 0..p {
            f.add_clause((0..h).map(|j| v(i, j)).collect::<Vec<_>>()).unwrap();
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    f.add_clause(vec![-v(a, j), -v(b, j)]).unwrap();
                }
            }
        }
        for cfg in all_configs() {
            assert!(solve_with(&f, cfg).is_unsat());
        }
    }

    #[test]
    fn empty_formula_is_sat() {
        assert!(solve_cnf(&CnfFormula::with_vars(3)).is_sat());
        let mut f = CnfFormula::with_vars(1);
        f.add_clause(Vec::<Lit>::new()).unwrap();
        assert!(solve_cnf(&f).is_unsat());
    }

    #[test]
    fn luby_sequence() {
        let seq: Vec<u64> = (0..15).map(Solver::luby).collect();
        assert_eq!(seq, [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn incremental_blocking() {
        let mut s = Solver::new(2, SolverConfig::default());
        let mut count = 0;
        while let SatOutcome::Sat(m) = s.solve() {
            count += 1;
            let block: Vec<Lit> = m.literals().iter().map(|l| -l).collect();
            s.add_clause(&block);
        }
        assert_eq!(count, 4);
    }
}
