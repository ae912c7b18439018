//! Model enumeration by blocking clauses, and an exact DPLL model counter.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use super::cnf::{CnfFormula, Lit, Model};
use super::solver::{SatOutcome, Solver, SolverConfig};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub models: Vec<Model>,
    /// False when `limit` stopped the enumeration early.
    pub complete: bool,
}

/// Enumerates models that differ on the first `projection` variables, adding
/// one blocking clause over those variables after each model.
pub fn enumerate_models(
    f: &CnfFormula,
    projection: usize,
    limit: Option<usize>,
    config: SolverConfig,
) -> Result<Enumeration> {
    if projection > f.num_vars() {
        return Err(Error::InvalidArgument(format!("projection of {projection} variables exceeds {}", f.num_vars())));
    }
    let mut solver = Solver::new(f.num_vars(), config);
    for c in f.clauses() {
        solver.add_clause(c);
    }
    let mut models = Vec::new();
    loop {
        if limit.is_some_and(|l| models.len() >= l) {
            return Ok(Enumeration { models, complete: false });
        }
        match solver.solve() {
            SatOutcome::Sat(m) => {
                let block: Vec<Lit> =
                    (1..=projection as u32).map(|v| if m.value(v) { -(v as Lit) } else { v as Lit }).collect();
                models.push(m);
                if block.is_empty() || !solver.add_clause(&block) {
                    return Ok(Enumeration { models, complete: true });
                }
            }
            SatOutcome::Unsat => return Ok(Enumeration { models, complete: true }),
            SatOutcome::Unknown => {
                return Err(Error::ResourceExhausted(format!("solver budget after {} models", models.len())))
            }
        }
    }
}

/// Blocking-clause model count over the first `projection` variables.
pub fn count_by_blocking(f: &CnfFormula, projection: usize) -> Result<u128> {
    Ok(enumerate_models(f, projection, None, SolverConfig::default())?.models.len() as u128)
}

/// Exact number of total assignments satisfying `f`.
///
/// DPLL with unit propagation; after propagation the residual clauses are
/// split into variable-disjoint components counted independently, and
/// variables no residual clause mentions contribute a factor of two each.
pub fn count_models(f: &CnfFormula, time_budget: Option<Duration>) -> Result<u128> {
    let mut c = Counter {
        clauses: f.clauses().to_vec(),
        assign: vec![0; f.num_vars() + 1],
        deadline: time_budget.map(|d| Instant::now() + d),
        steps: 0,
    };
    let active: Vec<usize> = (0..c.clauses.len()).collect();
    let vars: Vec<u32> = (1..=f.num_vars() as u32).collect();
    c.count(&active, &vars)
}

struct Counter {
    clauses: Vec<Vec<Lit>>,
    assign: Vec<i8>,
    deadline: Option<Instant>,
    steps: u64,
}

fn pow2(k: usize) -> Result<u128> {
    if k >= 128 {
        return Err(Error::TooLarge(format!("2^{k} models overflow the counter")));
    }
    Ok(1u128 << k)
}

impl Counter {
    fn lit_value(&self, l: Lit) -> i8 {
        let a = self.assign[l.unsigned_abs() as usize];
        if l > 0 {
            a
        } else {
            -a
        }
    }

    fn set(&mut self, l: Lit, trail: &mut Vec<u32>) {
        let v = l.unsigned_abs();
        self.assign[v as usize] = if l > 0 { 1 } else { -1 };
        trail.push(v);
    }

    fn undo(&mut self, trail: &[u32]) {
        for &v in trail {
            self.assign[v as usize] = 0;
        }
    }

    /// Propagates units over `active`; returns the residual clauses or None on conflict.
    fn propagate(&mut self, active: &[usize], trail: &mut Vec<u32>) -> Option<Vec<usize>> {
        let mut residual: Vec<usize> = active.to_vec();
        loop {
            let mut changed = false;
            let mut next = Vec::with_capacity(residual.len());
            for &ci in &residual {
                let mut open = 0;
                let mut last = 0;
                let mut sat = false;
                for &l in &self.clauses[ci] {
                    match self.lit_value(l) {
                        1 => {
                            sat = true;
                            break;
                        }
                        0 => {
                            open += 1;
                            last = l;
                        }
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                match open {
                    0 => return None,
                    1 => {
                        self.set(last, trail);
                        changed = true;
                    }
                    _ => next.push(ci),
                }
            }
            residual = next;
            if !changed {
                return Some(residual);
            }
        }
    }

    fn count(&mut self, active: &[usize], vars: &[u32]) -> Result<u128> {
        self.steps += 1;
        if self.steps.is_multiple_of(4096) && self.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(Error::ResourceExhausted("model counter time budget".into()));
        }
        let mut trail = Vec::new();
        let Some(residual) = self.propagate(active, &mut trail) else {
            self.undo(&trail);
            return Ok(0);
        };
        let result = self.count_residual(&residual, vars);
        self.undo(&trail);
        result
    }

    fn count_residual(&mut self, residual: &[usize], vars: &[u32]) -> Result<u128> {
        // group residual clauses into components over unassigned variables
        let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
        fn find(p: &mut BTreeMap<u32, u32>, x: u32) -> u32 {
            let mut r = x;
            while p[&r] != r {
                r = p[&r];
            }
            let mut y = x;
            while p[&y] != r {
                let next = p[&y];
                p.insert(y, r);
                y = next;
            }
            r
        }
        for &ci in residual {
            let mut first: Option<u32> = None;
            for &l in &self.clauses[ci] {
                if self.lit_value(l) != 0 {
                    continue;
                }
                let v = l.unsigned_abs();
                parent.entry(v).or_insert(v);
                match first {
                    None => first = Some(v),
                    Some(f) => {
                        let (a, b) = (find(&mut parent, f), find(&mut parent, v));
                        if a != b {
                            parent.insert(a.max(b), a.min(b));
                        }
                    }
                }
            }
        }
        let free = vars.iter().filter(|&&v| self.assign[v as usize] == 0 && !parent.contains_key(&v)).count();
        let mut total = pow2(free)?;
        let mut components: BTreeMap<u32, (Vec<usize>, Vec<u32>)> = BTreeMap::new();
        let keys: Vec<u32> = parent.keys().copied().collect();
        for v in keys {
            let r = find(&mut parent, v);
            components.entry(r).or_default().1.push(v);
        }
        for &ci in residual {
            let v = self.clauses[ci]
                .iter()
                .find(|&&l| self.lit_value(l) == 0)
                .map(|l| l.unsigned_abs())
                .expect("residual clause has an open literal");
            let r = find(&mut parent, v);
            components.get_mut(&r).expect("component").0.push(ci);
        }
        for (_, (clauses, cvars)) in components {
            if total == 0 {
                break;
            }
            let branch = *cvars.iter().min().expect("non-empty component") as Lit;
            let mut sub = 0u128;
            for l in [branch, -branch] {
                let mut trail = Vec::new();
                self.set(l, &mut trail);
                let part = self.count(&clauses, &cvars);
                self.undo(&trail);
                sub = sub.checked_add(part?).ok_or_else(|| Error::TooLarge("model count overflow".into()))?;
            }
            total = total.checked_mul(sub).ok_or_else(|| Error::TooLarge("model count overflow".into()))?;
        }
        Ok(total)
    }
}
