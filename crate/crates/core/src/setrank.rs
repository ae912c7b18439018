//! Weak orders over the non-empty subsets of a linearly ordered ground set,
//! with the Gärdenfors principle (GF) and independence (IND).
//!
//! Elements are positions `0..size`, position 0 best. A subset is a non-empty
//! bitmask; its dense index is `mask - 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sat::cnf::{CnfFormula, Lit, Model};
use crate::sat::solver::{solve_with, SatOutcome, SolverConfig};

pub const MAX_SIZE: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroundSet {
    size: usize,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self> {
        if !(1..=MAX_SIZE).contains(&size) {
            return Err(Error::InvalidArgument(format!("ground set size {size} outside 1..={MAX_SIZE}")));
        }
        Ok(Self { size })
    }

    pub fn size(self) -> usize {
        self.size
    }

    /// Number of non-empty subsets.
    pub fn subset_count(self) -> usize {
        (1 << self.size) - 1
    }

    pub fn full_mask(self) -> u32 {
        (1 << self.size) - 1
    }

    /// All non-empty subsets in increasing bitmask order.
    pub fn subsets(self) -> Vec<u32> {
        (1..=self.full_mask()).collect()
    }

    pub fn index_of(self, mask: u32) -> Result<usize> {
        if mask == 0 || mask > self.full_mask() {
            return Err(Error::InvalidArgument(format!(
                "{mask:#b} is not a non-empty subset of {} elements",
                self.size
            )));
        }
        Ok(mask as usize - 1)
    }

    pub fn subset_at(self, index: usize) -> Result<u32> {
        if index >= self.subset_count() {
            return Err(Error::OutOfRange { index, size: self.subset_count() });
        }
        Ok(index as u32 + 1)
    }
}

/// Writes a subset as element positions, e.g. `{0,2}`.
pub fn subset_string(mask: u32) -> String {
    let items: Vec<String> = (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// `x` is better than every element of `a`.
fn above_all(x: u32, a: u32) -> bool {
    a & ((1u32 << (x + 1)) - 1) == 0
}

/// `x` is worse than every element of `a`.
fn below_all(x: u32, a: u32) -> bool {
    a >> x == 0
}

/// A relation `r(A, B)` = "A at least as good as B" over all subset pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetWeakOrder {
    ground: GroundSet,
    bits: Vec<bool>,
}

impl SetWeakOrder {
    /// The relation with no pair related; fill it with [`SetWeakOrder::set`].
    pub fn empty(ground: GroundSet) -> Self {
        let k = ground.subset_count();
        Self { ground, bits: vec![false; k * k] }
    }

    /// The weak order listing equivalence classes best first.
    pub fn from_ranking(ground: GroundSet, ranking: &[Vec<u32>]) -> Result<Self> {
        let k = ground.subset_count();
        let mut level = vec![usize::MAX; k];
        for (lv, class) in ranking.iter().enumerate() {
            for &mask in class {
                let i = ground.index_of(mask)?;
                if level[i] != usize::MAX {
                    return Err(Error::InvalidArgument(format!("subset {} ranked twice", subset_string(mask))));
                }
                level[i] = lv;
            }
        }
        if let Some(i) = level.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidArgument(format!("subset {} is not ranked", subset_string(i as u32 + 1))));
        }
        let mut w = Self::empty(ground);
        for a in 0..k {
            for b in 0..k {
                w.bits[a * k + b] = level[a] <= level[b];
            }
        }
        Ok(w)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn set(&mut self, a: u32, b: u32, value: bool) {
        let k = self.ground.subset_count();
        self.bits[(a as usize - 1) * k + b as usize - 1] = value;
    }

    /// `a ≽ b`.
    pub fn weakly(&self, a: u32, b: u32) -> bool {
        let k = self.ground.subset_count();
        self.bits[(a as usize - 1) * k + b as usize - 1]
    }

    /// `a ≻ b`.
    pub fn strictly(&self, a: u32, b: u32) -> bool {
        self.weakly(a, b) && !self.weakly(b, a)
    }

    /// Equivalence classes best first; fails unless the relation is a weak order.
    pub fn ranking(&self) -> Result<Vec<Vec<u32>>> {
        if let Some(v) = check_weak_order(self).into_iter().next() {
            return Err(Error::Witness(format!("not a weak order: {v}")));
        }
        let subsets = self.ground.subsets();
        // in a weak order, the number of sets a set is weakly above fixes its class
        let mut keyed: Vec<(usize, u32)> =
            subsets.iter().map(|&a| (subsets.iter().filter(|&&b| self.weakly(a, b)).count(), a)).collect();
        keyed.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let mut out: Vec<Vec<u32>> = Vec::new();
        let mut last = None;
        for (score, a) in keyed {
            if last == Some(score) {
                out.last_mut().unwrap().push(a);
            } else {
                out.push(vec![a]);
                last = Some(score);
            }
        }
        Ok(out)
    }

    pub fn to_witness(&self) -> Result<SetWitness> {
        Ok(SetWitness { size: self.ground.size(), ranking: self.ranking()? })
    }

    pub fn from_witness(w: &SetWitness) -> Result<Self> {
        Self::from_ranking(GroundSet::new(w.size)?, &w.ranking)
    }
}

/// Witness file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetWitness {
    pub size: usize,
    pub ranking: Vec<Vec<u32>>,
}

/// Which set-ranking axioms to impose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SetAxioms {
    pub gf: bool,
    pub ind: bool,
}

impl SetAxioms {
    pub const BOTH: SetAxioms = SetAxioms { gf: true, ind: true };
}

impl Default for SetAxioms {
    fn default() -> Self {
        Self::BOTH
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetViolation {
    NotReflexive {
        set: u32,
    },
    Incomplete {
        a: u32,
        b: u32,
    },
    Intransitive {
        a: u32,
        b: u32,
        c: u32,
    },
    /// `x` beats everything in `set` but adding it does not strictly improve the set.
    GfBetter {
        set: u32,
        x: u32,
    },
    /// `x` is beaten by everything in `set` but adding it does not strictly worsen the set.
    GfWorse {
        set: u32,
        x: u32,
    },
    Ind {
        a: u32,
        b: u32,
        x: u32,
    },
}

impl std::fmt::Display for SetViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = subset_string;
        match *self {
            SetViolation::NotReflexive { set } => write!(f, "{} is not related to itself", s(set)),
            SetViolation::Incomplete { a, b } => write!(f, "{} and {} are unrelated", s(a), s(b)),
            SetViolation::Intransitive { a, b, c } => {
                write!(f, "{} ≽ {} ≽ {} but not {} ≽ {}", s(a), s(b), s(c), s(a), s(c))
            }
            SetViolation::GfBetter { set, x } => {
                write!(f, "GF(i): adding {x} to {} is not an improvement", s(set))
            }
            SetViolation::GfWorse { set, x } => {
                write!(f, "GF(ii): adding {x} to {} is not a loss", s(set))
            }
            SetViolation::Ind { a, b, x } => {
                write!(f, "IND: {} ≻ {} but {} ≺ {} after adding {x}", s(a), s(b), s(a | 1 << x), s(b | 1 << x))
            }
        }
    }
}

fn check_weak_order(w: &SetWeakOrder) -> Vec<SetViolation> {
    let subsets = w.ground.subsets();
    let mut out = Vec::new();
    for &a in &subsets {
        if !w.weakly(a, a) {
            out.push(SetViolation::NotReflexive { set: a });
        }
    }
    for &a in &subsets {
        for &b in subsets.iter().filter(|&&b| b > a) {
            if !w.weakly(a, b) && !w.weakly(b, a) {
                out.push(SetViolation::Incomplete { a, b });
            }
        }
    }
    for &a in &subsets {
        for &b in &subsets {
            if !w.weakly(a, b) {
                continue;
            }
            for &c in &subsets {
                if w.weakly(b, c) && !w.weakly(a, c) {
                    out.push(SetViolation::Intransitive { a, b, c });
                }
            }
        }
    }
    out
}

/// Checks weak-orderhood and the chosen axioms directly; empty means the witness passes.
pub fn verify_set_witness_with(w: &SetWeakOrder, axioms: SetAxioms) -> Vec<SetViolation> {
    let mut out = check_weak_order(w);
    let g = w.ground;
    let subsets = g.subsets();
    if axioms.gf {
        for &a in &subsets {
            for x in (0..g.size() as u32).filter(|x| a >> x & 1 == 0) {
                let ax = a | 1 << x;
                if above_all(x, a) && !w.strictly(ax, a) {
                    out.push(SetViolation::GfBetter { set: a, x });
                }
                if below_all(x, a) && !w.strictly(a, ax) {
                    out.push(SetViolation::GfWorse { set: a, x });
                }
            }
        }
    }
    if axioms.ind {
        for &a in &subsets {
            for &b in &subsets {
                if !w.strictly(a, b) {
                    continue;
                }
                for x in (0..g.size() as u32).filter(|x| (a | b) >> x & 1 == 0) {
                    if !w.weakly(a | 1 << x, b | 1 << x) {
                        out.push(SetViolation::Ind { a, b, x });
                    }
                }
            }
        }
    }
    out
}

/// Checks weak-orderhood, GF and IND.
pub fn verify_set_witness(w: &SetWeakOrder) -> Vec<SetViolation> {
    verify_set_witness_with(w, SetAxioms::BOTH)
}

/// Variable for `r(a, b)`.
pub fn relation_var(ground: GroundSet, a: u32, b: u32) -> Lit {
    ((a as usize - 1) * ground.subset_count() + b as usize) as Lit
}

/// GF clauses: each `A∪{x} ≻ A` (or `≺`) as two unit clauses.
pub fn gf_clauses(ground: GroundSet) -> Vec<Vec<Lit>> {
    let r = |a, b| relation_var(ground, a, b);
    let mut out = Vec::new();
    for a in ground.subsets() {
        for x in (0..ground.size() as u32).filter(|x| a >> x & 1 == 0) {
            let ax = a | 1 << x;
            if above_all(x, a) {
                out.push(vec![r(ax, a)]);
                out.push(vec![-r(a, ax)]);
            }
            if below_all(x, a) {
                out.push(vec![r(a, ax)]);
                out.push(vec![-r(ax, a)]);
            }
        }
    }
    out
}

/// IND clauses: `¬r(A,B) ∨ r(B,A) ∨ r(A∪{x}, B∪{x})`.
pub fn ind_clauses(ground: GroundSet) -> Vec<Vec<Lit>> {
    let r = |a, b| relation_var(ground, a, b);
    let mut out = Vec::new();
    for a in ground.subsets() {
        for b in ground.subsets().into_iter().filter(|&b| b != a) {
            for x in (0..ground.size() as u32).filter(|x| (a | b) >> x & 1 == 0) {
                out.push(vec![-r(a, b), r(b, a), r(a | 1 << x, b | 1 << x)]);
            }
        }
    }
    out
}

/// The full formula: reflexivity, completeness, transitivity and the chosen axioms.
pub fn encode(ground: GroundSet, axioms: SetAxioms) -> CnfFormula {
    let mut f = CnfFormula::new();
    f.push_meta(format!("choicecheck setrank size={} gf={} ind={}", ground.size(), axioms.gf as u8, axioms.ind as u8));
    let subsets = ground.subsets();
    for &a in &subsets {
        for &b in &subsets {
            f.new_var(format!("set {a} {b}"));
        }
    }
    let r = |a, b| relation_var(ground, a, b);
    for &a in &subsets {
        f.push_clause(vec![r(a, a)]);
        for &b in subsets.iter().filter(|&&b| b > a) {
            f.push_clause(vec![r(a, b), r(b, a)]);
        }
    }
    for &a in &subsets {
        for &b in subsets.iter().filter(|&&b| b != a) {
            for &c in subsets.iter().filter(|&&c| c != a && c != b) {
                f.push_clause(vec![-r(a, b), -r(b, c), r(a, c)]);
            }
        }
    }
    if axioms.gf {
        for c in gf_clauses(ground) {
            f.push_clause(c);
        }
    }
    if axioms.ind {
        for c in ind_clauses(ground) {
            f.push_clause(c);
        }
    }
    f
}

/// Reads the relation out of a model of [`encode`].
pub fn decode(ground: GroundSet, model: &Model) -> Result<SetWeakOrder> {
    let k = ground.subset_count();
    if model.num_vars() < k * k {
        return Err(Error::Decode(format!("model has {} variables, need {}", model.num_vars(), k * k)));
    }
    let mut w = SetWeakOrder::empty(ground);
    for a in ground.subsets() {
        for b in ground.subsets() {
            w.set(a, b, model.value(relation_var(ground, a, b) as u32));
        }
    }
    Ok(w)
}

/// Reads ground-set size and axioms from an encoded formula's header.
pub fn header(f: &CnfFormula) -> Option<(GroundSet, SetAxioms)> {
    if !f.meta().first()?.starts_with("choicecheck setrank") {
        return None;
    }
    let size = GroundSet::new(f.meta_value("size")?.parse().ok()?).ok()?;
    let flag = |k: &str| f.meta_value(k).map(|v| v == "1");
    Some((size, SetAxioms { gf: flag("gf")?, ind: flag("ind")? }))
}

#[derive(Clone, Debug)]
pub enum KpOutcome {
    Sat(SetWeakOrder),
    Unsat,
}

impl KpOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, KpOutcome::Sat(_))
    }
}

/// Is there a weak order on the subsets of a `size`-element set satisfying GF and IND?
pub fn kp_check(size: usize) -> Result<KpOutcome> {
    kp_check_with(size, SetAxioms::BOTH, SolverConfig::default())
}

/// As [`kp_check`], with a choice of axioms and solver settings. Satisfying
/// relations are re-verified before they are returned.
pub fn kp_check_with(size: usize, axioms: SetAxioms, config: SolverConfig) -> Result<KpOutcome> {
    let ground = GroundSet::new(size)?;
    let f = encode(ground, axioms);
    match solve_with(&f, config) {
        SatOutcome::Unsat => Ok(KpOutcome::Unsat),
        SatOutcome::Unknown => Err(Error::ResourceExhausted(format!("set ranking of size {size}"))),
        SatOutcome::Sat(model) => {
            let w = decode(ground, &model)?;
            let violations = verify_set_witness_with(&w, axioms);
            if let Some(v) = violations.first() {
                return Err(Error::Witness(format!("solver model fails the direct check: {v}")));
            }
            Ok(KpOutcome::Sat(w))
        }
    }
}
