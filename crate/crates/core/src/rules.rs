//! Rule tables for the three rule families.
//!
//! A [`Setting`] fixes `(m, n, domain)` and precomputes everything the
//! evaluators and engines look up per profile. Rules are dense arrays indexed
//! by profile index; the stored value is an `order_index` (ASWF), an
//! alternative (SCF) or an index into [`Setting::relations`] (SDF).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::prefcore::{enumerate_orders, Alternative, Domain, LinearOrder, ProfileSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Aswf,
    Scf,
    Sdf,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Aswf => "aswf",
            Family::Scf => "scf",
            Family::Sdf => "sdf",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aswf" => Ok(Family::Aswf),
            "scf" => Ok(Family::Scf),
            "sdf" => Ok(Family::Sdf),
            _ => Err(Error::InvalidArgument(format!("unknown rule family `{s}`"))),
        }
    }
}

/// Largest `m` for which choice relations are enumerated by filtering all
/// `2^(m²)` binary relations.
pub const MAX_RELATION_ALTERNATIVES: usize = 4;

/// A binary relation `L` over the alternatives, bit `a*m + b` meaning `a L b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChoiceRelation {
    m: u8,
    bits: u64,
}

impl ChoiceRelation {
    pub fn from_bits(m: usize, bits: u64) -> Self {
        Self { m: m as u8, bits }
    }

    /// Reflexive closure of a strict order.
    pub fn from_order(order: &LinearOrder) -> Self {
        let m = order.m();
        let mut bits = 0u64;
        for a in 0..m {
            for b in 0..m {
                if a == b || order.prefers(a, b) {
                    bits |= 1 << (a * m + b);
                }
            }
        }
        Self::from_bits(m, bits)
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn holds(&self, a: Alternative, b: Alternative) -> bool {
        self.bits >> (a * self.m() + b) & 1 == 1
    }

    /// Strict component: `a L b` and not `b L a`.
    pub fn strict(&self, a: Alternative, b: Alternative) -> bool {
        self.holds(a, b) && !self.holds(b, a)
    }

    /// Every non-empty subset has an element related to all of its members.
    pub fn generates_choice(&self) -> bool {
        let m = self.m();
        (1u32..1 << m).all(|subset| {
            (0..m)
                .filter(|&b| subset >> b & 1 == 1)
                .any(|b| (0..m).filter(|&a| subset >> a & 1 == 1).all(|a| self.holds(b, a)))
        })
    }

    /// Row-major 0/1 matrix.
    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        let m = self.m();
        (0..m).map(|a| (0..m).map(|b| self.holds(a, b) as u8).collect()).collect()
    }

    pub fn from_matrix(rows: &[Vec<u8>]) -> Result<Self> {
        let m = rows.len();
        let mut bits = 0u64;
        for (a, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Witness("relation matrix must be square".into()));
            }
            for (b, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => bits |= 1 << (a * m + b),
                    _ => return Err(Error::Witness("relation entries must be 0 or 1".into())),
                }
            }
        }
        Ok(Self::from_bits(m, bits))
    }
}

impl fmt::Debug for ChoiceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChoiceRelation({:?})", self.to_matrix())
    }
}

/// All relations over `m` alternatives that generate a choice function, in
/// increasing bitmask order.
pub fn enumerate_choice_relations(m: usize) -> Result<Vec<ChoiceRelation>> {
    if m == 0 || m > MAX_RELATION_ALTERNATIVES {
        return Err(Error::TooLarge(format!(
            "choice relations are enumerated for 1 <= m <= {MAX_RELATION_ALTERNATIVES}, got {m}"
        )));
    }
    Ok((0u64..1 << (m * m))
        .map(|bits| ChoiceRelation::from_bits(m, bits))
        .filter(ChoiceRelation::generates_choice)
        .collect())
}

/// The universe a rule is defined over: alternatives, voters, domain.
pub struct Setting {
    m: usize,
    n: usize,
    orders: Vec<LinearOrder>,
    space: ProfileSpace,
    profile_orders: Vec<u16>,
    profile_positions: Vec<u16>,
    strides: Vec<usize>,
    pairs: Vec<(Alternative, Alternative)>,
    patterns: Vec<u64>,
    relations: OnceLock<Result<Vec<ChoiceRelation>, String>>,
}

impl fmt::Debug for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Setting")
            .field("m", &self.m)
            .field("n", &self.n)
            .field("domain", &self.domain().words())
            .finish()
    }
}

impl PartialEq for Setting {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.n == other.n && self.domain() == other.domain()
    }
}

/// Upper bound on the number of profiles a setting may hold.
pub const MAX_PROFILES: usize = 1 << 20;

impl Setting {
    pub fn new(n: usize, domain: Domain) -> Result<Arc<Self>> {
        let m = domain.m();
        if m < 2 {
            return Err(Error::InvalidArgument("at least two alternatives are required".into()));
        }
        if n > 64 {
            return Err(Error::TooLarge("at most 64 voters are supported".into()));
        }
        let space = ProfileSpace::new(domain, n)?;
        if space.size() > MAX_PROFILES {
            return Err(Error::TooLarge(format!("{} profiles exceed {MAX_PROFILES}", space.size())));
        }
        let orders = enumerate_orders(m)?;
        let cells = space.size();
        let mut profile_orders = Vec::with_capacity(cells * n);
        let mut profile_positions = Vec::with_capacity(cells * n);
        for cell in 0..cells {
            for p in space.positions(cell)? {
                profile_positions.push(p as u16);
                profile_orders.push(space.domain().order(p).index() as u16);
            }
        }
        let d = space.domain().len();
        let strides = (0..n).map(|i| d.pow((n - 1 - i) as u32)).collect();
        let pairs: Vec<_> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
        let mut patterns = Vec::with_capacity(cells * pairs.len());
        for cell in 0..cells {
            for &(a, b) in &pairs {
                let mut bitsv = 0u64;
                for i in 0..n {
                    if orders[profile_orders[cell * n + i] as usize].prefers(a, b) {
                        bitsv |= 1 << i;
                    }
                }
                patterns.push(bitsv);
            }
        }
        Ok(Arc::new(Self {
            m,
            n,
            orders,
            space,
            profile_orders,
            profile_positions,
            strides,
            pairs,
            patterns,
            relations: OnceLock::new(),
        }))
    }

    /// Full domain over `m` alternatives with `n` voters.
    pub fn full(n: usize, m: usize) -> Result<Arc<Self>> {
        Self::new(n, Domain::full(m)?)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> &Domain {
        self.space.domain()
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    /// Number of profiles (cells of a rule table).
    pub fn cells(&self) -> usize {
        self.space.size()
    }

    /// All `m!` orders.
    pub fn orders(&self) -> &[LinearOrder] {
        &self.orders
    }

    pub fn order(&self, order_index: usize) -> &LinearOrder {
        &self.orders[order_index]
    }

    /// Voter `i`'s order at profile `cell`.
    pub fn voter_order(&self, cell: usize, i: usize) -> &LinearOrder {
        &self.orders[self.profile_orders[cell * self.n + i] as usize]
    }

    pub fn voter_order_index(&self, cell: usize, i: usize) -> usize {
        self.profile_orders[cell * self.n + i] as usize
    }

    pub fn voter_position(&self, cell: usize, i: usize) -> usize {
        self.profile_positions[cell * self.n + i] as usize
    }

    /// Profile obtained from `cell` by replacing voter `i`'s order with the
    /// domain order at `position`.
    pub fn with_voter(&self, cell: usize, i: usize, position: usize) -> usize {
        let old = self.voter_position(cell, i);
        cell - old * self.strides[i] + position * self.strides[i]
    }

    /// Unordered pairs `(a, b)` with `a < b`, in lexicographic order.
    pub fn pairs(&self) -> &[(Alternative, Alternative)] {
        &self.pairs
    }

    pub fn pair_index(&self, a: Alternative, b: Alternative) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        // pairs (x, y) with x < a come first
        a * self.m - a * (a + 1) / 2 + (b - a - 1)
    }

    /// Bitmask of voters preferring `a` to `b` at `cell`, for pair `k = (a, b)`.
    pub fn pattern(&self, cell: usize, k: usize) -> u64 {
        self.patterns[cell * self.pairs.len() + k]
    }

    pub fn all_voters_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Every voter strictly prefers `a` to `b` at `cell`.
    pub fn unanimous(&self, cell: usize, a: Alternative, b: Alternative) -> bool {
        (0..self.n).all(|i| self.voter_order(cell, i).prefers(a, b))
    }

    /// Valid choice relations over `m` alternatives (computed on first use).
    pub fn relations(&self) -> Result<&[ChoiceRelation]> {
        self.relations
            .get_or_init(|| enumerate_choice_relations(self.m).map_err(|e| e.to_string()))
            .as_ref()
            .map(Vec::as_slice)
            .map_err(|e| Error::TooLarge(e.clone()))
    }

    pub fn relation_index(&self, rel: &ChoiceRelation) -> Option<usize> {
        self.relations().ok()?.binary_search(rel).ok()
    }

    /// Number of possible outcomes at a single profile.
    pub fn value_count(&self, family: Family) -> Result<usize> {
        Ok(match family {
            Family::Aswf => self.orders.len(),
            Family::Scf => self.m,
            Family::Sdf => self.relations()?.len(),
        })
    }

    /// Human-readable profile, e.g. `(abc,bca)`.
    pub fn profile_string(&self, cell: usize) -> String {
        let words: Vec<String> = (0..self.n).map(|i| self.voter_order(cell, i).to_word_string()).collect();
        format!("({})", words.join(","))
    }
}

/// Read access shared by total and partial rules.
pub trait RuleView {
    fn family(&self) -> Family;
    fn setting(&self) -> &Setting;
    fn value(&self, cell: usize) -> Option<u32>;

    fn is_total(&self) -> bool {
        (0..self.setting().cells()).all(|c| self.value(c).is_some())
    }
}

/// A total rule table.
#[derive(Clone)]
pub struct RuleTable {
    family: Family,
    setting: Arc<Setting>,
    outcomes: Vec<u32>,
}

impl PartialEq for RuleTable {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.outcomes == other.outcomes && *self.setting == *other.setting
    }
}

impl Eq for RuleTable {}

impl fmt::Debug for RuleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RuleTable({}, {:?})", self.family, self.outcomes)
    }
}

fn check_value(setting: &Setting, family: Family, cell: usize, value: u32) -> Result<()> {
    let k = setting.value_count(family)?;
    if value as usize >= k {
        return Err(Error::InvalidArgument(format!(
            "value {value} at profile {cell} is not a valid {family} outcome (expected < {k})"
        )));
    }
    Ok(())
}

impl RuleTable {
    pub fn new(family: Family, setting: Arc<Setting>, outcomes: Vec<u32>) -> Result<Self> {
        if outcomes.len() != setting.cells() {
            return Err(Error::InvalidArgument(format!(
                "rule table needs {} entries, got {}",
                setting.cells(),
                outcomes.len()
            )));
        }
        for (cell, &v) in outcomes.iter().enumerate() {
            check_value(&setting, family, cell, v)?;
        }
        Ok(Self { family, setting, outcomes })
    }

    pub fn from_fn(family: Family, setting: Arc<Setting>, f: impl Fn(usize) -> u32) -> Result<Self> {
        let outcomes = (0..setting.cells()).map(f).collect();
        Self::new(family, setting, outcomes)
    }

    /// ASWF copying voter `i`'s order.
    pub fn aswf_dictatorship(setting: Arc<Setting>, i: usize) -> Result<Self> {
        Self::voter_check(&setting, i)?;
        let s = setting.clone();
        Self::from_fn(Family::Aswf, setting, |c| s.voter_order_index(c, i) as u32)
    }

    /// ASWF inverting voter `i`'s order.
    pub fn aswf_anti_dictatorship(setting: Arc<Setting>, i: usize) -> Result<Self> {
        Self::voter_check(&setting, i)?;
        let s = setting.clone();
        Self::from_fn(Family::Aswf, setting, |c| s.voter_order(c, i).reversed().index() as u32)
    }

    pub fn aswf_constant(setting: Arc<Setting>, order_index: usize) -> Result<Self> {
        Self::from_fn(Family::Aswf, setting, |_| order_index as u32)
    }

    /// SCF picking voter `i`'s top alternative.
    pub fn scf_dictatorship(setting: Arc<Setting>, i: usize) -> Result<Self> {
        Self::voter_check(&setting, i)?;
        let s = setting.clone();
        Self::from_fn(Family::Scf, setting, |c| s.voter_order(c, i).top() as u32)
    }

    pub fn scf_constant(setting: Arc<Setting>, alt: Alternative) -> Result<Self> {
        Self::from_fn(Family::Scf, setting, |_| alt as u32)
    }

    /// SDF returning the reflexive closure of voter `i`'s order.
    pub fn sdf_of_voter(setting: Arc<Setting>, i: usize) -> Result<Self> {
        Self::voter_check(&setting, i)?;
        let s = setting.clone();
        let idx = (0..setting.cells())
            .map(|c| {
                let rel = ChoiceRelation::from_order(s.voter_order(c, i));
                s.relation_index(&rel)
                    .map(|x| x as u32)
                    .ok_or_else(|| Error::InvalidArgument("order closure missing from relation list".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(Family::Sdf, setting, idx)
    }

    fn voter_check(setting: &Setting, i: usize) -> Result<()> {
        if i >= setting.n() {
            return Err(Error::OutOfRange { index: i, size: setting.n() });
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn setting(&self) -> &Arc<Setting> {
        &self.setting
    }

    pub fn outcomes(&self) -> &[u32] {
        &self.outcomes
    }

    pub fn outcome(&self, cell: usize) -> u32 {
        self.outcomes[cell]
    }

    /// Social order at `cell` (ASWF only).
    pub fn social_order(&self, cell: usize) -> &LinearOrder {
        debug_assert_eq!(self.family, Family::Aswf);
        self.setting.order(self.outcomes[cell] as usize)
    }

    /// Chosen alternative at `cell` (SCF only).
    pub fn choice(&self, cell: usize) -> Alternative {
        debug_assert_eq!(self.family, Family::Scf);
        self.outcomes[cell] as usize
    }

    /// Social relation at `cell` (SDF only).
    pub fn relation(&self, cell: usize) -> ChoiceRelation {
        debug_assert_eq!(self.family, Family::Sdf);
        self.setting.relations().expect("SDF table implies relations")[self.outcomes[cell] as usize]
    }

    /// Distinct outcomes, ascending.
    pub fn range(&self) -> BTreeSet<u32> {
        self.outcomes.iter().copied().collect()
    }

    pub fn to_witness(&self) -> RuleWitness {
        let outcomes = self
            .outcomes
            .iter()
            .map(|&v| match self.family {
                Family::Aswf => json!(self.setting.order(v as usize).word()),
                Family::Scf => json!(v),
                Family::Sdf => {
                    json!(self.setting.relations().expect("sdf")[v as usize].to_matrix())
                }
            })
            .collect();
        RuleWitness {
            family: self.family,
            m: self.setting.m(),
            n: self.setting.n(),
            domain: self.setting.domain().words(),
            outcomes,
        }
    }

    pub fn from_witness(w: &RuleWitness) -> Result<Self> {
        let domain = Domain::parse(&w.domain.join(","))?;
        if domain.m() != w.m {
            return Err(Error::Witness(format!("domain is over {} alternatives, m = {}", domain.m(), w.m)));
        }
        let setting = Setting::new(w.n, domain)?;
        let outcomes = w.outcomes.iter().map(|v| decode_outcome(&setting, w.family, v)).collect::<Result<Vec<_>>>()?;
        Self::new(w.family, setting, outcomes)
    }

    /// Canonical compact JSON of the witness form.
    pub fn signature(&self) -> String {
        serde_json::to_string(&self.to_witness()).expect("witness serializes")
    }

    pub fn parse_signature(s: &str) -> Result<Self> {
        Self::from_witness(&serde_json::from_str(s)?)
    }
}

fn decode_outcome(setting: &Setting, family: Family, v: &Value) -> Result<u32> {
    let bad = || Error::Witness(format!("bad {family} outcome {v}"));
    match family {
        Family::Aswf => {
            let word: Vec<usize> = serde_json::from_value(v.clone()).map_err(|_| bad())?;
            if word.len() != setting.m() {
                return Err(bad());
            }
            Ok(LinearOrder::from_word(&word)?.index() as u32)
        }
        Family::Scf => {
            let a = v.as_u64().ok_or_else(bad)?;
            if a as usize >= setting.m() {
                return Err(bad());
            }
            Ok(a as u32)
        }
        Family::Sdf => {
            let rows: Vec<Vec<u8>> = serde_json::from_value(v.clone()).map_err(|_| bad())?;
            let rel = ChoiceRelation::from_matrix(&rows)?;
            if rel.m() != setting.m() {
                return Err(bad());
            }
            setting.relation_index(&rel).map(|i| i as u32).ok_or_else(bad)
        }
    }
}

impl RuleView for RuleTable {
    fn family(&self) -> Family {
        self.family
    }

    fn setting(&self) -> &Setting {
        &self.setting
    }

    fn value(&self, cell: usize) -> Option<u32> {
        Some(self.outcomes[cell])
    }

    fn is_total(&self) -> bool {
        true
    }
}

/// JSON witness: `{ "family", "m", "n", "domain", "outcomes" }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleWitness {
    pub family: Family,
    pub m: usize,
    pub n: usize,
    pub domain: Vec<String>,
    pub outcomes: Vec<Value>,
}

/// A rule table with some cells still open.
#[derive(Clone)]
pub struct PartialRule {
    family: Family,
    setting: Arc<Setting>,
    outcomes: Vec<Option<u32>>,
    assigned: usize,
}

impl fmt::Debug for PartialRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialRule({}, {:?})", self.family, self.outcomes)
    }
}

impl PartialRule {
    pub fn empty(family: Family, setting: Arc<Setting>) -> Result<Self> {
        setting.value_count(family)?;
        let cells = setting.cells();
        Ok(Self { family, setting, outcomes: vec![None; cells], assigned: 0 })
    }

    pub fn from_total(rule: &RuleTable) -> Self {
        Self {
            family: rule.family,
            setting: rule.setting.clone(),
            outcomes: rule.outcomes.iter().map(|&v| Some(v)).collect(),
            assigned: rule.outcomes.len(),
        }
    }

    /// Copy of `self` with `cell` set to `value`.
    pub fn complete(&self, cell: usize, value: u32) -> Result<Self> {
        let mut next = self.clone();
        next.assign(cell, value)?;
        Ok(next)
    }

    pub fn assign(&mut self, cell: usize, value: u32) -> Result<()> {
        if cell >= self.outcomes.len() {
            return Err(Error::OutOfRange { index: cell, size: self.outcomes.len() });
        }
        if self.outcomes[cell].is_some() {
            return Err(Error::AlreadyAssigned(cell));
        }
        check_value(&self.setting, self.family, cell, value)?;
        self.outcomes[cell] = Some(value);
        self.assigned += 1;
        Ok(())
    }

    pub(crate) fn unassign(&mut self, cell: usize) {
        if self.outcomes[cell].take().is_some() {
            self.assigned -= 1;
        }
    }

    pub(crate) fn set_unchecked(&mut self, cell: usize, value: u32) {
        if self.outcomes[cell].replace(value).is_none() {
            self.assigned += 1;
        }
    }

    pub fn assigned_count(&self) -> usize {
        self.assigned
    }

    pub fn setting_arc(&self) -> &Arc<Setting> {
        &self.setting
    }

    pub fn to_total(&self) -> Result<RuleTable> {
        let outcomes = self
            .outcomes
            .iter()
            .enumerate()
            .map(|(c, v)| v.ok_or_else(|| Error::InvalidArgument(format!("profile {c} is unassigned"))))
            .collect::<Result<Vec<_>>>()?;
        RuleTable::new(self.family, self.setting.clone(), outcomes)
    }
}

impl RuleView for PartialRule {
    fn family(&self) -> Family {
        self.family
    }

    fn setting(&self) -> &Setting {
        &self.setting
    }

    fn value(&self, cell: usize) -> Option<u32> {
        self.outcomes[cell]
    }

    fn is_total(&self) -> bool {
        self.assigned == self.outcomes.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choice_relation_counts() {
        assert_eq!(enumerate_choice_relations(3).unwrap().len(), 25);
        let one = enumerate_choice_relations(1).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].holds(0, 0));
        assert!(enumerate_choice_relations(5).is_err());
    }

    #[test]
    fn order_closures_are_choice_relations() {
        let rels = enumerate_choice_relations(3).unwrap();
        for o in enumerate_orders(3).unwrap() {
            assert!(rels.binary_search(&ChoiceRelation::from_order(&o)).is_ok(), "{o}");
        }
    }

    #[test]
    fn relations_are_reflexive_and_complete() {
        for m in 1..=3 {
            for r in enumerate_choice_relations(m).unwrap() {
                for a in 0..m {
                    assert!(r.holds(a, a));
                    for b in 0..m {
                        assert!(r.holds(a, b) || r.holds(b, a));
                    }
                }
            }
        }
    }

    #[test]
    fn pair_index_matches_pair_list() {
        let s = Setting::full(1, 4).unwrap();
        for (k, &(a, b)) in s.pairs().iter().enumerate() {
            assert_eq!(s.pair_index(a, b), k);
            assert_eq!(s.pair_index(b, a), k);
        }
    }

    #[test]
    fn with_voter_moves_one_digit() {
        let s = Setting::full(2, 3).unwrap();
        for cell in 0..s.cells() {
            for i in 0..2 {
                for pos in 0..6 {
                    let c = s.with_voter(cell, i, pos);
                    assert_eq!(s.voter_position(c, i), pos);
                    assert_eq!(s.voter_position(c, 1 - i), s.voter_position(cell, 1 - i));
                }
            }
        }
    }

    #[test]
    fn complete_extends_without_mutating() {
        let s = Setting::full(2, 3).unwrap();
        let empty = PartialRule::empty(Family::Aswf, s.clone()).unwrap();
        let one = empty.complete(0, 3).unwrap();
        assert_eq!(empty.assigned_count(), 0);
        assert_eq!(one.assigned_count(), 1);
        assert!(matches!(one.complete(0, 1), Err(Error::AlreadyAssigned(0))));
        assert!(empty.complete(1, 6).is_err());
        let mut full = empty.clone();
        for c in 0..s.cells() {
            full.assign(c, (c % 6) as u32).unwrap();
        }
        assert!(full.is_total());
        assert_eq!(full.to_total().unwrap().outcomes()[7], 1);
    }

    #[test]
    fn partial_completion_count() {
        // every completion of k open ASWF cells is one of (m!)^k total tables
        let s = Setting::full(1, 3).unwrap();
        let mut p = PartialRule::empty(Family::Aswf, s.clone()).unwrap();
        for c in 0..4 {
            p.assign(c, 0).unwrap();
        }
        let open: Vec<usize> = (0..s.cells()).filter(|&c| p.value(c).is_none()).collect();
        let mut seen = BTreeSet::new();
        for x in 0..6u32 {
            for y in 0..6u32 {
                let t = p.complete(open[0], x).unwrap().complete(open[1], y).unwrap();
                seen.insert(t.to_total().unwrap().outcomes().to_vec());
            }
        }
        assert_eq!(seen.len(), 36);
    }

    #[test]
    fn dictator_signature_matches_voter_zero() {
        let s = Setting::full(2, 3).unwrap();
        let d = RuleTable::aswf_dictatorship(s.clone(), 0).unwrap();
        assert_eq!(d.outcomes().len(), 36);
        for c in 0..36 {
            assert_eq!(d.outcome(c) as usize, s.voter_order_index(c, 0));
        }
        let sig = d.signature();
        assert_eq!(RuleTable::parse_signature(&sig).unwrap(), d);
        let other = RuleTable::aswf_dictatorship(s, 1).unwrap();
        assert_ne!(sig, other.signature());
    }

    #[test]
    fn sdf_and_scf_witness_round_trip() {
        let s = Setting::full(2, 3).unwrap();
        let sdf = RuleTable::sdf_of_voter(s.clone(), 1).unwrap();
        assert_eq!(RuleTable::parse_signature(&sdf.signature()).unwrap(), sdf);
        let scf = RuleTable::scf_dictatorship(s, 0).unwrap();
        assert_eq!(RuleTable::parse_signature(&scf.signature()).unwrap(), scf);
    }
}
