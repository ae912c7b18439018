//! Axioms as tri-state predicates over total and partial rules.
//!
//! Every evaluator looks only at assigned cells. `Violated` carries a
//! [`Certificate`] naming the profiles involved; [`Certificate::replay`]
//! re-checks that evidence against the defining condition without going
//! through the evaluator again.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::prefcore::Alternative;
use crate::rules::{Family, RuleView, Setting};

/// How decisiveness compares a voter's ranking with the social relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Decisiveness {
    /// `a1 P_i a2 ⇔ a1 S(P) a2`, membership in the relation itself.
    Relation,
    /// `a1 P_i a2 ⇔ a1 Ŝ(P) a2`, the strict component.
    Strict,
    /// The voter's ranking of `{a1, a2}` is society's strict ranking of it,
    /// in both directions.
    Pair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    Wp,
    Iia,
    Ni,
    Dict,
    AntiDict,
    Const,
    USdf,
    Liberal(Decisiveness),
    Decisive(usize),
    M,
    Sp,
    Eff,
    Anon,
    Onto,
    DictScf,
    /// Tops unanimity for SCFs: a shared top is chosen.
    UScf,
}

pub const ACCEPTED_NAMES: &str =
    "wp, iia, ni, dict, antidict, const, u, liberal, liberal:strict, liberal:pair, decisive:<voter>, m, sp, eff, anon, onto, dict_scf, u_scf (prefix ! to negate)";

impl AxiomId {
    pub fn family(self) -> Family {
        use AxiomId::*;
        match self {
            Wp | Iia | Ni | Dict | AntiDict | Const => Family::Aswf,
            USdf | Liberal(_) | Decisive(_) => Family::Sdf,
            M | Sp | Eff | Anon | Onto | DictScf | UScf => Family::Scf,
        }
    }

    pub fn name(self) -> String {
        use AxiomId::*;
        match self {
            Wp => "wp".into(),
            Iia => "iia".into(),
            Ni => "ni".into(),
            Dict => "dict".into(),
            AntiDict => "antidict".into(),
            Const => "const".into(),
            USdf => "u".into(),
            Liberal(Decisiveness::Relation) => "liberal".into(),
            Liberal(Decisiveness::Strict) => "liberal:strict".into(),
            Liberal(Decisiveness::Pair) => "liberal:pair".into(),
            Decisive(i) => format!("decisive:{i}"),
            M => "m".into(),
            Sp => "sp".into(),
            Eff => "eff".into(),
            Anon => "anon".into(),
            Onto => "onto".into(),
            DictScf => "dict_scf".into(),
            UScf => "u_scf".into(),
        }
    }
}

impl FromStr for AxiomId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use AxiomId::*;
        let id = match s {
            "wp" => Wp,
            "iia" => Iia,
            "ni" => Ni,
            "dict" => Dict,
            "antidict" => AntiDict,
            "const" => Const,
            "u" => USdf,
            "liberal" => Liberal(Decisiveness::Relation),
            "liberal:strict" => Liberal(Decisiveness::Strict),
            "liberal:pair" => Liberal(Decisiveness::Pair),
            "m" => M,
            "sp" => Sp,
            "eff" => Eff,
            "anon" => Anon,
            "onto" => Onto,
            "dict_scf" => DictScf,
            "u_scf" => UScf,
            other => match other.strip_prefix("decisive:").map(str::parse) {
                Some(Ok(i)) => Decisive(i),
                _ => return Err(Error::UnknownAxiom { name: s.to_string(), accepted: ACCEPTED_NAMES.to_string() }),
            },
        };
        Ok(id)
    }
}

/// An axiom requirement, possibly negated (`!dict`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axiom {
    pub id: AxiomId,
    pub negated: bool,
}

impl Axiom {
    pub fn new(id: AxiomId) -> Self {
        Self { id, negated: false }
    }

    pub fn not(id: AxiomId) -> Self {
        Self { id, negated: true }
    }

    pub fn family(&self) -> Family {
        self.id.family()
    }

    pub fn positive(&self) -> Self {
        Self::new(self.id)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        f.write_str(&self.id.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.strip_prefix('!') {
            Some(rest) => Ok(Self::not(rest.parse()?)),
            None => Ok(Self::new(s.parse()?)),
        }
    }
}

/// Parses a comma-separated axiom list such as `"wp,iia,!dict"`.
pub fn parse_axioms(s: &str) -> Result<Vec<Axiom>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

/// A voter whose ranking of `(a, b)` disagrees with society at `cell`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub voter: usize,
    pub a: Alternative,
    pub b: Alternative,
    pub cell: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// All voters rank `upper` over `lower` at `profile`; society does not (strictly).
    Unanimity { profile: usize, upper: Alternative, lower: Alternative },
    /// Every voter prefers `by` to the chosen alternative.
    Dominated { profile: usize, chosen: Alternative, by: Alternative },
    /// All voters share `top` but something else is chosen.
    TopIgnored { profile: usize, top: Alternative },
    /// The voters' restrictions to `{a, b}` coincide at both profiles, society's differ.
    PairSplit { first: usize, second: usize, a: Alternative, b: Alternative },
    /// Voter `voter` with true profile `profile` gains by reporting as in `misreport`.
    Manipulation { voter: usize, profile: usize, misreport: usize },
    /// `f(from)` weakly improves for every voter at `to`, yet `f(to)` differs.
    NonMonotone { from: usize, to: usize },
    /// `second` permutes the voters of `first`, outcomes differ.
    Asymmetric { first: usize, second: usize },
    /// No profile ranks `a` over `b` socially.
    Unrealized { a: Alternative, b: Alternative },
    /// `alt` is chosen at no profile.
    Unattained { alt: Alternative },
    /// For each voter (by index), a profile where they are overruled.
    NoDictator { refutations: Vec<usize> },
    /// Two profiles with different outcomes.
    NotConstant { first: usize, second: usize },
    /// Every voter except those in `open` is refuted on every ordered pair.
    TooFewDecisive { open: Vec<usize>, refutations: Vec<Refutation> },
    /// The positive form of a negated axiom holds on this total rule.
    Holds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    #[serde(serialize_with = "ser_axiom")]
    pub axiom: Axiom,
    pub evidence: Evidence,
}

fn ser_axiom<S: serde::Serializer>(a: &Axiom, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&a.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TriState {
    Satisfied,
    Violated(Certificate),
    Undetermined,
}

impl TriState {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, TriState::Satisfied)
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, TriState::Violated(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            TriState::Violated(c) => Some(c),
            _ => None,
        }
    }
}

/// Evaluates `axiom` on a total or partial rule.
pub fn evaluate(axiom: &Axiom, rule: &impl RuleView) -> Result<TriState> {
    if axiom.family() != rule.family() {
        return Err(Error::FamilyMismatch { axiom: axiom.to_string(), family: rule.family().to_string() });
    }
    let positive = evaluate_positive(axiom.id, rule);
    Ok(if !axiom.negated {
        match positive {
            Outcome::Holds => TriState::Satisfied,
            Outcome::Fails(evidence) => TriState::Violated(Certificate { axiom: *axiom, evidence }),
            Outcome::Open => TriState::Undetermined,
        }
    } else {
        match positive {
            Outcome::Holds => TriState::Violated(Certificate { axiom: *axiom, evidence: Evidence::Holds }),
            Outcome::Fails(_) => TriState::Satisfied,
            Outcome::Open => TriState::Undetermined,
        }
    })
}

/// Evaluates every axiom; returns the first violation, if any.
pub fn first_violation(axioms: &[Axiom], rule: &impl RuleView) -> Result<Option<Certificate>> {
    for a in axioms {
        if let TriState::Violated(c) = evaluate(a, rule)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// True when the total rule satisfies all axioms.
pub fn satisfies_all(axioms: &[Axiom], rule: &impl RuleView) -> Result<bool> {
    for a in axioms {
        if !evaluate(a, rule)?.is_satisfied() {
            return Ok(false);
        }
    }
    Ok(true)
}

enum Outcome {
    Holds,
    Fails(Evidence),
    Open,
}

fn evaluate_positive(id: AxiomId, rule: &impl RuleView) -> Outcome {
    use AxiomId::*;
    match id {
        Wp => check_unanimity(rule, |s, v, a, b| s.order(v as usize).prefers(a, b)),
        USdf => check_unanimity(rule, |s, v, a, b| sdf_rel(s, v).strict(a, b)),
        Iia => check_iia(rule),
        Ni => check_ni(rule),
        Dict => check_dictator(rule, |s, c, i, v| s.voter_order_index(c, i) == v as usize),
        AntiDict => check_dictator(rule, |s, c, i, v| s.voter_order(c, i).reversed().index() == v as usize),
        DictScf => check_dictator(rule, |s, c, i, v| s.voter_order(c, i).top() == v as usize),
        Const => check_const(rule),
        Liberal(mode) => check_liberal(rule, mode, None),
        Decisive(i) => check_liberal(rule, Decisiveness::Relation, Some(i)),
        Sp => check_sp(rule),
        M => check_m(rule),
        Eff => check_eff(rule),
        Anon => check_anon(rule),
        Onto => check_onto(rule),
        UScf => check_u_scf(rule),
    }
}

fn sdf_rel(s: &Setting, v: u32) -> crate::rules::ChoiceRelation {
    s.relations().expect("SDF rules imply enumerated relations")[v as usize]
}

/// WP and U: unanimous `a ≻ b` forces social `a ≻ b`.
fn check_unanimity(
    rule: &impl RuleView,
    strictly_over: impl Fn(&Setting, u32, Alternative, Alternative) -> bool,
) -> Outcome {
    let s = rule.setting();
    let all = s.all_voters_mask();
    let mut open = false;
    for cell in 0..s.cells() {
        for (k, &(x, y)) in s.pairs().iter().enumerate() {
            let pat = s.pattern(cell, k);
            let (upper, lower) = if pat == all {
                (x, y)
            } else if pat == 0 {
                (y, x)
            } else {
                continue;
            };
            match rule.value(cell) {
                None => open = true,
                Some(v) if !strictly_over(s, v, upper, lower) => {
                    return Outcome::Fails(Evidence::Unanimity { profile: cell, upper, lower })
                }
                Some(_) => {}
            }
        }
    }
    if open {
        Outcome::Open
    } else {
        Outcome::Holds
    }
}

fn check_iia(rule: &impl RuleView) -> Outcome {
    let s = rule.setting();
    let mut open = false;
    for (k, &(a, b)) in s.pairs().iter().enumerate() {
        // pattern -> (first assigned cell, its direction, any member unassigned, member count)
        let mut groups: HashMap<u64, (Option<(usize, bool)>, bool, usize)> = HashMap::new();
        for cell in 0..s.cells() {
            let g = groups.entry(s.pattern(cell, k)).or_insert((None, false, 0));
            g.2 += 1;
            match rule.value(cell) {
                None => g.1 = true,
                Some(v) => {
                    let dir = s.order(v as usize).prefers(a, b);
                    match g.0 {
                        None => g.0 = Some((cell, dir)),
                        Some((first, d)) if d != dir => {
                            return Outcome::Fails(Evidence::PairSplit { first, second: cell, a, b })
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        if groups.values().any(|g| g.1 && g.2 > 1) {
            open = true;
        }
    }
    if open {
        Outcome::Open
    } else {
        Outcome::Holds
    }
}

fn check_ni(rule: &impl RuleView) -> Outcome {
    let s = rule.setting();
    let m = s.m();
    let mut realized = vec![false; m * m];
    let mut open = false;
    for cell in 0..s.cells() {
        match rule.value(cell) {
            None => open = true,
            Some(v) => {
                let o = s.order(v as usize);
                for a in 0..m {
                    for b in 0..m {
                        if o.prefers(a, b) {
                            realized[a * m + b] = true;
                        }
                    }
                }
            }
        }
    }
    let missing = (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).find(|&(a, b)| a != b && !realized[a * m + b]);
    match (missing, open) {
        (None, _) => Outcome::Holds,
        (Some(_), true) => Outcome::Open,
        (Some((a, b)), false) => Outcome::Fails(Evidence::Unrealized { a, b }),
    }
}

fn check_onto(rule: &impl RuleView) -> Outcome {
    let s = rule.setting();
    let mut hit = vec![false; s.m()];
    let mut open = false;
    for cell in 0..s.cells() {
        match rule.value(cell) {
            None => open = true,
            Some(v) => hit[v as usize] = true,
        }
    }
    match (hit.iter().position(|h| !h), open) {
        (None, _) => Outcome::Holds,
        (Some(_), true) => Outcome::Open,
        (Some(alt), false) => Outcome::Fails(Evidence::Unattained { alt }),
    }
}

/// Dictatorship-style: some voter `i` with `follows(cell, i, value)` everywhere.
fn check_dictator(rule: &impl RuleView, follows: impl Fn(&Setting, usize, usize, u32) -> bool) -> Outcome {
    let s = rule.setting();
    let mut refutations: Vec<Option<usize>> = vec![None; s.n()];
    let mut total = true;
    for cell in 0..s.cells() {
        match rule.value(cell) {
            None => total = false,
            Some(v) => {
                for (i, r) in refutations.iter_mut().enumerate() {
                    if r.is_none() && !follows(s, cell, i, v) {
                        *r = Some(cell);
                    }
                }
            }
        }
    }
    if refutations.iter().all(Option::is_some) {
        Outcome::Fails(Evidence::NoDictator { refutations: refutations.into_iter().flatten().collect() })
    } else if total {
        Outcome::Holds
    } else {
        Outcome::Open
    }
}

fn check_const(rule: &impl RuleView) -> Outcome {
    let s = rule.setting();
    let mut first: Option<(usize, u32)> = None;
    let mut total = true;
    for cell in 0..s.cells() {
        match (rule.value(cell), first) {
            (None, _) => total = false,
            (Some(v), None) => first = Some((cell, v)),
            (Some(v), Some((c0, v0))) if v != v0 => {
                return Outcome::Fails(Evidence::NotConstant { first: c0, second: cell })
            }
            _ => {}
        }
    }
    if total {
        Outcome::Holds
    } else {
        Outcome::Open
    }
}

/// Does voter `i`'s ranking of `(a1, a2)` at `cell` match the social relation?
pub(crate) fn decisive_agrees(
    s: &Setting,
    mode: Decisiveness,
    cell: usize,
    i: usize,
    value: u32,
    a1: Alternative,
    a2: Alternative,
) -> bool {
    let rel = sdf_rel(s, value);
    let own = s.voter_order(cell, i).prefers(a1, a2);
    match mode {
        Decisiveness::Relation => own == rel.holds(a1, a2),
        Decisiveness::Strict => own == rel.strict(a1, a2),
        Decisiveness::Pair => {
            if own {
                rel.strict(a1, a2)
            } else {
                rel.strict(a2, a1)
            }
        }
    }
}

fn check_liberal(rule: &impl RuleView, mode: Decisiveness, only: Option<usize>) -> Outcome {
    let s = rule.setting();
    let m = s.m();
    let voters: Vec<usize> = match only {
        Some(i) if i < s.n() => vec![i],
        Some(_) => vec![],
        None => (0..s.n()).collect(),
    };
    let needed = if only.is_some() { 1 } else { 2 };
    let ordered: Vec<(usize, usize)> =
        (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
    let mut open_voters = Vec::new();
    let mut refutations = Vec::new();
    for &i in &voters {
        let mut voter_refs = Vec::new();
        for &(a1, a2) in &ordered {
            let refuting =
                (0..s.cells()).find(|&c| rule.value(c).is_some_and(|v| !decisive_agrees(s, mode, c, i, v, a1, a2)));
            match refuting {
                Some(cell) => voter_refs.push(Refutation { voter: i, a: a1, b: a2, cell }),
                None => break,
            }
        }
        if voter_refs.len() == ordered.len() {
            refutations.extend(voter_refs);
        } else {
            open_voters.push(i);
        }
    }
    if open_voters.len() < needed {
        Outcome::Fails(Evidence::TooFewDecisive { open: open_voters, refutations })
    } else if rule.is_total() {
        Outcome::Holds
    } else {
        Outcome::Open
    }
}

/// Some alternative chosen at a truthful profile is beaten, for the
/// manipulating voter, by the outcome at the misreport.
fn manipulates(s: &Setting, voter: usize, truthful: usize, chosen: u32, misreported: u32) -> bool {
    s.voter_order(truthful, voter).prefers(misreported as usize, chosen as usize)
}

fn check_sp(rule: &impl RuleView) -> Outcome {
    let s = rule.setting();
    let d = s.domain().len();
    for cell in 0..s.cells() {
        let Some(x) = rule.value(cell) else { continue };
        for i in 0..s.n() {
            let own = s.voter_position(cell, i);
            for pos in (0..d).filter(|&p| p != own) {
                let other = s.with_voter(cell, i, pos);
                if let Some(y) = rule.value(other) {
                    if manipulates(s, i, cell, x, y) {
                        return Outcome::Fails(Evidence::Manipulation { voter: i, profile: cell, misreport: other });
                    }
                }
            }
        }
    }
    if rule.is_total() {
        Outcome::Holds
    } else {
        Outcome::Open
    }
}

/// At `to`, every voter ranks `x` above everything they ranked it above at `from`.
pub(crate) fn weakly_improves(s: &Setting, from: usize, to: usize, x: Alternative) -> bool {
    (0..s.n()).all(|i| {
        let (p, q) = (s.voter_order(from, i), s.voter_order(to, i));
        (0..s.m()).all(|b| !p.prefers(x, b) || q.prefers(x, b))
    })
}

fn check_m(rule: &impl RuleView) -> Outcome {
    let s = rule.setting();
    for from in 0..s.cells() {
        let Some(x) = rule.value(from) else { continue };
        for to in 0..s.cells() {
            if to == from {
                continue;
            }
            if let Some(y) = rule.value(to) {
                if y != x && weakly_improves(s, from, to, x as usize) {
                    return Outcome::Fails(Evidence::NonMonotone { from, to });
                }
            }
        }
    }
    if rule.is_total() {
        Outcome::Holds
    } else {
        Outcome::Open
    }
}

pub(crate) fn pareto_dominator(s: &Setting, cell: usize, x: Alternative) -> Option<Alternative> {
    (0..s.m()).find(|&b| b != x && (0..s.n()).all(|i| s.voter_order(cell, i).prefers(b, x)))
}

fn check_eff(rule: &impl RuleView) -> Outcome {
    let s = rule.setting();
    let mut open = false;
    for cell in 0..s.cells() {
        match rule.value(cell) {
            Some(v) => {
                if let Some(by) = pareto_dominator(s, cell, v as usize) {
                    return Outcome::Fails(Evidence::Dominated { profile: cell, chosen: v as usize, by });
                }
            }
            None => {
                if (0..s.m()).any(|x| pareto_dominator(s, cell, x).is_some()) {
                    open = true;
                }
            }
        }
    }
    if open {
        Outcome::Open
    } else {
        Outcome::Holds
    }
}

pub(crate) fn shared_top(s: &Setting, cell: usize) -> Option<Alternative> {
    let t = s.voter_order(cell, 0).top();
    (0..s.n()).all(|i| s.voter_order(cell, i).top() == t).then_some(t)
}

fn check_u_scf(rule: &impl RuleView) -> Outcome {
    let s = rule.setting();
    let mut open = false;
    for cell in 0..s.cells() {
        if let Some(top) = shared_top(s, cell) {
            match rule.value(cell) {
                None => open = true,
                Some(v) if v as usize != top => return Outcome::Fails(Evidence::TopIgnored { profile: cell, top }),
                Some(_) => {}
            }
        }
    }
    if open {
        Outcome::Open
    } else {
        Outcome::Holds
    }
}

/// Sorted voter positions: profiles related by a voter permutation share it.
pub(crate) fn anonymity_class(s: &Setting, cell: usize) -> Vec<usize> {
    let mut key: Vec<usize> = (0..s.n()).map(|i| s.voter_position(cell, i)).collect();
    key.sort_unstable();
    key
}

fn check_anon(rule: &impl RuleView) -> Outcome {
    let s = rule.setting();
    let mut groups: HashMap<Vec<usize>, (Option<(usize, u32)>, bool, usize)> = HashMap::new();
    for cell in 0..s.cells() {
        let g = groups.entry(anonymity_class(s, cell)).or_insert((None, false, 0));
        g.2 += 1;
        match (rule.value(cell), g.0) {
            (None, _) => g.1 = true,
            (Some(v), None) => g.0 = Some((cell, v)),
            (Some(v), Some((first, v0))) if v != v0 => {
                return Outcome::Fails(Evidence::Asymmetric { first, second: cell })
            }
            _ => {}
        }
    }
    if groups.values().any(|g| g.1 && g.2 > 1) {
        Outcome::Open
    } else {
        Outcome::Holds
    }
}

impl Certificate {
    /// Re-checks the evidence directly against the axiom's definition.
    pub fn replay(&self, rule: &impl RuleView) -> bool {
        let s = rule.setting();
        let val = |c: usize| rule.value(c);
        let in_range = |c: usize| c < s.cells();
        if self.axiom.negated {
            // The positive axiom must hold outright, which needs a total rule.
            return matches!(self.evidence, Evidence::Holds)
                && rule.is_total()
                && matches!(evaluate(&self.axiom.positive(), rule), Ok(TriState::Satisfied));
        }
        match (&self.evidence, self.axiom.id) {
            (&Evidence::Unanimity { profile, upper, lower }, id @ (AxiomId::Wp | AxiomId::USdf)) => {
                in_range(profile)
                    && s.unanimous(profile, upper, lower)
                    && val(profile).is_some_and(|v| {
                        if id == AxiomId::Wp {
                            !s.order(v as usize).prefers(upper, lower)
                        } else {
                            !sdf_rel(s, v).strict(upper, lower)
                        }
                    })
            }
            (&Evidence::Dominated { profile, chosen, by }, AxiomId::Eff) => {
                in_range(profile) && val(profile) == Some(chosen as u32) && s.unanimous(profile, by, chosen)
            }
            (&Evidence::TopIgnored { profile, top }, AxiomId::UScf) => {
                in_range(profile)
                    && (0..s.n()).all(|i| s.voter_order(profile, i).top() == top)
                    && val(profile).is_some_and(|v| v as usize != top)
            }
            (&Evidence::PairSplit { first, second, a, b }, AxiomId::Iia) => {
                in_range(first)
                    && in_range(second)
                    && (0..s.n())
                        .all(|i| s.voter_order(first, i).prefers(a, b) == s.voter_order(second, i).prefers(a, b))
                    && match (val(first), val(second)) {
                        (Some(x), Some(y)) => s.order(x as usize).prefers(a, b) != s.order(y as usize).prefers(a, b),
                        _ => false,
                    }
            }
            (&Evidence::Manipulation { voter, profile, misreport }, AxiomId::Sp) => {
                in_range(profile)
                    && in_range(misreport)
                    && voter < s.n()
                    && (0..s.n())
                        .all(|j| j == voter || s.voter_order_index(profile, j) == s.voter_order_index(misreport, j))
                    && match (val(profile), val(misreport)) {
                        (Some(x), Some(y)) => s.voter_order(profile, voter).prefers(y as usize, x as usize),
                        _ => false,
                    }
            }
            (&Evidence::NonMonotone { from, to }, AxiomId::M) => {
                in_range(from)
                    && in_range(to)
                    && match (val(from), val(to)) {
                        (Some(x), Some(y)) => x != y && weakly_improves(s, from, to, x as usize),
                        _ => false,
                    }
            }
            (&Evidence::Asymmetric { first, second }, AxiomId::Anon) => {
                in_range(first)
                    && in_range(second)
                    && anonymity_class(s, first) == anonymity_class(s, second)
                    && matches!((val(first), val(second)), (Some(x), Some(y)) if x != y)
            }
            (&Evidence::Unrealized { a, b }, AxiomId::Ni) => {
                a != b && (0..s.cells()).all(|c| val(c).is_some_and(|v| !s.order(v as usize).prefers(a, b)))
            }
            (&Evidence::Unattained { alt }, AxiomId::Onto) => {
                (0..s.cells()).all(|c| val(c).is_some_and(|v| v as usize != alt))
            }
            (Evidence::NoDictator { refutations }, id @ (AxiomId::Dict | AxiomId::AntiDict | AxiomId::DictScf)) => {
                refutations.len() == s.n()
                    && refutations.iter().enumerate().all(|(i, &c)| {
                        in_range(c)
                            && val(c).is_some_and(|v| {
                                let own = s.voter_order(c, i);
                                match id {
                                    AxiomId::Dict => own.index() != v as usize,
                                    AxiomId::AntiDict => own.reversed().index() != v as usize,
                                    _ => own.top() != v as usize,
                                }
                            })
                    })
            }
            (&Evidence::NotConstant { first, second }, AxiomId::Const) => {
                in_range(first) && in_range(second) && matches!((val(first), val(second)), (Some(x), Some(y)) if x != y)
            }
            (Evidence::TooFewDecisive { open, refutations }, id @ (AxiomId::Liberal(_) | AxiomId::Decisive(_))) => {
                let (mode, voters, needed): (_, Vec<usize>, usize) = match id {
                    AxiomId::Liberal(mode) => (mode, (0..s.n()).collect(), 2),
                    AxiomId::Decisive(i) => {
                        (Decisiveness::Relation, vec![i].into_iter().filter(|&i| i < s.n()).collect(), 1)
                    }
                    _ => unreachable!(),
                };
                let m = s.m();
                let refs_ok = refutations.iter().all(|r| {
                    in_range(r.cell)
                        && r.voter < s.n()
                        && r.a != r.b
                        && val(r.cell).is_some_and(|v| !decisive_agrees(s, mode, r.cell, r.voter, v, r.a, r.b))
                });
                let closed: Vec<usize> = voters.iter().copied().filter(|i| !open.contains(i)).collect();
                let covered = closed.iter().all(|&i| {
                    (0..m).all(|a| {
                        (0..m).all(|b| a == b || refutations.iter().any(|r| r.voter == i && r.a == a && r.b == b))
                    })
                });
                refs_ok && covered && voters.len() - closed.len() < needed
            }
            _ => false,
        }
    }
}

/// The lowest-indexed dictator of a total ASWF, if any.
pub fn dictator(rule: &impl RuleView) -> Option<usize> {
    let s = rule.setting();
    (0..s.n()).find(|&i| (0..s.cells()).all(|c| rule.value(c) == Some(s.voter_order_index(c, i) as u32)))
}

pub fn anti_dictator(rule: &impl RuleView) -> Option<usize> {
    let s = rule.setting();
    (0..s.n()).find(|&i| (0..s.cells()).all(|c| rule.value(c) == Some(s.voter_order(c, i).reversed().index() as u32)))
}

pub fn scf_dictator(rule: &impl RuleView) -> Option<usize> {
    let s = rule.setting();
    (0..s.n()).find(|&i| (0..s.cells()).all(|c| rule.value(c) == Some(s.voter_order(c, i).top() as u32)))
}
