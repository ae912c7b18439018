//! Propositional encodings of rule-search specs, and decoding of models.
//!
//! Decision variables come first and determine the rule: one per (profile,
//! unordered pair) for ASWFs, one per (profile, alternative) for SCFs, one per
//! (profile, choice relation) for SDFs. Every auxiliary variable is defined by
//! a full equivalence over earlier variables, so models of the formula and
//! satisfying rules are in bijection.
//!
//! Axioms that are plain clause sets over decision variables are negated
//! generically: one gate per clause (true iff the clause is falsified) and a
//! clause demanding some gate.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::cnf::{CnfFormula, Lit, Model};
use crate::axioms::{
    anonymity_class, decisive_agrees, pareto_dominator, shared_top, weakly_improves, Axiom, AxiomId, Decisiveness,
};
use crate::error::{Error, Result};
use crate::prefcore::{alt_letter, Domain, LinearOrder};
use crate::rules::{ChoiceRelation, Family, RuleTable, Setting};
use crate::search::SearchSpec;

/// An encoded spec: the formula plus what is needed to decode its models.
#[derive(Clone, Debug)]
pub struct Encoding {
    pub formula: CnfFormula,
    pub family: Family,
    pub setting: Arc<Setting>,
    pub axioms: Vec<Axiom>,
    /// Variables `1..=decision_vars` determine the rule.
    pub decision_vars: usize,
}

impl Encoding {
    pub fn decode(&self, model: &Model) -> Result<RuleTable> {
        decode_rule(self.family, &self.setting, model)
    }
}

/// Encodes any rule family.
pub fn encode(spec: &SearchSpec) -> Result<Encoding> {
    spec.validate()?;
    let mut enc = Builder::new(spec)?;
    match spec.family {
        Family::Aswf => enc.aswf()?,
        Family::Scf => enc.scf()?,
        Family::Sdf => enc.sdf()?,
    }
    Ok(enc.finish())
}

pub fn encode_aswf(spec: &SearchSpec) -> Result<Encoding> {
    if spec.family != Family::Aswf {
        return Err(Error::InvalidArgument("encode_aswf needs an ASWF spec".into()));
    }
    encode(spec)
}

fn axiom_list(axioms: &[Axiom]) -> String {
    if axioms.is_empty() {
        "-".into()
    } else {
        axioms.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
    }
}

struct Builder<'a> {
    spec: &'a SearchSpec,
    s: &'a Setting,
    f: CnfFormula,
    decision_vars: usize,
}

impl<'a> Builder<'a> {
    fn new(spec: &'a SearchSpec) -> Result<Self> {
        let s: &Setting = &spec.setting;
        let mut f = CnfFormula::new();
        f.push_meta(format!("choicecheck family={} m={} n={}", spec.family, s.m(), s.n()));
        f.push_meta(format!("domain={}", s.domain().words().join(",")));
        f.push_meta(format!("axioms={}", axiom_list(&spec.axioms)));
        Ok(Self { spec, s, f, decision_vars: 0 })
    }

    fn finish(self) -> Encoding {
        Encoding {
            formula: self.f,
            family: self.spec.family,
            setting: self.spec.setting.clone(),
            axioms: self.spec.axioms.clone(),
            decision_vars: self.decision_vars,
        }
    }

    fn clause(&mut self, lits: Vec<Lit>) {
        self.f.push_clause(lits);
    }

    /// `g ⇔ (l1 ∧ l2 ∧ …)`.
    fn and_gate(&mut self, tag: String, lits: &[Lit]) -> Lit {
        let g = self.f.new_var(tag);
        for &l in lits {
            self.clause(vec![-g, l]);
        }
        let mut big = vec![g];
        big.extend(lits.iter().map(|l| -l));
        self.clause(big);
        g
    }

    /// `g ⇔ (l1 ∨ l2 ∨ …)`.
    fn or_gate(&mut self, tag: String, lits: &[Lit]) -> Lit {
        let g = self.f.new_var(tag);
        for &l in lits {
            self.clause(vec![g, -l]);
        }
        let mut big = vec![-g];
        big.extend_from_slice(lits);
        self.clause(big);
        g
    }

    /// Adds a clause set, or its negation when `negated`.
    fn constrain(&mut self, axiom: &Axiom, clauses: Vec<Vec<Lit>>) {
        if !axiom.negated {
            for c in clauses {
                self.clause(c);
            }
            return;
        }
        let unique: BTreeSet<Vec<Lit>> = clauses
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        let mut gates = Vec::with_capacity(unique.len());
        for (k, c) in unique.into_iter().enumerate() {
            let negs: Vec<Lit> = c.iter().map(|l| -l).collect();
            gates.push(self.and_gate(format!("aux {axiom} violation {k}"), &negs));
        }
        self.clause(gates);
    }

    /// Existential "some voter i with all of `per_voter[i]` true", or its negation.
    fn some_voter(&mut self, axiom: &Axiom, per_voter: Vec<Vec<Lit>>) {
        if axiom.negated {
            for lits in per_voter {
                self.clause(lits.iter().map(|l| -l).collect());
            }
        } else {
            let mut gates = Vec::new();
            for (i, lits) in per_voter.iter().enumerate() {
                gates.push(self.and_gate(format!("aux {} voter {i}", axiom.id.name()), lits));
            }
            self.clause(gates);
        }
    }

    fn unsupported(&self, axiom: &Axiom) -> Error {
        Error::FamilyMismatch { axiom: axiom.to_string(), family: self.spec.family.to_string() }
    }

    // --- ASWF -----------------------------------------------------------

    /// Literal for "x socially above y at cell".
    fn above(&self, cell: usize, x: usize, y: usize) -> Lit {
        let v = (cell * self.s.pairs().len() + self.s.pair_index(x, y) + 1) as Lit;
        if x < y {
            v
        } else {
            -v
        }
    }

    /// Literal that agrees with `order`'s ranking of pair `k` at `cell`.
    fn agrees(&self, cell: usize, k: usize, order: &LinearOrder) -> Lit {
        let (a, b) = self.s.pairs()[k];
        if order.prefers(a, b) {
            self.above(cell, a, b)
        } else {
            self.above(cell, b, a)
        }
    }

    fn aswf(&mut self) -> Result<()> {
        let s = self.s;
        let (m, np) = (s.m(), s.pairs().len());
        for cell in 0..s.cells() {
            for &(a, b) in s.pairs() {
                self.f.new_var(format!("aswf {cell} {}{}", alt_letter(a), alt_letter(b)));
            }
        }
        self.decision_vars = s.cells() * np;
        // no social cycle x > y > z > x; the three rotations of a cycle give the same clause
        for cell in 0..s.cells() {
            for x in 0..m {
                for y in x + 1..m {
                    for z in y + 1..m {
                        for (p, q, r) in [(x, y, z), (x, z, y)] {
                            let c = vec![-self.above(cell, p, q), -self.above(cell, q, r), -self.above(cell, r, p)];
                            self.clause(c);
                        }
                    }
                }
            }
        }
        for axiom in self.spec.axioms.clone() {
            match axiom.id {
                AxiomId::Wp => {
                    let mut cl = Vec::new();
                    for cell in 0..s.cells() {
                        for k in 0..np {
                            let pat = s.pattern(cell, k);
                            if pat == s.all_voters_mask() || pat == 0 {
                                cl.push(vec![self.agrees(cell, k, s.voter_order(cell, 0))]);
                            }
                        }
                    }
                    self.constrain(&axiom, cl);
                }
                AxiomId::Iia => {
                    let mut cl = Vec::new();
                    for k in 0..np {
                        let mut groups: std::collections::BTreeMap<u64, Vec<usize>> = Default::default();
                        for cell in 0..s.cells() {
                            groups.entry(s.pattern(cell, k)).or_default().push(cell);
                        }
                        for members in groups.values() {
                            for w in members.windows(2) {
                                let (u, v) = (self.pair_var(w[0], k), self.pair_var(w[1], k));
                                cl.push(vec![-u, v]);
                                cl.push(vec![u, -v]);
                            }
                        }
                    }
                    self.constrain(&axiom, cl);
                }
                AxiomId::Ni => {
                    let mut cl = Vec::new();
                    for x in 0..m {
                        for y in 0..m {
                            if x != y {
                                cl.push((0..s.cells()).map(|c| self.above(c, x, y)).collect());
                            }
                        }
                    }
                    self.constrain(&axiom, cl);
                }
                AxiomId::Const => {
                    let mut cl = Vec::new();
                    for cell in 1..s.cells() {
                        for k in 0..np {
                            let (u, v) = (self.pair_var(0, k), self.pair_var(cell, k));
                            cl.push(vec![-u, v]);
                            cl.push(vec![u, -v]);
                        }
                    }
                    self.constrain(&axiom, cl);
                }
                AxiomId::Dict | AxiomId::AntiDict => {
                    let per_voter = (0..s.n())
                        .map(|i| {
                            (0..s.cells())
                                .flat_map(|cell| {
                                    let o = s.voter_order(cell, i);
                                    let target = if axiom.id == AxiomId::Dict { o.clone() } else { o.reversed() };
                                    (0..np).map(move |k| (cell, k, target.clone()))
                                })
                                .map(|(cell, k, t)| self.agrees(cell, k, &t))
                                .collect()
                        })
                        .collect();
                    self.some_voter(&axiom, per_voter);
                }
                _ => return Err(self.unsupported(&axiom)),
            }
        }
        Ok(())
    }

    fn pair_var(&self, cell: usize, k: usize) -> Lit {
        (cell * self.s.pairs().len() + k + 1) as Lit
    }

    // --- SCF ------------------------------------------------------------

    fn chosen(&self, cell: usize, a: usize) -> Lit {
        (cell * self.s.m() + a + 1) as Lit
    }

    fn exactly_one(&mut self, lits: &[Lit]) {
        self.clause(lits.to_vec());
        for i in 0..lits.len() {
            for j in i + 1..lits.len() {
                self.clause(vec![-lits[i], -lits[j]]);
            }
        }
    }

    fn scf(&mut self) -> Result<()> {
        let s = self.s;
        let m = s.m();
        for cell in 0..s.cells() {
            for a in 0..m {
                self.f.new_var(format!("scf {cell} {}", alt_letter(a)));
            }
        }
        self.decision_vars = s.cells() * m;
        for cell in 0..s.cells() {
            let lits: Vec<Lit> = (0..m).map(|a| self.chosen(cell, a)).collect();
            self.exactly_one(&lits);
        }
        for axiom in self.spec.axioms.clone() {
            match axiom.id {
                AxiomId::Sp => {
                    let mut cl = Vec::new();
                    for cell in 0..s.cells() {
                        for i in 0..s.n() {
                            let own = s.voter_position(cell, i);
                            let truth = s.voter_order(cell, i);
                            for pos in (0..s.domain().len()).filter(|&p| p != own) {
                                let other = s.with_voter(cell, i, pos);
                                for x in 0..m {
                                    for y in (0..m).filter(|&y| truth.prefers(y, x)) {
                                        cl.push(vec![-self.chosen(cell, x), -self.chosen(other, y)]);
                                    }
                                }
                            }
                        }
                    }
                    self.constrain(&axiom, cl);
                }
                AxiomId::M => {
                    let mut cl = Vec::new();
                    for from in 0..s.cells() {
                        for to in (0..s.cells()).filter(|&t| t != from) {
                            for x in 0..m {
                                if weakly_improves(s, from, to, x) {
                                    cl.push(vec![-self.chosen(from, x), self.chosen(to, x)]);
                                }
                            }
                        }
                    }
                    self.constrain(&axiom, cl);
                }
                AxiomId::Eff => {
                    let cl = (0..s.cells())
                        .flat_map(|c| (0..m).map(move |x| (c, x)))
                        .filter(|&(c, x)| pareto_dominator(s, c, x).is_some())
                        .map(|(c, x)| vec![-self.chosen(c, x)])
                        .collect();
                    self.constrain(&axiom, cl);
                }
                AxiomId::UScf => {
                    let cl = (0..s.cells()).filter_map(|c| shared_top(s, c).map(|t| vec![self.chosen(c, t)])).collect();
                    self.constrain(&axiom, cl);
                }
                AxiomId::Anon => {
                    let mut classes: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
                    for cell in 0..s.cells() {
                        classes.entry(anonymity_class(s, cell)).or_default().push(cell);
                    }
                    let mut cl = Vec::new();
                    for members in classes.values() {
                        for w in members.windows(2) {
                            for a in 0..m {
                                let (u, v) = (self.chosen(w[0], a), self.chosen(w[1], a));
                                cl.push(vec![-u, v]);
                                cl.push(vec![u, -v]);
                            }
                        }
                    }
                    self.constrain(&axiom, cl);
                }
                AxiomId::Onto => {
                    let cl = (0..m).map(|a| (0..s.cells()).map(|c| self.chosen(c, a)).collect()).collect();
                    self.constrain(&axiom, cl);
                }
                AxiomId::DictScf => {
                    let per_voter = (0..s.n())
                        .map(|i| (0..s.cells()).map(|c| self.chosen(c, s.voter_order(c, i).top())).collect())
                        .collect();
                    self.some_voter(&axiom, per_voter);
                }
                _ => return Err(self.unsupported(&axiom)),
            }
        }
        Ok(())
    }

    // --- SDF ------------------------------------------------------------

    fn sdf(&mut self) -> Result<()> {
        let s = self.s;
        let rels: Vec<ChoiceRelation> = s.relations()?.to_vec();
        let r = rels.len();
        let rel_var = |cell: usize, idx: usize| (cell * r + idx + 1) as Lit;
        for cell in 0..s.cells() {
            for idx in 0..r {
                self.f.new_var(format!("sdf {cell} {idx}"));
            }
        }
        self.decision_vars = s.cells() * r;
        for cell in 0..s.cells() {
            let lits: Vec<Lit> = (0..r).map(|idx| rel_var(cell, idx)).collect();
            self.exactly_one(&lits);
        }
        let m = s.m();
        for axiom in self.spec.axioms.clone() {
            match axiom.id {
                AxiomId::USdf => {
                    let mut cl = Vec::new();
                    for cell in 0..s.cells() {
                        for (idx, rel) in rels.iter().enumerate() {
                            let bad =
                                (0..m).any(|x| (0..m).any(|y| x != y && s.unanimous(cell, x, y) && !rel.strict(x, y)));
                            if bad {
                                cl.push(vec![-rel_var(cell, idx)]);
                            }
                        }
                    }
                    self.constrain(&axiom, cl);
                }
                AxiomId::Decisive(i) if i >= s.n() => {
                    // a voter outside the electorate is never decisive
                    if !axiom.negated {
                        self.clause(vec![]);
                    }
                }
                AxiomId::Liberal(_) | AxiomId::Decisive(_) => {
                    let (mode, voters): (Decisiveness, Vec<usize>) = match axiom.id {
                        AxiomId::Liberal(mode) => (mode, (0..s.n()).collect()),
                        AxiomId::Decisive(i) => (Decisiveness::Relation, vec![i]),
                        _ => unreachable!(),
                    };
                    let ordered: Vec<(usize, usize)> =
                        (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
                    let mut decisive = Vec::new();
                    for &i in &voters {
                        let mut per_pair = Vec::new();
                        for &(a1, a2) in &ordered {
                            let mut per_cell = Vec::new();
                            for cell in 0..s.cells() {
                                let agree: Vec<Lit> = (0..r)
                                    .filter(|&idx| decisive_agrees(s, mode, cell, i, idx as u32, a1, a2))
                                    .map(|idx| rel_var(cell, idx))
                                    .collect();
                                let tag = format!(
                                    "aux {} voter {i} pair {}{} profile {cell}",
                                    axiom.id.name(),
                                    alt_letter(a1),
                                    alt_letter(a2)
                                );
                                per_cell.push(self.or_gate(tag, &agree));
                            }
                            let tag =
                                format!("aux {} voter {i} pair {}{}", axiom.id.name(), alt_letter(a1), alt_letter(a2));
                            per_pair.push(self.and_gate(tag, &per_cell));
                        }
                        decisive.push(self.or_gate(format!("aux {} voter {i}", axiom.id.name()), &per_pair));
                    }
                    match (axiom.id, axiom.negated) {
                        (AxiomId::Decisive(_), false) => self.clause(vec![decisive[0]]),
                        (AxiomId::Decisive(_), true) => self.clause(vec![-decisive[0]]),
                        (_, false) => {
                            let mut both = Vec::new();
                            for i in 0..decisive.len() {
                                for j in i + 1..decisive.len() {
                                    let tag = format!("aux {} voters {i} {j}", axiom.id.name());
                                    both.push(self.and_gate(tag, &[decisive[i], decisive[j]]));
                                }
                            }
                            self.clause(both);
                        }
                        (_, true) => {
                            for i in 0..decisive.len() {
                                for j in i + 1..decisive.len() {
                                    self.clause(vec![-decisive[i], -decisive[j]]);
                                }
                            }
                        }
                    }
                }
                _ => return Err(self.unsupported(&axiom)),
            }
        }
        Ok(())
    }
}

/// Rebuilds the rule a model describes.
pub fn decode_rule(family: Family, setting: &Arc<Setting>, model: &Model) -> Result<RuleTable> {
    let s = setting;
    let cells = s.cells();
    let outcomes: Vec<u32> = match family {
        Family::Aswf => {
            let np = s.pairs().len();
            if model.num_vars() < cells * np {
                return Err(Error::Decode("model is shorter than the decision variables".into()));
            }
            (0..cells)
                .map(|cell| {
                    let mut wins = vec![0usize; s.m()];
                    for (k, &(a, b)) in s.pairs().iter().enumerate() {
                        if model.value((cell * np + k + 1) as u32) {
                            wins[a] += 1;
                        } else {
                            wins[b] += 1;
                        }
                    }
                    let mut word: Vec<usize> = (0..s.m()).collect();
                    word.sort_by_key(|&a| std::cmp::Reverse(wins[a]));
                    let order = LinearOrder::from_word(&word)?;
                    let consistent = s
                        .pairs()
                        .iter()
                        .enumerate()
                        .all(|(k, &(a, b))| model.value((cell * np + k + 1) as u32) == order.prefers(a, b));
                    if !consistent {
                        return Err(Error::Decode(format!("social relation at profile {cell} is cyclic")));
                    }
                    Ok(order.index() as u32)
                })
                .collect::<Result<_>>()?
        }
        Family::Scf | Family::Sdf => {
            let k = s.value_count(family)?;
            if model.num_vars() < cells * k {
                return Err(Error::Decode("model is shorter than the decision variables".into()));
            }
            (0..cells)
                .map(|cell| {
                    let on: Vec<u32> = (0..k as u32).filter(|&v| model.value((cell * k) as u32 + v + 1)).collect();
                    match on.as_slice() {
                        [v] => Ok(*v),
                        _ => Err(Error::Decode(format!("profile {cell} selects {} outcomes", on.len()))),
                    }
                })
                .collect::<Result<_>>()?
        }
    };
    RuleTable::new(family, setting.clone(), outcomes)
}

/// Reads family, voters, domain and axioms back from an encoded formula's header.
pub fn header_spec(f: &CnfFormula) -> Result<(Family, Arc<Setting>, Vec<Axiom>)> {
    let missing = |k: &str| Error::Decode(format!("formula header lacks `{k}`"));
    let family: Family = f.meta_value("family").ok_or_else(|| missing("family"))?.parse()?;
    let n: usize = f
        .meta_value("n")
        .ok_or_else(|| missing("n"))?
        .parse()
        .map_err(|_| Error::Decode("bad voter count in header".into()))?;
    let domain = Domain::parse(f.meta_value("domain").ok_or_else(|| missing("domain"))?)?;
    let axioms = match f.meta_value("axioms").ok_or_else(|| missing("axioms"))? {
        "-" => Vec::new(),
        list => crate::axioms::parse_axioms(list)?,
    };
    Ok((family, Setting::new(n, domain)?, axioms))
}
