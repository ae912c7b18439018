//! CNF formulas with a variable legend, and DIMACS text I/O.
//!
//! Written files carry free-form header lines as `c <text>` and the legend as
//! `c var <index> <tag>`, all before the `p cnf` line, so parsing a written
//! formula reproduces it exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Signed DIMACS literal: `v` or `-v` for variable `v ≥ 1`.
pub type Lit = i32;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    legend: BTreeMap<u32, String>,
    meta: Vec<String>,
}

impl CnfFormula {
    pub fn new() -> Self {
        Self::default()
    }

    /// A formula over `num_vars` untagged variables.
    pub fn with_vars(num_vars: usize) -> Self {
        Self { num_vars, ..Self::default() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn legend(&self) -> &BTreeMap<u32, String> {
        &self.legend
    }

    pub fn tag(&self, var: u32) -> Option<&str> {
        self.legend.get(&var).map(String::as_str)
    }

    pub fn meta(&self) -> &[String] {
        &self.meta
    }

    pub fn push_meta(&mut self, line: impl Into<String>) {
        self.meta.push(line.into());
    }

    /// Value of a `key=value` or `key value` header entry, if present.
    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find_map(|line| {
            line.split_whitespace().find_map(|tok| tok.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        })
    }

    /// Allocates a fresh variable carrying `tag` in the legend.
    pub fn new_var(&mut self, tag: impl Into<String>) -> Lit {
        self.num_vars += 1;
        self.legend.insert(self.num_vars as u32, tag.into());
        self.num_vars as Lit
    }

    pub fn add_clause(&mut self, lits: impl Into<Vec<Lit>>) -> Result<()> {
        let lits = lits.into();
        if let Some(&l) = lits.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > self.num_vars) {
            return Err(Error::InvalidArgument(format!("literal {l} out of range 1..={}", self.num_vars)));
        }
        self.clauses.push(lits);
        Ok(())
    }

    /// Internal variant for encoders that allocate literals themselves.
    pub(crate) fn push_clause(&mut self, lits: Vec<Lit>) {
        debug_assert!(lits.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= self.num_vars));
        self.clauses.push(lits);
    }

    /// Is every clause satisfied by `model`? Returns the indices of violated clauses.
    pub fn violated_clauses(&self, model: &Model) -> Vec<usize> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.iter().any(|&l| model.satisfies(l)))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn write_dimacs(&self) -> String {
        let mut out = String::new();
        for line in &self.meta {
            writeln!(out, "c {line}").unwrap();
        }
        for (var, tag) in &self.legend {
            writeln!(out, "c var {var} {tag}").unwrap();
        }
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for l in clause {
                write!(out, "{l} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Dimacs { line, message };
        let mut f = CnfFormula::new();
        let mut header: Option<(usize, usize)> = None;
        let mut current: Vec<Lit> = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('c') {
                if !(rest.is_empty() || rest.starts_with(' ') || rest.starts_with('\t')) {
                    return Err(err(line_no, format!("unexpected token `{line}`")));
                }
                let rest = rest.trim_start();
                if header.is_none() {
                    if let Some(entry) = rest.strip_prefix("var ") {
                        let (v, tag) = entry.split_once(' ').unwrap_or((entry, ""));
                        let v: u32 = v.parse().map_err(|_| err(line_no, format!("bad legend index `{v}`")))?;
                        f.legend.insert(v, tag.to_string());
                        continue;
                    }
                    f.meta.push(rest.to_string());
                }
                continue;
            }
            if line.starts_with('p') {
                if header.is_some() {
                    return Err(err(line_no, "duplicate problem line".into()));
                }
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
                    return Err(err(line_no, format!("expected `p cnf <vars> <clauses>`, got `{line}`")));
                }
                let vars = toks[2].parse().map_err(|_| err(line_no, format!("bad variable count `{}`", toks[2])))?;
                let clauses = toks[3].parse().map_err(|_| err(line_no, format!("bad clause count `{}`", toks[3])))?;
                header = Some((vars, clauses));
                f.num_vars = vars;
                continue;
            }
            let Some((vars, _)) = header else {
                return Err(err(line_no, "clause before the problem line".into()));
            };
            for tok in line.split_whitespace() {
                let l: Lit = tok.parse().map_err(|_| err(line_no, format!("bad literal `{tok}`")))?;
                if l == 0 {
                    f.clauses.push(std::mem::take(&mut current));
                } else if l.unsigned_abs() as usize > vars {
                    return Err(err(line_no, format!("literal {l} exceeds declared {vars} variables")));
                } else {
                    current.push(l);
                }
            }
        }
        let Some((vars, clauses)) = header else {
            return Err(err(last_line.max(1), "missing problem line".into()));
        };
        if !current.is_empty() {
            return Err(err(last_line, "last clause is not terminated by 0".into()));
        }
        if f.clauses.len() != clauses {
            return Err(err(last_line, format!("header declares {clauses} clauses, found {}", f.clauses.len())));
        }
        if let Some((&v, _)) = f.legend.iter().find(|(&v, _)| v == 0 || v as usize > vars) {
            return Err(err(0, format!("legend names variable {v} outside 1..={vars}")));
        }
        Ok(f)
    }
}

/// A total assignment; index 0 is unused.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn new(values_from_one: Vec<bool>) -> Self {
        let mut values = Vec::with_capacity(values_from_one.len() + 1);
        values.push(false);
        values.extend(values_from_one);
        Self { values }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, var: u32) -> bool {
        self.values[var as usize]
    }

    pub fn satisfies(&self, lit: Lit) -> bool {
        let v = lit.unsigned_abs() as usize;
        v < self.values.len() && self.values[v] == (lit > 0)
    }

    /// The model as signed literals, e.g. `[1, -2, 3]`.
    pub fn literals(&self) -> Vec<Lit> {
        (1..self.values.len()).map(|v| if self.values[v] { v as Lit } else { -(v as Lit) }).collect()
    }

    /// Competition-style output: `s SATISFIABLE` and a `v … 0` line.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::from("s SATISFIABLE\nv");
        for l in self.literals() {
            write!(out, " {l}").unwrap();
        }
        out.push_str(" 0\n");
        out
    }

    /// Reads `v`-lines (or bare literal lines); every variable must be given.
    pub fn parse(text: &str, num_vars: usize) -> Result<Self> {
        let err = |line: usize, message: String| Error::Dimacs { line, message };
        let mut values: Vec<Option<bool>> = vec![None; num_vars + 1];
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let body = if let Some(rest) = line.strip_prefix('v') {
                rest
            } else if line.is_empty() || line.starts_with('c') || line.starts_with('s') {
                continue;
            } else {
                line
            };
            for tok in body.split_whitespace() {
                let l: Lit = tok.parse().map_err(|_| err(idx + 1, format!("bad literal `{tok}`")))?;
                if l == 0 {
                    continue;
                }
                let v = l.unsigned_abs() as usize;
                if v > num_vars {
                    return Err(err(idx + 1, format!("literal {l} exceeds {num_vars} variables")));
                }
                values[v] = Some(l > 0);
            }
        }
        if let Some(v) = (1..=num_vars).find(|&v| values[v].is_none()) {
            return Err(Error::Decode(format!("model leaves variable {v} unassigned")));
        }
        Ok(Self::new(values.into_iter().skip(1).map(|v| v.unwrap()).collect()))
    }
}
