//! Which preference domains force every strategy-proof, unanimous SCF to be dictatorial?

use std::sync::Mutex;

use serde::Serialize;

use super::query::{decide, RunOptions};
use crate::axioms::parse_axioms;
use crate::error::{Error, Result};
use crate::prefcore::{enumerate_orders, Domain};
use crate::rules::{Family, RuleTable, Setting};
use crate::search::{SearchSpec, Status};

#[derive(Clone, Debug, Serialize)]
pub struct DomainVerdict {
    pub domain: Vec<String>,
    pub status: Status,
    /// `{SP, U, !dict}` is unsatisfiable.
    pub dictatorial: bool,
    /// Every order in the domain has this top, so unanimity fixes the outcome everywhere.
    pub common_top: Option<char>,
    #[serde(skip)]
    pub witness: Option<RuleTable>,
    pub nodes: u64,
    pub engines_agree: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DomainScan {
    pub m: usize,
    pub n: usize,
    /// One entry per non-empty domain, in increasing bitmask order over the
    /// lexicographically indexed orders.
    pub domains: Vec<DomainVerdict>,
}

impl DomainScan {
    pub fn dictatorial(&self) -> Vec<&DomainVerdict> {
        self.domains.iter().filter(|d| d.dictatorial).collect()
    }

    /// Dictatorial domains with at least two distinct tops.
    pub fn non_degenerate_dictatorial(&self) -> Vec<&DomainVerdict> {
        self.domains.iter().filter(|d| d.dictatorial && d.common_top.is_none()).collect()
    }
}

/// Decides `{SP, U_SCF, !dict_scf}` on every non-empty domain; domains are split
/// across `opts.workers` threads.
pub fn scan_dictatorial_domains(m: usize, n: usize, opts: &RunOptions) -> Result<DomainScan> {
    if m != 3 || !(1..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!("the domain scan runs at m = 3 and 1 <= n <= 3, got m={m}, n={n}")));
    }
    let orders = enumerate_orders(m)?;
    let total = (1u32 << orders.len()) - 1;
    let axioms = parse_axioms("sp,u_scf,!dict_scf")?;
    let slots: Vec<Mutex<Option<Result<DomainVerdict>>>> = (0..total).map(|_| Mutex::new(None)).collect();
    let workers = opts.workers.max(1);
    let inner = RunOptions { workers: 1, ..opts.clone() };
    std::thread::scope(|scope| {
        for w in 0..workers {
            let (slots, axioms, inner, orders) = (&slots, &axioms, &inner, &orders);
            scope.spawn(move || {
                for mask in (1..=total).filter(|mask| (*mask as usize) % workers == w) {
                    let verdict = (|| {
                        let chosen: Vec<_> =
                            (0..orders.len()).filter(|&i| mask >> i & 1 == 1).map(|i| orders[i].clone()).collect();
                        let tops: std::collections::BTreeSet<usize> = chosen.iter().map(|o| o.top()).collect();
                        let domain = Domain::from_orders(m, chosen)?;
                        let spec = SearchSpec::new(Family::Scf, Setting::new(n, domain.clone())?, axioms.clone());
                        let q = decide(&spec, inner)?;
                        Ok(DomainVerdict {
                            domain: domain.words(),
                            status: q.status,
                            dictatorial: q.status == Status::Unsat,
                            common_top: (tops.len() == 1)
                                .then(|| crate::prefcore::alt_letter(*tops.iter().next().unwrap())),
                            witness: q.witnesses.first().cloned(),
                            nodes: q.nodes(),
                            engines_agree: q.engines_agree,
                        })
                    })();
                    *slots[mask as usize - 1].lock().unwrap() = Some(verdict);
                }
            });
        }
    });
    let domains =
        slots.into_iter().map(|s| s.into_inner().unwrap().expect("every domain scanned")).collect::<Result<_>>()?;
    Ok(DomainScan { m, n, domains })
}
