//! Generate-and-test oracles, independent of both engines.

use crate::axioms::satisfies_all;
use crate::error::{Error, Result};
use crate::prefcore::{enumerate_orders, LinearOrder};
use crate::rules::{Family, RuleTable, RuleView, Setting};
use crate::search::SearchSpec;

/// Largest rule space [`oracle_count`] will walk.
pub const ORACLE_LIMIT: u128 = 100_000_000;

struct Slice<'a> {
    family: Family,
    setting: &'a Setting,
    outcomes: &'a [u32],
}

impl RuleView for Slice<'_> {
    fn family(&self) -> Family {
        self.family
    }

    fn setting(&self) -> &Setting {
        self.setting
    }

    fn value(&self, cell: usize) -> Option<u32> {
        Some(self.outcomes[cell])
    }

    fn is_total(&self) -> bool {
        true
    }
}

/// Counts satisfying rules by walking every total rule table.
pub fn oracle_count(spec: &SearchSpec) -> Result<u128> {
    spec.validate()?;
    let s = &spec.setting;
    let k = s.value_count(spec.family)? as u32;
    let cells = s.cells();
    let space = (k as u128).checked_pow(cells as u32).filter(|&v| v <= ORACLE_LIMIT);
    if space.is_none() {
        return Err(Error::TooLarge(format!("{k}^{cells} rules exceed the oracle limit of {ORACLE_LIMIT}")));
    }
    let mut outcomes = vec![0u32; cells];
    let mut count = 0u128;
    loop {
        let view = Slice { family: spec.family, setting: s, outcomes: &outcomes };
        if satisfies_all(&spec.axioms, &view)? {
            count += 1;
        }
        // odometer, last cell fastest
        let mut i = cells;
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            outcomes[i] += 1;
            if outcomes[i] < k {
                break;
            }
            outcomes[i] = 0;
        }
    }
}

/// All IIA rules, built pair by pair: each unordered pair gets a boolean
/// function of the voters' restrictions to it, and a combination is kept when
/// the induced relation is a strict order at every profile.
pub fn iia_pairwise_rules(n: usize, m: usize) -> Result<Vec<RuleTable>> {
    let setting = Setting::full(n, m)?;
    let orders = enumerate_orders(m)?;
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    let patterns = 1usize << n;
    if n > 2 || (1u128 << patterns).pow(pairs.len() as u32) > ORACLE_LIMIT {
        return Err(Error::TooLarge(format!("pairwise oracle at n={n}, m={m}")));
    }
    let functions = 1u64 << patterns;
    // voters' orders at each profile, voter 0 most significant
    let profiles: Vec<Vec<&LinearOrder>> = (0..orders.len().pow(n as u32))
        .map(|mut idx| {
            let mut v = vec![&orders[0]; n];
            for i in (0..n).rev() {
                v[i] = &orders[idx % orders.len()];
                idx /= orders.len();
            }
            v
        })
        .collect();
    let pattern = |p: &[&LinearOrder], a: usize, b: usize| {
        p.iter().enumerate().fold(0usize, |acc, (i, o)| if o.prefers(a, b) { acc | 1 << i } else { acc })
    };
    let mut out = Vec::new();
    let mut choice = vec![0u64; pairs.len()];
    'combos: loop {
        let mut outcomes = Vec::with_capacity(profiles.len());
        let mut ok = true;
        for p in &profiles {
            let above = |a: usize, b: usize| {
                let (lo, hi, flip) = if a < b { (a, b, false) } else { (b, a, true) };
                let k = pairs.iter().position(|&q| q == (lo, hi)).unwrap();
                let bit = choice[k] >> pattern(p, lo, hi) & 1 == 1;
                bit != flip
            };
            let mut score: Vec<(usize, usize)> =
                (0..m).map(|a| ((0..m).filter(|&b| b != a && above(a, b)).count(), a)).collect();
            score.sort_by_key(|s| std::cmp::Reverse(s.0));
            // a strict order has scores m-1, m-2, ..., 0
            if score.iter().enumerate().any(|(r, &(s, _))| s != m - 1 - r) {
                ok = false;
                break;
            }
            let word: Vec<usize> = score.iter().map(|&(_, a)| a).collect();
            outcomes.push(LinearOrder::from_word(&word)?.index() as u32);
        }
        if ok {
            out.push(RuleTable::new(Family::Aswf, setting.clone(), outcomes)?);
        }
        for c in choice.iter_mut().rev() {
            *c += 1;
            if *c < functions {
                continue 'combos;
            }
            *c = 0;
        }
        return Ok(out);
    }
}

pub fn iia_pairwise_oracle(n: usize, m: usize) -> Result<u128> {
    Ok(iia_pairwise_rules(n, m)?.len() as u128)
}

/// Counts relations on `m` alternatives where every non-empty subset has a
/// relation-greatest element, by walking all `2^(m*m)` bit matrices.
pub fn brute_force_relation_count(m: usize) -> Result<u64> {
    if m == 0 || m > 4 {
        return Err(Error::TooLarge(format!("brute-force relation count needs 1 <= m <= 4, got {m}")));
    }
    let holds = |bits: u64, a: usize, b: usize| bits >> (a * m + b) & 1 == 1;
    let count = (0u64..1 << (m * m))
        .filter(|&bits| {
            (1u32..1 << m).all(|set| {
                let members: Vec<usize> = (0..m).filter(|&a| set >> a & 1 == 1).collect();
                members.iter().any(|&x| members.iter().all(|&y| holds(bits, x, y)))
            })
        })
        .count();
    Ok(count as u64)
}
