//! Median voter rules on a single-peaked domain.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::prefcore::{Alternative, LinearOrder};
use crate::rules::{Family, RuleTable, Setting};

/// Outcome = median, along `axis`, of the voters' peaks and `n - 1` phantom alternatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MedianRule {
    axis: LinearOrder,
    phantoms: Vec<Alternative>,
}

impl MedianRule {
    pub fn new(axis: LinearOrder, phantoms: Vec<Alternative>) -> Result<Self> {
        if let Some(&p) = phantoms.iter().find(|&&p| p >= axis.m()) {
            return Err(Error::InvalidArgument(format!("phantom {p} is not an alternative")));
        }
        Ok(Self { axis, phantoms })
    }

    pub fn phantoms(&self) -> &[Alternative] {
        &self.phantoms
    }

    pub fn outcome(&self, peaks: &[Alternative]) -> Result<Alternative> {
        if peaks.len() != self.phantoms.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} peaks need {} phantoms, have {}",
                peaks.len(),
                peaks.len() - 1,
                self.phantoms.len()
            )));
        }
        let mut points: Vec<Alternative> = peaks.iter().chain(&self.phantoms).copied().collect();
        points.sort_by_key(|&a| self.axis.rank(a));
        Ok(points[points.len() / 2])
    }

    pub fn to_rule(&self, setting: Arc<Setting>) -> Result<RuleTable> {
        let outcomes = (0..setting.cells())
            .map(|cell| {
                let peaks: Vec<Alternative> = (0..setting.n()).map(|i| setting.voter_order(cell, i).top()).collect();
                self.outcome(&peaks).map(|a| a as u32)
            })
            .collect::<Result<Vec<_>>>()?;
        RuleTable::new(Family::Scf, setting, outcomes)
    }
}

fn phantom_tuples(m: usize, k: usize) -> Vec<Vec<Alternative>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (0..m).map(move |a| [t.clone(), vec![a]].concat())).collect();
    }
    out
}

/// Every median rule for the setting, one per phantom tuple in `A^(n-1)`.
pub fn median_rules(setting: &Arc<Setting>, axis: &LinearOrder) -> Result<Vec<(MedianRule, RuleTable)>> {
    phantom_tuples(setting.m(), setting.n().saturating_sub(1))
        .into_iter()
        .map(|ph| {
            let r = MedianRule::new(axis.clone(), ph)?;
            let t = r.to_rule(setting.clone())?;
            Ok((r, t))
        })
        .collect()
}

/// A phantom tuple whose median rule equals `rule` at every profile, if any.
pub fn is_median_rule(rule: &RuleTable, axis: &LinearOrder) -> Result<Option<Vec<Alternative>>> {
    if rule.family() != Family::Scf {
        return Err(Error::InvalidArgument("median rules are social choice functions".into()));
    }
    for (m, table) in median_rules(rule.setting(), axis)? {
        if table.outcomes() == rule.outcomes() {
            return Ok(Some(m.phantoms().to_vec()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefcore::Domain;

    fn sp_setting() -> (Arc<Setting>, LinearOrder) {
        let axis = LinearOrder::parse("abc").unwrap();
        (Setting::new(2, Domain::single_peaked(3, &axis).unwrap()).unwrap(), axis)
    }

    #[test]
    fn leftmost_phantom_is_min_peak() {
        let (s, axis) = sp_setting();
        let r = MedianRule::new(axis.clone(), vec![0]).unwrap().to_rule(s.clone()).unwrap();
        for cell in 0..s.cells() {
            let min = (0..2).map(|i| s.voter_order(cell, i).top()).min().unwrap();
            assert_eq!(r.choice(cell), min);
        }
        assert_eq!(is_median_rule(&r, &axis).unwrap(), Some(vec![0]));
    }

    #[test]
    fn dictatorship_is_not_a_median_rule() {
        let (s, axis) = sp_setting();
        let d = RuleTable::scf_dictatorship(s, 0).unwrap();
        assert_eq!(is_median_rule(&d, &axis).unwrap(), None);
    }

    #[test]
    fn constant_rules() {
        let (s, axis) = sp_setting();
        // the middle alternative is not a median of two peaks and one phantom
        let c = RuleTable::scf_constant(s, 1).unwrap();
        assert_eq!(is_median_rule(&c, &axis).unwrap(), None);
    }

    #[test]
    fn three_distinct_rules() {
        let (s, axis) = sp_setting();
        let rules = median_rules(&s, &axis).unwrap();
        assert_eq!(rules.len(), 3);
        let sigs: std::collections::BTreeSet<String> = rules.iter().map(|(_, t)| t.signature()).collect();
        assert_eq!(sigs.len(), 3);
    }
}
