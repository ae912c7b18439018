//! Library results against independent brute force.

mod common;

use std::collections::BTreeSet;

use choicecheck::axioms::parse_axioms;
use choicecheck::prefcore::{enumerate_orders, Domain, LinearOrder};
use choicecheck::rules::{enumerate_choice_relations, Family, Setting};
use choicecheck::search::{SearchSpec, Status};
use choicecheck::theorems::{count, decide, enumerate, Engine, RunOptions};
use common::*;

fn spec(family: Family, domain: &str, n: usize, axioms: &str) -> SearchSpec {
    let setting = Setting::new(n, Domain::parse(domain).unwrap()).unwrap();
    SearchSpec::new(family, setting, parse_axioms(axioms).unwrap())
}

fn full(family: Family, axioms: &str) -> SearchSpec {
    SearchSpec::new(family, Setting::full(2, 3).unwrap(), parse_axioms(axioms).unwrap())
}

fn aswf_census(s: &SearchSpec) -> BTreeSet<Vec<Word>> {
    let q = enumerate(s, 1 << 20, &RunOptions::default().with_engine(Engine::Search)).unwrap();
    q.witnesses.iter().map(aswf_outcomes).collect()
}

fn scf_census(s: &SearchSpec) -> BTreeSet<Vec<usize>> {
    let q = enumerate(s, 1 << 20, &RunOptions::default().with_engine(Engine::Search)).unwrap();
    q.witnesses.iter().map(scf_outcomes).collect()
}

fn sat_count(s: &SearchSpec) -> u128 {
    count(s, &RunOptions::default().with_engine(Engine::Sat)).unwrap().count.unwrap()
}

/// Every IIA rule at n=2, m=3, built pair by pair: the social direction on
/// `{a, b}` is a function of the two voters' directions on it.
fn iia_by_pairs(w: &World) -> Vec<Vec<Word>> {
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut out = Vec::new();
    for code in 0u32..1 << 12 {
        let social = |c: usize, a: usize, b: usize| {
            let k = pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
            let (lo, hi) = pairs[k];
            let pattern = (0..2).fold(0, |acc, i| acc | (above(w.voter(c, i), lo, hi) as u32) << i);
            let lo_wins = code >> (4 * k as u32 + pattern) & 1 == 1;
            if a == lo {
                lo_wins
            } else {
                !lo_wins
            }
        };
        let mut rule = Vec::new();
        for c in 0..w.cells() {
            let fits = perms(3).into_iter().find(|o| pairs.iter().all(|&(a, b)| above(o, a, b) == social(c, a, b)));
            match fits {
                Some(o) => rule.push(o),
                None => break,
            }
        }
        if rule.len() == w.cells() {
            out.push(rule);
        }
    }
    out
}

#[test]
fn order_indexing_is_lexicographic() {
    for m in 1..=5 {
        let lib: Vec<Word> = enumerate_orders(m).unwrap().iter().map(LinearOrder::word).collect();
        assert_eq!(lib, perms(m));
    }
}

#[test]
fn profile_indexing_puts_voter_zero_first() {
    let setting = Setting::new(2, Domain::parse("abc,bca,cab").unwrap()).unwrap();
    let w = World::from_words(3, 2, &["abc", "bca", "cab"]);
    for c in 0..w.cells() {
        for i in 0..2 {
            assert_eq!(setting.voter_order(c, i).word(), *w.voter(c, i));
        }
    }
}

#[test]
fn iia_census_matches_pairwise_construction() {
    let w = World::new(3, 2, perms(3));
    let by_pairs: BTreeSet<Vec<Word>> = iia_by_pairs(&w).into_iter().collect();
    assert_eq!(by_pairs.len(), 94);
    assert!(by_pairs.iter().all(|f| w.iia(f)));
    let s = full(Family::Aswf, "iia");
    assert_eq!(aswf_census(&s), by_pairs);
    assert_eq!(sat_count(&s), 94);
}

#[test]
fn arrow_and_wilson_follow_from_the_pairwise_census() {
    let w = World::new(3, 2, perms(3));
    let iia = iia_by_pairs(&w);
    let wp: Vec<_> = iia.iter().filter(|f| w.wp(f)).collect();
    assert_eq!(wp.len(), 2);
    assert!(wp.iter().all(|f| w.dict(f)));
    let ni: BTreeSet<Vec<Word>> = iia.iter().filter(|f| w.ni(f)).cloned().collect();
    assert_eq!(ni.len(), 4);
    assert!(ni.iter().all(|f| w.dict(f) || w.antidict(f)));

    assert_eq!(decide(&full(Family::Aswf, "wp,iia,!dict"), &RunOptions::default()).unwrap().status, Status::Unsat);
    assert_eq!(aswf_census(&full(Family::Aswf, "iia,ni")), ni);
    let q = decide(&full(Family::Aswf, "iia,ni,!dict,!antidict"), &RunOptions::default()).unwrap();
    assert_eq!(q.status, Status::Unsat);
}

#[test]
fn arrow_at_one_voter_by_brute_force() {
    let w = World::new(3, 1, perms(3));
    let wp_iia = aswf_rules(&w, &["wp", "iia"]);
    assert_eq!(wp_iia.len(), 1);
    assert!(w.dict(&wp_iia[0]));
    let s = SearchSpec::new(Family::Aswf, Setting::full(1, 3).unwrap(), parse_axioms("wp,iia").unwrap());
    assert_eq!(aswf_census(&s), wp_iia.into_iter().collect());
}

#[test]
fn moulin_census_by_brute_force_over_all_scfs() {
    let sp_domain = ["abc", "bac", "bca", "cba"];
    let w = World::from_words(3, 2, &sp_domain);
    // anonymity as a cheap first filter: f(p, q) = f(q, p)
    let swaps: Vec<(usize, usize)> = (0..w.cells())
        .filter_map(|c| {
            let p = &w.profiles[c];
            let d = w.profiles.iter().position(|q| q[0] == p[1] && q[1] == p[0]).unwrap();
            (c < d).then_some((c, d))
        })
        .collect();
    let alts = [0usize, 1, 2];
    let found =
        brute_force(&alts, w.cells(), |f| swaps.iter().all(|&(c, d)| f[c] == f[d]) && w.anon(f) && w.eff(f) && w.sp(f));
    assert_eq!(found.len(), 3);
    // median of the two peaks and a phantom
    for phantom in 0..3 {
        let median: Vec<usize> = (0..w.cells())
            .map(|c| {
                let mut v = [w.voter(c, 0)[0], w.voter(c, 1)[0], phantom];
                v.sort();
                v[1]
            })
            .collect();
        assert!(found.contains(&median), "median with phantom {phantom}");
    }
    let s = spec(Family::Scf, &sp_domain.join(","), 2, "anon,eff,sp");
    assert_eq!(scf_census(&s), found.into_iter().collect());
}

#[test]
fn strategy_proofness_at_one_voter() {
    let w = World::new(3, 1, perms(3));
    let gs = scf_rules(&w, &["sp", "onto"]);
    assert_eq!(gs.len(), 1);
    assert!(w.dict_scf(&gs[0]));
    let ms = scf_rules(&w, &["eff", "m"]);
    assert_eq!(ms, gs);
    let s = SearchSpec::new(Family::Scf, Setting::full(1, 3).unwrap(), parse_axioms("sp,onto").unwrap());
    assert_eq!(scf_census(&s), gs.into_iter().collect());
}

#[test]
fn gs_and_ms_censuses_are_the_two_dictatorships() {
    let w = World::new(3, 2, perms(3));
    let dictatorships: BTreeSet<Vec<usize>> =
        (0..2).map(|i| (0..w.cells()).map(|c| w.voter(c, i)[0]).collect()).collect();
    for f in &dictatorships {
        assert!(w.sp(f) && w.onto(f) && w.eff(f) && w.mono(f));
    }
    assert_eq!(scf_census(&full(Family::Scf, "sp,onto")), dictatorships);
    assert_eq!(scf_census(&full(Family::Scf, "eff,m")), dictatorships);
    for axioms in ["sp,onto,!dict_scf", "eff,m,!dict_scf"] {
        assert_eq!(decide(&full(Family::Scf, axioms), &RunOptions::default()).unwrap().status, Status::Unsat);
    }
}

#[test]
fn choice_generating_relations_on_three_alternatives() {
    // every non-empty subset has an element related to all its members
    let m = 3;
    let holds = |bits: u32, a: usize, b: usize| bits >> (a * m + b) & 1 == 1;
    let mine = (0u32..1 << 9)
        .filter(|&bits| {
            (1u32..8).all(|s| {
                let xs: Vec<usize> = (0..m).filter(|&a| s >> a & 1 == 1).collect();
                xs.iter().any(|&x| xs.iter().all(|&y| holds(bits, x, y)))
            })
        })
        .count();
    assert_eq!(mine, 25);
    assert_eq!(enumerate_choice_relations(3).unwrap().len(), 25);
}

/// Voter `i` is decisive over `(a, b)` in the relation-membership sense.
fn decisive(w: &World, rel: &[Vec<Vec<u8>>], i: usize, a: usize, b: usize) -> bool {
    (0..w.cells()).all(|c| above(w.voter(c, i), a, b) == (rel[c][a][b] == 1))
}

#[test]
fn sen_literal_reading_witness_checks_out() {
    let s = full(Family::Sdf, "u,liberal");
    let q = decide(&s, &RunOptions::default()).unwrap();
    assert_eq!(q.status, Status::Sat);
    let rule = &q.witnesses[0];
    let rel: Vec<Vec<Vec<u8>>> =
        rule.to_witness().outcomes.iter().map(|v| serde_json::from_value(v.clone()).unwrap()).collect();
    let w = World::new(3, 2, perms(3));
    for c in 0..w.cells() {
        for a in 0..3 {
            for b in 0..3 {
                if a != b && w.all_above(c, a, b) {
                    assert!(rel[c][a][b] == 1 && rel[c][b][a] == 0, "unanimity at {c}");
                }
            }
        }
    }
    for i in 0..2 {
        let some_pair = (0..3).any(|a| (0..3).any(|b| a != b && decisive(&w, &rel, i, a, b)));
        assert!(some_pair, "voter {i} decisive somewhere");
    }
}

#[test]
fn end_phantom_is_min_peak_and_constant_is_inefficient() {
    let w = World::from_words(3, 2, &["abc", "bac", "bca", "cba"]);
    let min_peak: Vec<usize> = (0..w.cells()).map(|c| w.voter(c, 0)[0].min(w.voter(c, 1)[0])).collect();
    assert!(w.sp(&min_peak) && w.eff(&min_peak) && w.anon(&min_peak));
    let constant_b = vec![1; w.cells()];
    assert!(w.sp(&constant_b) && !w.eff(&constant_b));
}
