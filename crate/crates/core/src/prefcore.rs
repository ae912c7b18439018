//! Strict linear orders, preference profiles and preference domains.
//!
//! Orders over `m` alternatives are enumerated in lexicographic order of
//! their permutation word, so `order_index` 0 is always the identity
//! `a ≻ b ≻ c ≻ …`. Profiles are coded in mixed radix over a [`Domain`]
//! with voter 0 in the most significant digit.

use std::fmt;

use crate::error::{Error, Result};

/// An alternative is a dense index in `[0, m)`.
pub type Alternative = usize;

/// Upper bound on `m` for full order enumeration (8! = 40320 orders).
pub const MAX_ALTERNATIVES: usize = 8;

pub fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Letter used for an alternative in human-readable output.
pub fn alt_letter(a: Alternative) -> char {
    (b'a' + a as u8) as char
}

fn alt_from_letter(c: char) -> Option<Alternative> {
    if c.is_ascii_lowercase() {
        Some((c as u8 - b'a') as usize)
    } else {
        None
    }
}

/// A strict (irreflexive, total, transitive) order over `m` alternatives.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearOrder {
    word: Vec<u8>,
    rank: Vec<u8>,
    index: usize,
}

impl LinearOrder {
    /// Builds an order from its permutation word, best alternative first.
    pub fn from_word(word: &[Alternative]) -> Result<Self> {
        let m = word.len();
        if m == 0 || m > MAX_ALTERNATIVES {
            return Err(Error::InvalidArgument(format!("order length must be in 1..={MAX_ALTERNATIVES}, got {m}")));
        }
        let mut rank = vec![u8::MAX; m];
        for (pos, &a) in word.iter().enumerate() {
            if a >= m || rank[a] != u8::MAX {
                return Err(Error::InvalidArgument(format!("{word:?} is not a permutation of 0..{m}")));
            }
            rank[a] = pos as u8;
        }
        let word: Vec<u8> = word.iter().map(|&a| a as u8).collect();
        let index = lex_rank(&word);
        Ok(Self { word, rank, index })
    }

    /// Unranks the `index`-th order in lexicographic sequence.
    pub fn from_index(m: usize, index: usize) -> Result<Self> {
        if m == 0 || m > MAX_ALTERNATIVES {
            return Err(Error::InvalidArgument(format!(
                "alternative count must be in 1..={MAX_ALTERNATIVES}, got {m}"
            )));
        }
        let total = factorial(m);
        if index >= total {
            return Err(Error::OutOfRange { index, size: total });
        }
        let mut pool: Vec<usize> = (0..m).collect();
        let mut rest = index;
        let mut word = Vec::with_capacity(m);
        for i in 0..m {
            let f = factorial(m - 1 - i);
            word.push(pool.remove(rest / f));
            rest %= f;
        }
        Self::from_word(&word)
    }

    /// Parses a letter word such as `"bac"` (b ≻ a ≻ c).
    pub fn parse(s: &str) -> Result<Self> {
        let word = s
            .trim()
            .chars()
            .map(|c| alt_from_letter(c).ok_or_else(|| Error::InvalidArgument(format!("bad order word `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_word(&word)
    }

    pub fn m(&self) -> usize {
        self.word.len()
    }

    /// Position in the lexicographic enumeration of all `m!` orders.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Position of `a` in this order (0 = best).
    pub fn rank(&self, a: Alternative) -> usize {
        self.rank[a] as usize
    }

    /// Alternatives from best to worst.
    pub fn word(&self) -> Vec<Alternative> {
        self.word.iter().map(|&a| a as usize).collect()
    }

    pub fn top(&self) -> Alternative {
        self.word[0] as usize
    }

    pub fn at(&self, position: usize) -> Alternative {
        self.word[position] as usize
    }

    /// `a ≻ b` in this order. Irreflexive.
    pub fn prefers(&self, a: Alternative, b: Alternative) -> bool {
        self.rank[a] < self.rank[b]
    }

    pub fn restrict(&self, a: Alternative, b: Alternative) -> Result<PairRanking> {
        restrict(self, a, b)
    }

    pub fn reversed(&self) -> Self {
        let word: Vec<usize> = self.word.iter().rev().map(|&a| a as usize).collect();
        Self::from_word(&word).expect("reversal of a permutation is a permutation")
    }

    /// Letter word, e.g. `"bac"`.
    pub fn to_word_string(&self) -> String {
        self.word.iter().map(|&a| alt_letter(a as usize)).collect()
    }
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_word_string())
    }
}

impl fmt::Debug for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearOrder({}#{})", self.to_word_string(), self.index)
    }
}

fn lex_rank(word: &[u8]) -> usize {
    let m = word.len();
    (0..m)
        .map(|i| {
            let smaller = word[i + 1..].iter().filter(|&&w| w < word[i]).count();
            smaller * factorial(m - 1 - i)
        })
        .sum()
}

/// All `m!` orders in lexicographic sequence; `order_index` equals position.
pub fn enumerate_orders(m: usize) -> Result<Vec<LinearOrder>> {
    if m == 0 || m > MAX_ALTERNATIVES {
        return Err(Error::InvalidArgument(format!("alternative count must be in 1..={MAX_ALTERNATIVES}, got {m}")));
    }
    (0..factorial(m)).map(|i| LinearOrder::from_index(m, i)).collect()
}

/// Number of unordered pairs on which `p` and `q` disagree.
pub fn kendall_distance(p: &LinearOrder, q: &LinearOrder) -> Result<usize> {
    if p.m() != q.m() {
        return Err(Error::InvalidArgument(format!(
            "orders over different alternative counts ({} vs {})",
            p.m(),
            q.m()
        )));
    }
    let m = p.m();
    let mut d = 0;
    for a in 0..m {
        for b in a + 1..m {
            if p.prefers(a, b) != q.prefers(a, b) {
                d += 1;
            }
        }
    }
    Ok(d)
}

/// The restriction of an order to a two-element set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairRanking {
    pub upper: Alternative,
    pub lower: Alternative,
}

impl PairRanking {
    /// Does this ranking place `a` over `b`? `{a, b}` must be this pair.
    pub fn ranks_over(&self, a: Alternative, b: Alternative) -> bool {
        self.upper == a && self.lower == b
    }
}

impl fmt::Display for PairRanking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", alt_letter(self.upper), alt_letter(self.lower))
    }
}

pub fn restrict(p: &LinearOrder, a: Alternative, b: Alternative) -> Result<PairRanking> {
    if a == b {
        return Err(Error::InvalidArgument(format!("restriction needs two distinct alternatives, got {a} twice")));
    }
    if a >= p.m() || b >= p.m() {
        return Err(Error::OutOfRange { index: a.max(b), size: p.m() });
    }
    Ok(if p.prefers(a, b) { PairRanking { upper: a, lower: b } } else { PairRanking { upper: b, lower: a } })
}

/// A non-empty set of orders, sorted by `order_index`, without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Domain {
    m: usize,
    orders: Vec<LinearOrder>,
}

impl Domain {
    pub fn full(m: usize) -> Result<Self> {
        Ok(Self { m, orders: enumerate_orders(m)? })
    }

    pub fn from_orders(m: usize, mut orders: Vec<LinearOrder>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidArgument("a domain must be non-empty".into()));
        }
        if let Some(o) = orders.iter().find(|o| o.m() != m) {
            return Err(Error::InvalidArgument(format!("order {o} is not over {m} alternatives")));
        }
        orders.sort_by_key(LinearOrder::index);
        if orders.windows(2).any(|w| w[0].index() == w[1].index()) {
            return Err(Error::InvalidArgument("duplicate order in domain".into()));
        }
        Ok(Self { m, orders })
    }

    pub fn from_indices(m: usize, indices: &[usize]) -> Result<Self> {
        let orders = indices.iter().map(|&i| LinearOrder::from_index(m, i)).collect::<Result<Vec<_>>>()?;
        Self::from_orders(m, orders)
    }

    /// Parses a comma-separated list of order words, e.g. `"abc,bac"`.
    pub fn parse(s: &str) -> Result<Self> {
        let orders =
            s.split(',').filter(|w| !w.trim().is_empty()).map(LinearOrder::parse).collect::<Result<Vec<_>>>()?;
        let m = orders
            .first()
            .map(LinearOrder::m)
            .ok_or_else(|| Error::InvalidArgument("a domain must be non-empty".into()))?;
        Self::from_orders(m, orders)
    }

    /// Orders that are single-peaked with respect to `axis`, whose word lists
    /// the alternatives from left to right on the line.
    pub fn single_peaked(m: usize, axis: &LinearOrder) -> Result<Self> {
        if axis.m() != m {
            return Err(Error::InvalidArgument("axis must order all alternatives".into()));
        }
        let orders = enumerate_orders(m)?.into_iter().filter(|o| is_single_peaked(o, axis)).collect();
        Self::from_orders(m, orders)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn orders(&self) -> &[LinearOrder] {
        &self.orders
    }

    pub fn order(&self, position: usize) -> &LinearOrder {
        &self.orders[position]
    }

    /// Position of the order with global `order_index`, if it is in the domain.
    pub fn position_of(&self, order_index: usize) -> Option<usize> {
        self.orders.binary_search_by_key(&order_index, LinearOrder::index).ok()
    }

    pub fn is_full(&self) -> bool {
        self.orders.len() == factorial(self.m)
    }

    pub fn words(&self) -> Vec<String> {
        self.orders.iter().map(LinearOrder::to_word_string).collect()
    }
}

/// `[a<b≤peak] or [peak≤b<a] ⇒ b ≻ a`, with `<` the left-to-right order of `axis`.
pub fn is_single_peaked(order: &LinearOrder, axis: &LinearOrder) -> bool {
    let m = order.m();
    let peak = axis.rank(order.top());
    for a in 0..m {
        for b in 0..m {
            let (pa, pb) = (axis.rank(a), axis.rank(b));
            let left = pa < pb && pb <= peak;
            let right = peak <= pb && pb < pa;
            if (left || right) && !order.prefers(b, a) {
                return false;
            }
        }
    }
    true
}

/// A preference profile: one domain order per voter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    orders: Vec<LinearOrder>,
    index: usize,
}

impl Profile {
    pub fn orders(&self) -> &[LinearOrder] {
        &self.orders
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn voter(&self, i: usize) -> &LinearOrder {
        &self.orders[i]
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.orders.iter().map(LinearOrder::to_word_string).collect();
        write!(f, "({})", words.join(","))
    }
}

/// Bijection between profiles over `domain^n` and `[0, |domain|^n)`.
#[derive(Clone, Debug)]
pub struct ProfileSpace {
    domain: Domain,
    n: usize,
    size: usize,
}

impl ProfileSpace {
    pub fn new(domain: Domain, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("voter count must be at least 1".into()));
        }
        let size = (0..n)
            .try_fold(1usize, |acc, _| acc.checked_mul(domain.len()))
            .ok_or_else(|| Error::TooLarge(format!("|D|^n overflows for n={n}")))?;
        Ok(Self { domain, n, size })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn voters(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Domain positions of each voter at profile `index`.
    pub fn positions(&self, index: usize) -> Result<Vec<usize>> {
        if index >= self.size {
            return Err(Error::OutOfRange { index, size: self.size });
        }
        let d = self.domain.len();
        let mut out = vec![0; self.n];
        let mut rest = index;
        for slot in out.iter_mut().rev() {
            *slot = rest % d;
            rest /= d;
        }
        Ok(out)
    }

    pub fn encode_positions(&self, positions: &[usize]) -> Result<usize> {
        if positions.len() != self.n {
            return Err(Error::InvalidArgument(format!("expected {} voters, got {}", self.n, positions.len())));
        }
        let d = self.domain.len();
        positions.iter().try_fold(0usize, |acc, &p| {
            if p >= d {
                Err(Error::OutOfRange { index: p, size: d })
            } else {
                Ok(acc * d + p)
            }
        })
    }

    pub fn decode(&self, index: usize) -> Result<Profile> {
        let orders = self.positions(index)?.into_iter().map(|p| self.domain.order(p).clone()).collect();
        Ok(Profile { orders, index })
    }

    pub fn encode(&self, profile: &Profile) -> Result<usize> {
        let positions = profile
            .orders
            .iter()
            .map(|o| {
                self.domain
                    .position_of(o.index())
                    .ok_or_else(|| Error::InvalidArgument(format!("order {o} is not in the domain")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.encode_positions(&positions)
    }

    /// Builds a profile from explicit orders, checking domain membership.
    pub fn profile(&self, orders: &[LinearOrder]) -> Result<Profile> {
        let probe = Profile { orders: orders.to_vec(), index: 0 };
        let index = self.encode(&probe)?;
        Ok(Profile { orders: orders.to_vec(), index })
    }
}
