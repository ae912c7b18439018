//! A second, deliberately naive model of preferences and axioms. Rules are
//! plain outcome vectors over profiles; nothing here calls the library's
//! evaluators, encoders or engines.

#![allow(dead_code)]

use choicecheck::rules::RuleTable;

pub type Word = Vec<usize>;

/// All permutations of `0..m` in lexicographic order.
pub fn perms(m: usize) -> Vec<Word> {
    fn go(prefix: &mut Word, m: usize, out: &mut Vec<Word>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for a in 0..m {
            if !prefix.contains(&a) {
                prefix.push(a);
                go(prefix, m, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), m, &mut out);
    out
}

pub fn word(s: &str) -> Word {
    s.bytes().map(|b| (b - b'a') as usize).collect()
}

pub fn letters(w: &[usize]) -> String {
    w.iter().map(|&a| (b'a' + a as u8) as char).collect()
}

pub fn above(w: &[usize], a: usize, b: usize) -> bool {
    let pos = |x| w.iter().position(|&y| y == x).unwrap();
    pos(a) < pos(b)
}

pub fn reversed(w: &[usize]) -> Word {
    w.iter().rev().copied().collect()
}

/// Profiles over a domain; voter 0 is the most significant digit.
pub struct World {
    pub m: usize,
    pub n: usize,
    pub domain: Vec<Word>,
    pub profiles: Vec<Vec<usize>>,
    pairs: Vec<(usize, usize)>,
}

impl World {
    pub fn new(m: usize, n: usize, domain: Vec<Word>) -> Self {
        let d = domain.len();
        let profiles = (0..d.pow(n as u32))
            .map(|mut c| {
                let mut p = vec![0; n];
                for i in (0..n).rev() {
                    p[i] = c % d;
                    c /= d;
                }
                p
            })
            .collect();
        let pairs = (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
        Self { m, n, domain, profiles, pairs }
    }

    pub fn from_words(m: usize, n: usize, words: &[&str]) -> Self {
        let mut domain: Vec<Word> = words.iter().map(|w| word(w)).collect();
        domain.sort();
        Self::new(m, n, domain)
    }

    /// The domain given by a bitmask over the lexicographic orders.
    pub fn from_mask(m: usize, n: usize, mask: u32) -> Self {
        let domain = perms(m).into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, w)| w).collect();
        Self::new(m, n, domain)
    }

    pub fn domain_string(&self) -> String {
        self.domain.iter().map(|w| letters(w)).collect::<Vec<_>>().join(",")
    }

    pub fn cells(&self) -> usize {
        self.profiles.len()
    }

    pub fn voter(&self, c: usize, i: usize) -> &Word {
        &self.domain[self.profiles[c][i]]
    }

    pub fn all_above(&self, c: usize, a: usize, b: usize) -> bool {
        (0..self.n).all(|i| above(self.voter(c, i), a, b))
    }

    // ASWF axioms, outcomes are social orders.

    pub fn wp(&self, f: &[Word]) -> bool {
        (0..self.cells()).all(|c| self.pairs.iter().all(|&(a, b)| !self.all_above(c, a, b) || above(&f[c], a, b)))
    }

    pub fn iia(&self, f: &[Word]) -> bool {
        let pairs: Vec<&(usize, usize)> = self.pairs.iter().filter(|(a, b)| a < b).collect();
        (0..self.cells()).all(|c| {
            (c + 1..self.cells()).all(|d| {
                pairs.iter().all(|&&(a, b)| {
                    let same = (0..self.n).all(|i| above(self.voter(c, i), a, b) == above(self.voter(d, i), a, b));
                    !same || above(&f[c], a, b) == above(&f[d], a, b)
                })
            })
        })
    }

    pub fn ni(&self, f: &[Word]) -> bool {
        self.pairs.iter().all(|&(a, b)| f.iter().any(|o| above(o, a, b)))
    }

    pub fn dict(&self, f: &[Word]) -> bool {
        (0..self.n).any(|i| (0..self.cells()).all(|c| f[c] == *self.voter(c, i)))
    }

    pub fn antidict(&self, f: &[Word]) -> bool {
        (0..self.n).any(|i| (0..self.cells()).all(|c| f[c] == reversed(self.voter(c, i))))
    }

    pub fn constant(&self, f: &[Word]) -> bool {
        f.iter().all(|o| *o == f[0])
    }

    pub fn aswf_axiom(&self, name: &str, f: &[Word]) -> bool {
        match name.strip_prefix('!') {
            Some(rest) => !self.aswf_axiom(rest, f),
            None => match name {
                "wp" => self.wp(f),
                "iia" => self.iia(f),
                "ni" => self.ni(f),
                "dict" => self.dict(f),
                "antidict" => self.antidict(f),
                "const" => self.constant(f),
                _ => panic!("no oracle for {name}"),
            },
        }
    }

    // SCF axioms, outcomes are alternatives.

    pub fn sp(&self, f: &[usize]) -> bool {
        (0..self.cells()).all(|c| {
            (0..self.n).all(|i| {
                (0..self.domain.len()).all(|lie| {
                    let mut p = self.profiles[c].clone();
                    p[i] = lie;
                    let d = self.profiles.iter().position(|q| *q == p).unwrap();
                    !above(self.voter(c, i), f[d], f[c]) || f[d] == f[c]
                })
            })
        })
    }

    pub fn onto(&self, f: &[usize]) -> bool {
        (0..self.m).all(|a| f.contains(&a))
    }

    pub fn eff(&self, f: &[usize]) -> bool {
        (0..self.cells()).all(|c| (0..self.m).all(|b| b == f[c] || !self.all_above(c, b, f[c])))
    }

    /// Maskin monotonicity: if `x` is chosen at `c` and no voter demotes `x`
    /// relative to anything at `d`, then `x` is chosen at `d`.
    pub fn mono(&self, f: &[usize]) -> bool {
        (0..self.cells()).all(|c| {
            let x = f[c];
            (0..self.cells()).all(|d| {
                let kept = (0..self.n)
                    .all(|i| (0..self.m).all(|b| !above(self.voter(c, i), x, b) || above(self.voter(d, i), x, b)));
                !kept || f[d] == x
            })
        })
    }

    pub fn anon(&self, f: &[usize]) -> bool {
        (0..self.cells()).all(|c| {
            (0..self.cells()).all(|d| {
                let mut p = self.profiles[c].clone();
                let mut q = self.profiles[d].clone();
                p.sort();
                q.sort();
                p != q || f[c] == f[d]
            })
        })
    }

    pub fn dict_scf(&self, f: &[usize]) -> bool {
        (0..self.n).any(|i| (0..self.cells()).all(|c| f[c] == self.voter(c, i)[0]))
    }

    pub fn u_scf(&self, f: &[usize]) -> bool {
        (0..self.cells()).all(|c| {
            let t = self.voter(c, 0)[0];
            (0..self.n).any(|i| self.voter(c, i)[0] != t) || f[c] == t
        })
    }

    pub fn scf_axiom(&self, name: &str, f: &[usize]) -> bool {
        match name.strip_prefix('!') {
            Some(rest) => !self.scf_axiom(rest, f),
            None => match name {
                "sp" => self.sp(f),
                "onto" => self.onto(f),
                "eff" => self.eff(f),
                "m" => self.mono(f),
                "anon" => self.anon(f),
                "dict_scf" => self.dict_scf(f),
                "u_scf" => self.u_scf(f),
                _ => panic!("no oracle for {name}"),
            },
        }
    }
}

/// Every vector in `values^cells` accepted by `keep`.
pub fn brute_force<T: Clone>(values: &[T], cells: usize, mut keep: impl FnMut(&[T]) -> bool) -> Vec<Vec<T>> {
    let mut idx = vec![0usize; cells];
    let mut cur: Vec<T> = vec![values[0].clone(); cells];
    let mut out = Vec::new();
    loop {
        if keep(&cur) {
            out.push(cur.clone());
        }
        let mut i = cells;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < values.len() {
                cur[i] = values[idx[i]].clone();
                break;
            }
            idx[i] = 0;
            cur[i] = values[0].clone();
        }
    }
}

pub fn aswf_rules(w: &World, axioms: &[&str]) -> Vec<Vec<Word>> {
    brute_force(&perms(w.m), w.cells(), |f| axioms.iter().all(|a| w.aswf_axiom(a, f)))
}

pub fn scf_rules(w: &World, axioms: &[&str]) -> Vec<Vec<usize>> {
    let alts: Vec<usize> = (0..w.m).collect();
    brute_force(&alts, w.cells(), |f| axioms.iter().all(|a| w.scf_axiom(a, f)))
}

/// ASWF outcomes of a library rule, read through its JSON witness.
pub fn aswf_outcomes(rule: &RuleTable) -> Vec<Word> {
    rule.to_witness().outcomes.iter().map(|v| serde_json::from_value(v.clone()).unwrap()).collect()
}

pub fn scf_outcomes(rule: &RuleTable) -> Vec<usize> {
    rule.to_witness().outcomes.iter().map(|v| v.as_u64().unwrap() as usize).collect()
}

/// Like [`brute_force`] but only counts, for spaces too large to collect.
pub fn count_all<T: Clone>(values: &[T], cells: usize, mut keep: impl FnMut(&[T]) -> bool) -> u128 {
    let mut n = 0u128;
    brute_force(values, cells, |f| {
        if keep(f) {
            n += 1;
        }
        false
    });
    n
}

/// A social relation as a 0/1 matrix, `r[a][b] == 1` meaning `a` is at least as good as `b`.
pub type Matrix = Vec<Vec<u8>>;

/// Every non-empty subset has an element related to all its members.
pub fn generates_choice(r: &Matrix) -> bool {
    let m = r.len();
    (1u32..1 << m).all(|s| {
        let xs: Vec<usize> = (0..m).filter(|&a| s >> a & 1 == 1).collect();
        xs.iter().any(|&x| xs.iter().all(|&y| r[x][y] == 1))
    })
}

impl World {
    /// Unanimous strict preference is strict socially.
    pub fn sdf_unanimity(&self, f: &[Matrix]) -> bool {
        (0..self.cells())
            .all(|c| self.pairs.iter().all(|&(a, b)| !self.all_above(c, a, b) || (f[c][a][b] == 1 && f[c][b][a] == 0)))
    }

    /// Voter `i` prefers `a` to `b` exactly when society relates `a` to `b`.
    pub fn decisive(&self, f: &[Matrix], i: usize, a: usize, b: usize) -> bool {
        (0..self.cells()).all(|c| above(self.voter(c, i), a, b) == (f[c][a][b] == 1))
    }

    /// At least two voters are each decisive over some ordered pair.
    pub fn liberal(&self, f: &[Matrix]) -> bool {
        (0..self.n).filter(|&i| self.pairs.iter().any(|&(a, b)| self.decisive(f, i, a, b))).count() >= 2
    }
}
