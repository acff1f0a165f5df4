//! Todd–Coxeter enumeration of the cosets of the trivial subgroup, HLT
//! strategy with coincidence processing.

use serde::{Deserialize, Serialize};

use super::presentation::GroupPresentation;

const NONE: usize = usize::MAX;

struct Table {
    cols: usize,
    rows: Vec<Vec<usize>>,
    parent: Vec<usize>,
    bound: usize,
}

#[derive(Debug)]
struct Overflow;

impl Table {
    fn inv(x: usize) -> usize {
        x ^ 1
    }

    fn live(&self, a: usize) -> bool {
        self.parent[a] == a
    }

    fn rep(&mut self, mut a: usize) -> usize {
        let mut root = a;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[a] != root {
            let next = self.parent[a];
            self.parent[a] = root;
            a = next;
        }
        root
    }

    fn define(&mut self, a: usize, x: usize) -> Result<(), Overflow> {
        if self.rows.len() >= self.bound {
            return Err(Overflow);
        }
        let b = self.rows.len();
        self.rows.push(vec![NONE; self.cols]);
        self.parent.push(b);
        self.rows[a][x] = b;
        self.rows[b][Self::inv(x)] = a;
        Ok(())
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.rows[g][x];
                if d == NONE {
                    continue;
                }
                self.rows[d][Self::inv(x)] = NONE;
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.rows[mu][x] != NONE {
                    let t = self.rows[mu][x];
                    self.merge(nu, t, &mut queue);
                } else if self.rows[nu][Self::inv(x)] != NONE {
                    let t = self.rows[nu][Self::inv(x)];
                    self.merge(mu, t, &mut queue);
                } else {
                    self.rows[mu][x] = nu;
                    self.rows[nu][Self::inv(x)] = mu;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, a: usize, w: &[usize]) -> Result<(), Overflow> {
        let (mut f, mut b) = (a, a);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.rows[f][w[i]] != NONE {
                f = self.rows[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.rows[b][Self::inv(w[j as usize])] != NONE {
                b = self.rows[b][Self::inv(w[j as usize])];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.rows[f][w[i]] = b;
                self.rows[b][Self::inv(w[i])] = f;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// Order of the group with `generators` generators and the given relators
/// (letters `(generator, inverse)`), or `None` once more than `bound` cosets
/// have been defined.
pub fn coset_enumeration(
    generators: usize,
    relators: &[Vec<(usize, bool)>],
    bound: usize,
) -> Option<usize> {
    let words: Vec<Vec<usize>> = relators
        .iter()
        .map(|r| r.iter().map(|&(g, inv)| 2 * g + usize::from(inv)).collect())
        .filter(|w: &Vec<usize>| !w.is_empty())
        .collect();
    let cols = 2 * generators;
    let mut t = Table {
        cols,
        rows: vec![vec![NONE; cols]],
        parent: vec![0],
        bound: bound.max(1),
    };
    let mut a = 0;
    while a < t.rows.len() {
        if t.live(a) {
            for w in &words {
                if !t.live(a) {
                    break;
                }
                t.scan_and_fill(a, w).ok()?;
            }
            if t.live(a) {
                for x in 0..cols {
                    if t.rows[a][x] == NONE {
                        t.define(a, x).ok()?;
                    }
                }
            }
        }
        a += 1;
    }
    Some((0..t.rows.len()).filter(|&c| t.live(c)).count())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupOrder {
    Finite(usize),
    Infinite,
    Unknown,
}

/// Order of the presented group: trivial generators are dropped, a generator
/// occurring in no relation proves the group infinite, and otherwise coset
/// enumeration decides within `bound`.
pub fn presented_order(pres: &GroupPresentation, bound: usize) -> GroupOrder {
    let live: Vec<usize> = (0..pres.generators.len())
        .filter(|&g| !pres.trivial[g])
        .collect();
    let mut renumber = vec![usize::MAX; pres.generators.len()];
    for (i, &g) in live.iter().enumerate() {
        renumber[g] = i;
    }
    let relators: Vec<Vec<(usize, bool)>> = pres
        .relations
        .iter()
        .map(|r| {
            r.iter()
                .filter(|l| !pres.trivial[l.generator])
                .map(|l| (renumber[l.generator], l.inverse))
                .collect()
        })
        .collect();
    let mut used = vec![false; live.len()];
    for r in &relators {
        for &(g, _) in r {
            used[g] = true;
        }
    }
    if used.iter().any(|u| !u) {
        return GroupOrder::Infinite;
    }
    match coset_enumeration(live.len(), &relators, bound) {
        Some(n) => GroupOrder::Finite(n),
        None => GroupOrder::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> Vec<(usize, bool)> {
        s.chars()
            .map(|c| {
                let lower = c.to_ascii_lowercase();
                ((lower as u8 - b'a') as usize, c.is_ascii_uppercase())
            })
            .collect()
    }

    #[test]
    fn cyclic_groups() {
        for n in 1..8 {
            let r = vec![(0, false); n];
            assert_eq!(coset_enumeration(1, &[r], 1000), Some(n));
        }
    }

    #[test]
    fn dihedral_and_symmetric() {
        // S3 = <a, b | a^2, b^3, abab>
        let rels = vec![word("aa"), word("bbb"), word("abab")];
        assert_eq!(coset_enumeration(2, &rels, 1000), Some(6));
        // D4 = <a, b | a^2, b^4, (ab)^2>
        let rels = vec![word("aa"), word("bbbb"), word("abab")];
        assert_eq!(coset_enumeration(2, &rels, 1000), Some(8));
        // A5 = <a, b | a^2, b^3, (ab)^5>
        let rels = vec![word("aa"), word("bbb"), word("ababababab")];
        assert_eq!(coset_enumeration(2, &rels, 100_000), Some(60));
    }

    #[test]
    fn trivial_by_relations() {
        // <a, b | ab^-1, a^2 b^-1>: b = a, a^2 = a
        let rels = vec![word("aB"), word("aaB")];
        assert_eq!(coset_enumeration(2, &rels, 100), Some(1));
    }

    #[test]
    fn infinite_group_exhausts_bound() {
        // Z × Z
        let rels = vec![word("abAB")];
        assert_eq!(coset_enumeration(2, &rels, 500), None);
    }
}
