//! Finite groups given by multiplication tables.

use crate::error::{Error, Result};

/// A finite group; `mul(a, b)` is the product `a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Checks closure, associativity, a two-sided identity and inverses.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0
            || table.len() != n
            || table
                .iter()
                .any(|r| r.len() != n || r.iter().any(|&x| x >= n))
        {
            return Err(Error::Invalid(
                "group table is not a square table over its elements".into(),
            ));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Invalid(format!(
                            "not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::Invalid("no identity element".into()))?;
        let inverse = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity && table[b][a] == identity)
                    .ok_or_else(|| Error::Invalid(format!("'{}' has no inverse", names[a])))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGroup {
            names,
            table,
            identity,
            inverse,
        })
    }

    /// `Z/n` with elements named `0..n`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::from_table(names, table).expect("cyclic groups are groups")
    }

    /// Permutations of `{0, 1, 2}` in one-line notation, lexicographic;
    /// `a·b` applies `a` first.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let names = perms
            .iter()
            .map(|p| p.iter().map(|v| v.to_string()).collect())
            .collect();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let c = [b[a[0]], b[a[1]], b[a[2]]];
                        perms.iter().position(|p| *p == c).unwrap()
                    })
                    .collect()
            })
            .collect();
        Self::from_table(names, table).expect("S3 is a group")
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "Z2" => Some(Self::cyclic(2)),
            "Z3" => Some(Self::cyclic(3)),
            "S3" => Some(Self::symmetric3()),
            "trivial" | "Z1" => Some(Self::cyclic(1)),
            _ => None,
        }
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Membership table of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order()];
        inside[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let b = self.mul(a, g);
                if !inside[b] {
                    inside[b] = true;
                    frontier.push(b);
                }
            }
        }
        inside
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}
