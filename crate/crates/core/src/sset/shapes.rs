//! Standard simplices and their distinguished subcomplexes.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::{build_keyed, SimplicialMap, TruncatedSimplicialSet};
use crate::error::{Error, Result};

/// `Δ[n]` truncated at `N`: level k holds the monotone maps `[k] → [n]`.
#[derive(Clone, Debug)]
pub struct StandardSimplex {
    n: usize,
    sset: Arc<TruncatedSimplicialSet>,
    thetas: Vec<Vec<Vec<u8>>>,
    index: Vec<HashMap<Vec<u8>, usize>>,
}

/// Identifier of a monotone map: its values as digits, or zero-padded and
/// dot-separated once `n > 9` so that string order stays sequence order.
pub(crate) fn theta_name(theta: &[u8], n: usize) -> String {
    if n <= 9 {
        theta.iter().map(|v| char::from(b'0' + v)).collect()
    } else {
        let width = n.to_string().len();
        theta
            .iter()
            .map(|v| format!("{v:0width$}"))
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// All monotone maps `[k] → [n]` in lexicographic order.
pub(crate) fn monotone_maps(k: usize, n: usize) -> Vec<Vec<u8>> {
    fn go(k: usize, n: u8, lo: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            go(k, n, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, n as u8, 0, &mut Vec::with_capacity(k + 1), &mut out);
    out
}

/// `δ_i ∘ θ`: the coface skipping `i`.
pub(crate) fn coface(theta: &[u8], i: usize) -> Vec<u8> {
    theta
        .iter()
        .map(|&v| if v as usize >= i { v + 1 } else { v })
        .collect()
}

/// `σ_i ∘ θ`: the codegeneracy hitting `i` twice.
pub(crate) fn codegeneracy(theta: &[u8], i: usize) -> Vec<u8> {
    theta
        .iter()
        .map(|&v| if v as usize > i { v - 1 } else { v })
        .collect()
}

pub fn standard_simplex(n: usize, max_dim: usize) -> StandardSimplex {
    assert!(n < 250, "standard simplex dimension out of range");
    let levels: Vec<Vec<Vec<u8>>> = (0..=max_dim).map(|k| monotone_maps(k, n)).collect();
    let keyed = build_keyed(
        max_dim,
        levels,
        |_, t: &Vec<u8>| theta_name(t, n),
        |_, i, t| {
            let mut t = t.clone();
            t.remove(i);
            t
        },
        |_, i, t| {
            let mut t = t.clone();
            t.insert(i, t[i]);
            t
        },
    )
    .expect("standard simplex tables are closed");
    StandardSimplex {
        n,
        sset: Arc::new(keyed.sset),
        thetas: keyed.keys,
        index: keyed.index,
    }
}

impl StandardSimplex {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn sset(&self) -> &Arc<TruncatedSimplicialSet> {
        &self.sset
    }

    pub fn theta(&self, k: usize, x: usize) -> &[u8] {
        &self.thetas[k][x]
    }

    pub fn index_of(&self, theta: &[u8]) -> usize {
        self.index[theta.len() - 1][theta]
    }

    /// The identity `[n] → [n]`, when `n <= max_dim`.
    pub fn top(&self) -> Option<usize> {
        (self.n <= self.sset.max_dim())
            .then(|| self.index_of(&(0..=self.n as u8).collect::<Vec<_>>()))
    }

    pub fn vertex(&self, v: usize) -> usize {
        self.index_of(&[v as u8])
    }

    /// The map `Δ[n] → S` classifying the n-simplex `x` of `S`.
    pub fn yoneda(&self, target: &Arc<TruncatedSimplicialSet>, x: usize) -> Result<SimplicialMap> {
        let assign = self
            .thetas
            .iter()
            .map(|level| level.iter().map(|t| target.apply(self.n, x, t)).collect())
            .collect();
        SimplicialMap::new_unchecked(self.sset.clone(), target.clone(), assign)
    }

    /// The subcomplex of simplices whose image together with `excluded` does
    /// not cover `[n]`; i.e. the union of faces `d_i` with `i ∉ excluded`.
    fn union_of_faces(&self, excluded: &[usize]) -> SubcomplexInclusion {
        let n = self.n;
        SubcomplexInclusion::from_predicate(self.sset.clone(), |k, x| {
            let t = &self.thetas[k][x];
            (0..=n).any(|i| !excluded.contains(&i) && !t.contains(&(i as u8)))
        })
        .expect("unions of faces are subcomplexes")
    }

    pub fn horn(&self, k: usize) -> Result<SubcomplexInclusion> {
        if self.n == 0 || k > self.n {
            return Err(Error::Invalid(format!("no horn Λ^{k}[{}]", self.n)));
        }
        Ok(self.union_of_faces(&[k]))
    }

    /// Union of the faces `d_i` for `i ∉ {a, b}`.
    pub fn horn_pair(&self, a: usize, b: usize) -> Result<SubcomplexInclusion> {
        if self.n == 0 || a > self.n || b > self.n || a == b {
            return Err(Error::Invalid(format!(
                "no double horn Λ^{{{a},{b}}}[{}]",
                self.n
            )));
        }
        Ok(self.union_of_faces(&[a, b]))
    }

    pub fn boundary(&self) -> SubcomplexInclusion {
        self.union_of_faces(&[])
    }
}

pub fn horn(n: usize, k: usize, max_dim: usize) -> Result<SubcomplexInclusion> {
    standard_simplex(n, max_dim).horn(k)
}

/// `Λ^{0,j}[n]`: the union of the faces containing vertices 0 and j.
pub fn double_horn(n: usize, j: usize, max_dim: usize) -> Result<SubcomplexInclusion> {
    if n < 2 || j == 0 || j > n {
        return Err(Error::Invalid(format!("no double horn Λ^{{0,{j}}}[{n}]")));
    }
    standard_simplex(n, max_dim).horn_pair(0, j)
}

pub fn horn_pair(n: usize, a: usize, b: usize, max_dim: usize) -> Result<SubcomplexInclusion> {
    standard_simplex(n, max_dim).horn_pair(a, b)
}

pub fn boundary(n: usize, max_dim: usize) -> SubcomplexInclusion {
    standard_simplex(n, max_dim).boundary()
}

/// A levelwise injective map whose image is closed under faces and
/// degeneracies. The domain keeps the ambient identifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcomplexInclusion {
    map: SimplicialMap,
    members: Vec<Vec<Option<usize>>>,
}

impl SubcomplexInclusion {
    /// The subcomplex of simplices satisfying `pred`; errors unless closed.
    pub fn from_predicate<P>(ambient: Arc<TruncatedSimplicialSet>, pred: P) -> Result<Self>
    where
        P: Fn(usize, usize) -> bool,
    {
        let selected: Vec<Vec<bool>> = (0..=ambient.max_dim())
            .map(|n| (0..ambient.level_len(n)).map(|x| pred(n, x)).collect())
            .collect();
        Self::from_selection(ambient, selected)
    }

    /// The smallest subcomplex containing the given `(level, index)` simplices.
    pub fn generated(
        ambient: Arc<TruncatedSimplicialSet>,
        gens: &[(usize, usize)],
    ) -> Result<Self> {
        let mut selected: Vec<Vec<bool>> = (0..=ambient.max_dim())
            .map(|n| vec![false; ambient.level_len(n)])
            .collect();
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        for &(n, x) in gens {
            if n > ambient.max_dim() || x >= ambient.level_len(n) {
                return Err(Error::NotFound(format!("generator ({n}, {x})")));
            }
            queue.push_back((n, x));
        }
        while let Some((n, x)) = queue.pop_front() {
            if std::mem::replace(&mut selected[n][x], true) {
                continue;
            }
            if n > 0 {
                for i in 0..=n {
                    queue.push_back((n - 1, ambient.face(n, i, x)));
                }
            }
            if n < ambient.max_dim() {
                for i in 0..=n {
                    queue.push_back((n + 1, ambient.degen(n, i, x)));
                }
            }
        }
        Self::from_selection(ambient, selected)
    }

    /// The image of a levelwise injective map.
    pub fn image(map: &SimplicialMap) -> Result<Self> {
        if !map.is_injective() {
            return Err(Error::Invalid(
                "image inclusion of a non-injective map".into(),
            ));
        }
        let cod = map.cod().clone();
        let mut selected: Vec<Vec<bool>> = (0..=cod.max_dim())
            .map(|n| vec![false; cod.level_len(n)])
            .collect();
        for (n, level) in map.assignment().iter().enumerate() {
            for &y in level {
                selected[n][y] = true;
            }
        }
        Self::from_selection(cod, selected)
    }

    fn from_selection(
        ambient: Arc<TruncatedSimplicialSet>,
        selected: Vec<Vec<bool>>,
    ) -> Result<Self> {
        let top = ambient.max_dim();
        for n in 0..=top {
            for x in 0..ambient.level_len(n) {
                if !selected[n][x] {
                    continue;
                }
                let faces_ok = n == 0 || (0..=n).all(|i| selected[n - 1][ambient.face(n, i, x)]);
                let degens_ok =
                    n == top || (0..=n).all(|i| selected[n + 1][ambient.degen(n, i, x)]);
                if !faces_ok || !degens_ok {
                    return Err(Error::Invalid(format!(
                        "selection is not closed at '{}'",
                        ambient.id(n, x)
                    )));
                }
            }
        }
        let mut members: Vec<Vec<Option<usize>>> = Vec::with_capacity(top + 1);
        let mut back: Vec<Vec<usize>> = Vec::with_capacity(top + 1);
        for level in &selected {
            let mut local = vec![None; level.len()];
            let mut list = Vec::new();
            for (x, &on) in level.iter().enumerate() {
                if on {
                    local[x] = Some(list.len());
                    list.push(x);
                }
            }
            members.push(local);
            back.push(list);
        }
        let ids = back
            .iter()
            .enumerate()
            .map(|(n, l)| l.iter().map(|&x| ambient.id(n, x).to_string()).collect())
            .collect();
        let mut faces = vec![Vec::new(); top + 1];
        let mut degens = vec![Vec::new(); top + 1];
        for n in 0..=top {
            if n > 0 {
                for i in 0..=n {
                    faces[n].push(
                        back[n]
                            .iter()
                            .map(|&x| members[n - 1][ambient.face(n, i, x)].unwrap())
                            .collect(),
                    );
                }
            }
            if n < top {
                for i in 0..=n {
                    degens[n].push(
                        back[n]
                            .iter()
                            .map(|&x| members[n + 1][ambient.degen(n, i, x)].unwrap())
                            .collect(),
                    );
                }
            }
        }
        let dom = Arc::new(TruncatedSimplicialSet::from_tables(
            top, ids, faces, degens,
        )?);
        let map = SimplicialMap::new_unchecked(dom, ambient, back)?;
        Ok(SubcomplexInclusion { map, members })
    }

    pub fn map(&self) -> &SimplicialMap {
        &self.map
    }

    pub fn dom(&self) -> &Arc<TruncatedSimplicialSet> {
        self.map.dom()
    }

    pub fn cod(&self) -> &Arc<TruncatedSimplicialSet> {
        self.map.cod()
    }

    /// Local index of an ambient simplex, if it lies in the subcomplex.
    pub fn local(&self, n: usize, x: usize) -> Option<usize> {
        self.members[n][x]
    }

    pub fn contains(&self, n: usize, x: usize) -> bool {
        self.members[n][x].is_some()
    }

    /// Nondegenerate simplices of the subcomplex, as ambient identifiers.
    pub fn nondegenerate_ids(&self) -> Vec<Vec<String>> {
        let d = self.dom();
        (0..=d.max_dim())
            .map(|n| {
                (0..d.level_len(n))
                    .filter(|&x| !d.is_degenerate(n, x))
                    .map(|x| d.id(n, x).to_string())
                    .collect()
            })
            .collect()
    }
}
