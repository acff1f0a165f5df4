//! Finite, dimension-truncated simplicial sets.
//!
//! Every level `0..=max_dim` stores its simplices explicitly, degenerate ones
//! included. Identifiers are opaque strings kept in lexicographic order, so a
//! simplex is addressed internally by `(level, index)` and index order is
//! identifier order.

mod build;
mod limits;
mod map;
mod shapes;

pub(crate) use build::build_keyed;
pub use build::Keyed;
pub use limits::{
    discrete_set, disjoint_union, exponential, fiber, product, pullback, Exponential, Product,
    Pullback,
};
pub use map::SimplicialMap;
pub use shapes::{
    boundary, double_horn, horn, horn_pair, standard_simplex, StandardSimplex, SubcomplexInclusion,
};
pub(crate) use shapes::{codegeneracy, coface};

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Face tuple → simplices having exactly those faces, per level.
type FaceIndex = Vec<HashMap<Vec<usize>, Vec<usize>>>;

#[derive(Debug, Default)]
pub struct TruncatedSimplicialSet {
    max_dim: usize,
    ids: Vec<Vec<String>>,
    lookup: Vec<HashMap<String, usize>>,
    /// `faces[n][i][x]` for `n >= 1`; `faces[0]` is empty.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[n][i][x]` for `n < max_dim`.
    degens: Vec<Vec<Vec<usize>>>,
    face_index: OnceLock<FaceIndex>,
    degenerate_sources: OnceLock<Vec<Vec<Vec<(usize, usize)>>>>,
}

impl Clone for TruncatedSimplicialSet {
    fn clone(&self) -> Self {
        TruncatedSimplicialSet {
            max_dim: self.max_dim,
            ids: self.ids.clone(),
            lookup: self.lookup.clone(),
            faces: self.faces.clone(),
            degens: self.degens.clone(),
            face_index: OnceLock::new(),
            degenerate_sources: OnceLock::new(),
        }
    }
}

impl PartialEq for TruncatedSimplicialSet {
    fn eq(&self, other: &Self) -> bool {
        self.max_dim == other.max_dim
            && self.ids == other.ids
            && self.faces == other.faces
            && self.degens == other.degens
    }
}

impl Eq for TruncatedSimplicialSet {}

/// Outcome of [`validate_sset`] and the other structural validators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, msg: String) {
        self.violations.push(msg);
    }

    pub(crate) fn extend_prefixed(&mut self, prefix: &str, other: ValidationReport) {
        for v in other.violations {
            self.violations.push(format!("{prefix}: {v}"));
        }
    }
}

impl TruncatedSimplicialSet {
    /// Assembles a simplicial set from index tables.
    ///
    /// `ids[n]` must be strictly increasing. Table shapes and index ranges are
    /// checked here; the simplicial identities are not (see [`validate_sset`]).
    pub fn from_tables(
        max_dim: usize,
        ids: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if ids.len() != max_dim + 1 {
            return Err(Error::Invalid(format!(
                "expected {} levels, found {}",
                max_dim + 1,
                ids.len()
            )));
        }
        for (n, level) in ids.iter().enumerate() {
            if level.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid(format!(
                    "level {n}: identifiers must be unique and sorted"
                )));
            }
        }
        if faces.len() != max_dim + 1 || degens.len() != max_dim + 1 {
            return Err(Error::Invalid(
                "structure tables have the wrong number of levels".into(),
            ));
        }
        for n in 0..=max_dim {
            let expected = if n == 0 { 0 } else { n + 1 };
            if faces[n].len() != expected {
                return Err(Error::Invalid(format!(
                    "level {n}: expected {expected} face maps"
                )));
            }
            for (i, table) in faces[n].iter().enumerate() {
                if table.len() != ids[n].len() || table.iter().any(|&x| x >= ids[n - 1].len()) {
                    return Err(Error::Invalid(format!(
                        "level {n}: face d{i} table is malformed"
                    )));
                }
            }
            let expected = if n < max_dim { n + 1 } else { 0 };
            if degens[n].len() != expected {
                return Err(Error::Invalid(format!(
                    "level {n}: expected {expected} degeneracy maps"
                )));
            }
            for (i, table) in degens[n].iter().enumerate() {
                if table.len() != ids[n].len() || table.iter().any(|&x| x >= ids[n + 1].len()) {
                    return Err(Error::Invalid(format!(
                        "level {n}: degeneracy s{i} table is malformed"
                    )));
                }
            }
        }
        let lookup = ids
            .iter()
            .map(|level| {
                level
                    .iter()
                    .enumerate()
                    .map(|(i, id)| (id.clone(), i))
                    .collect()
            })
            .collect();
        Ok(TruncatedSimplicialSet {
            max_dim,
            ids,
            lookup,
            faces,
            degens,
            face_index: OnceLock::new(),
            degenerate_sources: OnceLock::new(),
        })
    }

    /// The simplicial set with every level empty.
    pub fn empty(max_dim: usize) -> Self {
        let faces = (0..=max_dim)
            .map(|n| if n == 0 { vec![] } else { vec![vec![]; n + 1] })
            .collect();
        let degens = (0..=max_dim)
            .map(|n| {
                if n < max_dim {
                    vec![vec![]; n + 1]
                } else {
                    vec![]
                }
            })
            .collect();
        Self::from_tables(max_dim, vec![vec![]; max_dim + 1], faces, degens)
            .expect("empty tables are well formed")
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn level_len(&self, n: usize) -> usize {
        self.ids[n].len()
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.ids.iter().map(Vec::len).collect()
    }

    pub fn total_len(&self) -> usize {
        self.ids.iter().map(Vec::len).sum()
    }

    pub fn ids(&self, n: usize) -> &[String] {
        &self.ids[n]
    }

    pub fn id(&self, n: usize, x: usize) -> &str {
        &self.ids[n][x]
    }

    pub fn index_of(&self, n: usize, id: &str) -> Option<usize> {
        self.lookup.get(n)?.get(id).copied()
    }

    /// Finds the level and index of an identifier.
    pub fn locate(&self, id: &str) -> Option<(usize, usize)> {
        (0..=self.max_dim).find_map(|n| self.index_of(n, id).map(|x| (n, x)))
    }

    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    pub fn degen(&self, n: usize, i: usize, x: usize) -> usize {
        self.degens[n][i][x]
    }

    pub fn face_table(&self, n: usize, i: usize) -> &[usize] {
        &self.faces[n][i]
    }

    pub fn degen_table(&self, n: usize, i: usize) -> &[usize] {
        &self.degens[n][i]
    }

    /// All faces of an n-simplex, `d_0 .. d_n`.
    pub fn faces_of(&self, n: usize, x: usize) -> Vec<usize> {
        (0..=n).map(|i| self.faces[n][i][x]).collect()
    }

    /// The vertices of a simplex, in order `0..=n`.
    pub fn vertices_of(&self, n: usize, x: usize) -> Vec<usize> {
        (0..=n)
            .map(|v| {
                let theta = vec![v as u8];
                self.apply(n, x, &theta)
            })
            .collect()
    }

    /// `s_0` iterated: the totally degenerate m-simplex on a vertex.
    pub fn degenerate_vertex(&self, v: usize, m: usize) -> usize {
        let mut x = v;
        for n in 0..m {
            x = self.degens[n][0][x];
        }
        x
    }

    /// Whether the simplex is in the image of some degeneracy.
    pub fn is_degenerate(&self, n: usize, x: usize) -> bool {
        n > 0 && !self.degenerate_sources()[n][x].is_empty()
    }

    /// For each level-m simplex, every `(j, τ)` with `s_j τ = σ`.
    pub fn degenerate_sources(&self) -> &[Vec<Vec<(usize, usize)>>] {
        self.degenerate_sources.get_or_init(|| {
            let mut out: Vec<Vec<Vec<(usize, usize)>>> =
                self.ids.iter().map(|l| vec![Vec::new(); l.len()]).collect();
            for n in 0..self.max_dim {
                for (j, table) in self.degens[n].iter().enumerate() {
                    for (tau, &sigma) in table.iter().enumerate() {
                        out[n + 1][sigma].push((j, tau));
                    }
                }
            }
            out
        })
    }

    /// Simplices of level `n >= 1` grouped by their face tuple.
    pub fn face_index(&self) -> &FaceIndex {
        self.face_index.get_or_init(|| {
            let mut out = vec![HashMap::new(); self.max_dim + 1];
            for n in 1..=self.max_dim {
                for x in 0..self.ids[n].len() {
                    out[n]
                        .entry(self.faces_of(n, x))
                        .or_insert_with(Vec::new)
                        .push(x);
                }
            }
            out
        })
    }

    /// Simplices at level `n >= 1` with the given faces.
    pub fn with_faces(&self, n: usize, faces: &[usize]) -> &[usize] {
        self.face_index()[n]
            .get(faces)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Applies the simplicial operator of a monotone map `θ: [m] → [n]`
    /// (given by its values) to the n-simplex `x`, returning an m-simplex.
    pub fn apply(&self, n: usize, x: usize, theta: &[u8]) -> usize {
        debug_assert!(!theta.is_empty());
        let m = theta.len() - 1;
        // Non-surjective: θ = δ_j ∘ θ', so θ^* = θ'^* ∘ d_j.
        if let Some(j) = (0..=n).find(|&j| !theta.contains(&(j as u8))) {
            let lowered: Vec<u8> = theta
                .iter()
                .map(|&v| if v as usize > j { v - 1 } else { v })
                .collect();
            return self.apply(n - 1, self.faces[n][j][x], &lowered);
        }
        if m == n {
            return x;
        }
        // Surjective with m > n: θ = θ' ∘ σ_i where θ(i) = θ(i+1).
        let i = (0..m)
            .find(|&i| theta[i] == theta[i + 1])
            .expect("surjection onto a smaller ordinal repeats a value");
        let mut shorter = theta.to_vec();
        shorter.remove(i + 1);
        let y = self.apply(n, x, &shorter);
        self.degens[m - 1][i][y]
    }

    /// The same simplicial set with levels above `n` dropped.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.max_dim {
            return Err(Error::Truncation {
                requested: n,
                max_dim: self.max_dim,
            });
        }
        let mut degens = self.degens[..=n].to_vec();
        degens[n] = vec![];
        Self::from_tables(
            n,
            self.ids[..=n].to_vec(),
            self.faces[..=n].to_vec(),
            degens,
        )
    }
}

/// Lists every violated simplicial identity and every identifier shared by two
/// levels. An empty report means the tables form a truncated simplicial set.
pub fn validate_sset(s: &TruncatedSimplicialSet) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut seen: HashSet<&str> = HashSet::new();
    for n in 0..=s.max_dim {
        for id in s.ids(n) {
            if !seen.insert(id.as_str()) {
                report.push(format!("identifier '{id}' appears at more than one level"));
            }
        }
    }
    // d_i d_j = d_{j-1} d_i for i < j
    for n in 2..=s.max_dim {
        for x in 0..s.level_len(n) {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = s.face(n - 1, i, s.face(n, j, x));
                    let rhs = s.face(n - 1, j - 1, s.face(n, i, x));
                    if lhs != rhs {
                        report.push(format!(
                            "d{i} d{j} != d{} d{i} on '{}' (level {n})",
                            j - 1,
                            s.id(n, x)
                        ));
                    }
                }
            }
        }
    }
    // s_i s_j = s_{j+1} s_i for i <= j
    for n in 0..s.max_dim.saturating_sub(1) {
        for x in 0..s.level_len(n) {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = s.degen(n + 1, i, s.degen(n, j, x));
                    let rhs = s.degen(n + 1, j + 1, s.degen(n, i, x));
                    if lhs != rhs {
                        report.push(format!(
                            "s{i} s{j} != s{} s{i} on '{}' (level {n})",
                            j + 1,
                            s.id(n, x)
                        ));
                    }
                }
            }
        }
    }
    // mixed identities
    for n in 0..s.max_dim {
        for x in 0..s.level_len(n) {
            for j in 0..=n {
                let sx = s.degen(n, j, x);
                for i in 0..=n + 1 {
                    let lhs = s.face(n + 1, i, sx);
                    let (rhs, law) = if i < j {
                        (
                            s.degen(n - 1, j - 1, s.face(n, i, x)),
                            format!("s{} d{i}", j - 1),
                        )
                    } else if i == j || i == j + 1 {
                        (x, "id".to_string())
                    } else {
                        (
                            s.degen(n - 1, j, s.face(n, i - 1, x)),
                            format!("s{j} d{}", i - 1),
                        )
                    };
                    if lhs != rhs {
                        report.push(format!(
                            "d{i} s{j} != {law} on '{}' (level {n})",
                            s.id(n, x)
                        ));
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_set_is_valid() {
        let e = TruncatedSimplicialSet::empty(3);
        assert!(validate_sset(&e).is_valid());
        assert_eq!(e.level_sizes(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn swapped_faces_are_reported() {
        let d1 = standard_simplex(1, 2);
        let s = d1.sset();
        let mut faces = s.faces.clone();
        let edge = s.index_of(1, "01").unwrap();
        faces[1][0][edge] = s.index_of(0, "0").unwrap();
        faces[1][1][edge] = s.index_of(0, "1").unwrap();
        let broken =
            TruncatedSimplicialSet::from_tables(2, s.ids.clone(), faces, s.degens.clone()).unwrap();
        let report = validate_sset(&broken);
        assert!(!report.is_valid());
        assert!(
            report
                .violations
                .iter()
                .any(|v| v.starts_with("d0 d1 != d0 d0")),
            "{:?}",
            report.violations
        );
    }

    #[test]
    fn shared_identifier_is_reported() {
        let ids = vec![vec!["a".to_string()], vec!["a".to_string()]];
        let faces = vec![vec![], vec![vec![0], vec![0]]];
        let degens = vec![vec![vec![0]], vec![]];
        let s = TruncatedSimplicialSet::from_tables(1, ids, faces, degens).unwrap();
        assert!(validate_sset(&s).violations[0].contains("more than one level"));
    }

    #[test]
    fn malformed_tables_are_rejected() {
        let ids = vec![vec!["b".to_string(), "a".to_string()]];
        assert!(TruncatedSimplicialSet::from_tables(0, ids, vec![vec![]], vec![vec![]]).is_err());
    }

    #[test]
    fn apply_matches_face_and_degeneracy() {
        let d2 = standard_simplex(2, 3);
        let s = d2.sset();
        let top = s.index_of(2, "012").unwrap();
        assert_eq!(s.id(1, s.apply(2, top, &[0, 2])), "02");
        assert_eq!(s.id(3, s.apply(2, top, &[0, 1, 1, 2])), "0112");
        assert_eq!(s.id(0, s.apply(2, top, &[1])), "1");
        let vs: Vec<&str> = s.vertices_of(2, top).iter().map(|&v| s.id(0, v)).collect();
        assert_eq!(vs, ["0", "1", "2"]);
    }

    #[test]
    fn truncation_drops_levels() {
        let s = standard_simplex(1, 3).sset().truncate(1).unwrap();
        assert_eq!(s.level_sizes(), vec![2, 3]);
        assert!(validate_sset(&s).is_valid());
    }
}
