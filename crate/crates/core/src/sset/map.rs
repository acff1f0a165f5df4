use std::sync::Arc;

use super::{TruncatedSimplicialSet, ValidationReport};
use crate::error::{Error, Result};

/// A level-indexed function between two truncated simplicial sets of equal
/// `max_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    dom: Arc<TruncatedSimplicialSet>,
    cod: Arc<TruncatedSimplicialSet>,
    assign: Vec<Vec<usize>>,
}

impl SimplicialMap {
    /// Builds a map and rejects it unless it commutes with every face and
    /// degeneracy.
    pub fn new(
        dom: Arc<TruncatedSimplicialSet>,
        cod: Arc<TruncatedSimplicialSet>,
        assign: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let map = Self::new_unchecked(dom, cod, assign)?;
        let report = map.validate();
        if !report.is_valid() {
            return Err(Error::Invalid(report.violations.join("; ")));
        }
        Ok(map)
    }

    /// Builds a map checking only table shapes.
    pub fn new_unchecked(
        dom: Arc<TruncatedSimplicialSet>,
        cod: Arc<TruncatedSimplicialSet>,
        assign: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if dom.max_dim() != cod.max_dim() {
            return Err(Error::Invalid(format!(
                "map between truncations {} and {}",
                dom.max_dim(),
                cod.max_dim()
            )));
        }
        if assign.len() != dom.max_dim() + 1 {
            return Err(Error::Invalid(
                "assignment has the wrong number of levels".into(),
            ));
        }
        for (n, level) in assign.iter().enumerate() {
            if level.len() != dom.level_len(n) || level.iter().any(|&y| y >= cod.level_len(n)) {
                return Err(Error::Invalid(format!(
                    "assignment at level {n} is malformed"
                )));
            }
        }
        Ok(SimplicialMap { dom, cod, assign })
    }

    pub fn identity(s: Arc<TruncatedSimplicialSet>) -> Self {
        let assign = (0..=s.max_dim())
            .map(|n| (0..s.level_len(n)).collect())
            .collect();
        SimplicialMap {
            dom: s.clone(),
            cod: s,
            assign,
        }
    }

    /// The map to the terminal object of the same truncation.
    pub fn to_terminal(
        s: Arc<TruncatedSimplicialSet>,
        terminal: Arc<TruncatedSimplicialSet>,
    ) -> Self {
        debug_assert!((0..=terminal.max_dim()).all(|n| terminal.level_len(n) == 1));
        let assign = (0..=s.max_dim()).map(|n| vec![0; s.level_len(n)]).collect();
        SimplicialMap {
            dom: s,
            cod: terminal,
            assign,
        }
    }

    /// Constant map at a vertex of the codomain.
    pub fn constant(
        dom: Arc<TruncatedSimplicialSet>,
        cod: Arc<TruncatedSimplicialSet>,
        vertex: usize,
    ) -> Result<Self> {
        let assign = (0..=dom.max_dim())
            .map(|n| vec![cod.degenerate_vertex(vertex, n); dom.level_len(n)])
            .collect();
        Self::new_unchecked(dom, cod, assign)
    }

    pub fn dom(&self) -> &Arc<TruncatedSimplicialSet> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<TruncatedSimplicialSet> {
        &self.cod
    }

    pub fn assignment(&self) -> &[Vec<usize>] {
        &self.assign
    }

    pub fn into_assignment(self) -> Vec<Vec<usize>> {
        self.assign
    }

    pub fn apply(&self, n: usize, x: usize) -> usize {
        self.assign[n][x]
    }

    pub fn level(&self, n: usize) -> &[usize] {
        &self.assign[n]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap> {
        if !Arc::ptr_eq(&self.cod, &other.dom) && *self.cod != *other.dom {
            return Err(Error::Invalid("composite of non-composable maps".into()));
        }
        let assign = self
            .assign
            .iter()
            .enumerate()
            .map(|(n, level)| level.iter().map(|&y| other.assign[n][y]).collect())
            .collect();
        Ok(SimplicialMap {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            assign,
        })
    }

    /// Every face/degeneracy square that fails to commute.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let (d, c) = (&self.dom, &self.cod);
        for n in 0..=d.max_dim() {
            for x in 0..d.level_len(n) {
                let fx = self.assign[n][x];
                if n > 0 {
                    for i in 0..=n {
                        if self.assign[n - 1][d.face(n, i, x)] != c.face(n, i, fx) {
                            report.push(format!(
                                "map does not commute with d{i} at '{}'",
                                d.id(n, x)
                            ));
                        }
                    }
                }
                if n < d.max_dim() {
                    for i in 0..=n {
                        if self.assign[n + 1][d.degen(n, i, x)] != c.degen(n, i, fx) {
                            report.push(format!(
                                "map does not commute with s{i} at '{}'",
                                d.id(n, x)
                            ));
                        }
                    }
                }
            }
        }
        report
    }

    pub fn is_injective(&self) -> bool {
        (0..=self.dom.max_dim()).all(|n| self.is_injective_at(n))
    }

    pub fn is_injective_at(&self, n: usize) -> bool {
        let mut seen = vec![false; self.cod.level_len(n)];
        self.assign[n]
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        (0..=self.dom.max_dim()).all(|n| self.is_surjective_at(n))
    }

    pub fn is_surjective_at(&self, n: usize) -> bool {
        let mut seen = vec![false; self.cod.level_len(n)];
        for &y in &self.assign[n] {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// Restriction to the first `n + 1` levels.
    pub fn truncate(&self, n: usize) -> Result<SimplicialMap> {
        Ok(SimplicialMap {
            dom: Arc::new(self.dom.truncate(n)?),
            cod: Arc::new(self.cod.truncate(n)?),
            assign: self.assign[..=n].to_vec(),
        })
    }

    /// Deterministic FNV-1a digest over identifiers and assignments.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
            h ^= 0xff;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        };
        for n in 0..=self.dom.max_dim() {
            for (x, &y) in self.assign[n].iter().enumerate() {
                eat(self.dom.id(n, x).as_bytes());
                eat(self.cod.id(n, y).as_bytes());
            }
            eat(&(self.cod.level_len(n) as u64).to_le_bytes());
        }
        format!("{h:016x}")
    }
}
