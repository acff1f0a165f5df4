use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::mapping::{end_space, eq_space_bounded, EndSpace, MappingSpace};
use super::minimal::MinimalityReport;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::homotopy::{
    component, fundamental_group_presentation, pi0, reduce_table_presentation, Comparison,
    ComparisonReport,
};
use crate::lifting::{build_connection, terminal_map, Connection, KanCertificate};
use crate::sset::SimplicialMap;
use crate::verdict::Verdict;

/// A fibration with its certificate; the certificate is about `p`.
#[derive(Clone, Debug)]
pub struct FibrationBundle {
    pub p: SimplicialMap,
    pub kan_cert: KanCertificate,
    pub minimality: Option<MinimalityReport>,
    pub connection: Option<Connection>,
}

impl FibrationBundle {
    pub fn new(p: SimplicialMap, kan_cert: KanCertificate) -> Result<Self> {
        if !kan_cert.is_about(&p) {
            return Err(Error::Invalid(
                "the certificate is about a different map".into(),
            ));
        }
        Ok(FibrationBundle {
            p,
            kan_cert,
            minimality: None,
            connection: None,
        })
    }
}

/// The mapping spaces of `p` truncated at 2 together with a connection, so
/// that every edge `u: a → b` of `U` gives a vertex `T_u` of `End` over
/// `(a, b)`.
#[derive(Debug)]
pub struct Transport {
    pub end: EndSpace,
    pub eq: MappingSpace,
    pub connection: Connection,
    classes: RefCell<HashMap<(usize, usize), HashMap<usize, usize>>>,
}

pub(crate) const DIM: usize = 2;

impl Transport {
    pub fn new(p: &SimplicialMap, p_cert: &KanCertificate, budget: &Budget) -> Result<Self> {
        if p.dom().max_dim() < DIM {
            return Err(Error::Truncation {
                requested: DIM,
                max_dim: p.dom().max_dim(),
            });
        }
        let connection = build_connection(p, p_cert, DIM, budget)?;
        let end = end_space(&connection.fibration, budget)?;
        let eq = eq_space_bounded(&end, budget)?;
        Ok(Transport {
            end,
            eq,
            connection,
            classes: RefCell::new(HashMap::new()),
        })
    }

    /// Homotopy class of a vertex over `(x, y)`.
    pub fn class(&self, a: usize) -> usize {
        let key = self.end.ends(0, a);
        self.classes
            .borrow_mut()
            .entry(key)
            .or_insert_with(|| self.end.classes_over(key.0, key.1))[&a]
    }

    /// `T_u`: the fibre over `d_1 u` carried to the fibre over `d_0 u`.
    pub fn edge_map(&self, u: usize) -> Result<usize> {
        let base = self.connection.fibration.cod();
        let (a, b) = (base.face(1, 1, u), base.face(1, 0, u));
        let gamma = self
            .connection
            .path_of_edge(u)
            .ok_or_else(|| Error::NotFound(format!("path along edge '{}'", base.id(1, u))))?;
        let (src, dst) = (self.end.pulled(0, a), self.end.pulled(0, b));
        let table = (0..=self.end.max_dim())
            .map(|m| {
                (0..src.sset.level_len(m))
                    .map(|w| {
                        let (z, e) = src.pair(m, w);
                        let moved = self.connection.transport(gamma, m, e)?;
                        dst.find(m, z, moved)
                    })
                    .collect::<Option<Vec<usize>>>()
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Failed("transport leaves the fibre".into()))?;
        self.end
            .find(0, a, b, &table)
            .ok_or_else(|| Error::Failed("transport is not a map of fibres".into()))
    }

    /// An inverse up to homotopy, by exhaustive search over vertices.
    pub fn homotopy_inverse(&self, a: usize) -> Option<usize> {
        if let Some(inv) = self.end.inverse(0, a) {
            return Some(inv);
        }
        let (x, y) = self.end.ends(0, a);
        let (ix, iy) = (
            self.class(self.end.identity(0, x)),
            self.class(self.end.identity(0, y)),
        );
        self.end.over(0, y, x).into_iter().find(|&b| {
            self.class(self.end.compose(0, a, b).unwrap()) == ix
                && self.class(self.end.compose(0, b, a).unwrap()) == iy
        })
    }

    /// The composite of edge maps along `(edge, forward)` steps from `x0`,
    /// backward steps through homotopy inverses; `None` when an inverse is
    /// not found.
    pub fn along(&self, x0: usize, path: &[(usize, bool)]) -> Result<Option<usize>> {
        let base = self.connection.fibration.cod();
        let mut at = self.end.identity(0, x0);
        for &(u, forward) in path {
            let (a, b) = (base.face(1, 1, u), base.face(1, 0, u));
            let here = self.end.ends(0, at).1;
            let step = if forward {
                (here == a).then(|| self.edge_map(u)).transpose()?
            } else if here == b {
                match self.homotopy_inverse(self.edge_map(u)?) {
                    Some(inv) => Some(inv),
                    None => return Ok(None),
                }
            } else {
                None
            };
            let step = step.ok_or_else(|| {
                Error::Invalid(format!(
                    "edge '{}' does not continue the path",
                    base.id(1, u)
                ))
            })?;
            at = self
                .end
                .compose(0, at, step)
                .expect("consecutive fibre maps compose");
        }
        Ok(Some(at))
    }

    /// The class in `π0 Eq(E_{x0})` of transport around a loop at `x0`.
    pub fn transport_along_path(&self, x0: usize, path: &[(usize, bool)]) -> Result<Option<usize>> {
        let end = self.along(x0, path)?;
        match end {
            Some(a) if self.end.ends(0, a).1 != x0 => {
                Err(Error::Invalid("the path is not a loop".into()))
            }
            Some(a) => Ok(Some(self.class(a))),
            None => Ok(None),
        }
    }

    /// `π0 Eq(E_{x0})` as a group under "then", named by least representatives.
    pub fn loop_group(&self, x0: usize) -> Result<(FiniteGroup, Vec<usize>)> {
        let verts: Vec<usize> = self
            .end
            .over(0, x0, x0)
            .into_iter()
            .filter(|&a| self.eq.contains(0, a))
            .collect();
        let mut reps: Vec<(usize, usize)> = Vec::new();
        for &a in &verts {
            let c = self.class(a);
            if !reps.iter().any(|&(k, _)| k == c) {
                reps.push((c, a));
            }
        }
        let position = |a: usize| reps.iter().position(|&(k, _)| k == self.class(a));
        let mut table = vec![vec![0; reps.len()]; reps.len()];
        for (i, &(_, a)) in reps.iter().enumerate() {
            for (j, &(_, b)) in reps.iter().enumerate() {
                let ab = self.end.compose(0, a, b).expect("endomorphisms compose");
                table[i][j] = position(ab)
                    .ok_or_else(|| Error::Failed("Eq is not closed under composition".into()))?;
            }
        }
        for &a in &verts {
            for &b in &verts {
                let ab = self.end.compose(0, a, b).unwrap();
                if position(ab) != Some(table[position(a).unwrap()][position(b).unwrap()]) {
                    return Err(Error::Failed(
                        "composition is not well defined on components".into(),
                    ));
                }
            }
        }
        let names = reps
            .iter()
            .map(|&(_, a)| self.end.sset.id(0, a).to_string())
            .collect();
        let group = FiniteGroup::from_table(names, table)?;
        Ok((group, reps.into_iter().map(|(_, a)| a).collect()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasepointReport {
    pub basepoint: String,
    /// `|π0 Eq(E_{x0})|`, when it forms a group.
    pub eq_components: Option<usize>,
    pub comparison: Option<ComparisonReport>,
    /// Representative of the class labelling each generator edge.
    pub labels: Vec<String>,
    pub verdict: Verdict,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnivalenceReport {
    pub checked_dim: usize,
    pub component_condition: Verdict,
    /// Vertex pairs in different components joined by an `Eq` vertex.
    pub counterexamples: Vec<(String, String)>,
    /// Vertex pairs in one component with no `Eq` vertex found.
    pub unresolved: Vec<(String, String)>,
    pub basepoints: Vec<BasepointReport>,
    pub limitation: String,
    pub verdict: Verdict,
}

const LIMITATION: &str =
    "decided on vertices and edges of the mapping spaces: components of U against Eq vertices, \
     and pi1 of each component against pi0 of Eq over its least vertex";

fn basepoint(t: &Transport, x0: usize, bound: usize) -> Result<BasepointReport> {
    let base = t.connection.fibration.cod();
    let name = base.id(0, x0).to_string();
    let unknown = |reason: String, eq_components| BasepointReport {
        basepoint: name.clone(),
        eq_components,
        comparison: None,
        labels: Vec::new(),
        verdict: Verdict::Unknown,
        reason,
    };
    let (group, reps) = match t.loop_group(x0) {
        Ok(g) => g,
        Err(e) => return Ok(unknown(e.to_string(), None)),
    };
    let order = Some(group.order());
    let comp = component(base, x0)?;
    let cs = comp.dom();
    let presentation =
        fundamental_group_presentation(cs, comp.local(0, x0).expect("base in its component"))?;
    let ambient = |n: usize, v: usize| comp.map().apply(n, v);
    let ends = |e: usize| (ambient(0, cs.face(1, 1, e)), ambient(0, cs.face(1, 0, e)));
    let mut tau: HashMap<usize, usize> = HashMap::from([(x0, t.end.identity(0, x0))]);
    let tree: Vec<usize> = presentation
        .tree
        .iter()
        .map(|id| cs.index_of(1, id).unwrap())
        .collect();
    while tau.len() < cs.level_len(0) {
        let before = tau.len();
        for &e in &tree {
            let (a, b) = ends(e);
            let step = match (tau.contains_key(&a), tau.contains_key(&b)) {
                (true, false) => Some((b, tau[&a], t.edge_map(ambient(1, e))?)),
                (false, true) => match t.homotopy_inverse(t.edge_map(ambient(1, e))?) {
                    Some(inv) => Some((a, tau[&b], inv)),
                    None => {
                        return Ok(unknown(
                            format!("no homotopy inverse along '{}'", cs.id(1, e)),
                            order,
                        ))
                    }
                },
                _ => None,
            };
            if let Some((v, first, then)) = step {
                tau.insert(
                    v,
                    t.end.compose(0, first, then).expect("tree paths compose"),
                );
            }
        }
        if tau.len() == before {
            return Err(Error::Failed(
                "spanning tree does not reach every vertex".into(),
            ));
        }
    }
    let mut labels = Vec::with_capacity(cs.level_len(1));
    for e in 0..cs.level_len(1) {
        let (a, b) = ends(e);
        let lhs = t
            .end
            .compose(0, tau[&a], t.edge_map(ambient(1, e))?)
            .expect("composable");
        let target = t.class(lhs);
        let found = reps
            .iter()
            .position(|&g| t.class(t.end.compose(0, g, tau[&b]).expect("composable")) == target);
        match found {
            Some(g) => labels.push(g),
            None => {
                return Ok(unknown(
                    format!("edge '{}' has no label", cs.id(1, e)),
                    order,
                ))
            }
        }
    }
    let comparison = reduce_table_presentation(&presentation, &group, &labels, bound);
    Ok(BasepointReport {
        basepoint: name,
        eq_components: order,
        verdict: comparison.verdict.verdict(),
        reason: comparison.reason.clone(),
        labels: labels.iter().map(|&g| group.name(g).to_string()).collect(),
        comparison: Some(comparison),
    })
}

/// Component condition on vertex pairs, then for the least vertex of each
/// component whether transport presents `π0 Eq(E_{x0})` from `π1(U, x0)`.
///
/// Needs certificates up to dimension 2 for `p` and for `U`.
pub fn univalence_certificate(
    p: &SimplicialMap,
    p_cert: &KanCertificate,
    u_cert: &KanCertificate,
    bound: usize,
    budget: &Budget,
) -> Result<UnivalenceReport> {
    let u = p.cod();
    if !u_cert.is_about(&terminal_map(u)) || !u_cert.covers(DIM) {
        return Err(Error::Invalid(
            "univalence needs a passing Kan certificate for the base up to dimension 2".into(),
        ));
    }
    let t = Transport::new(p, p_cert, budget)?;
    let components = pi0(u);
    let mut counterexamples = Vec::new();
    let mut unresolved = Vec::new();
    for x in 0..u.level_len(0) {
        for y in 0..u.level_len(0) {
            let joined = t.end.over(0, x, y).into_iter().any(|a| t.eq.contains(0, a));
            let pair = (u.id(0, x).to_string(), u.id(0, y).to_string());
            match (joined, components.same(x, y)) {
                (true, false) => counterexamples.push(pair),
                (false, true) => unresolved.push(pair),
                _ => {}
            }
        }
    }
    let component_condition = if !counterexamples.is_empty() {
        Verdict::Fail
    } else if !unresolved.is_empty() {
        Verdict::Unknown
    } else {
        Verdict::Pass
    };
    let basepoints = components
        .classes
        .iter()
        .map(|class| basepoint(&t, class[0], bound))
        .collect::<Result<Vec<_>>>()?;
    let verdict = component_condition.and(Verdict::all(basepoints.iter().map(|b| b.verdict)));
    Ok(UnivalenceReport {
        checked_dim: DIM,
        component_condition,
        counterexamples,
        unresolved,
        basepoints,
        limitation: LIMITATION.into(),
        verdict,
    })
}

impl UnivalenceReport {
    pub fn comparison_of(&self, basepoint: &str) -> Option<Comparison> {
        self.basepoints
            .iter()
            .find(|b| b.basepoint == basepoint)
            .and_then(|b| b.comparison.as_ref().map(|c| c.verdict))
    }
}
