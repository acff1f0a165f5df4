use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lifting::{check_kan_fibration, solve_extension, KanCertificate, LiftingProblem};
use crate::sset::{product, standard_simplex, SimplicialMap, SubcomplexInclusion};

fn surjective(theta: &[u8], n: usize) -> bool {
    (0..=n as u8).all(|v| theta.contains(&v))
}

/// Whether `x` and `y` are homotopic rel boundary over the degenerate image
/// of `p(x)`: a map `Δ[n] × Δ[1] → E` from `x` to `y`, constant on
/// `∂Δ[n] × Δ[1]`, found by extension from the ends and the boundary.
///
/// Simplices with different faces or images are never related.
pub fn p_related(p: &SimplicialMap, n: usize, x: usize, y: usize, budget: &Budget) -> Result<bool> {
    let (e, u) = (p.dom(), p.cod());
    let top_dim = e.max_dim();
    if n + 1 > top_dim {
        return Err(Error::Truncation {
            requested: n + 1,
            max_dim: top_dim,
        });
    }
    if x == y {
        return Ok(true);
    }
    if p.apply(n, x) != p.apply(n, y) || (n > 0 && e.faces_of(n, x) != e.faces_of(n, y)) {
        return Ok(false);
    }
    let simplex = standard_simplex(n, top_dim);
    let interval = standard_simplex(1, top_dim);
    let prism = product(simplex.sset(), interval.sset())?;
    let base = p.apply(n, x);
    let ends = SubcomplexInclusion::from_predicate(prism.sset.clone(), |m, w| {
        let (z, t) = prism.pair(m, w);
        let t = interval.theta(m, t);
        !surjective(simplex.theta(m, z), n) || t.iter().all(|&v| v == t[0])
    })?;
    let dom = ends.dom();
    let assign = (0..=top_dim)
        .map(|m| {
            (0..dom.level_len(m))
                .map(|a| {
                    let (z, t) = prism.pair(m, ends.map().apply(m, a));
                    let theta = simplex.theta(m, z);
                    let at_y = surjective(theta, n) && interval.theta(m, t)[0] == 1;
                    e.apply(n, if at_y { y } else { x }, theta)
                })
                .collect()
        })
        .collect();
    let top = SimplicialMap::new(dom.clone(), e.clone(), assign)?;
    let below = (0..=top_dim)
        .map(|m| {
            (0..prism.sset.level_len(m))
                .map(|w| u.apply(n, base, simplex.theta(m, prism.pair(m, w).0)))
                .collect()
        })
        .collect();
    let bottom = SimplicialMap::new(prism.sset.clone(), u.clone(), below)?;
    let problem = LiftingProblem::new(ends, top, bottom, p.clone())?;
    Ok(solve_extension(&problem, budget)?.is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    /// Levels `0..checked_levels` were examined.
    pub checked_levels: usize,
    /// Distinct p-related pairs `(level, id, id)`.
    pub related: Vec<(usize, String, String)>,
}

impl MinimalityReport {
    pub fn minimal(&self) -> bool {
        self.related.is_empty()
    }
}

/// Candidates grouped by faces and image, in index order.
fn groups(p: &SimplicialMap, n: usize, keep: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
    let e = p.dom();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<(Vec<usize>, usize), usize> = HashMap::new();
    for x in (0..e.level_len(n)).filter(|&x| keep(x)) {
        let faces = if n == 0 { vec![] } else { e.faces_of(n, x) };
        let key = (faces, p.apply(n, x));
        let next = out.len();
        let at = *slot.entry(key).or_insert(next);
        if at == next {
            out.push(Vec::new());
        }
        out[at].push(x);
    }
    out
}

/// Minimal iff no two distinct simplices of level below the truncation are
/// p-related.
pub fn check_minimal(p: &SimplicialMap, budget: &Budget) -> Result<MinimalityReport> {
    let e = p.dom();
    if e.max_dim() == 0 {
        return Err(Error::Truncation {
            requested: 1,
            max_dim: 0,
        });
    }
    let mut related = Vec::new();
    for n in 0..e.max_dim() {
        for group in groups(p, n, |_| true) {
            for (i, &x) in group.iter().enumerate() {
                for &y in &group[i + 1..] {
                    if p_related(p, n, x, y, budget)? {
                        related.push((n, e.id(n, x).to_string(), e.id(n, y).to_string()));
                    }
                }
            }
        }
    }
    Ok(MinimalityReport {
        checked_levels: e.max_dim(),
        related,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PClass {
    pub level: usize,
    pub representative: String,
    pub members: Vec<String>,
}

/// `M ⊆ E` with the class table that relates them.
#[derive(Clone, Debug)]
pub struct Minimalization {
    pub inclusion: SubcomplexInclusion,
    /// `M → U`.
    pub fibration: SimplicialMap,
    pub classes: Vec<PClass>,
    pub minimality: MinimalityReport,
    pub kan: KanCertificate,
}

/// One representative per p-class, dimension by dimension, among simplices
/// whose faces are already chosen; degenerate first, then least identifier.
///
/// p-relatedness needs one level above, so the top level keeps every
/// candidate.
pub fn minimalize(p: &SimplicialMap, budget: &Budget) -> Result<Minimalization> {
    let e = p.dom();
    let top_dim = e.max_dim();
    if top_dim == 0 {
        return Err(Error::Truncation {
            requested: 1,
            max_dim: 0,
        });
    }
    let mut chosen: Vec<Vec<bool>> = (0..=top_dim).map(|n| vec![false; e.level_len(n)]).collect();
    let mut classes = Vec::new();
    for n in 0..=top_dim {
        let candidate = |x: usize| n == 0 || e.faces_of(n, x).iter().all(|&f| chosen[n - 1][f]);
        let level_groups = groups(p, n, candidate);
        for group in level_groups {
            let mut parts: Vec<Vec<usize>> = Vec::new();
            for x in group {
                let mut home = None;
                if n < top_dim {
                    for (i, part) in parts.iter().enumerate() {
                        if p_related(p, n, part[0], x, budget)? {
                            home = Some(i);
                            break;
                        }
                    }
                }
                match home {
                    Some(i) => parts[i].push(x),
                    None => parts.push(vec![x]),
                }
            }
            for part in parts {
                let rep = part
                    .iter()
                    .copied()
                    .find(|&x| e.is_degenerate(n, x))
                    .unwrap_or(part[0]);
                chosen[n][rep] = true;
                classes.push(PClass {
                    level: n,
                    representative: e.id(n, rep).to_string(),
                    members: part.iter().map(|&x| e.id(n, x).to_string()).collect(),
                });
            }
        }
    }
    let inclusion =
        SubcomplexInclusion::from_predicate(e.clone(), |n, x| chosen[n][x]).map_err(|err| {
            Error::Failed(format!(
                "the selection is not a subcomplex; the truncation is too low ({err})"
            ))
        })?;
    let fibration = inclusion.map().then(p)?;
    let minimality = check_minimal(&fibration, budget)?;
    let kan = check_kan_fibration(&fibration, top_dim, budget)?;
    Ok(Minimalization {
        inclusion,
        fibration,
        classes,
        minimality,
        kan,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::sset::{boundary, disjoint_union, TruncatedSimplicialSet};

    fn b() -> Budget {
        Budget::default()
    }

    fn over_point(e: Arc<TruncatedSimplicialSet>) -> SimplicialMap {
        let pt = standard_simplex(0, e.max_dim()).sset().clone();
        SimplicialMap::to_terminal(e, pt)
    }

    #[test]
    fn relatedness_of_vertices() {
        let p = over_point(standard_simplex(1, 2).sset().clone());
        assert!(p_related(&p, 0, 0, 1, &b()).unwrap());
        assert!(p_related(&p, 0, 1, 1, &b()).unwrap());
        let q = over_point(boundary(1, 2).dom().clone());
        assert!(!p_related(&q, 0, 0, 1, &b()).unwrap());
        assert!(p_related(&p, 2, 0, 0, &b()).is_err());
    }

    #[test]
    fn interval_minimalizes_to_a_vertex() {
        let p = over_point(standard_simplex(1, 2).sset().clone());
        assert!(!check_minimal(&p, &b()).unwrap().minimal());
        let m = minimalize(&p, &b()).unwrap();
        assert_eq!(m.inclusion.dom().level_sizes(), vec![1, 1, 1]);
        assert_eq!(m.inclusion.dom().id(0, 0), "0");
        assert!(m.minimality.minimal());
        assert!(m.kan.passed());
    }

    #[test]
    fn discrete_fibres_are_minimal() {
        let pt = standard_simplex(0, 2).sset().clone();
        let e = Arc::new(disjoint_union(&pt, &pt).unwrap());
        let p = over_point(e.clone());
        let m = minimalize(&p, &b()).unwrap();
        assert_eq!(m.inclusion.dom().level_sizes(), e.level_sizes());
        let again = minimalize(&m.fibration, &b()).unwrap();
        assert_eq!(again.inclusion.dom().ids(0), m.inclusion.dom().ids(0));
        let id = minimalize(&SimplicialMap::identity(e.clone()), &b()).unwrap();
        assert_eq!(id.inclusion.dom().level_sizes(), e.level_sizes());
    }
}
