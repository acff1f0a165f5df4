use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::problem::{solve_extension, LiftingProblem};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::sset::{
    standard_simplex, SimplicialMap, StandardSimplex, SubcomplexInclusion, TruncatedSimplicialSet,
};
use crate::verdict::Verdict;

/// Standard simplices and their horns up to a truncation, built once.
#[derive(Clone, Debug)]
pub struct HornShapes {
    simplices: Vec<StandardSimplex>,
    horns: Vec<Vec<SubcomplexInclusion>>,
}

impl HornShapes {
    pub fn new(max_dim: usize) -> Self {
        let simplices: Vec<StandardSimplex> = (0..=max_dim)
            .map(|n| standard_simplex(n, max_dim))
            .collect();
        let horns = simplices
            .iter()
            .enumerate()
            .map(|(n, d)| {
                if n == 0 {
                    Vec::new()
                } else {
                    (0..=n).map(|k| d.horn(k).expect("k <= n")).collect()
                }
            })
            .collect();
        HornShapes { simplices, horns }
    }

    pub fn max_dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn simplex(&self, n: usize) -> &StandardSimplex {
        &self.simplices[n]
    }

    pub fn horn(&self, n: usize, k: usize) -> &SubcomplexInclusion {
        &self.horns[n][k]
    }
}

/// `θ = δ_i ∘ θ'`: the values of `θ'` when `i` is missed by `θ`.
pub(crate) fn lower_past(theta: &[u8], i: usize) -> Vec<u8> {
    theta
        .iter()
        .map(|&v| if v as usize > i { v - 1 } else { v })
        .collect()
}

/// A commuting square `Λ^k[n] → Y`, `Δ[n] → X` against some `p: Y → X`.
///
/// `faces[i]` is the (n−1)-simplex of `Y` on the face `d_i`, absent for `i = k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornProblem {
    pub n: usize,
    pub k: usize,
    pub base: usize,
    pub faces: Vec<Option<usize>>,
}

impl HornProblem {
    /// The horn map `Λ^k[n] → Y` determined by the face data.
    pub fn top(
        &self,
        shapes: &HornShapes,
        y: &Arc<TruncatedSimplicialSet>,
    ) -> Result<SimplicialMap> {
        let horn = shapes.horn(self.n, self.k);
        let delta = shapes.simplex(self.n);
        let dom = horn.dom();
        let assign = (0..=dom.max_dim())
            .map(|m| {
                (0..dom.level_len(m))
                    .map(|a| {
                        let theta = delta.theta(m, horn.map().apply(m, a));
                        let i = (0..=self.n)
                            .find(|&i| i != self.k && !theta.contains(&(i as u8)))
                            .expect("horn simplices miss a face other than k");
                        let face = self.faces[i].expect("face data present off k");
                        y.apply(self.n - 1, face, &lower_past(theta, i))
                    })
                    .collect()
            })
            .collect();
        SimplicialMap::new_unchecked(dom.clone(), y.clone(), assign)
    }

    pub fn lifting_problem(
        &self,
        shapes: &HornShapes,
        p: &SimplicialMap,
    ) -> Result<LiftingProblem> {
        let top = self.top(shapes, p.dom())?;
        let bottom = shapes.simplex(self.n).yoneda(p.cod(), self.base)?;
        LiftingProblem::new(shapes.horn(self.n, self.k).clone(), top, bottom, p.clone())
    }

    /// The n-simplex a lift chooses for the top simplex of `Δ[n]`.
    pub fn filler_of(&self, shapes: &HornShapes, lift: &SimplicialMap) -> usize {
        lift.apply(
            self.n,
            shapes.simplex(self.n).top().expect("n <= truncation"),
        )
    }

    pub fn describe(&self, p: &SimplicialMap) -> HornFailure {
        HornFailure {
            n: self.n,
            k: self.k,
            base: p.cod().id(self.n, self.base).to_string(),
            faces: self
                .faces
                .iter()
                .map(|f| f.map(|y| p.dom().id(self.n - 1, y).to_string()))
                .collect(),
        }
    }
}

/// Calls `visit` on every horn problem against `p` with `1 <= n <= maxdim`,
/// ordered by `(n, k, base, faces)`.
pub fn for_each_horn_problem<F>(p: &SimplicialMap, maxdim: usize, mut visit: F) -> Result<()>
where
    F: FnMut(HornProblem) -> Result<()>,
{
    let (y, x) = (p.dom(), p.cod());
    if maxdim > y.max_dim() {
        return Err(Error::Truncation {
            requested: maxdim,
            max_dim: y.max_dim(),
        });
    }
    for n in 1..=maxdim {
        let mut fibers: HashMap<usize, Vec<usize>> = HashMap::new();
        for v in 0..y.level_len(n - 1) {
            fibers.entry(p.apply(n - 1, v)).or_default().push(v);
        }
        let empty = Vec::new();
        for k in 0..=n {
            for base in 0..x.level_len(n) {
                let slots: Vec<usize> = (0..=n).filter(|&i| i != k).collect();
                let cands: Vec<&Vec<usize>> = slots
                    .iter()
                    .map(|&i| fibers.get(&x.face(n, i, base)).unwrap_or(&empty))
                    .collect();
                let mut faces = vec![None; n + 1];
                fill_faces(y, n, &slots, &cands, 0, &mut faces, &mut |faces| {
                    visit(HornProblem {
                        n,
                        k,
                        base,
                        faces: faces.to_vec(),
                    })
                })?;
            }
        }
    }
    Ok(())
}

fn fill_faces<F>(
    y: &TruncatedSimplicialSet,
    n: usize,
    slots: &[usize],
    cands: &[&Vec<usize>],
    pos: usize,
    faces: &mut Vec<Option<usize>>,
    emit: &mut F,
) -> Result<()>
where
    F: FnMut(&[Option<usize>]) -> Result<()>,
{
    if pos == slots.len() {
        return emit(faces);
    }
    let i = slots[pos];
    for &yi in cands[pos] {
        // d_j y_i = d_{i-1} y_j for earlier slots j < i
        let ok = n < 2
            || slots[..pos]
                .iter()
                .all(|&j| y.face(n - 1, j, yi) == y.face(n - 1, i - 1, faces[j].unwrap()));
        if ok {
            faces[i] = Some(yi);
            fill_faces(y, n, slots, cands, pos + 1, faces, emit)?;
            faces[i] = None;
        }
    }
    Ok(())
}

/// An unsolvable horn problem, by identifiers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HornFailure {
    pub n: usize,
    pub k: usize,
    pub base: String,
    pub faces: Vec<Option<String>>,
}

/// Outcome of checking every horn problem against a map up to `checked_dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KanCertificate {
    /// Fingerprint of the map the certificate is about.
    pub subject: String,
    pub truncation: usize,
    pub checked_dim: usize,
    pub problems_checked: u64,
    pub failures: Vec<HornFailure>,
}

impl KanCertificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Passed, and every dimension up to `n` was checked.
    pub fn covers(&self, n: usize) -> bool {
        self.passed() && self.checked_dim >= n
    }

    pub fn is_about(&self, p: &SimplicialMap) -> bool {
        self.subject == p.fingerprint()
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.passed())
    }

    /// Failures at dimensions up to `n`.
    pub fn failures_up_to(&self, n: usize) -> Vec<&HornFailure> {
        self.failures.iter().filter(|f| f.n <= n).collect()
    }
}

/// Solves every horn problem against `p` in dimensions `1..=maxdim`.
pub fn check_kan_fibration(
    p: &SimplicialMap,
    maxdim: usize,
    budget: &Budget,
) -> Result<KanCertificate> {
    let shapes = HornShapes::new(p.dom().max_dim());
    certify_with(p, maxdim, |problem| {
        let lp = problem.lifting_problem(&shapes, p)?;
        Ok(solve_extension(&lp, budget)?.is_some())
    })
}

/// `check_kan_fibration` against the terminal map.
pub fn check_kan_complex(
    s: &Arc<TruncatedSimplicialSet>,
    maxdim: usize,
    budget: &Budget,
) -> Result<KanCertificate> {
    check_kan_fibration(&terminal_map(s), maxdim, budget)
}

pub fn terminal_map(s: &Arc<TruncatedSimplicialSet>) -> SimplicialMap {
    SimplicialMap::to_terminal(s.clone(), standard_simplex(0, s.max_dim()).sset().clone())
}

/// Assembles a certificate for `p` from a per-problem decision procedure.
pub fn certify_with<F>(p: &SimplicialMap, maxdim: usize, mut solve: F) -> Result<KanCertificate>
where
    F: FnMut(&HornProblem) -> Result<bool>,
{
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for_each_horn_problem(p, maxdim, |problem| {
        checked += 1;
        if !solve(&problem)? {
            failures.push(problem.describe(p));
        }
        Ok(())
    })?;
    Ok(KanCertificate {
        subject: p.fingerprint(),
        truncation: p.dom().max_dim(),
        checked_dim: maxdim,
        problems_checked: checked,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary, disjoint_union, product};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn boundary_inclusion_fails_at_the_vertex_horn() {
        let bd = boundary(1, 1);
        let cert = check_kan_fibration(bd.map(), 1, &b()).unwrap();
        assert!(!cert.passed());
        assert!(cert.failures.iter().any(|f| f.n == 1 && f.base == "01"));
    }

    #[test]
    fn discrete_sets_are_kan() {
        let pt = standard_simplex(0, 2).sset().clone();
        let two = Arc::new(disjoint_union(&pt, &pt).unwrap());
        let cert = check_kan_complex(&two, 2, &b()).unwrap();
        assert!(cert.passed());
        assert!(cert.problems_checked > 0);
    }

    #[test]
    fn product_projection_with_discrete_fiber() {
        let pt = standard_simplex(0, 2).sset().clone();
        let f = Arc::new(disjoint_union(&pt, &pt).unwrap());
        let u = standard_simplex(1, 2).sset().clone();
        let prod = product(&u, &f).unwrap();
        assert!(check_kan_fibration(&prod.left, 2, &b()).unwrap().passed());
    }

    #[test]
    fn hollow_triangle_is_not_kan() {
        let bd = boundary(2, 2);
        let cert = check_kan_complex(bd.dom(), 2, &b()).unwrap();
        assert!(!cert.passed());
        assert!(cert.failures.iter().all(|f| f.n == 2));
    }

    #[test]
    fn simplices_fail_outer_horns() {
        // Λ^0[2] with d2 = 01 and d1 = 00 would need the edge 10
        let d1 = standard_simplex(1, 2).sset().clone();
        let cert = check_kan_complex(&d1, 2, &b()).unwrap();
        assert!(!cert.passed());
        let f = HornFailure {
            n: 2,
            k: 0,
            base: "000".into(),
            faces: vec![None, Some("00".into()), Some("01".into())],
        };
        assert!(cert.failures.contains(&f));
    }

    #[test]
    fn horn_problem_counts() {
        // over the point, Λ^k[1] problems are indexed by a single vertex
        let d1 = standard_simplex(1, 1).sset().clone();
        let cert = check_kan_complex(&d1, 1, &b()).unwrap();
        assert_eq!(cert.problems_checked, 4);
        assert!(cert.passed());
    }

    #[test]
    fn truncation_is_respected() {
        let d1 = standard_simplex(1, 1).sset().clone();
        assert!(matches!(
            check_kan_complex(&d1, 2, &b()),
            Err(Error::Truncation { .. })
        ));
    }
}
