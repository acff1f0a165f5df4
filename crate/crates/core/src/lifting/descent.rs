use std::collections::HashMap;

use super::kan::{certify_with, HornProblem, HornShapes, KanCertificate};
use super::problem::{same, solve_extension, LiftingProblem};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::sset::{SimplicialMap, SubcomplexInclusion, ValidationReport};

fn require(cert: &KanCertificate, map: &SimplicialMap, n: usize, what: &str) -> Result<()> {
    if !cert.is_about(map) {
        return Err(Error::Invalid(format!(
            "certificate for {what} is about a different map"
        )));
    }
    if !cert.covers(n) {
        return Err(Error::Invalid(format!(
            "certificate for {what} does not cover dimension {n}"
        )));
    }
    Ok(())
}

/// Solves a horn problem against `f: Y → X` through a levelwise surjective
/// fibration `p: Z → Y` with `g = f ∘ p` also a fibration: lift the k-th
/// vertex through `p`, extend it over the horn against `p`, solve against `g`,
/// and push the result down along `p`.
pub fn lift_through_quotient(
    f: &SimplicialMap,
    p: &SimplicialMap,
    p_cert: &KanCertificate,
    g_cert: &KanCertificate,
    problem: &HornProblem,
    shapes: &HornShapes,
    budget: &Budget,
) -> Result<SimplicialMap> {
    let n = problem.n;
    let g = p.then(f)?;
    require(p_cert, p, n, "the quotient map")?;
    require(g_cert, &g, n, "the composite")?;
    if !p.is_surjective() {
        return Err(Error::Invalid(
            "quotient map is not levelwise surjective".into(),
        ));
    }
    let original = problem.lifting_problem(shapes, f)?;
    let horn = shapes.horn(n, problem.k);
    let corner = horn
        .local(0, shapes.simplex(n).vertex(problem.k))
        .expect("the horn contains vertex k");
    let y_k = original.top.apply(0, corner);
    let z_k = (0..p.dom().level_len(0))
        .find(|&z| p.apply(0, z) == y_k)
        .expect("p is surjective on vertices");

    let vertex = SubcomplexInclusion::generated(horn.dom().clone(), &[(0, corner)])?;
    let z = p.dom();
    let at_vertex = SimplicialMap::new_unchecked(
        vertex.dom().clone(),
        z.clone(),
        (0..=z.max_dim())
            .map(|m| vec![z.degenerate_vertex(z_k, m); vertex.dom().level_len(m)])
            .collect(),
    )?;
    let over_horn = LiftingProblem::new(vertex, at_vertex, original.top.clone(), p.clone())?;
    let c = solve_extension(&over_horn, budget)?
        .ok_or_else(|| Error::Failed("no extension of the lifted vertex over the horn".into()))?;

    let against_g = LiftingProblem::new(horn.clone(), c, original.bottom.clone(), g)?;
    let h = solve_extension(&against_g, budget)?
        .ok_or_else(|| Error::Failed("no lift against the composite fibration".into()))?;
    let lift = h.then(p)?;
    let report = original.check_lift(&lift);
    if !report.is_valid() {
        return Err(Error::Failed(format!(
            "pushed-down lift is invalid: {}",
            report.violations.join("; ")
        )));
    }
    Ok(lift)
}

/// A commuting square
///
/// ```text
///   P --top--> Z
///   |          |
///  left      right
///   v          v
///   B' -bottom> B
/// ```
#[derive(Clone, Debug)]
pub struct PullbackSquare {
    pub top: SimplicialMap,
    pub left: SimplicialMap,
    pub right: SimplicialMap,
    pub bottom: SimplicialMap,
}

impl PullbackSquare {
    /// Checks that the square commutes and that `P → B' ×_B Z` is a levelwise
    /// bijection.
    pub fn verify(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if !same(self.top.dom(), self.left.dom())
            || !same(self.top.cod(), self.right.dom())
            || !same(self.left.cod(), self.bottom.dom())
            || !same(self.right.cod(), self.bottom.cod())
        {
            report.push("square corners do not match".into());
            return report;
        }
        let (p, bp, z) = (self.top.dom(), self.bottom.dom(), self.right.dom());
        for n in 0..=p.max_dim() {
            let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
            for w in 0..p.level_len(n) {
                let (t, l) = (self.top.apply(n, w), self.left.apply(n, w));
                if self.right.apply(n, t) != self.bottom.apply(n, l) {
                    report.push(format!("square does not commute at '{}'", p.id(n, w)));
                }
                if let Some(&other) = seen.get(&(l, t)) {
                    report.push(format!(
                        "'{}' and '{}' have the same image in the fibre product",
                        p.id(n, other),
                        p.id(n, w)
                    ));
                }
                seen.insert((l, t), w);
            }
            for b in 0..bp.level_len(n) {
                for zz in 0..z.level_len(n) {
                    if self.bottom.apply(n, b) == self.right.apply(n, zz)
                        && !seen.contains_key(&(b, zz))
                    {
                        report.push(format!(
                            "pair ('{}', '{}') has no preimage at level {n}",
                            bp.id(n, b),
                            z.id(n, zz)
                        ));
                    }
                }
            }
        }
        report
    }
}

/// Certifies `right` from a certificate for `left`: each horn problem against
/// `right` is pulled back along the lexicographically least preimage of its
/// base simplex, solved against `left`, and pushed forward along `top`.
pub fn transfer_by_descent(
    square: &PullbackSquare,
    left_cert: &KanCertificate,
    maxdim: usize,
    budget: &Budget,
) -> Result<KanCertificate> {
    let report = square.verify();
    if !report.is_valid() {
        return Err(Error::Invalid(format!(
            "not a pullback square: {}",
            report.violations.join("; ")
        )));
    }
    require(left_cert, &square.left, maxdim, "the left leg")?;
    for n in 0..=maxdim {
        if !square.bottom.is_surjective_at(n) {
            return Err(Error::Invalid(format!(
                "bottom map is not surjective at level {n}"
            )));
        }
    }
    let p = square.top.dom();
    let shapes = HornShapes::new(p.max_dim());
    let pairs: Vec<HashMap<(usize, usize), usize>> = (0..=p.max_dim())
        .map(|n| {
            (0..p.level_len(n))
                .map(|w| ((square.top.apply(n, w), square.left.apply(n, w)), w))
                .collect()
        })
        .collect();
    let preimage: Vec<HashMap<usize, usize>> = (0..=maxdim)
        .map(|n| {
            let mut first = HashMap::new();
            for b in (0..square.bottom.dom().level_len(n)).rev() {
                first.insert(square.bottom.apply(n, b), b);
            }
            first
        })
        .collect();
    let base_prime = square.bottom.dom();
    certify_with(&square.right, maxdim, |problem| {
        let n = problem.n;
        let b = preimage[n][&problem.base];
        let faces = problem
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| f.map(|z| pairs[n - 1][&(z, base_prime.face(n, i, b))]))
            .collect();
        let pulled = HornProblem {
            n,
            k: problem.k,
            base: b,
            faces,
        };
        let lp = pulled.lifting_problem(&shapes, &square.left)?;
        let Some(lift) = solve_extension(&lp, budget)? else {
            return Ok(false);
        };
        let filler = square.top.apply(n, pulled.filler_of(&shapes, &lift));
        let pushed = shapes.simplex(n).yoneda(square.right.dom(), filler)?;
        let original = problem.lifting_problem(&shapes, &square.right)?;
        Ok(original.check_lift(&pushed).is_valid())
    })
}
