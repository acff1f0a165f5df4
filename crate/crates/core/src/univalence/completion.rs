use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::mapping::{end_space, iso_space, EndSpace, MappingSpace};
use super::minimal::{minimalize, Minimalization, PClass};
use super::transport::{univalence_certificate, UnivalenceReport, DIM};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lifting::{
    certify_with, check_kan_complex, check_kan_fibration, HornShapes, KanCertificate,
    PullbackSquare,
};
use crate::sgpd::{
    action_space, lift_action_horn, unit_inclusion, validate_action, validate_groupoid,
    verify_fiber_square, ActionSpace, GroupoidAction, SimplicialGroupoid,
};
use crate::sset::{disjoint_union, standard_simplex, SimplicialMap, ValidationReport};
use crate::verdict::Verdict;

/// `𝔾` with `ob = U` and `ar = Iso(M)`; "a then b" is `b ∘ a`.
pub fn iso_groupoid(end: &EndSpace, iso: &MappingSpace) -> Result<SimplicialGroupoid> {
    let ar = iso.sset().clone();
    let incl = iso.inclusion.map();
    let n_top = end.max_dim();
    let per_arrow = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
        (0..=n_top)
            .map(|n| {
                (0..ar.level_len(n))
                    .map(|l| f(n, incl.apply(n, l)))
                    .collect()
            })
            .collect()
    };
    let source = per_arrow(&|n, a| end.ends(n, a).0);
    let target = per_arrow(&|n, a| end.ends(n, a).1);
    let inverse = per_arrow(&|n, a| {
        iso.inclusion
            .local(n, end.inverse(n, a).expect("isomorphisms invert"))
            .expect("inverses are isomorphisms")
    });
    let ob = end.fibration.cod().clone();
    let unit = (0..=n_top)
        .map(|n| {
            (0..ob.level_len(n))
                .map(|x| {
                    iso.inclusion
                        .local(n, end.identity(n, x))
                        .expect("identities are isomorphisms")
                })
                .collect()
        })
        .collect();
    SimplicialGroupoid::from_parts(ob, ar, source, target, unit, inverse, |n, a, b| {
        end.compose(n, incl.apply(n, a), incl.apply(n, b))
            .and_then(|c| iso.inclusion.local(n, c))
    })
}

/// `α · m = α(ι_n, m)` for `α: x*M → y*M` and `m` over `x`.
pub fn evaluation_action(
    end: &EndSpace,
    iso: &MappingSpace,
    g: Arc<SimplicialGroupoid>,
) -> Result<GroupoidAction> {
    let p = &end.fibration;
    let incl = iso.inclusion.map();
    GroupoidAction::from_fn(g, p.dom().clone(), p.assignment().to_vec(), |n, a, m| {
        let amb = incl.apply(n, a);
        let (x, y) = end.ends(n, amb);
        let top = end.simplex(n).top()?;
        let w = end.pulled(n, x).find(n, top, m)?;
        let (_, image) = end.pulled(n, y).pair(n, end.table(n, amb)[n][w]);
        Some(image)
    })
}

/// Every stage of the completion of `p: E → U` to `p′: B(M_𝔾) → B𝔾`.
#[derive(Debug)]
pub struct CompletionResult {
    pub input: SimplicialMap,
    pub minimal: Minimalization,
    pub end: EndSpace,
    pub iso: MappingSpace,
    pub groupoid: Arc<SimplicialGroupoid>,
    pub groupoid_report: ValidationReport,
    pub action_report: ValidationReport,
    pub space: ActionSpace,
    /// `i: U → B𝔾`.
    pub unit: SimplicialMap,
    pub pullback: ValidationReport,
    pub unit_injective: bool,
    pub unit_bijective_on_vertices: bool,
    pub fibers: Vec<(String, ValidationReport)>,
    pub kan_via_action: KanCertificate,
    pub kan_direct: KanCertificate,
    pub base_kan: KanCertificate,
    pub univalence: UnivalenceReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionSummary {
    pub max_dim: usize,
    pub minimal_sizes: Vec<usize>,
    pub minimal: bool,
    pub classes: Vec<PClass>,
    pub arrow_sizes: Vec<usize>,
    pub classifying_sizes: Vec<usize>,
    pub total_sizes: Vec<usize>,
    pub groupoid_valid: bool,
    pub action_valid: bool,
    pub pullback: Vec<String>,
    pub unit_injective: bool,
    pub unit_bijective_on_vertices: bool,
    pub fibers_valid: bool,
    pub kan_via_action: Verdict,
    pub kan_direct: Verdict,
    pub univalence: UnivalenceReport,
    pub verdict: Verdict,
}

impl CompletionResult {
    /// `p′`.
    pub fn projection(&self) -> &SimplicialMap {
        &self.space.projection
    }

    /// `j: M → B(M_𝔾)`.
    pub fn inclusion(&self) -> &SimplicialMap {
        &self.space.inclusion
    }

    pub fn structural(&self) -> bool {
        self.groupoid_report.is_valid()
            && self.action_report.is_valid()
            && self.pullback.is_valid()
            && self.unit_injective
            && self.unit_bijective_on_vertices
            && self.fibers.iter().all(|(_, r)| r.is_valid())
            && self.minimal.minimality.minimal()
            && self.minimal.kan.passed()
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.structural())
            .and(self.kan_via_action.verdict())
            .and(self.kan_direct.verdict())
            .and(self.univalence.verdict)
    }

    pub fn summary(&self) -> CompletionSummary {
        CompletionSummary {
            max_dim: self.input.dom().max_dim(),
            minimal_sizes: self.minimal.inclusion.dom().level_sizes(),
            minimal: self.minimal.minimality.minimal(),
            classes: self.minimal.classes.clone(),
            arrow_sizes: self.groupoid.ar.level_sizes(),
            classifying_sizes: self.space.base.sset.level_sizes(),
            total_sizes: self.space.sset.level_sizes(),
            groupoid_valid: self.groupoid_report.is_valid(),
            action_valid: self.action_report.is_valid(),
            pullback: self.pullback.violations.clone(),
            unit_injective: self.unit_injective,
            unit_bijective_on_vertices: self.unit_bijective_on_vertices,
            fibers_valid: self.fibers.iter().all(|(_, r)| r.is_valid()),
            kan_via_action: self.kan_via_action.verdict(),
            kan_direct: self.kan_direct.verdict(),
            univalence: self.univalence.clone(),
            verdict: self.verdict(),
        }
    }
}

/// Minimalizes `p`, builds `𝔾` from `Iso(M)`, and checks the square
/// `M → B(M_𝔾)` over `i: U → B𝔾`, the fibration property of `p′` both
/// through the anchor and directly, and univalence of `p′`.
///
/// The input needs a passing certificate up to its truncation, which must
/// be at least 2.
pub fn univalent_completion(
    p: &SimplicialMap,
    p_cert: &KanCertificate,
    bound: usize,
    budget: &Budget,
) -> Result<CompletionResult> {
    let n_top = p.dom().max_dim();
    if n_top < DIM {
        return Err(Error::Truncation {
            requested: DIM,
            max_dim: n_top,
        });
    }
    if !p_cert.is_about(p) || !p_cert.covers(n_top) {
        return Err(Error::Invalid(format!(
            "completion needs a passing fibration certificate up to dimension {n_top}"
        )));
    }
    let minimal = minimalize(p, budget)?;
    let end = end_space(&minimal.fibration, budget)?;
    let iso = iso_space(&end)?;
    let groupoid = Arc::new(iso_groupoid(&end, &iso)?);
    let groupoid_report = validate_groupoid(&groupoid);
    let action = evaluation_action(&end, &iso, groupoid.clone())?;
    let action_report = validate_action(&action);
    let space = action_space(&action, budget)?;
    let unit = unit_inclusion(&space.base)?;
    let square = PullbackSquare {
        top: space.inclusion.clone(),
        left: minimal.fibration.clone(),
        right: space.projection.clone(),
        bottom: unit.clone(),
    };
    let pullback = square.verify();
    let unit_injective = unit.is_injective();
    let unit_bijective_on_vertices = unit.is_injective_at(0) && unit.is_surjective_at(0);
    let fibers = (0..groupoid.ob.level_len(0))
        .map(|c| {
            Ok((
                groupoid.ob.id(0, c).to_string(),
                verify_fiber_square(&space, c)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let anchor_cert = if minimal.kan.is_about(&action.anchor) {
        minimal.kan.clone()
    } else {
        check_kan_fibration(&action.anchor, n_top, budget)?
    };
    let shapes = HornShapes::new(n_top);
    let kan_via_action =
        certify_with(&space.projection, n_top, |problem| {
            match lift_action_horn(&space, problem, &anchor_cert, &shapes, budget) {
                Ok(_) => Ok(true),
                Err(Error::Failed(_)) => Ok(false),
                Err(e) => Err(e),
            }
        })?;
    let kan_direct = check_kan_fibration(&space.projection, n_top, budget)?;
    let base_kan = check_kan_complex(&space.base.sset, DIM, budget)?;
    let univalence = if kan_direct.passed() && base_kan.passed() {
        univalence_certificate(&space.projection, &kan_direct, &base_kan, bound, budget)?
    } else {
        return Err(Error::Failed(
            "the completed map is not certified, so univalence cannot be checked".into(),
        ));
    };
    Ok(CompletionResult {
        input: p.clone(),
        minimal,
        end,
        iso,
        groupoid,
        groupoid_report,
        action_report,
        space,
        unit,
        pullback,
        unit_injective,
        unit_bijective_on_vertices,
        fibers,
        kan_via_action,
        kan_direct,
        base_kan,
        univalence,
    })
}

/// Two points over a point.
pub fn two_point_fiber(max_dim: usize) -> Result<SimplicialMap> {
    let pt = standard_simplex(0, max_dim).sset().clone();
    let e = Arc::new(disjoint_union(&pt, &pt)?);
    Ok(SimplicialMap::to_terminal(e, pt))
}

/// The identity of two points: singleton fibres over a disconnected base.
pub fn split_nonunivalent(max_dim: usize) -> Result<SimplicialMap> {
    let pt = standard_simplex(0, max_dim).sset().clone();
    let u = Arc::new(disjoint_union(&pt, &pt)?);
    let e = Arc::new(disjoint_union(&pt, &pt)?);
    SimplicialMap::new(e, u, vec![vec![0, 1]; max_dim + 1])
}

/// The identity of a point.
pub fn point_fibration(max_dim: usize) -> SimplicialMap {
    SimplicialMap::identity(standard_simplex(0, max_dim).sset().clone())
}

/// `Δ[1] → Δ[0]`, a non-minimal fibration.
pub fn interval_over_point(max_dim: usize) -> SimplicialMap {
    let pt = standard_simplex(0, max_dim).sset().clone();
    SimplicialMap::to_terminal(standard_simplex(1, max_dim).sset().clone(), pt)
}
