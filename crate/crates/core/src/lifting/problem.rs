use std::sync::Arc;

use super::solver::{search, Assignment, Mode, RawProblem};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::sset::{SimplicialMap, SubcomplexInclusion, TruncatedSimplicialSet, ValidationReport};

pub(crate) fn same(a: &Arc<TruncatedSimplicialSet>, b: &Arc<TruncatedSimplicialSet>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A commuting square
///
/// ```text
///   A --top--> Y
///   |          |
///  incl      right
///   v          v
///   B -bottom> X
/// ```
///
/// asking for a diagonal `B → Y`.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub inclusion: SubcomplexInclusion,
    pub top: SimplicialMap,
    pub bottom: SimplicialMap,
    pub right: SimplicialMap,
}

impl LiftingProblem {
    /// Checks that the maps fit together and that the square commutes.
    pub fn new(
        inclusion: SubcomplexInclusion,
        top: SimplicialMap,
        bottom: SimplicialMap,
        right: SimplicialMap,
    ) -> Result<Self> {
        if !same(top.dom(), inclusion.dom()) {
            return Err(Error::Invalid(
                "top map is not defined on the subcomplex".into(),
            ));
        }
        if !same(bottom.dom(), inclusion.cod()) {
            return Err(Error::Invalid(
                "bottom map is not defined on the ambient complex".into(),
            ));
        }
        if !same(right.dom(), top.cod()) || !same(right.cod(), bottom.cod()) {
            return Err(Error::Invalid(
                "right map does not connect the corners".into(),
            ));
        }
        let a = inclusion.dom();
        for n in 0..=a.max_dim() {
            for x in 0..a.level_len(n) {
                let via_top = right.apply(n, top.apply(n, x));
                let via_bottom = bottom.apply(n, inclusion.map().apply(n, x));
                if via_top != via_bottom {
                    return Err(Error::Invalid(format!(
                        "square does not commute at '{}'",
                        a.id(n, x)
                    )));
                }
            }
        }
        Ok(LiftingProblem {
            inclusion,
            top,
            bottom,
            right,
        })
    }

    pub fn ambient(&self) -> &Arc<TruncatedSimplicialSet> {
        self.inclusion.cod()
    }

    pub fn total(&self) -> &Arc<TruncatedSimplicialSet> {
        self.top.cod()
    }

    fn fixed(&self) -> Vec<Vec<Option<usize>>> {
        let b = self.ambient();
        let mut fixed: Vec<Vec<Option<usize>>> = (0..=b.max_dim())
            .map(|n| vec![None; b.level_len(n)])
            .collect();
        let incl = self.inclusion.map();
        for n in 0..=b.max_dim() {
            for (x, &bx) in incl.level(n).iter().enumerate() {
                fixed[n][bx] = Some(self.top.apply(n, x));
            }
        }
        fixed
    }

    fn run(&self, mode: Mode, budget: &Budget) -> Result<Vec<Assignment>> {
        let raw = RawProblem {
            b: self.ambient(),
            y: self.total(),
            fixed: self.fixed(),
            bottom: self.bottom.assignment(),
            right: self.right.assignment(),
        };
        search(&raw, mode, budget)
    }

    fn wrap(&self, assign: Assignment) -> Result<SimplicialMap> {
        SimplicialMap::new_unchecked(self.ambient().clone(), self.total().clone(), assign)
    }

    /// Every diagonal filler, in search order.
    pub fn enumerate(&self, budget: &Budget) -> Result<Vec<SimplicialMap>> {
        self.run(Mode::All, budget)?
            .into_iter()
            .map(|a| self.wrap(a))
            .collect()
    }

    /// Checks a candidate diagonal independently of the solver: it must be a
    /// simplicial map, agree with `top` on `A`, and lie over `bottom`.
    pub fn check_lift(&self, lift: &SimplicialMap) -> ValidationReport {
        let mut report = ValidationReport::default();
        if !same(lift.dom(), self.ambient()) || !same(lift.cod(), self.total()) {
            report.push("lift has the wrong domain or codomain".into());
            return report;
        }
        report.extend_prefixed("lift", lift.validate());
        let b = self.ambient();
        for n in 0..=b.max_dim() {
            for x in 0..b.level_len(n) {
                if self.right.apply(n, lift.apply(n, x)) != self.bottom.apply(n, x) {
                    report.push(format!("lift is not over the base at '{}'", b.id(n, x)));
                }
            }
            for (a, &bx) in self.inclusion.map().level(n).iter().enumerate() {
                if lift.apply(n, bx) != self.top.apply(n, a) {
                    report.push(format!(
                        "lift disagrees with the top map at '{}'",
                        b.id(n, bx)
                    ));
                }
            }
        }
        report
    }
}

/// First diagonal filler in search order, re-validated before it is returned.
pub fn solve_extension(problem: &LiftingProblem, budget: &Budget) -> Result<Option<SimplicialMap>> {
    let Some(assign) = problem.run(Mode::First, budget)?.into_iter().next() else {
        return Ok(None);
    };
    let lift = problem.wrap(assign)?;
    let report = problem.check_lift(&lift);
    if !report.is_valid() {
        return Err(Error::Failed(format!(
            "solver produced an invalid lift: {}",
            report.violations.join("; ")
        )));
    }
    Ok(Some(lift))
}

/// All simplicial maps `dom → cod`, as assignment tables in search order.
pub fn enumerate_maps(
    dom: &TruncatedSimplicialSet,
    cod: &TruncatedSimplicialSet,
    budget: &Budget,
) -> Result<Vec<Vec<Vec<usize>>>> {
    if dom.max_dim() != cod.max_dim() {
        return Err(Error::Invalid("maps between different truncations".into()));
    }
    let bottom: Vec<Vec<usize>> = (0..=dom.max_dim())
        .map(|n| vec![0; dom.level_len(n)])
        .collect();
    let right: Vec<Vec<usize>> = (0..=cod.max_dim())
        .map(|n| vec![0; cod.level_len(n)])
        .collect();
    let raw = RawProblem {
        b: dom,
        y: cod,
        fixed: (0..=dom.max_dim())
            .map(|n| vec![None; dom.level_len(n)])
            .collect(),
        bottom: &bottom,
        right: &right,
    };
    search(&raw, Mode::All, budget)
}

/// All maps `dom → Y` lying over the given map `dom → X`.
pub fn enumerate_maps_over(
    over: &SimplicialMap,
    right: &SimplicialMap,
    budget: &Budget,
) -> Result<Vec<Vec<Vec<usize>>>> {
    if !same(over.cod(), right.cod()) {
        return Err(Error::Invalid("maps over different bases".into()));
    }
    let dom = over.dom();
    let raw = RawProblem {
        b: dom,
        y: right.dom(),
        fixed: (0..=dom.max_dim())
            .map(|n| vec![None; dom.level_len(n)])
            .collect(),
        bottom: over.assignment(),
        right: right.assignment(),
    };
    search(&raw, Mode::All, budget)
}
