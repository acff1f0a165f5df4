use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lifting::{terminal_map, KanCertificate};
use crate::sset::{
    exponential, standard_simplex, Exponential, SubcomplexInclusion, TruncatedSimplicialSet,
};

/// `Ω(S, v)`: the strict fibre of `(ev_0, ev_1): S^{Δ[1]} → S × S` over `(v, v)`.
#[derive(Clone, Debug)]
pub struct LoopSpace {
    pub paths: Exponential,
    pub loops: SubcomplexInclusion,
}

impl LoopSpace {
    pub fn sset(&self) -> &Arc<TruncatedSimplicialSet> {
        self.loops.dom()
    }
}

pub fn loop_space(
    s: &Arc<TruncatedSimplicialSet>,
    cert: &KanCertificate,
    v: usize,
    n: usize,
    budget: &Budget,
) -> Result<LoopSpace> {
    if !cert.is_about(&terminal_map(s)) || !cert.passed() {
        return Err(Error::Invalid(
            "loop space needs a passing Kan certificate for the space".into(),
        ));
    }
    if v >= s.level_len(0) {
        return Err(Error::NotFound(format!("base vertex {v}")));
    }
    let interval = standard_simplex(1, s.max_dim());
    let paths = exponential(interval.sset(), s, n, budget)?;
    let ev0 = paths.evaluation(interval.vertex(0))?;
    let ev1 = paths.evaluation(interval.vertex(1))?;
    let loops = SubcomplexInclusion::from_predicate(paths.sset.clone(), |m, f| {
        let c = s.degenerate_vertex(v, m);
        ev0.apply(m, f) == c && ev1.apply(m, f) == c
    })?;
    Ok(LoopSpace { paths, loops })
}
