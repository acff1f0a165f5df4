use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::action::{hom_action, Automorphisms, GroupAction, HomTo};
use super::groupoid::SimplicialGroupoid;
use super::nerve::check_object;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lifting::{
    certify_with, check_kan_fibration, lift_through_quotient, transfer_by_descent, HornShapes,
    KanCertificate, PullbackSquare,
};
use crate::sset::{
    build_keyed, product, pullback, Product, Pullback, SimplicialMap, TruncatedSimplicialSet,
};

/// `q: E → E/H` for a free action, with `θ(h, e) = (h·e, e)` and its
/// levelwise bijectivity.
#[derive(Clone, Debug)]
pub struct FreeQuotient {
    pub quotient: Arc<TruncatedSimplicialSet>,
    pub q: SimplicialMap,
    pub group_times_space: Product,
    pub orbit_pairs: Pullback,
    pub theta: SimplicialMap,
    pub theta_bijective: Vec<bool>,
    /// Fibration certificate for `q`, through two descent squares.
    pub certificate: Option<KanCertificate>,
}

/// Orbits are named after their least member, `[e]`.
pub fn quotient_by_free_action(
    action: &GroupAction,
    certify_up_to: Option<usize>,
    budget: &Budget,
) -> Result<FreeQuotient> {
    let report = action.validate();
    if !report.is_valid() {
        return Err(Error::Invalid(format!(
            "not an action: {}",
            report.violations.join("; ")
        )));
    }
    let (h, e) = (&action.group, &action.space);
    let n_top = e.max_dim();
    let orbit_rep: Vec<Vec<usize>> = (0..=n_top)
        .map(|n| {
            (0..e.level_len(n))
                .map(|x| {
                    (0..h.order_at(n))
                        .map(|a| action.act(n, a, x))
                        .min()
                        .unwrap()
                })
                .collect()
        })
        .collect();
    for n in 0..=n_top {
        for x in 0..e.level_len(n) {
            let r = orbit_rep[n][x];
            for i in 0..=n {
                if n > 0 && orbit_rep[n - 1][e.face(n, i, x)] != orbit_rep[n - 1][e.face(n, i, r)] {
                    return Err(Error::Failed(format!(
                        "d{i} is not well defined on orbits at level {n}"
                    )));
                }
                if n < n_top
                    && orbit_rep[n + 1][e.degen(n, i, x)] != orbit_rep[n + 1][e.degen(n, i, r)]
                {
                    return Err(Error::Failed(format!(
                        "s{i} is not well defined on orbits at level {n}"
                    )));
                }
            }
        }
    }
    let levels: Vec<Vec<usize>> = orbit_rep
        .iter()
        .map(|l| {
            let mut reps = l.clone();
            reps.sort_unstable();
            reps.dedup();
            reps
        })
        .collect();
    let keyed = build_keyed(
        n_top,
        levels,
        |n, &r| format!("[{}]", e.id(n, r)),
        |n, i, &r| orbit_rep[n - 1][e.face(n, i, r)],
        |n, i, &r| orbit_rep[n + 1][e.degen(n, i, r)],
    )?;
    let quotient = Arc::new(keyed.sset);
    let q_assign = (0..=n_top)
        .map(|n| {
            (0..e.level_len(n))
                .map(|x| keyed.index[n][&orbit_rep[n][x]])
                .collect()
        })
        .collect();
    let q = SimplicialMap::new(e.clone(), quotient.clone(), q_assign)?;

    let hxe = product(&h.sset, e)?;
    let pairs = pullback(&q, &q)?;
    let theta_assign = (0..=n_top)
        .map(|n| {
            (0..hxe.sset.level_len(n))
                .map(|w| {
                    let (a, x) = hxe.pair(n, w);
                    pairs.find(n, action.act(n, a, x), x).expect("same orbit")
                })
                .collect()
        })
        .collect();
    let theta = SimplicialMap::new(hxe.sset.clone(), pairs.sset.clone(), theta_assign)?;
    for n in 0..=n_top {
        if !theta.is_injective_at(n) {
            return Err(Error::Failed(format!(
                "action is not free: θ is not injective at level {n}"
            )));
        }
        if !theta.is_surjective_at(n) {
            return Err(Error::Failed(format!("θ is not surjective at level {n}")));
        }
    }
    let theta_bijective = vec![true; n_top + 1];
    let certificate = match certify_up_to {
        None => None,
        Some(maxdim) => {
            let pr2 = hxe.right.clone();
            let pr2_cert = check_kan_fibration(&pr2, maxdim, budget)?;
            let first = PullbackSquare {
                top: theta.clone(),
                left: pr2,
                right: pairs.proj2.clone(),
                bottom: SimplicialMap::identity(e.clone()),
            };
            let proj2_cert = transfer_by_descent(&first, &pr2_cert, maxdim, budget)?;
            let second = PullbackSquare {
                top: pairs.proj1.clone(),
                left: pairs.proj2.clone(),
                right: q.clone(),
                bottom: q.clone(),
            };
            Some(transfer_by_descent(&second, &proj2_cert, maxdim, budget)?)
        }
    };
    Ok(FreeQuotient {
        quotient,
        q,
        group_times_space: hxe,
        orbit_pairs: pairs,
        theta,
        theta_bijective,
        certificate,
    })
}

/// Levelwise surjectivity of `(s, t)` up to the truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitivityReport {
    pub levels: Vec<bool>,
    /// Object pairs with no arrow, as `level: (a, b)`.
    pub missing: Vec<String>,
}

impl TransitivityReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(|&b| b)
    }
}

pub fn check_transitive(g: &SimplicialGroupoid, up_to: usize) -> TransitivityReport {
    let mut levels = Vec::new();
    let mut missing = Vec::new();
    for n in 0..=up_to.min(g.max_dim()) {
        let len = g.ob.level_len(n);
        let mut hit = vec![false; len * len];
        for a in 0..g.ar.level_len(n) {
            hit[g.src(n, a) * len + g.tgt(n, a)] = true;
        }
        for (ab, _) in hit.iter().enumerate().filter(|(_, &h)| !h) {
            missing.push(format!(
                "{n}: ({}, {})",
                g.ob.id(n, ab / len),
                g.ob.id(n, ab % len)
            ));
        }
        levels.push(hit.iter().all(|&h| h));
    }
    TransitivityReport { levels, missing }
}

/// `(E × E)/H ≅ ar` for `E = 𝔾(−, c)`, `H = 𝔾(c, c)` acting diagonally:
/// the class of `(u: a → c, v: b → c)` goes to `u then v⁻¹: a → b`.
#[derive(Clone, Debug)]
pub struct ArrowsQuotient {
    pub hom: HomTo,
    pub automorphisms: Automorphisms,
    pub pairs: Product,
    pub action: GroupAction,
    pub quotient: FreeQuotient,
    /// `(E × E)/H → ar`, levelwise bijective.
    pub iso: SimplicialMap,
}

pub fn transitive_arrows_quotient(
    g: &SimplicialGroupoid,
    c: usize,
    certify_up_to: Option<usize>,
    budget: &Budget,
) -> Result<ArrowsQuotient> {
    check_object(g, c)?;
    let report = check_transitive(g, g.max_dim());
    if !report.passed() {
        return Err(Error::Failed(format!(
            "(s, t) is not surjective: {}",
            report.missing.join("; ")
        )));
    }
    let (hom, automorphisms, single) = hom_action(g, c)?;
    let e = hom.arrows.dom().clone();
    let pairs = product(&e, &e)?;
    let action = GroupAction::new(
        automorphisms.group.clone(),
        pairs.sset.clone(),
        |n, a, w| {
            let (u, v) = pairs.pair(n, w);
            pairs
                .find(n, single.act(n, a, u), single.act(n, a, v))
                .expect("pairs")
        },
    )?;
    let quotient = quotient_by_free_action(&action, certify_up_to, budget)?;
    let into = hom.arrows.map();
    let y = &quotient.quotient;
    let mut assign = Vec::new();
    for n in 0..=g.max_dim() {
        let mut level = vec![usize::MAX; y.level_len(n)];
        for w in 0..pairs.sset.level_len(n) {
            let (u, v) = pairs.pair(n, w);
            let (u, v) = (into.apply(n, u), into.apply(n, v));
            let arrow = g.then(n, u, g.inv(n, v)).expect("u and v share a target");
            let class = quotient.q.apply(n, w);
            if level[class] != usize::MAX && level[class] != arrow {
                return Err(Error::Failed(format!(
                    "division is not constant on the class '{}'",
                    y.id(n, class)
                )));
            }
            level[class] = arrow;
        }
        assign.push(level);
    }
    let iso = SimplicialMap::new(y.clone(), g.ar.clone(), assign)?;
    for n in 0..=g.max_dim() {
        if !iso.is_injective_at(n) || !iso.is_surjective_at(n) {
            return Err(Error::Failed(format!(
                "(E×E)/H → ar is not bijective at level {n}"
            )));
        }
        for w in 0..pairs.sset.level_len(n) {
            let (u, v) = pairs.pair(n, w);
            let arrow = iso.apply(n, quotient.q.apply(n, w));
            if g.src(n, arrow) != hom.source.apply(n, u)
                || g.tgt(n, arrow) != hom.source.apply(n, v)
            {
                return Err(Error::Failed(format!(
                    "division is not compatible with (s, t) at '{}'",
                    pairs.sset.id(n, w)
                )));
            }
        }
    }
    Ok(ArrowsQuotient {
        hom,
        automorphisms,
        pairs,
        action,
        quotient,
        iso,
    })
}

/// Two certificates for `(s, t): ar → ob × ob`: one assembled by lifting
/// every horn through `E × E → (E × E)/H ≅ ar` against `s × s`, and one by
/// direct search.
#[derive(Clone, Debug)]
pub struct ArrowsCertificates {
    pub pair_map: SimplicialMap,
    pub via_quotient: KanCertificate,
    pub direct: KanCertificate,
    /// Certificate for `s × s: E × E → ob × ob`, by direct search.
    pub sources: KanCertificate,
}

pub fn certify_pair_map(
    g: &SimplicialGroupoid,
    c: usize,
    maxdim: usize,
    budget: &Budget,
) -> Result<ArrowsCertificates> {
    let aq = transitive_arrows_quotient(g, c, Some(maxdim), budget)?;
    let (obob, st) = g.pair_map()?;
    let p = &aq.quotient.q;
    let p_cert = aq.quotient.certificate.clone().expect("requested");
    let s_assign = (0..=g.max_dim())
        .map(|n| {
            (0..aq.pairs.sset.level_len(n))
                .map(|w| {
                    let (u, v) = aq.pairs.pair(n, w);
                    obob.find(n, aq.hom.source.apply(n, u), aq.hom.source.apply(n, v))
                        .unwrap()
                })
                .collect()
        })
        .collect();
    let ss = SimplicialMap::new(aq.pairs.sset.clone(), obob.sset.clone(), s_assign)?;
    let f = aq.iso.then(&st)?;
    if p.then(&f)? != ss {
        return Err(Error::Failed("the quotient does not lie over s × s".into()));
    }
    let sources = check_kan_fibration(&ss, maxdim, budget)?;
    let back: Vec<HashMap<usize, usize>> = (0..=g.max_dim())
        .map(|n| {
            aq.iso
                .level(n)
                .iter()
                .enumerate()
                .map(|(y, &a)| (a, y))
                .collect()
        })
        .collect();
    let shapes = HornShapes::new(g.max_dim());
    let via_quotient = certify_with(&st, maxdim, |problem| {
        let n = problem.n;
        let pulled = crate::lifting::HornProblem {
            faces: problem
                .faces
                .iter()
                .map(|f| f.map(|a| back[n - 1][&a]))
                .collect(),
            ..problem.clone()
        };
        match lift_through_quotient(&f, p, &p_cert, &sources, &pulled, &shapes, budget) {
            Ok(lift) => {
                let lift = lift.then(&aq.iso)?;
                Ok(problem
                    .lifting_problem(&shapes, &st)?
                    .check_lift(&lift)
                    .is_valid())
            }
            Err(Error::Failed(_)) => Ok(false),
            Err(e) => Err(e),
        }
    })?;
    let direct = check_kan_fibration(&st, maxdim, budget)?;
    Ok(ArrowsCertificates {
        pair_map: st,
        via_quotient,
        direct,
        sources,
    })
}
