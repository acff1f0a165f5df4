use std::sync::Arc;

use super::groupoid::{validate_groupoid, SimplicialGroupoid};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::sset::{
    discrete_set, fiber, pullback, Pullback, SimplicialMap, SubcomplexInclusion,
    TruncatedSimplicialSet, ValidationReport,
};

/// A left action of a simplicial groupoid on `π: X → ob`: `g: a → b` sends
/// the fibre over `a` to the fibre over `b`.
#[derive(Clone, Debug)]
pub struct GroupoidAction {
    pub groupoid: Arc<SimplicialGroupoid>,
    pub carrier: Arc<TruncatedSimplicialSet>,
    pub anchor: SimplicialMap,
    /// Pairs `(g, x)` with `s(g) = π(x)`.
    pub acting: Pullback,
    pub act: SimplicialMap,
}

impl GroupoidAction {
    pub fn from_fn<F>(
        groupoid: Arc<SimplicialGroupoid>,
        carrier: Arc<TruncatedSimplicialSet>,
        anchor: Vec<Vec<usize>>,
        act: F,
    ) -> Result<Self>
    where
        F: Fn(usize, usize, usize) -> Option<usize>,
    {
        let anchor = SimplicialMap::new_unchecked(carrier.clone(), groupoid.ob.clone(), anchor)?;
        let acting = pullback(&groupoid.source, &anchor)?;
        let assign = (0..=carrier.max_dim())
            .map(|n| {
                (0..acting.sset.level_len(n))
                    .map(|w| {
                        let (g, x) = acting.pair(n, w);
                        act(n, g, x).ok_or_else(|| {
                            Error::Invalid(format!(
                                "'{}' does not act on '{}'",
                                groupoid.ar.id(n, g),
                                carrier.id(n, x)
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let act = SimplicialMap::new_unchecked(acting.sset.clone(), carrier.clone(), assign)?;
        Ok(GroupoidAction {
            groupoid,
            carrier,
            anchor,
            acting,
            act,
        })
    }

    pub fn apply(&self, n: usize, g: usize, x: usize) -> Option<usize> {
        self.acting.find(n, g, x).map(|w| self.act.apply(n, w))
    }

    pub fn max_dim(&self) -> usize {
        self.carrier.max_dim()
    }
}

/// Every failing action law, plus the groupoid's own violations.
pub fn validate_action(a: &GroupoidAction) -> ValidationReport {
    let g = &a.groupoid;
    let mut report = ValidationReport::default();
    report.extend_prefixed("groupoid", validate_groupoid(g));
    report.extend_prefixed("anchor", a.anchor.validate());
    report.extend_prefixed("action", a.act.validate());
    let x = &a.carrier;
    for n in 0..=a.max_dim() {
        for p in 0..x.level_len(n) {
            let base = a.anchor.apply(n, p);
            if a.apply(n, g.id_at(n, base), p) != Some(p) {
                report.push(format!("unit does not fix '{}'", x.id(n, p)));
            }
        }
        for w in 0..a.acting.sset.level_len(n) {
            let (h, p) = a.acting.pair(n, w);
            let q = a.act.apply(n, w);
            if a.anchor.apply(n, q) != g.tgt(n, h) {
                report.push(format!(
                    "'{}' moves '{}' off its target",
                    g.ar.id(n, h),
                    x.id(n, p)
                ));
                continue;
            }
            for k in 0..g.ar.level_len(n) {
                if g.src(n, k) != g.tgt(n, h) {
                    continue;
                }
                let hk = g.then(n, h, k).expect("composable");
                if a.apply(n, hk, p) != a.apply(n, k, q) {
                    report.push(format!(
                        "action is not compatible with composition at ('{}', '{}', '{}')",
                        g.ar.id(n, h),
                        g.ar.id(n, k),
                        x.id(n, p)
                    ));
                }
            }
        }
    }
    report
}

/// Action of a constant groupoid on a constant carrier, from level-0 names.
pub fn constant_action<P, F>(
    groupoid: Arc<SimplicialGroupoid>,
    points: &[String],
    anchor: P,
    act: F,
) -> Result<GroupoidAction>
where
    P: Fn(&str) -> String,
    F: Fn(&str, &str) -> String,
{
    let n_top = groupoid.max_dim();
    let carrier = Arc::new(discrete_set(points, n_top)?);
    let vertex = |s: &TruncatedSimplicialSet, n: usize, x: usize| s.apply(n, x, &[0]);
    let ob = groupoid.ob.clone();
    let anchor_t = (0..=n_top)
        .map(|n| {
            (0..carrier.level_len(n))
                .map(|x| {
                    let name = anchor(carrier.id(0, vertex(&carrier, n, x)));
                    ob.index_of(0, &name)
                        .map(|o| ob.degenerate_vertex(o, n))
                        .ok_or_else(|| Error::NotFound(format!("object '{name}'")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let ar = groupoid.ar.clone();
    let c = carrier.clone();
    GroupoidAction::from_fn(groupoid, carrier, anchor_t, move |n, g, x| {
        let name = act(ar.id(0, vertex(&ar, n, g)), c.id(0, vertex(&c, n, x)));
        c.index_of(0, &name).map(|y| c.degenerate_vertex(y, n))
    })
}

/// A group acting on its own elements by `x ↦ x·g`.
pub fn translation_action(
    groupoid: Arc<SimplicialGroupoid>,
    group: &FiniteGroup,
) -> Result<GroupoidAction> {
    constant_action(
        groupoid,
        group.names(),
        |_| "*".into(),
        |g, x| {
            let (g, x) = (group.index_of(g).unwrap(), group.index_of(x).unwrap());
            group.name(group.mul(x, g)).to_string()
        },
    )
}

/// A groupoid acting trivially on its objects.
pub fn trivial_action(groupoid: Arc<SimplicialGroupoid>) -> Result<GroupoidAction> {
    let carrier = groupoid.ob.clone();
    let anchor = SimplicialMap::identity(carrier.clone()).into_assignment();
    let g = groupoid.clone();
    GroupoidAction::from_fn(groupoid, carrier, anchor, move |n, a, x| {
        (g.src(n, a) == x && g.tgt(n, a) == x).then_some(x)
    })
}

/// The action groupoid `X_𝔾`: objects `X`, arrows `(g, x): x → g·x`.
pub fn action_groupoid(a: &GroupoidAction) -> Result<SimplicialGroupoid> {
    let g = &a.groupoid;
    let ar = &a.acting;
    let n_top = a.max_dim();
    let levels = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
        (0..=n_top)
            .map(|n| (0..ar.sset.level_len(n)).map(|w| f(n, w)).collect())
            .collect()
    };
    let source = levels(&|n, w| ar.pair(n, w).1);
    let target = levels(&|n, w| a.act.apply(n, w));
    let inverse = levels(&|n, w| {
        let h = ar.pair(n, w).0;
        ar.find(n, g.inv(n, h), a.act.apply(n, w))
            .expect("inverse arrow acts")
    });
    let unit = (0..=n_top)
        .map(|n| {
            (0..a.carrier.level_len(n))
                .map(|x| {
                    ar.find(n, g.id_at(n, a.anchor.apply(n, x)), x)
                        .expect("units act")
                })
                .collect()
        })
        .collect();
    SimplicialGroupoid::from_parts(
        a.carrier.clone(),
        ar.sset.clone(),
        source,
        target,
        unit,
        inverse,
        |n, u, v| {
            let ((h, x), (k, _)) = (ar.pair(n, u), ar.pair(n, v));
            ar.find(n, g.then(n, h, k)?, x)
        },
    )
}

/// `𝔾(−, c)`: arrows into `c`, as a subcomplex of `ar`, with their sources.
#[derive(Clone, Debug)]
pub struct HomTo {
    pub arrows: SubcomplexInclusion,
    pub source: SimplicialMap,
}

pub fn hom_to(g: &SimplicialGroupoid, c: usize) -> Result<HomTo> {
    let arrows = fiber(&g.target, c)?;
    let source = arrows.map().then(&g.source)?;
    Ok(HomTo { arrows, source })
}

/// `𝔾(c, −)` with the left action by post-composition, anchored at targets.
pub fn hom_from(g: &Arc<SimplicialGroupoid>, c: usize) -> Result<GroupoidAction> {
    let arrows = fiber(&g.source, c)?;
    let carrier = arrows.dom().clone();
    let anchor = arrows.map().then(&g.target)?.into_assignment();
    let gg = g.clone();
    GroupoidAction::from_fn(g.clone(), carrier, anchor, move |n, h, u| {
        let v = gg.then(n, arrows.map().apply(n, u), h)?;
        arrows.local(n, v)
    })
}

/// A simplicial group from its levelwise products; units and inverses are
/// found by search.
#[derive(Clone, Debug)]
pub struct SimplicialGroup {
    pub sset: Arc<TruncatedSimplicialSet>,
    mul: Vec<Vec<usize>>,
    unit: Vec<usize>,
    inv: Vec<Vec<usize>>,
}

impl SimplicialGroup {
    /// Checks the group laws on every level and that the product, unit and
    /// inverse commute with faces and degeneracies.
    pub fn new<F>(sset: Arc<TruncatedSimplicialSet>, product: F) -> Result<Self>
    where
        F: Fn(usize, usize, usize) -> usize,
    {
        let mut mul = Vec::new();
        let mut unit = Vec::new();
        let mut inv = Vec::new();
        for n in 0..=sset.max_dim() {
            let len = sset.level_len(n);
            let table: Vec<usize> = (0..len * len)
                .map(|ab| product(n, ab / len, ab % len))
                .collect();
            if table.iter().any(|&c| c >= len) {
                return Err(Error::Invalid(format!("product leaves level {n}")));
            }
            let at = |a: usize, b: usize| table[a * len + b];
            for a in 0..len {
                for b in 0..len {
                    for c in 0..len {
                        if at(at(a, b), c) != at(a, at(b, c)) {
                            return Err(Error::Invalid(format!(
                                "product is not associative at level {n}"
                            )));
                        }
                    }
                }
            }
            let e = (0..len)
                .find(|&e| (0..len).all(|a| at(e, a) == a && at(a, e) == a))
                .ok_or_else(|| Error::Invalid(format!("no unit at level {n}")))?;
            let level_inv = (0..len)
                .map(|a| {
                    (0..len)
                        .find(|&b| at(a, b) == e && at(b, a) == e)
                        .ok_or_else(|| {
                            Error::Invalid(format!("'{}' has no inverse", sset.id(n, a)))
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            mul.push(table);
            unit.push(e);
            inv.push(level_inv);
        }
        let group = SimplicialGroup {
            sset,
            mul,
            unit,
            inv,
        };
        let s = &group.sset;
        for n in 1..=s.max_dim() {
            let len = s.level_len(n);
            for i in 0..=n {
                for a in 0..len {
                    for b in 0..len {
                        if s.face(n, i, group.mul(n, a, b))
                            != group.mul(n - 1, s.face(n, i, a), s.face(n, i, b))
                        {
                            return Err(Error::Invalid(format!(
                                "d{i} is not a homomorphism at level {n}"
                            )));
                        }
                    }
                }
            }
            for i in 0..n {
                let below = s.level_len(n - 1);
                for a in 0..below {
                    for b in 0..below {
                        if s.degen(n - 1, i, group.mul(n - 1, a, b))
                            != group.mul(n, s.degen(n - 1, i, a), s.degen(n - 1, i, b))
                        {
                            return Err(Error::Invalid(format!(
                                "s{i} is not a homomorphism at level {}",
                                n - 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(group)
    }

    pub fn mul(&self, n: usize, a: usize, b: usize) -> usize {
        self.mul[n][a * self.sset.level_len(n) + b]
    }

    pub fn unit(&self, n: usize) -> usize {
        self.unit[n]
    }

    pub fn inv(&self, n: usize, a: usize) -> usize {
        self.inv[n][a]
    }

    pub fn order_at(&self, n: usize) -> usize {
        self.sset.level_len(n)
    }
}

/// A left action `H × E → E` of a simplicial group, as level tables.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub group: SimplicialGroup,
    pub space: Arc<TruncatedSimplicialSet>,
    table: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new<F>(
        group: SimplicialGroup,
        space: Arc<TruncatedSimplicialSet>,
        act: F,
    ) -> Result<Self>
    where
        F: Fn(usize, usize, usize) -> usize,
    {
        if group.sset.max_dim() != space.max_dim() {
            return Err(Error::Invalid(
                "group and space have different truncations".into(),
            ));
        }
        let table = (0..=space.max_dim())
            .map(|n| {
                let len = space.level_len(n);
                (0..group.order_at(n) * len)
                    .map(|he| act(n, he / len, he % len))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        for (n, level) in table.iter().enumerate() {
            if level.iter().any(|&y| y >= space.level_len(n)) {
                return Err(Error::Invalid(format!(
                    "action leaves the space at level {n}"
                )));
            }
        }
        Ok(GroupAction {
            group,
            space,
            table,
        })
    }

    pub fn act(&self, n: usize, h: usize, e: usize) -> usize {
        self.table[n][h * self.space.level_len(n) + e]
    }

    /// Unit and product laws, and compatibility with the structure maps.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let (h, s) = (&self.group, &self.space);
        for n in 0..=s.max_dim() {
            for e in 0..s.level_len(n) {
                if self.act(n, h.unit(n), e) != e {
                    report.push(format!("unit does not fix '{}'", s.id(n, e)));
                }
                for a in 0..h.order_at(n) {
                    for b in 0..h.order_at(n) {
                        if self.act(n, h.mul(n, a, b), e) != self.act(n, a, self.act(n, b, e)) {
                            report.push(format!(
                                "product law fails at ('{}', '{}', '{}')",
                                h.sset.id(n, a),
                                h.sset.id(n, b),
                                s.id(n, e)
                            ));
                        }
                    }
                    let ae = self.act(n, a, e);
                    for i in 0..=n {
                        if n > 0
                            && s.face(n, i, ae)
                                != self.act(n - 1, h.sset.face(n, i, a), s.face(n, i, e))
                        {
                            report.push(format!(
                                "action does not commute with d{i} at '{}'",
                                s.id(n, e)
                            ));
                        }
                        if n < s.max_dim()
                            && s.degen(n, i, ae)
                                != self.act(n + 1, h.sset.degen(n, i, a), s.degen(n, i, e))
                        {
                            report.push(format!(
                                "action does not commute with s{i} at '{}'",
                                s.id(n, e)
                            ));
                        }
                    }
                }
            }
        }
        report
    }

    /// Whether every stabiliser at level `n` is trivial.
    pub fn is_free_at(&self, n: usize) -> bool {
        (0..self.space.level_len(n)).all(|e| {
            (0..self.group.order_at(n)).all(|a| a == self.group.unit(n) || self.act(n, a, e) != e)
        })
    }
}

/// `𝔾(c, c)` inside `ar`, with the product making post-composition a left
/// action on `𝔾(−, c)`: `a·b` is "b then a".
#[derive(Clone, Debug)]
pub struct Automorphisms {
    pub arrows: SubcomplexInclusion,
    pub group: SimplicialGroup,
}

pub fn automorphism_group(g: &SimplicialGroupoid, c: usize) -> Result<Automorphisms> {
    let over: Vec<usize> = (0..=g.max_dim())
        .map(|n| g.ob.degenerate_vertex(c, n))
        .collect();
    let arrows = SubcomplexInclusion::from_predicate(g.ar.clone(), |n, a| {
        g.src(n, a) == over[n] && g.tgt(n, a) == over[n]
    })?;
    let incl = arrows.map();
    let group = SimplicialGroup::new(arrows.dom().clone(), |n, a, b| {
        let ab = g
            .then(n, incl.apply(n, b), incl.apply(n, a))
            .expect("endomorphisms compose");
        arrows.local(n, ab).expect("closed under composition")
    })?;
    Ok(Automorphisms { arrows, group })
}

/// `𝔾(c, c)` acting on `𝔾(−, c)` by `h·u = u then h`.
pub fn hom_action(g: &SimplicialGroupoid, c: usize) -> Result<(HomTo, Automorphisms, GroupAction)> {
    let to = hom_to(g, c)?;
    let auts = automorphism_group(g, c)?;
    let (e, h) = (&to.arrows, &auts.arrows);
    let action = GroupAction::new(auts.group.clone(), e.dom().clone(), |n, a, u| {
        let v = g
            .then(n, e.map().apply(n, u), h.map().apply(n, a))
            .expect("arrows into c compose with automorphisms of c");
        e.local(n, v).expect("lands in arrows into c")
    })?;
    Ok((to, auts, action))
}
