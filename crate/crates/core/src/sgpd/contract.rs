use std::collections::HashMap;
use std::sync::Arc;

use super::action::automorphism_group;
use super::groupoid::SimplicialGroupoid;
use super::nerve::{check_object, classifying_space, ClassifyingSpace};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::homotopy::{
    component, fundamental_group_presentation, pi0, reduce_table_presentation, Comparison,
    ComparisonReport, GroupOrder, GroupPresentation,
};
use crate::lifting::KanCertificate;
use crate::sset::{
    product, standard_simplex, Product, SimplicialMap, StandardSimplex, ValidationReport,
};

/// A simplicial homotopy `Δ[1] × B𝔾 → B𝔾` from the constant map at an
/// initial object (vertex 0) to the identity (vertex 1).
#[derive(Clone, Debug)]
pub struct Contraction {
    pub space: ClassifyingSpace,
    pub interval: StandardSimplex,
    pub cylinder: Product,
    pub homotopy: SimplicialMap,
    pub report: ValidationReport,
    pub components: usize,
}

/// Replaces the first `j` vertices of each string by `o`, where `j` counts
/// the zeros of the interval coordinate, joining with the unique arrow out of
/// `o`.
pub fn contract_initial(
    g: &Arc<SimplicialGroupoid>,
    o: usize,
    budget: &Budget,
) -> Result<Contraction> {
    check_object(g, o)?;
    let n_top = g.max_dim();
    let mut from_o: Vec<HashMap<usize, usize>> = Vec::new();
    for n in 0..=n_top {
        let on = g.ob.degenerate_vertex(o, n);
        let mut level = HashMap::new();
        for a in 0..g.ar.level_len(n) {
            if g.src(n, a) == on && level.insert(g.tgt(n, a), a).is_some() {
                return Err(Error::Failed(format!(
                    "'{}' receives two arrows from the initial candidate at level {n}",
                    g.ob.id(n, g.tgt(n, a))
                )));
            }
        }
        if let Some(x) = (0..g.ob.level_len(n)).find(|x| !level.contains_key(x)) {
            return Err(Error::Failed(format!(
                "'{}' receives no arrow from the initial candidate at level {n}",
                g.ob.id(n, x)
            )));
        }
        from_o.push(level);
    }
    let space = classifying_space(g, budget)?;
    let interval = standard_simplex(1, n_top);
    let cylinder = product(interval.sset(), &space.sset)?;
    let assign = (0..=n_top)
        .map(|m| {
            (0..cylinder.sset.level_len(m))
                .map(|w| {
                    let (t, x) = cylinder.pair(m, w);
                    let j = interval.theta(m, t).iter().filter(|&&v| v == 0).count();
                    if j == 0 {
                        return x;
                    }
                    let om = g.ob.degenerate_vertex(o, m);
                    if m == 0 {
                        return space.vertex_of(om);
                    }
                    let objects = space.objects(m, x);
                    let key = space.key(m, x);
                    let string: Vec<usize> = (1..=m)
                        .map(|i| match i.cmp(&j) {
                            std::cmp::Ordering::Less => g.id_at(m, om),
                            std::cmp::Ordering::Equal => from_o[m][&objects[j]],
                            std::cmp::Ordering::Greater => key[i - 1],
                        })
                        .collect();
                    space.find(m, &string).expect("strings out of o compose")
                })
                .collect()
        })
        .collect();
    let homotopy = SimplicialMap::new(cylinder.sset.clone(), space.sset.clone(), assign)?;
    let mut report = ValidationReport::default();
    for (v, expect_identity) in [(0usize, false), (1, true)] {
        for m in 0..=n_top {
            let t = interval.sset().degenerate_vertex(interval.vertex(v), m);
            for x in 0..space.sset.level_len(m) {
                let w = cylinder.find(m, t, x).expect("pairs");
                let want = if expect_identity {
                    x
                } else {
                    space.sset.degenerate_vertex(space.vertex_of(o), m)
                };
                if homotopy.apply(m, w) != want {
                    report.push(format!(
                        "homotopy at end {v} moves '{}'",
                        space.sset.id(m, x)
                    ));
                }
            }
        }
    }
    let components = pi0(&space.sset).count();
    Ok(Contraction {
        space,
        interval,
        cylinder,
        homotopy,
        report,
        components,
    })
}

/// `π0 𝔾(c, c)` against `π1(B𝔾, c)`.
#[derive(Clone, Debug)]
pub struct LoopComparison {
    /// `π0 𝔾(c, c)`, classes named by their least arrow, product "then".
    pub group: FiniteGroup,
    pub presentation: GroupPresentation,
    /// Class of each generator edge, empty when undecided.
    pub labels: Vec<usize>,
    /// Each arrow of `𝔾(c, c)_0` with its loop edge.
    pub loop_edges: Vec<(String, String)>,
    pub report: ComparisonReport,
}

/// Labels each edge `[g]: a → b` of the component of `c` by the class of
/// `τ_a then d_1 g then τ_b⁻¹`, with `τ` the tree paths from `c`, and asks
/// whether the labelling presents `π0 𝔾(c, c)`.
pub fn loop_comparison(
    g: &Arc<SimplicialGroupoid>,
    c: usize,
    pair_cert: &KanCertificate,
    bound: usize,
    budget: &Budget,
) -> Result<LoopComparison> {
    check_object(g, c)?;
    let (_, st) = g.pair_map()?;
    if !pair_cert.is_about(&st) || !pair_cert.covers(2) {
        return Err(Error::Invalid(
            "loop comparison needs a passing (s, t) certificate up to dimension 2".into(),
        ));
    }
    let auts = automorphism_group(g, c)?;
    let h = auts.arrows.dom();
    let classes = pi0(h);
    let reps: Vec<usize> = classes.classes.iter().map(|cl| cl[0]).collect();
    let names: Vec<String> = reps.iter().map(|&r| h.id(0, r).to_string()).collect();
    let incl = auts.arrows.map();
    let class_of_arrow = |a: usize| auts.arrows.local(0, a).map(|l| classes.class_of[l]);
    let mut table = vec![vec![0; reps.len()]; reps.len()];
    for (ca, &a) in reps.iter().enumerate() {
        for (cb, &b) in reps.iter().enumerate() {
            let ab = g
                .then(0, incl.apply(0, a), incl.apply(0, b))
                .expect("endomorphisms compose");
            table[ca][cb] = class_of_arrow(ab).expect("closed under composition");
        }
    }
    for a in 0..h.level_len(0) {
        for b in 0..h.level_len(0) {
            let ab = g.then(0, incl.apply(0, a), incl.apply(0, b)).unwrap();
            if class_of_arrow(ab) != Some(table[classes.class_of[a]][classes.class_of[b]]) {
                return Err(Error::Failed(
                    "composition is not well defined on components".into(),
                ));
            }
        }
    }
    let group = FiniteGroup::from_table(names, table)?;

    let bg = classifying_space(g, budget)?;
    let base = bg.vertex_of(c);
    let comp = component(&bg.sset, base)?;
    let cs = comp.dom();
    let presentation =
        fundamental_group_presentation(cs, comp.local(0, base).expect("base in its component"))?;
    let loop_edges = (0..h.level_len(0))
        .map(|a| {
            let arrow = incl.apply(0, a);
            let edge = bg
                .find(1, &[g.ar.degen(0, 0, arrow)])
                .expect("loop edges exist");
            (h.id(0, a).to_string(), bg.sset.id(1, edge).to_string())
        })
        .collect();
    if !g.has_discrete_objects() {
        let report = ComparisonReport {
            verdict: Comparison::Unknown,
            reason: "objects are not discrete, so edges do not determine level-0 arrows".into(),
            group_order: group.order(),
            presented_order: GroupOrder::Unknown,
        };
        return Ok(LoopComparison {
            group,
            presentation,
            labels: Vec::new(),
            loop_edges,
            report,
        });
    }
    // the level-0 arrow along an edge [g], from d1 to d0
    let along = |e: usize| g.ar.face(1, 1, bg.key(1, comp.map().apply(1, e))[0]);
    let object = |v: usize| bg.key(0, comp.map().apply(0, v))[0];
    let mut tau: HashMap<usize, usize> = HashMap::from([(c, g.id_at(0, c))]);
    let tree: Vec<usize> = presentation
        .tree
        .iter()
        .map(|id| cs.index_of(1, id).unwrap())
        .collect();
    while tau.len() < cs.level_len(0) {
        let before = tau.len();
        for &e in &tree {
            let (a, b, gamma) = (object(cs.face(1, 1, e)), object(cs.face(1, 0, e)), along(e));
            match (tau.get(&a).copied(), tau.get(&b).copied()) {
                (Some(ta), None) => {
                    tau.insert(b, g.then(0, ta, gamma).expect("tree path"));
                }
                (None, Some(tb)) => {
                    tau.insert(a, g.then(0, tb, g.inv(0, gamma)).expect("tree path"));
                }
                _ => {}
            }
        }
        if tau.len() == before {
            return Err(Error::Failed(
                "spanning tree does not reach every vertex".into(),
            ));
        }
    }
    let labels = (0..cs.level_len(1))
        .map(|e| {
            let (a, b, gamma) = (object(cs.face(1, 1, e)), object(cs.face(1, 0, e)), along(e));
            let arrow = g
                .then(0, tau[&a], gamma)
                .and_then(|x| g.then(0, x, g.inv(0, tau[&b])))
                .expect("loops at c compose");
            class_of_arrow(arrow).expect("loops at c are endomorphisms")
        })
        .collect::<Vec<_>>();
    let report = reduce_table_presentation(&presentation, &group, &labels, bound);
    Ok(LoopComparison {
        group,
        presentation,
        labels,
        loop_edges,
        report,
    })
}
