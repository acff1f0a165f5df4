use std::collections::HashMap;
use std::sync::Arc;

use super::action::GroupoidAction;
use super::groupoid::SimplicialGroupoid;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::sset::{build_keyed, fiber, SimplicialMap, TruncatedSimplicialSet, ValidationReport};

/// Level-q composable strings of length `q`, by arrow index.
fn strings(g: &SimplicialGroupoid, q: usize, budget: &Budget) -> Result<Vec<Vec<usize>>> {
    if q == 0 {
        return Ok((0..g.ob.level_len(0)).map(|x| vec![x]).collect());
    }
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); g.ob.level_len(q)];
    for a in 0..g.ar.level_len(q) {
        by_source[g.src(q, a)].push(a);
    }
    let mut out: Vec<Vec<usize>> = (0..g.ar.level_len(q)).map(|a| vec![a]).collect();
    for _ in 1..q {
        let mut next = Vec::new();
        for s in &out {
            for &a in &by_source[g.tgt(q, *s.last().unwrap())] {
                let mut t = s.clone();
                t.push(a);
                next.push(t);
            }
            budget.check_simplices(next.len(), "composable strings")?;
        }
        out = next;
    }
    Ok(out)
}

fn string_name(g: &SimplicialGroupoid, q: usize, key: &[usize]) -> String {
    if q == 0 {
        return g.ob.id(0, key[0]).to_string();
    }
    let parts: Vec<&str> = key.iter().map(|&a| g.ar.id(q, a)).collect();
    format!("[{}]", parts.join(","))
}

/// Diagonal face: vertical `d_i` on every arrow, then horizontal `d_i`.
fn string_face(g: &SimplicialGroupoid, q: usize, i: usize, key: &[usize]) -> Vec<usize> {
    let down: Vec<usize> = key.iter().map(|&a| g.ar.face(q, i, a)).collect();
    if q == 1 {
        return vec![if i == 0 {
            g.tgt(0, down[0])
        } else {
            g.src(0, down[0])
        }];
    }
    let mut out = Vec::with_capacity(q - 1);
    for (j, &a) in down.iter().enumerate() {
        if (i == 0 && j == 0) || (i == q && j + 1 == q) {
            continue;
        }
        if i > 0 && i < q && j + 1 == i {
            out.push(
                g.then(q - 1, a, down[j + 1])
                    .expect("faces of composable strings compose"),
            );
        } else if i > 0 && i < q && j == i {
            continue;
        } else {
            out.push(a);
        }
    }
    out
}

/// Diagonal degeneracy: vertical `s_i`, then an identity inserted at `i`.
fn string_degen(g: &SimplicialGroupoid, q: usize, i: usize, key: &[usize]) -> Vec<usize> {
    if q == 0 {
        let x = g.ob.degen(0, 0, key[0]);
        return vec![g.id_at(1, x)];
    }
    let mut up: Vec<usize> = key.iter().map(|&a| g.ar.degen(q, i, a)).collect();
    let c = if i == 0 {
        g.src(q + 1, up[0])
    } else {
        g.tgt(q + 1, up[i - 1])
    };
    up.insert(i, g.id_at(q + 1, c));
    up
}

/// Objects `c_0..c_q` of a level-q string.
fn string_objects(g: &SimplicialGroupoid, q: usize, key: &[usize]) -> Vec<usize> {
    if q == 0 {
        return vec![key[0]];
    }
    let mut objs = vec![g.src(q, key[0])];
    objs.extend(key.iter().map(|&a| g.tgt(q, a)));
    objs
}

/// `B𝔾`: level n holds the composable strings of length n in `ar_n`.
#[derive(Clone, Debug)]
pub struct ClassifyingSpace {
    pub groupoid: Arc<SimplicialGroupoid>,
    pub sset: Arc<TruncatedSimplicialSet>,
    keys: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

pub fn classifying_space(g: &Arc<SimplicialGroupoid>, budget: &Budget) -> Result<ClassifyingSpace> {
    let n_top = g.max_dim();
    let levels = (0..=n_top)
        .map(|q| strings(g, q, budget))
        .collect::<Result<Vec<_>>>()?;
    budget.check_simplices(levels.iter().map(Vec::len).sum(), "classifying space")?;
    let keyed = build_keyed(
        n_top,
        levels,
        |q, k| string_name(g, q, k),
        |q, i, k| string_face(g, q, i, k),
        |q, i, k| string_degen(g, q, i, k),
    )?;
    Ok(ClassifyingSpace {
        groupoid: g.clone(),
        sset: Arc::new(keyed.sset),
        keys: keyed.keys,
        index: keyed.index,
    })
}

impl ClassifyingSpace {
    /// The string of a simplex; at level 0 the single object.
    pub fn key(&self, n: usize, x: usize) -> &[usize] {
        &self.keys[n][x]
    }

    pub fn find(&self, n: usize, key: &[usize]) -> Option<usize> {
        self.index[n].get(key).copied()
    }

    pub fn objects(&self, n: usize, x: usize) -> Vec<usize> {
        string_objects(&self.groupoid, n, self.key(n, x))
    }

    /// The vertex of an object of `ob_0`.
    pub fn vertex_of(&self, c: usize) -> usize {
        self.find(0, &[c]).expect("objects are vertices")
    }

    /// The level-n identity string on an object of `ob_n`.
    pub fn identity_string(&self, n: usize, u: usize) -> usize {
        let g = &self.groupoid;
        let key = if n == 0 {
            vec![u]
        } else {
            vec![g.id_at(n, u); n]
        };
        self.find(n, &key).expect("identity strings compose")
    }

    /// Star form of a simplex centred at vertex `k`.
    pub fn star(&self, n: usize, x: usize, k: usize) -> StarSimplex {
        StarSimplex::from_string(&self.groupoid, n, self.key(n, x), k)
    }

    pub fn from_star(&self, star: &StarSimplex) -> Option<usize> {
        let key = star.to_string_key(&self.groupoid)?;
        self.find(star.level, &key)
    }
}

/// `i: ob → B𝔾`, the identity strings.
pub fn unit_inclusion(bg: &ClassifyingSpace) -> Result<SimplicialMap> {
    let g = &bg.groupoid;
    let assign = (0..=g.max_dim())
        .map(|n| {
            (0..g.ob.level_len(n))
                .map(|u| bg.identity_string(n, u))
                .collect()
        })
        .collect();
    SimplicialMap::new(g.ob.clone(), bg.sset.clone(), assign)
}

/// An n-simplex of `B𝔾` recorded by arrows out of one vertex:
/// `arrows[i] = h_i: c_center → c_i`, absent at the centre.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StarSimplex {
    pub level: usize,
    pub center: usize,
    pub object: usize,
    pub arrows: Vec<Option<usize>>,
}

impl StarSimplex {
    /// `key` is a level-q string of length q, or `[object]` at level 0.
    pub fn from_string(g: &SimplicialGroupoid, q: usize, key: &[usize], k: usize) -> Self {
        assert!(k <= q, "centre {k} beyond length {q}");
        let objects = string_objects(g, q, key);
        let arrows = (0..=q)
            .map(|i| {
                if i == k {
                    None
                } else if i > k {
                    g.then_all(q, &key[k..i])
                } else {
                    g.then_all(q, &key[i..k]).map(|a| g.inv(q, a))
                }
            })
            .collect();
        StarSimplex {
            level: q,
            center: k,
            object: objects[k],
            arrows,
        }
    }

    fn arrow_or_unit(&self, g: &SimplicialGroupoid, i: usize) -> usize {
        self.arrows[i].unwrap_or_else(|| g.id_at(self.level, self.object))
    }

    pub fn objects(&self, g: &SimplicialGroupoid) -> Vec<usize> {
        (0..self.arrows.len())
            .map(|i| self.arrows[i].map_or(self.object, |h| g.tgt(self.level, h)))
            .collect()
    }

    /// Back to a composable string; `None` if an arrow leaves from the wrong
    /// object.
    pub fn to_string_key(&self, g: &SimplicialGroupoid) -> Option<Vec<usize>> {
        let q = self.level;
        if self
            .arrows
            .iter()
            .flatten()
            .any(|&h| g.src(q, h) != self.object)
        {
            return None;
        }
        if self.arrows.len() == 1 {
            return Some(vec![self.object]);
        }
        (1..self.arrows.len())
            .map(|i| {
                let back = g.inv(q, self.arrow_or_unit(g, i - 1));
                g.then(q, back, self.arrow_or_unit(g, i))
            })
            .collect()
    }

    /// Diagonal face `d_i` for `i` off the centre.
    pub fn face(&self, g: &SimplicialGroupoid, i: usize) -> StarSimplex {
        assert!(i != self.center && self.level > 0);
        let q = self.level;
        let arrows = (0..self.arrows.len())
            .filter(|&j| j != i)
            .map(|j| self.arrows[j].map(|h| g.ar.face(q, i, h)))
            .collect();
        StarSimplex {
            level: q - 1,
            center: if i < self.center {
                self.center - 1
            } else {
                self.center
            },
            object: g.ob.face(q, i, self.object),
            arrows,
        }
    }
}

/// The same simplex with its centre moved to `k`: `h'_i = h_k^{-1} then h_i`.
pub fn recenter(g: &SimplicialGroupoid, star: &StarSimplex, k: usize) -> StarSimplex {
    let q = star.level;
    let back = g.inv(q, star.arrow_or_unit(g, k));
    let arrows = (0..star.arrows.len())
        .map(|i| {
            (i != k).then(|| {
                g.then(q, back, star.arrow_or_unit(g, i))
                    .expect("arrows share a source")
            })
        })
        .collect();
    StarSimplex {
        level: q,
        center: k,
        object: g.src(q, back),
        arrows,
    }
}

/// `B(X_𝔾)` with `p′` forgetting the point and `j` sending a point to its
/// identity string.
#[derive(Clone, Debug)]
pub struct ActionSpace {
    pub action: GroupoidAction,
    pub base: ClassifyingSpace,
    pub sset: Arc<TruncatedSimplicialSet>,
    pub projection: SimplicialMap,
    pub inclusion: SimplicialMap,
    keys: Vec<Vec<(usize, Vec<usize>)>>,
    index: Vec<HashMap<(usize, Vec<usize>), usize>>,
}

impl ActionSpace {
    /// `(x, string)`; the string is empty at level 0.
    pub fn key(&self, n: usize, x: usize) -> &(usize, Vec<usize>) {
        &self.keys[n][x]
    }

    pub fn find(&self, n: usize, x: usize, string: &[usize]) -> Option<usize> {
        self.index[n].get(&(x, string.to_vec())).copied()
    }

    /// The point carried to vertex `v` of the simplex.
    pub fn point_at(&self, n: usize, w: usize, v: usize) -> usize {
        let (x, gs) = self.key(n, w);
        if v == 0 {
            *x
        } else {
            let g = self
                .action
                .groupoid
                .then_all(n, &gs[..v])
                .expect("composable");
            self.action
                .apply(n, g, *x)
                .expect("strings start at the anchor")
        }
    }
}

pub fn action_space(a: &GroupoidAction, budget: &Budget) -> Result<ActionSpace> {
    let g = &a.groupoid;
    let base = classifying_space(g, budget)?;
    let n_top = a.max_dim();
    let x = &a.carrier;
    let mut levels: Vec<Vec<(usize, Vec<usize>)>> =
        vec![(0..x.level_len(0)).map(|p| (p, Vec::new())).collect()];
    for q in 1..=n_top {
        let mut by_source: HashMap<usize, Vec<usize>> = HashMap::new();
        for s in 0..base.sset.level_len(q) {
            by_source.entry(base.objects(q, s)[0]).or_default().push(s);
        }
        let mut level = Vec::new();
        for p in 0..x.level_len(q) {
            for &s in by_source.get(&a.anchor.apply(q, p)).into_iter().flatten() {
                level.push((p, base.key(q, s).to_vec()));
            }
        }
        budget.check_simplices(level.len(), "action space")?;
        levels.push(level);
    }
    let name = |q: usize, k: &(usize, Vec<usize>)| {
        if q == 0 {
            x.id(0, k.0).to_string()
        } else {
            format!("({};{})", x.id(q, k.0), string_name(g, q, &k.1))
        }
    };
    let face = |q: usize, i: usize, k: &(usize, Vec<usize>)| {
        let p = x.face(q, i, k.0);
        let gs = &k.1;
        if i == 0 {
            let g1 = g.ar.face(q, 0, gs[0]);
            let moved = a
                .apply(q - 1, g1, p)
                .expect("the first arrow leaves the anchor");
            let rest = if q == 1 {
                Vec::new()
            } else {
                string_face(g, q, 0, gs)
            };
            (moved, rest)
        } else {
            (
                p,
                if q == 1 {
                    Vec::new()
                } else {
                    string_face(g, q, i, gs)
                },
            )
        }
    };
    let degen = |q: usize, i: usize, k: &(usize, Vec<usize>)| {
        let p = x.degen(q, i, k.0);
        if q == 0 {
            (p, vec![g.id_at(1, a.anchor.apply(1, p))])
        } else {
            (p, string_degen(g, q, i, &k.1))
        }
    };
    let keyed = build_keyed(n_top, levels, name, face, degen)?;
    let sset = Arc::new(keyed.sset);
    let proj = (0..=n_top)
        .map(|q| {
            keyed.keys[q]
                .iter()
                .map(|(p, gs)| {
                    if q == 0 {
                        base.vertex_of(a.anchor.apply(0, *p))
                    } else {
                        base.find(q, gs).expect("strings are simplices")
                    }
                })
                .collect()
        })
        .collect();
    let projection = SimplicialMap::new(sset.clone(), base.sset.clone(), proj)?;
    let incl = (0..=n_top)
        .map(|q| {
            (0..x.level_len(q))
                .map(|p| {
                    let gs = if q == 0 {
                        Vec::new()
                    } else {
                        vec![g.id_at(q, a.anchor.apply(q, p)); q]
                    };
                    keyed.index[q][&(p, gs)]
                })
                .collect()
        })
        .collect();
    let inclusion = SimplicialMap::new(x.clone(), sset.clone(), incl)?;
    Ok(ActionSpace {
        action: a.clone(),
        base,
        sset,
        projection,
        inclusion,
        keys: keyed.keys,
        index: keyed.index,
    })
}

/// Checks that `j` restricts to a levelwise bijection from the fibre of `π`
/// over `c` onto the fibre of `p′` over `i(c)`.
pub fn verify_fiber_square(space: &ActionSpace, c: usize) -> Result<ValidationReport> {
    let a = &space.action;
    let over_c = fiber(&a.anchor, c)?;
    let over_ic = fiber(&space.projection, space.base.vertex_of(c))?;
    let mut report = ValidationReport::default();
    for n in 0..=a.max_dim() {
        let mut hit = vec![false; over_ic.dom().level_len(n)];
        for &p in over_c.map().level(n) {
            match over_ic.local(n, space.inclusion.apply(n, p)) {
                Some(w) if !hit[w] => hit[w] = true,
                Some(_) => report.push(format!("'{}' is hit twice", a.carrier.id(n, p))),
                None => report.push(format!(
                    "'{}' leaves the fibre over i(c)",
                    a.carrier.id(n, p)
                )),
            }
        }
        for (w, _) in hit.iter().enumerate().filter(|(_, &h)| !h) {
            report.push(format!(
                "'{}' is not the image of a point over c",
                over_ic.dom().id(n, w)
            ));
        }
    }
    Ok(report)
}

/// Errors unless `c` is an object vertex.
pub(crate) fn check_object(g: &SimplicialGroupoid, c: usize) -> Result<()> {
    if c >= g.ob.level_len(0) {
        return Err(Error::NotFound(format!("object vertex {c}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::sgpd::action::{translation_action, trivial_action};
    use crate::sgpd::groupoid::{constant_group, discrete, indiscrete, letters};
    use crate::sset::validate_sset;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn classifying_space_sizes() {
        let z2 = Arc::new(constant_group(&FiniteGroup::cyclic(2), 3).unwrap());
        let bg = classifying_space(&z2, &b()).unwrap();
        assert_eq!(bg.sset.level_sizes(), vec![1, 2, 4, 8]);
        assert!(validate_sset(&bg.sset).is_valid());

        let d = Arc::new(discrete(&letters(3), 2).unwrap());
        let bd = classifying_space(&d, &b()).unwrap();
        assert_eq!(bd.sset.level_sizes(), vec![3, 3, 3]);
        assert!((1..=2).all(|n| (0..3).all(|x| bd.sset.is_degenerate(n, x))));

        let ind = Arc::new(indiscrete(&letters(2), 2).unwrap());
        let bi = classifying_space(&ind, &b()).unwrap();
        assert_eq!(bi.sset.level_len(1), 4);
        assert!(validate_sset(&bi.sset).is_valid());
    }

    #[test]
    fn unit_inclusion_is_injective() {
        let d = Arc::new(discrete(&letters(2), 2).unwrap());
        let bd = classifying_space(&d, &b()).unwrap();
        let i = unit_inclusion(&bd).unwrap();
        assert!(i.is_injective() && i.is_surjective());
        let z2 = Arc::new(constant_group(&FiniteGroup::cyclic(2), 3).unwrap());
        let i = unit_inclusion(&classifying_space(&z2, &b()).unwrap()).unwrap();
        assert!(i.is_injective() && i.is_surjective_at(0));
    }

    #[test]
    fn recentering_examples() {
        let z3 = FiniteGroup::cyclic(3);
        let g = Arc::new(constant_group(&z3, 2).unwrap());
        let bg = classifying_space(&g, &b()).unwrap();
        let one = g.ar.degenerate_vertex(g.ar.index_of(0, "1").unwrap(), 2);
        let two = g.ar.degenerate_vertex(g.ar.index_of(0, "2").unwrap(), 2);
        let x = bg.find(2, &[one, two]).unwrap();
        let s = bg.star(2, x, 1);
        assert_eq!(s.arrows, vec![Some(g.inv(2, one)), None, Some(two)]);
        let s0 = bg.star(2, x, 0);
        assert_eq!(s0.arrows, vec![None, Some(one), g.then(2, one, two)]);
        let e = g.id_at(2, 0);
        let idx = bg.find(2, &[e, e]).unwrap();
        assert!(bg.star(2, idx, 1).arrows.iter().flatten().all(|&h| h == e));
    }

    #[test]
    fn recenter_round_trips_and_commutes_with_faces() {
        for g in [
            constant_group(&FiniteGroup::symmetric3(), 2).unwrap(),
            indiscrete(&letters(2), 3).unwrap(),
        ] {
            let g = Arc::new(g);
            let bg = classifying_space(&g, &b()).unwrap();
            for n in 0..=g.max_dim() {
                for x in 0..bg.sset.level_len(n) {
                    for k in 0..=n {
                        let s = bg.star(n, x, k);
                        assert_eq!(bg.from_star(&s), Some(x));
                        for k2 in 0..=n {
                            assert_eq!(recenter(&g, &recenter(&g, &s, k2), k), s);
                            assert_eq!(recenter(&g, &s, k2), bg.star(n, x, k2));
                        }
                        for i in (0..=n).filter(|&i| i != k && n > 0) {
                            let f = s.face(&g, i);
                            assert_eq!(bg.from_star(&f), Some(bg.sset.face(n, i, x)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn action_spaces() {
        let z2 = FiniteGroup::cyclic(2);
        let g = Arc::new(constant_group(&z2, 2).unwrap());
        let a = translation_action(g.clone(), &z2).unwrap();
        let sp = action_space(&a, &b()).unwrap();
        assert_eq!(sp.sset.level_sizes(), vec![2, 4, 8]);
        assert!(validate_sset(&sp.sset).is_valid());
        assert!(verify_fiber_square(&sp, 0).unwrap().is_valid());
        let f = fiber(&sp.projection, 0).unwrap();
        assert_eq!(f.dom().level_len(0), 2);

        let d = Arc::new(discrete(&letters(2), 2).unwrap());
        let t = trivial_action(d).unwrap();
        let st = action_space(&t, &b()).unwrap();
        assert!(st.inclusion.is_injective() && st.inclusion.is_surjective());
        assert!(verify_fiber_square(&st, 1).unwrap().is_valid());
    }
}
