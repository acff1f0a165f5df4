use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lifting::enumerate_maps_over;
use crate::sset::{
    build_keyed, codegeneracy, coface, product, pullback, standard_simplex, Product, Pullback,
    SimplicialMap, StandardSimplex, SubcomplexInclusion, TruncatedSimplicialSet,
};

type Table = Vec<Vec<usize>>;

/// `End(E) → U × U`: an n-simplex over `(x, y)` is a map `x*E → y*E` over
/// `Δ[n]`, where `x*E = Δ[n] ×_U E`.
#[derive(Clone, Debug)]
pub struct EndSpace {
    pub fibration: SimplicialMap,
    pub pairs: Product,
    pub sset: Arc<TruncatedSimplicialSet>,
    pub projection: SimplicialMap,
    simplices: Vec<StandardSimplex>,
    pulled: Vec<Vec<Pullback>>,
    keys: Vec<Vec<(usize, usize, usize)>>,
    tables: Vec<HashMap<(usize, usize), Vec<Table>>>,
    lookup: Vec<HashMap<(usize, usize), HashMap<Table, usize>>>,
    index: Vec<HashMap<(usize, usize, usize), usize>>,
}

pub fn end_space(p: &SimplicialMap, budget: &Budget) -> Result<EndSpace> {
    let (e, u) = (p.dom(), p.cod());
    let n_top = e.max_dim();
    let simplices: Vec<StandardSimplex> = (0..=n_top).map(|n| standard_simplex(n, n_top)).collect();
    let pulled = (0..=n_top)
        .map(|n| {
            (0..u.level_len(n))
                .map(|x| pullback(&simplices[n].yoneda(u, x)?, p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tables = Vec::new();
    let mut lookup = Vec::new();
    let mut levels = Vec::new();
    let mut total = 0usize;
    for n in 0..=n_top {
        let mut level_tables = HashMap::new();
        let mut level_lookup = HashMap::new();
        let mut level = Vec::new();
        for x in 0..u.level_len(n) {
            for y in 0..u.level_len(n) {
                let maps = enumerate_maps_over(&pulled[n][x].proj1, &pulled[n][y].proj1, budget)?;
                total += maps.len();
                budget.check_simplices(total, "mapping space")?;
                level.extend((0..maps.len()).map(|k| (x, y, k)));
                level_lookup.insert(
                    (x, y),
                    maps.iter()
                        .cloned()
                        .enumerate()
                        .map(|(k, t)| (t, k))
                        .collect::<HashMap<Table, usize>>(),
                );
                level_tables.insert((x, y), maps);
            }
        }
        tables.push(level_tables);
        lookup.push(level_lookup);
        levels.push(level);
    }
    let restrict = |n: usize,
                    from: usize,
                    to: usize,
                    reindex: &dyn Fn(&[u8]) -> Vec<u8>,
                    key: &(usize, usize, usize)| {
        // `from` is the level of `key`, `to` the level of the result
        let (x, y, k) = *key;
        let (x2, y2) = if to < from {
            (u.face(from, n, x), u.face(from, n, y))
        } else {
            (u.degen(from, n, x), u.degen(from, n, y))
        };
        let table = &tables[from][&(x, y)][k];
        let (src, dst) = (&pulled[to][x2], &pulled[to][y2]);
        let (big_src, big_dst) = (&pulled[from][x], &pulled[from][y]);
        let out: Table = (0..=n_top)
            .map(|m| {
                (0..src.sset.level_len(m))
                    .map(|w| {
                        let (z, pt) = src.pair(m, w);
                        let zz = simplices[from].index_of(&reindex(simplices[to].theta(m, z)));
                        let image = table[m][big_src
                            .find(m, zz, pt)
                            .expect("restriction lands in the pullback")];
                        let (_, q) = big_dst.pair(m, image);
                        dst.find(m, z, q)
                            .expect("restriction lands in the pullback")
                    })
                    .collect()
            })
            .collect();
        (x2, y2, lookup[to][&(x2, y2)][&out])
    };
    let keyed = build_keyed(
        n_top,
        levels,
        |n, &(x, y, k)| format!("({};{};{k})", u.id(n, x), u.id(n, y)),
        |n, i, key| restrict(i, n, n - 1, &|t: &[u8]| coface(t, i), key),
        |n, i, key| restrict(i, n, n + 1, &|t: &[u8]| codegeneracy(t, i), key),
    )?;
    let pairs = product(u, u)?;
    let sset = Arc::new(keyed.sset);
    let proj = keyed
        .keys
        .iter()
        .enumerate()
        .map(|(n, level)| {
            level
                .iter()
                .map(|&(x, y, _)| pairs.find(n, x, y).unwrap())
                .collect()
        })
        .collect();
    let projection = SimplicialMap::new(sset.clone(), pairs.sset.clone(), proj)?;
    Ok(EndSpace {
        fibration: p.clone(),
        pairs,
        sset,
        projection,
        simplices,
        pulled,
        keys: keyed.keys,
        tables,
        lookup,
        index: keyed.index,
    })
}

impl EndSpace {
    pub fn max_dim(&self) -> usize {
        self.sset.max_dim()
    }

    /// `(x, y)` of a simplex.
    pub fn ends(&self, n: usize, a: usize) -> (usize, usize) {
        let (x, y, _) = self.keys[n][a];
        (x, y)
    }

    /// The map `x*E → y*E` as level tables on the pullbacks.
    pub fn table(&self, n: usize, a: usize) -> &Table {
        let (x, y, k) = self.keys[n][a];
        &self.tables[n][&(x, y)][k]
    }

    /// `Δ[n] ×_U E` along the simplex `x`.
    pub fn pulled(&self, n: usize, x: usize) -> &Pullback {
        &self.pulled[n][x]
    }

    pub fn simplex(&self, n: usize) -> &StandardSimplex {
        &self.simplices[n]
    }

    /// The simplex over `(x, y)` with the given tables.
    pub fn find(&self, n: usize, x: usize, y: usize, table: &Table) -> Option<usize> {
        let k = *self.lookup[n].get(&(x, y))?.get(table)?;
        self.index[n].get(&(x, y, k)).copied()
    }

    pub fn over(&self, n: usize, x: usize, y: usize) -> Vec<usize> {
        (0..self.sset.level_len(n))
            .filter(|&a| self.ends(n, a) == (x, y))
            .collect()
    }

    pub fn identity(&self, n: usize, x: usize) -> usize {
        let p = &self.pulled[n][x];
        let table = (0..=self.max_dim())
            .map(|m| (0..p.sset.level_len(m)).collect())
            .collect();
        self.find(n, x, x, &table)
            .expect("the identity is a map over Δ[n]")
    }

    /// `a` then `b`, when the target of `a` is the source of `b`.
    pub fn compose(&self, n: usize, a: usize, b: usize) -> Option<usize> {
        let ((x, y), (y2, z)) = (self.ends(n, a), self.ends(n, b));
        if y != y2 {
            return None;
        }
        let (ta, tb) = (self.table(n, a), self.table(n, b));
        let table = ta
            .iter()
            .zip(tb)
            .map(|(la, lb)| la.iter().map(|&w| lb[w]).collect())
            .collect();
        self.find(n, x, z, &table)
    }

    /// Levelwise bijective.
    pub fn is_iso(&self, n: usize, a: usize) -> bool {
        let (_, y) = self.ends(n, a);
        let target = &self.pulled[n][y].sset;
        self.table(n, a).iter().enumerate().all(|(m, level)| {
            let mut hit = vec![false; target.level_len(m)];
            level.iter().all(|&w| !std::mem::replace(&mut hit[w], true)) && hit.iter().all(|&h| h)
        })
    }

    pub fn inverse(&self, n: usize, a: usize) -> Option<usize> {
        if !self.is_iso(n, a) {
            return None;
        }
        let (x, y) = self.ends(n, a);
        let table = self
            .table(n, a)
            .iter()
            .map(|level| {
                let mut inv = vec![0; level.len()];
                for (w, &v) in level.iter().enumerate() {
                    inv[v] = w;
                }
                inv
            })
            .collect();
        self.find(n, y, x, &table)
    }

    /// Homotopy classes of vertices over `(x, y)`, joined along edges over
    /// the degenerate edge on `(x, y)`; `class_of[a]` for each such vertex.
    pub fn classes_over(&self, x: usize, y: usize) -> HashMap<usize, usize> {
        let verts = self.over(0, x, y);
        let mut parent: HashMap<usize, usize> = verts.iter().map(|&v| (v, v)).collect();
        fn root(parent: &mut HashMap<usize, usize>, mut v: usize) -> usize {
            while parent[&v] != v {
                let up = parent[&parent[&v]];
                parent.insert(v, up);
                v = up;
            }
            v
        }
        if self.max_dim() >= 1 {
            let u = self.fibration.cod();
            let (dx, dy) = (u.degen(0, 0, x), u.degen(0, 0, y));
            for e in self.over(1, dx, dy) {
                let (a, b) = (self.sset.face(1, 1, e), self.sset.face(1, 0, e));
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                if ra != rb {
                    parent.insert(ra.max(rb), ra.min(rb));
                }
            }
        }
        let mut class = HashMap::new();
        let mut names: HashMap<usize, usize> = HashMap::new();
        for &v in &verts {
            let r = root(&mut parent, v);
            let next = names.len();
            let c = *names.entry(r).or_insert(next);
            class.insert(v, c);
        }
        class
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MappingKind {
    End,
    Iso,
    Eq,
}

/// Why a simplex of `End` is in `Eq`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Iso,
    Yes,
    Unknown,
}

/// A subspace of `End`, with its projection to `U × U`.
#[derive(Clone, Debug)]
pub struct MappingSpace {
    pub kind: MappingKind,
    pub inclusion: SubcomplexInclusion,
    pub projection: SimplicialMap,
    /// Per simplex of `End`; excluded simplices are `Unknown`.
    pub membership: Vec<Vec<Membership>>,
}

impl MappingSpace {
    pub fn sset(&self) -> &Arc<TruncatedSimplicialSet> {
        self.inclusion.dom()
    }

    pub fn contains(&self, n: usize, a: usize) -> bool {
        self.inclusion.contains(n, a)
    }
}

fn subspace(
    end: &EndSpace,
    kind: MappingKind,
    membership: Vec<Vec<Membership>>,
) -> Result<MappingSpace> {
    let inclusion = SubcomplexInclusion::from_predicate(end.sset.clone(), |n, a| {
        membership[n][a] != Membership::Unknown
    })
    .map_err(|e| {
        Error::Failed(format!(
            "{kind:?} is not closed under the structure maps: {e}"
        ))
    })?;
    let projection = inclusion.map().then(&end.projection)?;
    Ok(MappingSpace {
        kind,
        inclusion,
        projection,
        membership,
    })
}

pub fn as_mapping_space(end: &EndSpace) -> Result<MappingSpace> {
    let membership = (0..=end.max_dim())
        .map(|n| {
            (0..end.sset.level_len(n))
                .map(|a| {
                    if end.is_iso(n, a) {
                        Membership::Iso
                    } else {
                        Membership::Yes
                    }
                })
                .collect()
        })
        .collect();
    subspace(end, MappingKind::End, membership)
}

/// Simplices that are isomorphisms over `Δ[n]`.
pub fn iso_space(end: &EndSpace) -> Result<MappingSpace> {
    let membership = (0..=end.max_dim())
        .map(|n| {
            (0..end.sset.level_len(n))
                .map(|a| {
                    if end.is_iso(n, a) {
                        Membership::Iso
                    } else {
                        Membership::Unknown
                    }
                })
                .collect()
        })
        .collect();
    subspace(end, MappingKind::Iso, membership)
}

/// Whether a vertex over `(x, y)` is an isomorphism or has a homotopy
/// inverse among the vertices over `(y, x)`.
pub fn vertex_membership(
    end: &EndSpace,
    a: usize,
    classes: &mut HashMap<(usize, usize), HashMap<usize, usize>>,
) -> Membership {
    if end.is_iso(0, a) {
        return Membership::Iso;
    }
    let (x, y) = end.ends(0, a);
    let mut class = |s: usize, t: usize, v: usize| -> usize {
        classes
            .entry((s, t))
            .or_insert_with(|| end.classes_over(s, t))[&v]
    };
    let (id_x, id_y) = (end.identity(0, x), end.identity(0, y));
    let (cx, cy) = (class(x, x, id_x), class(y, y, id_y));
    for b in end.over(0, y, x) {
        let ab = end.compose(0, a, b).expect("composable");
        let ba = end.compose(0, b, a).expect("composable");
        if class(x, x, ab) == cx && class(y, y, ba) == cy {
            return Membership::Yes;
        }
    }
    Membership::Unknown
}

/// `Eq`: a simplex is admitted as an isomorphism, or when every vertex
/// restriction is an isomorphism or a homotopy equivalence found by
/// exhaustive search over the finite vertex set; otherwise `Unknown`.
pub fn eq_space_bounded(end: &EndSpace, budget: &Budget) -> Result<MappingSpace> {
    let mut classes = HashMap::new();
    budget.check_simplices(end.sset.level_len(0), "equivalence search")?;
    let vertex: Vec<Membership> = (0..end.sset.level_len(0))
        .map(|a| vertex_membership(end, a, &mut classes))
        .collect();
    let membership = (0..=end.max_dim())
        .map(|n| {
            (0..end.sset.level_len(n))
                .map(|a| {
                    if end.is_iso(n, a) {
                        Membership::Iso
                    } else if (0..=n)
                        .all(|v| vertex[end.sset.apply(n, a, &[v as u8])] != Membership::Unknown)
                    {
                        Membership::Yes
                    } else {
                        Membership::Unknown
                    }
                })
                .collect()
        })
        .collect();
    subspace(end, MappingKind::Eq, membership)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{disjoint_union, standard_simplex};

    fn b() -> Budget {
        Budget::default()
    }

    fn two_points(n: usize) -> Arc<TruncatedSimplicialSet> {
        let pt = standard_simplex(0, n).sset().clone();
        Arc::new(disjoint_union(&pt, &pt).unwrap())
    }

    #[test]
    fn two_point_fibre_over_a_point() {
        let pt = standard_simplex(0, 2).sset().clone();
        let p = SimplicialMap::to_terminal(two_points(2), pt);
        let end = end_space(&p, &b()).unwrap();
        assert_eq!(end.sset.level_sizes(), vec![4, 4, 4]);
        let iso = iso_space(&end).unwrap();
        assert_eq!(iso.sset().level_sizes(), vec![2, 2, 2]);
        let eq = eq_space_bounded(&end, &b()).unwrap();
        assert_eq!(eq.sset().level_sizes(), vec![2, 2, 2]);
        assert_eq!(
            end.classes_over(0, 0)
                .values()
                .collect::<std::collections::HashSet<_>>()
                .len(),
            4
        );
    }

    #[test]
    fn identity_and_empty_fibrations() {
        let u = two_points(1);
        let id = SimplicialMap::identity(u.clone());
        let end = end_space(&id, &b()).unwrap();
        assert_eq!(end.sset.level_sizes(), vec![4, 4]);
        assert!((0..4).all(|a| end.is_iso(0, a)));
        let empty = Arc::new(TruncatedSimplicialSet::empty(1));
        let p = SimplicialMap::new(empty, u, vec![vec![], vec![]]).unwrap();
        let end = end_space(&p, &b()).unwrap();
        assert_eq!(end.sset.level_sizes(), vec![4, 4]);
    }

    #[test]
    fn discrete_base_has_one_iso_per_pair() {
        let u = two_points(1);
        let p = SimplicialMap::identity(u);
        let end = end_space(&p, &b()).unwrap();
        let iso = iso_space(&end).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(
                    end.over(0, x, y)
                        .iter()
                        .filter(|&&a| iso.contains(0, a))
                        .count(),
                    1
                );
            }
        }
    }

    #[test]
    fn constant_self_maps_of_the_interval_are_equivalences() {
        let d1 = standard_simplex(1, 2).sset().clone();
        let pt = standard_simplex(0, 2).sset().clone();
        let p = SimplicialMap::to_terminal(d1, pt);
        let end = end_space(&p, &b()).unwrap();
        assert_eq!(end.sset.level_len(0), 3);
        let eq = eq_space_bounded(&end, &b()).unwrap();
        let verdicts: Vec<Membership> = eq.membership[0].clone();
        assert_eq!(
            verdicts.iter().filter(|&&m| m == Membership::Iso).count(),
            1
        );
        assert_eq!(
            verdicts.iter().filter(|&&m| m == Membership::Yes).count(),
            2
        );
    }

    #[test]
    fn composition_and_inverses() {
        let pt = standard_simplex(0, 1).sset().clone();
        let p = SimplicialMap::to_terminal(two_points(1), pt);
        let end = end_space(&p, &b()).unwrap();
        let id = end.identity(0, 0);
        for a in 0..4 {
            assert_eq!(end.compose(0, id, a), Some(a));
            if let Some(inv) = end.inverse(0, a) {
                assert_eq!(end.compose(0, a, inv), Some(id));
            }
        }
    }
}
