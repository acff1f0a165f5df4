use std::collections::HashMap;
use std::sync::Arc;

use super::shapes::{codegeneracy, coface};
use super::{
    build_keyed, standard_simplex, SimplicialMap, StandardSimplex, SubcomplexInclusion,
    TruncatedSimplicialSet,
};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lifting::enumerate_maps;

/// `S × T` with its projections.
#[derive(Clone, Debug)]
pub struct Product {
    pub sset: Arc<TruncatedSimplicialSet>,
    pub left: SimplicialMap,
    pub right: SimplicialMap,
    pairs: Vec<Vec<(usize, usize)>>,
    index: Vec<HashMap<(usize, usize), usize>>,
}

impl Product {
    pub fn pair(&self, n: usize, x: usize) -> (usize, usize) {
        self.pairs[n][x]
    }

    pub fn find(&self, n: usize, a: usize, b: usize) -> Option<usize> {
        self.index[n].get(&(a, b)).copied()
    }
}

/// Levelwise fibre product `S ×_U T` with its projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub sset: Arc<TruncatedSimplicialSet>,
    pub proj1: SimplicialMap,
    pub proj2: SimplicialMap,
    pairs: Vec<Vec<(usize, usize)>>,
    index: Vec<HashMap<(usize, usize), usize>>,
}

impl Pullback {
    pub fn pair(&self, n: usize, x: usize) -> (usize, usize) {
        self.pairs[n][x]
    }

    pub fn find(&self, n: usize, a: usize, b: usize) -> Option<usize> {
        self.index[n].get(&(a, b)).copied()
    }
}

fn pair_name(
    s: &TruncatedSimplicialSet,
    t: &TruncatedSimplicialSet,
    n: usize,
    (a, b): (usize, usize),
) -> String {
    format!("({},{})", s.id(n, a), t.id(n, b))
}

fn paired(
    s: &Arc<TruncatedSimplicialSet>,
    t: &Arc<TruncatedSimplicialSet>,
    levels: Vec<Vec<(usize, usize)>>,
) -> Result<(
    Arc<TruncatedSimplicialSet>,
    SimplicialMap,
    SimplicialMap,
    Vec<Vec<(usize, usize)>>,
    Vec<HashMap<(usize, usize), usize>>,
)> {
    let n = s.max_dim();
    let keyed = build_keyed(
        n,
        levels,
        |k, &p| pair_name(s, t, k, p),
        |k, i, &(a, b)| (s.face(k, i, a), t.face(k, i, b)),
        |k, i, &(a, b)| (s.degen(k, i, a), t.degen(k, i, b)),
    )?;
    let sset = Arc::new(keyed.sset);
    let left = keyed
        .keys
        .iter()
        .map(|l| l.iter().map(|p| p.0).collect())
        .collect();
    let right = keyed
        .keys
        .iter()
        .map(|l| l.iter().map(|p| p.1).collect())
        .collect();
    let left = SimplicialMap::new_unchecked(sset.clone(), s.clone(), left)?;
    let right = SimplicialMap::new_unchecked(sset.clone(), t.clone(), right)?;
    Ok((sset, left, right, keyed.keys, keyed.index))
}

pub fn product(
    s: &Arc<TruncatedSimplicialSet>,
    t: &Arc<TruncatedSimplicialSet>,
) -> Result<Product> {
    if s.max_dim() != t.max_dim() {
        return Err(Error::Invalid("product of different truncations".into()));
    }
    let levels = (0..=s.max_dim())
        .map(|n| {
            (0..s.level_len(n))
                .flat_map(|a| (0..t.level_len(n)).map(move |b| (a, b)))
                .collect()
        })
        .collect();
    let (sset, left, right, pairs, index) = paired(s, t, levels)?;
    Ok(Product {
        sset,
        left,
        right,
        pairs,
        index,
    })
}

pub fn pullback(f: &SimplicialMap, g: &SimplicialMap) -> Result<Pullback> {
    if !Arc::ptr_eq(f.cod(), g.cod()) && **f.cod() != **g.cod() {
        return Err(Error::Invalid(
            "pullback of maps with different codomains".into(),
        ));
    }
    let (s, t) = (f.dom(), g.dom());
    let levels = (0..=s.max_dim())
        .map(|n| {
            let mut by_image: HashMap<usize, Vec<usize>> = HashMap::new();
            for b in 0..t.level_len(n) {
                by_image.entry(g.apply(n, b)).or_default().push(b);
            }
            (0..s.level_len(n))
                .flat_map(|a| {
                    by_image
                        .get(&f.apply(n, a))
                        .into_iter()
                        .flatten()
                        .map(move |&b| (a, b))
                })
                .collect()
        })
        .collect();
    let (sset, proj1, proj2, pairs, index) = paired(s, t, levels)?;
    Ok(Pullback {
        sset,
        proj1,
        proj2,
        pairs,
        index,
    })
}

/// The fibre `p^{-1}(c)` over a vertex, as a subcomplex of the domain.
pub fn fiber(p: &SimplicialMap, c: usize) -> Result<SubcomplexInclusion> {
    let base = p.cod();
    if c >= base.level_len(0) {
        return Err(Error::NotFound(format!("vertex {c} of the base")));
    }
    let over: Vec<usize> = (0..=base.max_dim())
        .map(|n| base.degenerate_vertex(c, n))
        .collect();
    SubcomplexInclusion::from_predicate(p.dom().clone(), |n, x| p.apply(n, x) == over[n])
}

/// Levelwise disjoint union; identifiers are prefixed `L.` and `R.`.
pub fn disjoint_union(
    s: &TruncatedSimplicialSet,
    t: &TruncatedSimplicialSet,
) -> Result<TruncatedSimplicialSet> {
    if s.max_dim() != t.max_dim() {
        return Err(Error::Invalid(
            "disjoint union of different truncations".into(),
        ));
    }
    let levels = (0..=s.max_dim())
        .map(|n| {
            (0..s.level_len(n))
                .map(|a| (false, a))
                .chain((0..t.level_len(n)).map(|b| (true, b)))
                .collect()
        })
        .collect();
    let side = |r: bool| if r { t } else { s };
    let keyed = build_keyed(
        s.max_dim(),
        levels,
        |n, &(r, x)| format!("{}.{}", if r { "R" } else { "L" }, side(r).id(n, x)),
        |n, i, &(r, x)| (r, side(r).face(n, i, x)),
        |n, i, &(r, x)| (r, side(r).degen(n, i, x)),
    )?;
    Ok(keyed.sset)
}

/// The constant simplicial set on a finite set: every simplex above level 0
/// is degenerate. Level-n copies are named `x^n`.
pub fn discrete_set(names: &[String], max_dim: usize) -> Result<TruncatedSimplicialSet> {
    let levels = (0..=max_dim).map(|_| (0..names.len()).collect()).collect();
    let keyed = build_keyed(
        max_dim,
        levels,
        |n, &x| {
            if n == 0 {
                names[x].clone()
            } else {
                format!("{}^{n}", names[x])
            }
        },
        |_, _, &x| x,
        |_, _, &x| x,
    )?;
    Ok(keyed.sset)
}

/// `T^S` truncated at `N`: level n enumerates the maps `S × Δ[n] → T`.
#[derive(Clone, Debug)]
pub struct Exponential {
    pub sset: Arc<TruncatedSimplicialSet>,
    pub source: Arc<TruncatedSimplicialSet>,
    pub target: Arc<TruncatedSimplicialSet>,
    simplices: Vec<StandardSimplex>,
    prisms: Vec<Product>,
    maps: Vec<Vec<Vec<Vec<usize>>>>,
    lookup: Vec<HashMap<Vec<Vec<usize>>, usize>>,
}

/// `S × Δ[m] → S × Δ[n]` induced by a monotone map `[m] → [n]` given as a
/// function on Δ-simplices.
fn prism_reindex(
    from: &Product,
    from_delta: &StandardSimplex,
    to: &Product,
    to_delta: &StandardSimplex,
    op: impl Fn(&[u8]) -> Vec<u8>,
) -> Vec<Vec<usize>> {
    let top = from.sset.max_dim();
    (0..=top)
        .map(|k| {
            (0..from.sset.level_len(k))
                .map(|x| {
                    let (a, t) = from.pair(k, x);
                    let image = op(from_delta.theta(k, t));
                    to.find(k, a, to_delta.index_of(&image))
                        .expect("prism reindexing stays inside")
                })
                .collect()
        })
        .collect()
}

pub fn exponential(
    s: &Arc<TruncatedSimplicialSet>,
    t: &Arc<TruncatedSimplicialSet>,
    n_top: usize,
    budget: &Budget,
) -> Result<Exponential> {
    if s.max_dim() != t.max_dim() {
        return Err(Error::Invalid(
            "exponential of different truncations".into(),
        ));
    }
    let m = s.max_dim();
    if n_top > m {
        return Err(Error::Truncation {
            requested: n_top,
            max_dim: m,
        });
    }
    let simplices: Vec<StandardSimplex> = (0..=n_top).map(|n| standard_simplex(n, m)).collect();
    let mut prisms = Vec::with_capacity(n_top + 1);
    let mut maps = Vec::with_capacity(n_top + 1);
    let mut total = 0usize;
    for delta in &simplices {
        let prism = product(s, delta.sset())?;
        let mut found = enumerate_maps(&prism.sset, t, budget)?;
        found.sort();
        total += found.len();
        budget.check_simplices(total, "enumerating an exponential")?;
        prisms.push(prism);
        maps.push(found);
    }
    // structure maps by precomposition with id × (co)face / (co)degeneracy
    let mut face_tables: Vec<Vec<Vec<Vec<usize>>>> = vec![Vec::new(); n_top + 1];
    let mut degen_tables: Vec<Vec<Vec<Vec<usize>>>> = vec![Vec::new(); n_top + 1];
    for n in 1..=n_top {
        for i in 0..=n {
            face_tables[n].push(prism_reindex(
                &prisms[n - 1],
                &simplices[n - 1],
                &prisms[n],
                &simplices[n],
                |th| coface(th, i),
            ));
        }
    }
    for n in 0..n_top {
        for i in 0..=n {
            degen_tables[n].push(prism_reindex(
                &prisms[n + 1],
                &simplices[n + 1],
                &prisms[n],
                &simplices[n],
                |th| codegeneracy(th, i),
            ));
        }
    }
    let precompose = |f: &Vec<Vec<usize>>, table: &Vec<Vec<usize>>| -> Vec<Vec<usize>> {
        table
            .iter()
            .enumerate()
            .map(|(k, level)| level.iter().map(|&x| f[k][x]).collect())
            .collect()
    };
    let width = maps
        .iter()
        .map(|l| l.len())
        .max()
        .unwrap_or(1)
        .max(1)
        .to_string()
        .len();
    let names: Vec<HashMap<Vec<Vec<usize>>, String>> = maps
        .iter()
        .enumerate()
        .map(|(n, l)| {
            l.iter()
                .enumerate()
                .map(|(k, f)| (f.clone(), format!("f{n}.{k:0width$}")))
                .collect()
        })
        .collect();
    let keyed = build_keyed(
        n_top,
        maps.clone(),
        |n, f| names[n][f].clone(),
        |n, i, f| precompose(f, &face_tables[n][i]),
        |n, i, f| precompose(f, &degen_tables[n][i]),
    )?;
    Ok(Exponential {
        sset: Arc::new(keyed.sset),
        source: s.clone(),
        target: t.clone(),
        simplices,
        prisms,
        maps: keyed.keys,
        lookup: keyed.index,
    })
}

impl Exponential {
    /// The map `S × Δ[n] → T` represented by an n-simplex.
    pub fn map_of(&self, n: usize, x: usize) -> &Vec<Vec<usize>> {
        &self.maps[n][x]
    }

    pub fn find(&self, n: usize, assignment: &Vec<Vec<usize>>) -> Option<usize> {
        self.lookup[n].get(assignment).copied()
    }

    pub fn prism(&self, n: usize) -> &Product {
        &self.prisms[n]
    }

    pub fn simplex(&self, n: usize) -> &StandardSimplex {
        &self.simplices[n]
    }

    /// Evaluation at a vertex `v` of the source: `f ↦ f(s^n v, ι_n)`, landing
    /// in the target truncated to this exponential's level count.
    pub fn evaluation(&self, v: usize) -> Result<SimplicialMap> {
        let top = self.sset.max_dim();
        let target = Arc::new(self.target.truncate(top)?);
        let assign = (0..=top)
            .map(|n| {
                let a = self.source.degenerate_vertex(v, n);
                let iota = self.simplices[n].top().expect("n <= truncation");
                let x = self.prisms[n]
                    .find(n, a, iota)
                    .expect("prism contains (v, ι)");
                self.maps[n].iter().map(|f| f[n][x]).collect()
            })
            .collect();
        SimplicialMap::new_unchecked(self.sset.clone(), target, assign)
    }

    /// The simplex of `T^S` constant along `S`: `(a, θ) ↦ θ^* y` for an
    /// n-simplex `y` of the target.
    pub fn constant_at(&self, n: usize, y: usize) -> Option<usize> {
        let prism = &self.prisms[n];
        let delta = &self.simplices[n];
        let assign: Vec<Vec<usize>> = (0..=prism.sset.max_dim())
            .map(|k| {
                (0..prism.sset.level_len(k))
                    .map(|x| {
                        let (_, th) = prism.pair(k, x);
                        self.target.apply(n, y, delta.theta(k, th))
                    })
                    .collect()
            })
            .collect();
        self.find(n, &assign)
    }
}
