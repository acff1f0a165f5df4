use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::sset::{
    discrete_set, product, pullback, Product, Pullback, SimplicialMap, TruncatedSimplicialSet,
    ValidationReport,
};

/// A simplicial groupoid: objects, arrows and structure maps, each level an
/// ordinary groupoid.
///
/// Composition is written diagrammatically: `then(n, g, h)` is "g, then h",
/// defined when `t(g) = s(h)`.
#[derive(Clone, Debug)]
pub struct SimplicialGroupoid {
    pub ob: Arc<TruncatedSimplicialSet>,
    pub ar: Arc<TruncatedSimplicialSet>,
    pub source: SimplicialMap,
    pub target: SimplicialMap,
    pub unit: SimplicialMap,
    pub inverse: SimplicialMap,
    /// Pairs `(g, h)` with `t(g) = s(h)`.
    pub composable: Pullback,
    pub compose: SimplicialMap,
}

impl SimplicialGroupoid {
    /// Assembles a groupoid from level tables; nothing beyond table shapes is
    /// checked here, see `validate_groupoid`.
    pub fn from_parts<F>(
        ob: Arc<TruncatedSimplicialSet>,
        ar: Arc<TruncatedSimplicialSet>,
        source: Vec<Vec<usize>>,
        target: Vec<Vec<usize>>,
        unit: Vec<Vec<usize>>,
        inverse: Vec<Vec<usize>>,
        compose: F,
    ) -> Result<Self>
    where
        F: Fn(usize, usize, usize) -> Option<usize>,
    {
        let source = SimplicialMap::new_unchecked(ar.clone(), ob.clone(), source)?;
        let target = SimplicialMap::new_unchecked(ar.clone(), ob.clone(), target)?;
        let unit = SimplicialMap::new_unchecked(ob.clone(), ar.clone(), unit)?;
        let inverse = SimplicialMap::new_unchecked(ar.clone(), ar.clone(), inverse)?;
        let composable = pullback(&target, &source)?;
        let assign = (0..=ar.max_dim())
            .map(|n| {
                (0..composable.sset.level_len(n))
                    .map(|w| {
                        let (g, h) = composable.pair(n, w);
                        compose(n, g, h).ok_or_else(|| {
                            Error::Invalid(format!(
                                "no composite of '{}' then '{}'",
                                ar.id(n, g),
                                ar.id(n, h)
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let compose = SimplicialMap::new_unchecked(composable.sset.clone(), ar.clone(), assign)?;
        Ok(SimplicialGroupoid {
            ob,
            ar,
            source,
            target,
            unit,
            inverse,
            composable,
            compose,
        })
    }

    pub fn max_dim(&self) -> usize {
        self.ob.max_dim()
    }

    pub fn src(&self, n: usize, g: usize) -> usize {
        self.source.apply(n, g)
    }

    pub fn tgt(&self, n: usize, g: usize) -> usize {
        self.target.apply(n, g)
    }

    pub fn id_at(&self, n: usize, x: usize) -> usize {
        self.unit.apply(n, x)
    }

    pub fn inv(&self, n: usize, g: usize) -> usize {
        self.inverse.apply(n, g)
    }

    /// `g` then `h`, if composable.
    pub fn then(&self, n: usize, g: usize, h: usize) -> Option<usize> {
        self.composable
            .find(n, g, h)
            .map(|w| self.compose.apply(n, w))
    }

    /// Composite of a nonempty composable chain, first arrow first.
    pub fn then_all(&self, n: usize, chain: &[usize]) -> Option<usize> {
        let (&first, rest) = chain.split_first()?;
        rest.iter().try_fold(first, |acc, &g| self.then(n, acc, g))
    }

    /// Arrows `a → b` at level `n`.
    pub fn hom(&self, n: usize, a: usize, b: usize) -> Vec<usize> {
        (0..self.ar.level_len(n))
            .filter(|&g| self.src(n, g) == a && self.tgt(n, g) == b)
            .collect()
    }

    /// `(s, t): ar → ob × ob`.
    pub fn pair_map(&self) -> Result<(Product, SimplicialMap)> {
        let obob = product(&self.ob, &self.ob)?;
        let assign = (0..=self.max_dim())
            .map(|n| {
                (0..self.ar.level_len(n))
                    .map(|g| {
                        obob.find(n, self.src(n, g), self.tgt(n, g))
                            .expect("pairs exist")
                    })
                    .collect()
            })
            .collect();
        let map = SimplicialMap::new_unchecked(self.ar.clone(), obob.sset.clone(), assign)?;
        Ok((obob, map))
    }

    /// Whether every object simplex above level 0 is degenerate.
    pub fn has_discrete_objects(&self) -> bool {
        (1..=self.max_dim()).all(|n| (0..self.ob.level_len(n)).all(|x| self.ob.is_degenerate(n, x)))
    }
}

/// Every groupoid axiom that fails, levelwise, by identifier.
pub fn validate_groupoid(g: &SimplicialGroupoid) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (name, map) in [
        ("source", &g.source),
        ("target", &g.target),
        ("unit", &g.unit),
        ("inverse", &g.inverse),
        ("composition", &g.compose),
    ] {
        report.extend_prefixed(name, map.validate());
    }
    let (ob, ar) = (&g.ob, &g.ar);
    for n in 0..=g.max_dim() {
        for x in 0..ob.level_len(n) {
            let e = g.id_at(n, x);
            if g.src(n, e) != x || g.tgt(n, e) != x {
                report.push(format!(
                    "unit at '{}' is not an endomorphism of it",
                    ob.id(n, x)
                ));
            }
        }
        for a in 0..ar.level_len(n) {
            let (s, t) = (g.src(n, a), g.tgt(n, a));
            let id = ar.id(n, a);
            if g.then(n, g.id_at(n, s), a) != Some(a) || g.then(n, a, g.id_at(n, t)) != Some(a) {
                report.push(format!("unit law fails at '{id}'"));
            }
            let b = g.inv(n, a);
            if g.src(n, b) != t
                || g.tgt(n, b) != s
                || g.then(n, a, b) != Some(g.id_at(n, s))
                || g.then(n, b, a) != Some(g.id_at(n, t))
            {
                report.push(format!("inverse law fails at '{id}'"));
            }
        }
        for w in 0..g.composable.sset.level_len(n) {
            let (a, b) = g.composable.pair(n, w);
            let ab = g.compose.apply(n, w);
            if g.src(n, ab) != g.src(n, a) || g.tgt(n, ab) != g.tgt(n, b) {
                report.push(format!(
                    "composite of '{}' then '{}' has the wrong ends",
                    ar.id(n, a),
                    ar.id(n, b)
                ));
                continue;
            }
            for c in 0..ar.level_len(n) {
                if g.src(n, c) != g.tgt(n, b) {
                    continue;
                }
                let left = g.then(n, ab, c);
                let right = g.then(n, b, c).and_then(|bc| g.then(n, a, bc));
                if left != right {
                    report.push(format!(
                        "associativity fails at ('{}', '{}', '{}')",
                        ar.id(n, a),
                        ar.id(n, b),
                        ar.id(n, c)
                    ));
                }
            }
        }
    }
    report
}

/// A groupoid constant in the simplicial direction, from level-0 data.
///
/// `arrows[i] = (name, source, target)`; `compose(a, b)` is "a then b".
pub fn constant_groupoid<C, E, I>(
    objects: &[String],
    arrows: &[(String, usize, usize)],
    compose: C,
    unit: E,
    inverse: I,
    max_dim: usize,
) -> Result<SimplicialGroupoid>
where
    C: Fn(usize, usize) -> usize,
    E: Fn(usize) -> usize,
    I: Fn(usize) -> usize,
{
    let ob = Arc::new(discrete_set(objects, max_dim)?);
    let names: Vec<String> = arrows.iter().map(|a| a.0.clone()).collect();
    let ar = Arc::new(discrete_set(&names, max_dim)?);
    // data index of a sset simplex, through its vertex
    let ob_data: Vec<usize> = (0..objects.len())
        .map(|i| ob.index_of(0, &objects[i]).unwrap())
        .collect();
    let ar_data: Vec<usize> = (0..arrows.len())
        .map(|i| ar.index_of(0, &names[i]).unwrap())
        .collect();
    let invert = |v: &[usize]| {
        let mut out = vec![0; v.len()];
        for (i, &x) in v.iter().enumerate() {
            out[x] = i;
        }
        out
    };
    let (ob_of, ar_of) = (invert(&ob_data), invert(&ar_data));
    let vertex = |s: &TruncatedSimplicialSet, n: usize, x: usize| s.apply(n, x, &[0]);
    let ob_at = |n: usize, i: usize| ob.degenerate_vertex(ob_data[i], n);
    let ar_at = |n: usize, i: usize| ar.degenerate_vertex(ar_data[i], n);
    let levels = |len: usize, f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
        (0..=max_dim)
            .map(|n| (0..len).map(|x| f(n, x)).collect())
            .collect()
    };
    let na = ar.level_len(0);
    let source = levels(na, &|n, x| ob_at(n, arrows[ar_of[vertex(&ar, n, x)]].1));
    let target = levels(na, &|n, x| ob_at(n, arrows[ar_of[vertex(&ar, n, x)]].2));
    let inv = levels(na, &|n, x| ar_at(n, inverse(ar_of[vertex(&ar, n, x)])));
    let unit_t = levels(ob.level_len(0), &|n, x| {
        ar_at(n, unit(ob_of[vertex(&ob, n, x)]))
    });
    let g = SimplicialGroupoid::from_parts(
        ob.clone(),
        ar.clone(),
        source,
        target,
        unit_t,
        inv,
        |n, a, b| {
            Some(ar_at(
                n,
                compose(ar_of[vertex(&ar, n, a)], ar_of[vertex(&ar, n, b)]),
            ))
        },
    )?;
    Ok(g)
}

/// A group as a one-object groupoid on `*`; "g then h" is `g·h`.
pub fn constant_group(group: &FiniteGroup, max_dim: usize) -> Result<SimplicialGroupoid> {
    let arrows: Vec<(String, usize, usize)> =
        group.names().iter().map(|n| (n.clone(), 0, 0)).collect();
    constant_groupoid(
        &["*".to_string()],
        &arrows,
        |a, b| group.mul(a, b),
        |_| group.identity(),
        |a| group.inv(a),
        max_dim,
    )
}

/// Exactly one arrow `a>b` between any two objects.
pub fn indiscrete(objects: &[String], max_dim: usize) -> Result<SimplicialGroupoid> {
    let k = objects.len();
    let arrows: Vec<(String, usize, usize)> = (0..k)
        .flat_map(|a| (0..k).map(move |b| (a, b)))
        .map(|(a, b)| (format!("{}>{}", objects[a], objects[b]), a, b))
        .collect();
    constant_groupoid(
        objects,
        &arrows,
        |x, y| (x / k) * k + y % k,
        |a| a * k + a,
        |x| (x % k) * k + x / k,
        max_dim,
    )
}

/// Identity arrows only, named `a>a`.
pub fn discrete(objects: &[String], max_dim: usize) -> Result<SimplicialGroupoid> {
    let arrows: Vec<(String, usize, usize)> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| (format!("{o}>{o}"), i, i))
        .collect();
    constant_groupoid(objects, &arrows, |a, _| a, |a| a, |a| a, max_dim)
}

/// Object names `a`, `b`, ... for the demos.
pub fn letters(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("o{i}")
            }
        })
        .collect()
}
