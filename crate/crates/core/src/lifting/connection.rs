use super::kan::KanCertificate;
use super::problem::{solve_extension, LiftingProblem};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::sset::{
    exponential, pullback, standard_simplex, Exponential, Pullback, SimplicialMap, StandardSimplex,
    SubcomplexInclusion, ValidationReport,
};

/// A diagonal `∇: U^{Δ[1]} ×_U E → E` that is the identity on constant paths
/// and lies over the endpoint evaluation.
#[derive(Clone, Debug)]
pub struct Connection {
    /// `p` truncated to the connection's dimension.
    pub fibration: SimplicialMap,
    pub interval: StandardSimplex,
    pub paths: Exponential,
    pub ev0: SimplicialMap,
    pub ev1: SimplicialMap,
    /// Pairs (path, e) with `ev0(path) = p(e)`.
    pub domain: Pullback,
    /// `E` as the constant-path subcomplex of the domain.
    pub constant: SubcomplexInclusion,
    pub map: SimplicialMap,
}

pub fn build_connection(
    p: &SimplicialMap,
    cert: &KanCertificate,
    n: usize,
    budget: &Budget,
) -> Result<Connection> {
    if !cert.is_about(p) || !cert.covers(n) {
        return Err(Error::Invalid(format!(
            "connection needs a passing fibration certificate up to dimension {n}"
        )));
    }
    let pn = if n == p.dom().max_dim() {
        p.clone()
    } else {
        p.truncate(n)?
    };
    let interval = standard_simplex(1, n);
    let paths = exponential(interval.sset(), pn.cod(), n, budget)?;
    let ev0 = paths.evaluation(interval.vertex(0))?;
    let ev1 = paths.evaluation(interval.vertex(1))?;
    let domain = pullback(&ev0, &pn)?;
    let u = pn.cod();
    let constants: Vec<Vec<usize>> = (0..=n)
        .map(|m| {
            (0..u.level_len(m))
                .map(|x| paths.constant_at(m, x).expect("constant paths are maps"))
                .collect()
        })
        .collect();
    let constant = SubcomplexInclusion::from_predicate(domain.sset.clone(), |m, w| {
        let (gamma, e) = domain.pair(m, w);
        constants[m][pn.apply(m, e)] == gamma
    })?;
    let top = constant.map().then(&domain.proj2)?;
    let bottom = domain.proj1.then(&ev1)?;
    let problem = LiftingProblem::new(constant.clone(), top, bottom, pn.clone())?;
    let map = solve_extension(&problem, budget)?.ok_or_else(|| {
        Error::Failed(format!(
            "no connection extends the constant paths within truncation {n}"
        ))
    })?;
    Ok(Connection {
        fibration: pn,
        interval,
        paths,
        ev0,
        ev1,
        domain,
        constant,
        map,
    })
}

impl Connection {
    pub fn max_dim(&self) -> usize {
        self.map.dom().max_dim()
    }

    /// Both commutation equations, checked levelwise.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        report.extend_prefixed("connection", self.map.validate());
        let d = &self.domain;
        for m in 0..=self.max_dim() {
            for (a, &w) in self.constant.map().level(m).iter().enumerate() {
                let (_, e) = d.pair(m, w);
                if self.map.apply(m, w) != e {
                    report.push(format!(
                        "not the identity on the constant path at '{}'",
                        self.constant.dom().id(m, a)
                    ));
                }
            }
            for w in 0..d.sset.level_len(m) {
                let (gamma, _) = d.pair(m, w);
                if self.fibration.apply(m, self.map.apply(m, w)) != self.ev1.apply(m, gamma) {
                    report.push(format!("not over the endpoint at '{}'", d.sset.id(m, w)));
                }
            }
        }
        report
    }

    /// The path (vertex of `U^{Δ[1]}`) traversing the edge `u`.
    pub fn path_of_edge(&self, u: usize) -> Option<usize> {
        let prism = self.paths.prism(0);
        let edge = self.interval.index_of(&[0, 1]);
        let point = self.paths.simplex(0).index_of(&[0, 0]);
        let x = prism.find(1, edge, point)?;
        (0..self.paths.sset.level_len(0)).find(|&g| self.paths.map_of(0, g)[1][x] == u)
    }

    /// `∇(s^m γ, e)` for an m-simplex `e` over the start of the path `γ`.
    pub fn transport(&self, gamma: usize, m: usize, e: usize) -> Option<usize> {
        let g = self.paths.sset.degenerate_vertex(gamma, m);
        self.domain.find(m, g, e).map(|w| self.map.apply(m, w))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lifting::check_kan_fibration;
    use crate::sset::{disjoint_union, product, TruncatedSimplicialSet};

    fn two_points(n: usize) -> Arc<TruncatedSimplicialSet> {
        let pt = standard_simplex(0, n).sset().clone();
        Arc::new(disjoint_union(&pt, &pt).unwrap())
    }

    #[test]
    fn over_a_point_the_connection_is_the_identity() {
        let e = two_points(1);
        let pt = standard_simplex(0, 1).sset().clone();
        let p = SimplicialMap::to_terminal(e.clone(), pt);
        let b = Budget::default();
        let cert = check_kan_fibration(&p, 1, &b).unwrap();
        let c = build_connection(&p, &cert, 1, &b).unwrap();
        assert!(c.validate().is_valid());
        assert_eq!(c.paths.sset.level_sizes(), vec![1, 1]);
        for x in 0..2 {
            assert_eq!(c.transport(0, 0, x), Some(x));
        }
    }

    #[test]
    fn trivial_bundle_transport_is_the_identity_on_the_fibre() {
        let n = 2;
        let u = standard_simplex(1, n).sset().clone();
        let prod = product(&u, &two_points(n)).unwrap();
        let p = prod.left.clone();
        let b = Budget::default();
        let cert = check_kan_fibration(&p, n, &b).unwrap();
        let c = build_connection(&p, &cert, n, &b).unwrap();
        assert!(c.validate().is_valid());
        let edge = u.index_of(1, "01").unwrap();
        let gamma = c.path_of_edge(edge).unwrap();
        for f in 0..2 {
            let start = prod.find(0, 0, f).unwrap();
            let end = c.transport(gamma, 0, start).unwrap();
            assert_eq!(prod.pair(0, end), (1, f));
        }
    }

    #[test]
    fn uncertified_input_is_refused() {
        let bd = crate::sset::boundary(1, 1);
        let b = Budget::default();
        let cert = check_kan_fibration(bd.map(), 1, &b).unwrap();
        assert!(build_connection(bd.map(), &cert, 1, &b).is_err());
    }
}
