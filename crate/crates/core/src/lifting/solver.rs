//! Exhaustive backtracking over assignments of the simplices of `B` outside
//! `A`, in increasing dimension and identifier order.
//!
//! Degenerate simplices are forced by the values on lower levels. After each
//! assignment, every free coface whose faces are all assigned is checked for
//! at least one candidate; this prunes without changing which solution is
//! found first.

use std::collections::HashMap;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::sset::TruncatedSimplicialSet;

const UNSET: usize = usize::MAX;

pub(crate) struct RawProblem<'a> {
    pub b: &'a TruncatedSimplicialSet,
    pub y: &'a TruncatedSimplicialSet,
    /// Values already fixed on the subcomplex `A`.
    pub fixed: Vec<Vec<Option<usize>>>,
    /// `B → X`.
    pub bottom: &'a [Vec<usize>],
    /// `Y → X`.
    pub right: &'a [Vec<usize>],
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Mode {
    First,
    All,
}

pub(crate) type Assignment = Vec<Vec<usize>>;

struct Searcher<'a> {
    p: &'a RawProblem<'a>,
    assign: Vec<Vec<usize>>,
    cofaces: Vec<Vec<Vec<usize>>>,
    vertex_fibers: HashMap<usize, Vec<usize>>,
}

impl<'a> Searcher<'a> {
    fn candidates(&self, n: usize, x: usize) -> Vec<usize> {
        let (b, y) = (self.p.b, self.p.y);
        let want = self.p.bottom[n][x];
        let sources = &b.degenerate_sources()[n][x];
        if let Some(&(j, tau)) = sources.first() {
            let v = y.degen(n - 1, j, self.assign[n - 1][tau]);
            let consistent = sources
                .iter()
                .all(|&(j2, t2)| y.degen(n - 1, j2, self.assign[n - 1][t2]) == v)
                && self.p.right[n][v] == want
                && (0..=n).all(|i| y.face(n, i, v) == self.assign[n - 1][b.face(n, i, x)]);
            return if consistent { vec![v] } else { vec![] };
        }
        if n == 0 {
            return self.vertex_fibers.get(&want).cloned().unwrap_or_default();
        }
        let faces: Vec<usize> = (0..=n)
            .map(|i| self.assign[n - 1][b.face(n, i, x)])
            .collect();
        y.with_faces(n, &faces)
            .iter()
            .copied()
            .filter(|&v| self.p.right[n][v] == want)
            .collect()
    }

    fn forward_ok(&self, n: usize, x: usize) -> bool {
        let (b, y) = (self.p.b, self.p.y);
        for &rho in &self.cofaces[n][x] {
            let faces: Vec<usize> = (0..=n + 1)
                .map(|i| self.assign[n][b.face(n + 1, i, rho)])
                .collect();
            if faces.contains(&UNSET) {
                continue;
            }
            let want = self.p.bottom[n + 1][rho];
            if !y
                .with_faces(n + 1, &faces)
                .iter()
                .any(|&v| self.p.right[n + 1][v] == want)
            {
                return false;
            }
        }
        true
    }
}

pub(crate) fn search(p: &RawProblem<'_>, mode: Mode, budget: &Budget) -> Result<Vec<Assignment>> {
    let b = p.b;
    let top = b.max_dim();
    let mut order = Vec::new();
    for n in 0..=top {
        for x in 0..b.level_len(n) {
            if p.fixed[n][x].is_none() {
                order.push((n, x));
            }
        }
    }
    let mut cofaces: Vec<Vec<Vec<usize>>> = (0..=top)
        .map(|n| vec![Vec::new(); b.level_len(n)])
        .collect();
    for n in 1..=top {
        for rho in 0..b.level_len(n) {
            if p.fixed[n][rho].is_some() || b.is_degenerate(n, rho) {
                continue;
            }
            for i in 0..=n {
                let f = b.face(n, i, rho);
                let list = &mut cofaces[n - 1][f];
                if list.last() != Some(&rho) {
                    list.push(rho);
                }
            }
        }
    }
    let mut vertex_fibers: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in 0..p.y.level_len(0) {
        vertex_fibers.entry(p.right[0][v]).or_default().push(v);
    }
    let mut s = Searcher {
        p,
        assign: p
            .fixed
            .iter()
            .map(|l| l.iter().map(|v| v.unwrap_or(UNSET)).collect())
            .collect(),
        cofaces,
        vertex_fibers,
    };

    let mut solutions = Vec::new();
    let mut frames: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut nodes: u64 = 0;
    loop {
        if frames.len() == order.len() {
            solutions.push(s.assign.clone());
            match mode {
                Mode::First => return Ok(solutions),
                Mode::All => {
                    if solutions.len() > budget.max_simplices {
                        return Err(Error::Budget {
                            what: "enumerating extensions".into(),
                            limit: budget.max_simplices as u64,
                        });
                    }
                }
            }
        } else {
            let (n, x) = order[frames.len()];
            frames.push((s.candidates(n, x), 0));
        }
        loop {
            let depth = frames.len();
            if depth == 0 {
                return Ok(solutions);
            }
            let (n, x) = order[depth - 1];
            let frame = frames.last_mut().unwrap();
            if frame.1 < frame.0.len() {
                let v = frame.0[frame.1];
                frame.1 += 1;
                nodes += 1;
                if nodes > budget.max_nodes {
                    return Err(budget.nodes_exceeded("searching for an extension"));
                }
                s.assign[n][x] = v;
                if s.forward_ok(n, x) {
                    break;
                }
            } else {
                s.assign[n][x] = UNSET;
                frames.pop();
            }
        }
    }
}
