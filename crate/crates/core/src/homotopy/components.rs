use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::sset::{SubcomplexInclusion, TruncatedSimplicialSet};

/// Vertex classes under the equivalence generated by `d_1 e ~ d_0 e`.
/// Classes are numbered by their least vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Components {
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Classes as identifier lists.
    pub fn labelled(&self, s: &TruncatedSimplicialSet) -> Vec<Vec<String>> {
        self.classes
            .iter()
            .map(|c| c.iter().map(|&v| s.id(0, v).to_string()).collect())
            .collect()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn pi0(s: &TruncatedSimplicialSet) -> Components {
    let v = s.level_len(0);
    let mut parent: Vec<usize> = (0..v).collect();
    if s.max_dim() >= 1 {
        for e in 0..s.level_len(1) {
            let (a, b) = (
                find(&mut parent, s.face(1, 1, e)),
                find(&mut parent, s.face(1, 0, e)),
            );
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut class_of = vec![usize::MAX; v];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_class = vec![usize::MAX; v];
    for x in 0..v {
        let r = find(&mut parent, x);
        if root_class[r] == usize::MAX {
            root_class[r] = classes.len();
            classes.push(Vec::new());
        }
        class_of[x] = root_class[r];
        classes[root_class[r]].push(x);
    }
    Components { class_of, classes }
}

/// The connected component of a vertex, as a subcomplex.
pub fn component(s: &Arc<TruncatedSimplicialSet>, v: usize) -> Result<SubcomplexInclusion> {
    let comps = pi0(s);
    let c = comps.class_of[v];
    SubcomplexInclusion::from_predicate(s.clone(), |n, x| {
        let first = s.apply(n, x, &[0]);
        comps.class_of[first] == c
    })
}
