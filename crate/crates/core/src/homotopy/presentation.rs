use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::components::pi0;
use super::coset::{presented_order, GroupOrder};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::sset::TruncatedSimplicialSet;
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

/// Edge-path presentation: one generator per 1-simplex, degenerate and
/// spanning-tree edges trivial, and for each nondegenerate 2-simplex `σ` the
/// relation `d_2σ · d_0σ · (d_1σ)^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupPresentation {
    pub base: String,
    pub generators: Vec<String>,
    pub trivial: Vec<bool>,
    pub tree: Vec<String>,
    pub relations: Vec<Vec<Letter>>,
}

impl GroupPresentation {
    /// Evaluates a word under a labelling of the generators.
    pub fn evaluate(&self, group: &FiniteGroup, labels: &[usize], word: &[Letter]) -> usize {
        word.iter().fold(group.identity(), |acc, l| {
            let x = labels[l.generator];
            group.mul(acc, if l.inverse { group.inv(x) } else { x })
        })
    }
}

/// Presentation of the fundamental group at `v`; the spanning tree is grown
/// breadth-first from `v`, scanning edges in identifier order.
pub fn fundamental_group_presentation(
    s: &TruncatedSimplicialSet,
    v: usize,
) -> Result<GroupPresentation> {
    if s.max_dim() < 2 {
        return Err(Error::Truncation {
            requested: 2,
            max_dim: s.max_dim(),
        });
    }
    if v >= s.level_len(0) {
        return Err(Error::NotFound(format!("base vertex {v}")));
    }
    if pi0(s).count() != 1 {
        return Err(Error::Invalid(
            "fundamental group presentation of a disconnected space".into(),
        ));
    }
    let edges = s.level_len(1);
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); s.level_len(0)];
    for e in 0..edges {
        if s.is_degenerate(1, e) {
            continue;
        }
        incident[s.face(1, 1, e)].push(e);
        incident[s.face(1, 0, e)].push(e);
    }
    let mut trivial: Vec<bool> = (0..edges).map(|e| s.is_degenerate(1, e)).collect();
    let mut seen = vec![false; s.level_len(0)];
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([v]);
    seen[v] = true;
    while let Some(a) = queue.pop_front() {
        for &e in &incident[a] {
            let other = if s.face(1, 1, e) == a {
                s.face(1, 0, e)
            } else {
                s.face(1, 1, e)
            };
            if !seen[other] {
                seen[other] = true;
                trivial[e] = true;
                tree.push(s.id(1, e).to_string());
                queue.push_back(other);
            }
        }
    }
    let relations = (0..s.level_len(2))
        .filter(|&x| !s.is_degenerate(2, x))
        .map(|x| {
            vec![
                Letter {
                    generator: s.face(2, 2, x),
                    inverse: false,
                },
                Letter {
                    generator: s.face(2, 0, x),
                    inverse: false,
                },
                Letter {
                    generator: s.face(2, 1, x),
                    inverse: true,
                },
            ]
        })
        .collect();
    Ok(GroupPresentation {
        base: s.id(0, v).to_string(),
        generators: s.ids(1).to_vec(),
        trivial,
        tree,
        relations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    Iso,
    NotIso,
    Unknown,
}

impl Comparison {
    pub fn verdict(self) -> Verdict {
        match self {
            Comparison::Iso => Verdict::Pass,
            Comparison::NotIso => Verdict::Fail,
            Comparison::Unknown => Verdict::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonReport {
    pub verdict: Comparison,
    pub reason: String,
    pub group_order: usize,
    pub presented_order: GroupOrder,
}

/// Decides whether the labelling `generator ↦ labels[generator]` induces an
/// isomorphism from the presented group onto `group`.
///
/// Iso needs: trivial generators map to the identity, every relation holds,
/// the labels generate `group`, and coset enumeration finds exactly
/// `|group|` cosets within `bound`.
pub fn reduce_table_presentation(
    pres: &GroupPresentation,
    group: &FiniteGroup,
    labels: &[usize],
    bound: usize,
) -> ComparisonReport {
    let report = |verdict, reason: String, presented_order| ComparisonReport {
        verdict,
        reason,
        group_order: group.order(),
        presented_order,
    };
    if labels.len() != pres.generators.len() || labels.iter().any(|&l| l >= group.order()) {
        return report(
            Comparison::Unknown,
            "labelling does not fit the presentation".into(),
            GroupOrder::Unknown,
        );
    }
    if let Some(g) = (0..labels.len()).find(|&g| pres.trivial[g] && labels[g] != group.identity()) {
        return report(
            Comparison::NotIso,
            format!(
                "trivial generator '{}' has a non-identity label",
                pres.generators[g]
            ),
            GroupOrder::Unknown,
        );
    }
    if let Some(r) = pres
        .relations
        .iter()
        .position(|w| pres.evaluate(group, labels, w) != group.identity())
    {
        return report(
            Comparison::NotIso,
            format!("relation {r} is violated by the labelling"),
            GroupOrder::Unknown,
        );
    }
    let order = presented_order(pres, bound);
    if !group.generated(labels).iter().all(|&b| b) {
        return report(
            Comparison::NotIso,
            "labels do not generate the group".into(),
            order,
        );
    }
    match order {
        GroupOrder::Finite(n) if n == group.order() => report(
            Comparison::Iso,
            "orders agree and the labelling is onto".into(),
            order,
        ),
        GroupOrder::Finite(n) => report(
            Comparison::NotIso,
            format!("presented group has order {n}"),
            order,
        ),
        GroupOrder::Infinite => report(
            Comparison::NotIso,
            "a generator occurs in no relation, so the presented group is infinite".into(),
            order,
        ),
        GroupOrder::Unknown => report(
            Comparison::Unknown,
            format!("coset bound {bound} exhausted"),
            order,
        ),
    }
}
