use std::sync::Arc;

use univalent_completion::group::FiniteGroup;
use univalent_completion::homotopy::{
    fundamental_group_presentation, loop_space, pi0, reduce_table_presentation, Comparison,
    GroupOrder,
};
use univalent_completion::lifting::check_kan_complex;
use univalent_completion::sgpd::{
    classifying_space, constant_group, indiscrete, letters, ClassifyingSpace,
};
use univalent_completion::sset::standard_simplex;
use univalent_completion::Budget;

fn bg(group: &FiniteGroup, n: usize) -> ClassifyingSpace {
    let g = Arc::new(constant_group(group, n).unwrap());
    classifying_space(&g, &Budget::default()).unwrap()
}

/// The group element carried by each edge of `B` of a constant group.
fn edge_labels(space: &ClassifyingSpace, group: &FiniteGroup) -> Vec<usize> {
    let ar = &space.groupoid.ar;
    (0..space.sset.level_len(1))
        .map(|e| {
            let a = space.key(1, e)[0];
            let name = ar.id(1, a).trim_end_matches("^1");
            group.index_of(name).unwrap()
        })
        .collect()
}

#[test]
fn bz2_presents_z2() {
    let z2 = FiniteGroup::cyclic(2);
    let space = bg(&z2, 2);
    let pres = fundamental_group_presentation(&space.sset, 0).unwrap();
    let report = reduce_table_presentation(&pres, &z2, &edge_labels(&space, &z2), 100);
    assert_eq!(report.verdict, Comparison::Iso, "{}", report.reason);
    assert_eq!(report.presented_order, GroupOrder::Finite(2));
}

#[test]
fn bz3_does_not_present_z2() {
    let z2 = FiniteGroup::cyclic(2);
    let space = bg(&FiniteGroup::cyclic(3), 2);
    let pres = fundamental_group_presentation(&space.sset, 0).unwrap();
    for flip in 0..space.sset.level_len(1) {
        let labels: Vec<usize> = (0..space.sset.level_len(1))
            .map(|e| usize::from(e == flip))
            .collect();
        let report = reduce_table_presentation(&pres, &z2, &labels, 100);
        assert_eq!(report.verdict, Comparison::NotIso);
    }
}

#[test]
fn loops_on_bz2_have_two_components() {
    let space = bg(&FiniteGroup::cyclic(2), 2);
    let cert = check_kan_complex(&space.sset, 2, &Budget::default()).unwrap();
    let omega = loop_space(&space.sset, &cert, 0, 1, &Budget::default()).unwrap();
    assert_eq!(pi0(omega.sset()).count(), 2);
}

#[test]
fn classifying_space_of_an_indiscrete_groupoid_is_connected() {
    let g = Arc::new(indiscrete(&letters(3), 2).unwrap());
    let space = classifying_space(&g, &Budget::default()).unwrap();
    assert_eq!(space.sset.level_len(0), 3);
    assert_eq!(pi0(&space.sset).count(), 1);
}

#[test]
fn loops_on_a_point_are_a_point() {
    let pt = standard_simplex(0, 2).sset().clone();
    let cert = check_kan_complex(&pt, 2, &Budget::default()).unwrap();
    let omega = loop_space(&pt, &cert, 0, 1, &Budget::default()).unwrap();
    assert_eq!(omega.sset().level_sizes(), [1, 1]);
}
