use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use univalent_completion::group::FiniteGroup;
use univalent_completion::io::{self, Kind};
use univalent_completion::lifting::{check_kan_fibration, for_each_horn_problem, terminal_map};
use univalent_completion::sgpd::{
    classifying_space, constant_group, indiscrete, letters, recenter, SimplicialGroupoid,
    StarSimplex,
};
use univalent_completion::sset::{
    standard_simplex, validate_sset, SimplicialMap, SubcomplexInclusion,
};
use univalent_completion::univalence::{check_minimal, minimalize};
use univalent_completion::Budget;

/// Generators of a subcomplex of Δ[3] as nonempty vertex sets (bitmasks).
fn generators() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(1u8..16, 1..5)
}

fn subcomplex(masks: &[u8], max_dim: usize) -> SubcomplexInclusion {
    let d = standard_simplex(3, max_dim);
    let s = d.sset().clone();
    // a generator above the truncation contributes its top faces
    let masks: Vec<u8> = masks
        .iter()
        .flat_map(|&m| {
            if m.count_ones() as usize > max_dim + 1 {
                (0..4)
                    .filter(|v| m & (1 << v) != 0)
                    .map(|v| m & !(1 << v))
                    .collect()
            } else {
                vec![m]
            }
        })
        .collect();
    let gens: Vec<(usize, usize)> = masks
        .iter()
        .map(|&m| {
            let verts: Vec<usize> = (0..4).filter(|v| m & (1 << v) != 0).collect();
            let n = verts.len() - 1;
            let x = (0..s.level_len(n))
                .find(|&x| s.vertices_of(n, x) == verts)
                .expect("every increasing vertex list is a simplex");
            (n, x)
        })
        .collect();
    SubcomplexInclusion::generated(s, &gens).unwrap()
}

/// Solvable iff some simplex over the base has the given faces.
fn oracle_fails(p: &SimplicialMap, max_dim: usize) -> usize {
    let mut fails = 0;
    for_each_horn_problem(p, max_dim, |h| {
        let y = p.dom();
        let found = (0..y.level_len(h.n)).any(|s| {
            p.apply(h.n, s) == h.base
                && h.faces
                    .iter()
                    .enumerate()
                    .all(|(i, f)| f.is_none_or(|f| y.face(h.n, i, s) == f))
        });
        fails += usize::from(!found);
        Ok(())
    })
    .unwrap();
    fails
}

fn groupoid(choice: u8) -> SimplicialGroupoid {
    match choice % 4 {
        0 => constant_group(&FiniteGroup::cyclic(2), 3).unwrap(),
        1 => constant_group(&FiniteGroup::cyclic(3), 3).unwrap(),
        2 => constant_group(&FiniteGroup::symmetric3(), 3).unwrap(),
        _ => indiscrete(&letters(2), 3).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subcomplexes_are_the_down_closure(masks in generators()) {
        let sub = subcomplex(&masks, 3);
        let s = sub.dom();
        prop_assert!(validate_sset(s).is_valid());
        // a simplex lies in it iff its vertex set lies under a generator
        let amb = standard_simplex(3, 3);
        for n in 0..=3 {
            let want = (0..amb.sset().level_len(n))
                .filter(|&x| {
                    let vs: u8 = amb.sset().vertices_of(n, x).iter().map(|v| 1u8 << v).fold(0, |a, b| a | b);
                    masks.iter().any(|&m| vs & m == vs)
                })
                .count();
            prop_assert_eq!(s.level_len(n), want);
        }
    }

    #[test]
    fn kan_certificates_match_the_oracle(masks in generators()) {
        let sub = subcomplex(&masks, 2);
        let t = terminal_map(sub.dom());
        let cert = check_kan_fibration(&t, 2, &Budget::default()).unwrap();
        prop_assert_eq!(cert.failures.len(), oracle_fails(&t, 2));
    }

    #[test]
    fn classifying_spaces_of_cyclic_groups(k in 1usize..5) {
        let g = Arc::new(constant_group(&FiniteGroup::cyclic(k), 3).unwrap());
        let bg = classifying_space(&g, &Budget::default()).unwrap();
        let want: Vec<usize> = (0..=3u32).map(|n| k.pow(n)).collect();
        prop_assert_eq!(bg.sset.level_sizes(), want);
    }

    #[test]
    fn recentering_keeps_the_simplex(choice in any::<u8>(), q in 0usize..4, pick in any::<usize>(), k in 0usize..4, k2 in 0usize..4) {
        let g = Arc::new(groupoid(choice));
        let bg = classifying_space(&g, &Budget::default()).unwrap();
        let (k, k2) = (k.min(q), k2.min(q));
        let x = pick % bg.sset.level_len(q);
        let key = bg.key(q, x).to_vec();
        let star = StarSimplex::from_string(&g, q, &key, k);
        let moved = recenter(&g, &star, k2);
        prop_assert_eq!(&moved, &StarSimplex::from_string(&g, q, &key, k2));
        prop_assert_eq!(moved.to_string_key(&g), Some(key));
    }

    #[test]
    fn documents_round_trip(masks in generators()) {
        let sub = subcomplex(&masks, 2);
        let doc = io::document(Kind::Map, &io::map_doc(sub.map()));
        let text = io::serialize(&doc);
        let back = io::read_map(&io::payload(&io::parse(&text).unwrap(), Kind::Map).unwrap()).unwrap();
        prop_assert_eq!(io::serialize(&io::document(Kind::Map, &io::map_doc(&back))), text);
    }

    #[test]
    fn minimalization_is_idempotent(masks in generators()) {
        let t = terminal_map(subcomplex(&masks, 2).dom());
        let once = minimalize(&t, &Budget::default()).unwrap();
        prop_assert!(check_minimal(&once.fibration, &Budget::default()).unwrap().minimal());
        let twice = minimalize(&once.fibration, &Budget::default()).unwrap();
        for n in 0..=2 {
            let a: BTreeSet<_> = once.inclusion.dom().ids(n).iter().collect();
            let b: BTreeSet<_> = twice.inclusion.dom().ids(n).iter().collect();
            prop_assert_eq!(a, b);
        }
    }
}
