use super::nerve::{ActionSpace, ClassifyingSpace, StarSimplex};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lifting::{
    lower_past, solve_extension, terminal_map, HornProblem, HornShapes, KanCertificate,
    LiftingProblem,
};
use crate::sset::SimplicialMap;

fn require(cert: &KanCertificate, map: &SimplicialMap, n: usize, what: &str) -> Result<()> {
    if !cert.is_about(map) || !cert.covers(n) {
        return Err(Error::Invalid(format!(
            "{what} needs a passing certificate up to dimension {n}"
        )));
    }
    Ok(())
}

/// Index of vertex `v` of `Δ[n]` inside the face `d_i`.
fn in_face(v: usize, i: usize) -> usize {
    if v < i {
        v
    } else {
        v - 1
    }
}

/// Fills a horn in `B𝔾` (a horn problem against `B𝔾 → Δ[0]`).
///
/// The faces are recentred at `k`; the centre object is a horn filler in
/// `ob`, and each arrow `h_j` is a lift against `s` over the union of the
/// faces other than `d_k` and `d_j`.
pub fn fill_horn_classifying(
    bg: &ClassifyingSpace,
    problem: &HornProblem,
    ob_cert: &KanCertificate,
    source_cert: &KanCertificate,
    shapes: &HornShapes,
    budget: &Budget,
) -> Result<usize> {
    let g = &bg.groupoid;
    let (n, k) = (problem.n, problem.k);
    require(ob_cert, &terminal_map(&g.ob), n, "the object space")?;
    require(source_cert, &g.source, n, "the source map")?;
    let stars: Vec<Option<StarSimplex>> = (0..=n)
        .map(|i| problem.faces[i].map(|y| bg.star(n - 1, y, in_face(k, i))))
        .collect();

    let center = HornProblem {
        n,
        k,
        base: 0,
        faces: stars.iter().map(|s| s.as_ref().map(|s| s.object)).collect(),
    };
    let lp = center.lifting_problem(shapes, &terminal_map(&g.ob))?;
    let lift = solve_extension(&lp, budget)?
        .ok_or_else(|| Error::Failed(format!("no centre object fills the ({n},{k}) horn in ob")))?;
    let c = center.filler_of(shapes, &lift);

    let delta = shapes.simplex(n);
    let bottom = delta.yoneda(&g.ob, c)?;
    let mut arrows = vec![None; n + 1];
    for j in (0..=n).filter(|&j| j != k) {
        let inclusion = delta.horn_pair(k, j)?;
        let dom = inclusion.dom();
        let assign = (0..=dom.max_dim())
            .map(|m| {
                (0..dom.level_len(m))
                    .map(|a| {
                        let theta = delta.theta(m, inclusion.map().apply(m, a));
                        let i = (0..=n)
                            .find(|&i| i != k && i != j && !theta.contains(&(i as u8)))
                            .expect("simplices of the union miss a face other than k and j");
                        let star = stars[i].as_ref().expect("face data present off k");
                        let h =
                            star.arrows[in_face(j, i)].expect("j is not the centre of the face");
                        g.ar.apply(n - 1, h, &lower_past(theta, i))
                    })
                    .collect()
            })
            .collect();
        let top = SimplicialMap::new_unchecked(dom.clone(), g.ar.clone(), assign)?;
        let lp = LiftingProblem::new(inclusion, top, bottom.clone(), g.source.clone())?;
        let lift = solve_extension(&lp, budget)?.ok_or_else(|| {
            Error::Failed(format!(
                "no arrow h_{j} lifts against s in the ({n},{k}) horn"
            ))
        })?;
        arrows[j] = Some(lift.apply(n, delta.top().expect("n within truncation")));
    }
    let star = StarSimplex {
        level: n,
        center: k,
        object: c,
        arrows,
    };
    let x = bg
        .from_star(&star)
        .ok_or_else(|| Error::Failed("assembled star is not a simplex".into()))?;
    for (i, f) in problem.faces.iter().enumerate() {
        if let Some(f) = f {
            if bg.sset.face(n, i, x) != *f {
                return Err(Error::Failed(format!(
                    "filler disagrees with the given face d{i}"
                )));
            }
        }
    }
    Ok(x)
}

/// Solves a horn problem against `p′: B(X_𝔾) → B𝔾` through a lift against
/// the anchor `π: X → ob` over the centre object.
pub fn lift_action_horn(
    space: &ActionSpace,
    problem: &HornProblem,
    anchor_cert: &KanCertificate,
    shapes: &HornShapes,
    budget: &Budget,
) -> Result<usize> {
    let a = &space.action;
    let (n, k, b) = (problem.n, problem.k, problem.base);
    require(anchor_cert, &a.anchor, n, "the anchor")?;
    let star = space.base.star(n, b, k);
    let faces = (0..=n)
        .map(|i| problem.faces[i].map(|y| space.point_at(n - 1, y, in_face(k, i))))
        .collect();
    let over = HornProblem {
        n,
        k,
        base: star.object,
        faces,
    };
    let lp = over.lifting_problem(shapes, &a.anchor)?;
    let lift = solve_extension(&lp, budget)?.ok_or_else(|| {
        Error::Failed(format!("no lift against the anchor in the ({n},{k}) horn"))
    })?;
    let x_k = over.filler_of(shapes, &lift);
    let x_0 = match star.arrows[0] {
        None => x_k,
        Some(h) => a.apply(n, h, x_k).expect("h_0 leaves the centre object"),
    };
    let w = space
        .find(n, x_0, space.base.key(n, b))
        .ok_or_else(|| Error::Failed("assembled pair is not a simplex".into()))?;
    let ok = space.projection.apply(n, w) == b
        && problem
            .faces
            .iter()
            .enumerate()
            .all(|(i, f)| f.is_none_or(|f| space.sset.face(n, i, w) == f));
    if !ok {
        return Err(Error::Failed("filler disagrees with the horn data".into()));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::FiniteGroup;
    use crate::lifting::{check_kan_complex, check_kan_fibration, for_each_horn_problem};
    use crate::sgpd::action::{constant_action, translation_action, trivial_action};
    use crate::sgpd::groupoid::{
        constant_group, discrete, indiscrete, letters, SimplicialGroupoid,
    };
    use crate::sgpd::nerve::{action_space, classifying_space};
    use crate::sgpd::GroupoidAction;

    fn b() -> Budget {
        Budget::default()
    }

    /// Every horn in `B𝔾` is filled, and the direct search agrees.
    fn fills_every_horn(g: SimplicialGroupoid, n: usize) {
        let g = Arc::new(g);
        let bg = classifying_space(&g, &b()).unwrap();
        let ob_cert = check_kan_complex(&g.ob, n, &b()).unwrap();
        let s_cert = check_kan_fibration(&g.source, n, &b()).unwrap();
        let shapes = HornShapes::new(g.max_dim());
        let t = terminal_map(&bg.sset);
        let mut count = 0;
        for_each_horn_problem(&t, n, |p| {
            fill_horn_classifying(&bg, &p, &ob_cert, &s_cert, &shapes, &b()).unwrap();
            count += 1;
            Ok(())
        })
        .unwrap();
        assert!(count > 0);
        assert!(check_kan_fibration(&t, n, &b()).unwrap().passed());
    }

    #[test]
    fn classifying_spaces_fill_their_horns() {
        fills_every_horn(constant_group(&FiniteGroup::cyclic(2), 2).unwrap(), 2);
        fills_every_horn(indiscrete(&letters(2), 2).unwrap(), 2);
        fills_every_horn(discrete(&letters(2), 2).unwrap(), 2);
        fills_every_horn(constant_group(&FiniteGroup::symmetric3(), 2).unwrap(), 2);
    }

    #[test]
    fn the_z2_horn_with_two_sigma_faces() {
        let g = Arc::new(constant_group(&FiniteGroup::cyclic(2), 2).unwrap());
        let bg = classifying_space(&g, &b()).unwrap();
        let sigma1 = g.ar.degenerate_vertex(g.ar.index_of(0, "1").unwrap(), 1);
        let face = bg.find(1, &[sigma1]).unwrap();
        let problem = HornProblem {
            n: 2,
            k: 0,
            base: 0,
            faces: vec![None, Some(face), Some(face)],
        };
        let ob_cert = check_kan_complex(&g.ob, 2, &b()).unwrap();
        let s_cert = check_kan_fibration(&g.source, 2, &b()).unwrap();
        let x = fill_horn_classifying(&bg, &problem, &ob_cert, &s_cert, &HornShapes::new(2), &b())
            .unwrap();
        assert_eq!(bg.sset.id(2, x), "[1^2,0^2]");
    }

    #[test]
    fn missing_certificates_are_refused() {
        let g = Arc::new(constant_group(&FiniteGroup::cyclic(2), 2).unwrap());
        let bg = classifying_space(&g, &b()).unwrap();
        let ob_cert = check_kan_complex(&g.ob, 1, &b()).unwrap();
        let s_cert = check_kan_fibration(&g.source, 2, &b()).unwrap();
        let problem = HornProblem {
            n: 2,
            k: 1,
            base: 0,
            faces: vec![Some(0), None, Some(0)],
        };
        assert!(
            fill_horn_classifying(&bg, &problem, &ob_cert, &s_cert, &HornShapes::new(2), &b())
                .is_err()
        );
    }

    fn lifts_every_horn(a: GroupoidAction, n: usize) {
        let sp = action_space(&a, &b()).unwrap();
        let cert = check_kan_fibration(&a.anchor, n, &b()).unwrap();
        assert!(cert.passed());
        let shapes = HornShapes::new(a.max_dim());
        let mut count = 0;
        for_each_horn_problem(&sp.projection, n, |p| {
            lift_action_horn(&sp, &p, &cert, &shapes, &b()).unwrap();
            count += 1;
            Ok(())
        })
        .unwrap();
        assert!(count > 0);
        assert!(check_kan_fibration(&sp.projection, n, &b())
            .unwrap()
            .passed());
    }

    #[test]
    fn action_spaces_lift_their_horns() {
        let z2 = FiniteGroup::cyclic(2);
        let g = Arc::new(constant_group(&z2, 2).unwrap());
        lifts_every_horn(translation_action(g.clone(), &z2).unwrap(), 2);
        let swap = constant_action(
            g,
            &["p".into(), "q".into()],
            |_| "*".into(),
            |s, x| match (s, x) {
                ("0", x) => x.to_string(),
                (_, "p") => "q".into(),
                _ => "p".into(),
            },
        )
        .unwrap();
        lifts_every_horn(swap, 2);
        lifts_every_horn(
            trivial_action(Arc::new(discrete(&letters(2), 2).unwrap())).unwrap(),
            2,
        );
    }
}
