//! Mapping spaces of a fibration, minimal subfibrations, transport and the
//! univalent completion.

mod completion;
mod mapping;
mod minimal;
mod transport;

pub use completion::{
    evaluation_action, interval_over_point, iso_groupoid, point_fibration, split_nonunivalent,
    two_point_fiber, univalent_completion, CompletionResult, CompletionSummary,
};
pub use mapping::{
    as_mapping_space, end_space, eq_space_bounded, iso_space, vertex_membership, EndSpace,
    MappingKind, MappingSpace, Membership,
};
pub use minimal::{check_minimal, minimalize, p_related, MinimalityReport, Minimalization, PClass};
pub use transport::{
    univalence_certificate, BasepointReport, FibrationBundle, Transport, UnivalenceReport,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::Comparison;
    use crate::lifting::{check_kan_complex, check_kan_fibration, terminal_map};
    use crate::{Budget, Verdict};

    fn b() -> Budget {
        Budget::default()
    }

    fn complete(p: &crate::sset::SimplicialMap) -> CompletionResult {
        let cert = check_kan_fibration(p, p.dom().max_dim(), &b()).unwrap();
        univalent_completion(p, &cert, 64, &b()).unwrap()
    }

    #[test]
    fn two_point_completion() {
        let r = complete(&two_point_fiber(2).unwrap());
        assert_eq!(r.space.base.sset.level_sizes(), vec![1, 2, 4]);
        assert!(r.structural(), "{:?}", r.summary());
        assert_eq!(r.univalence.verdict, Verdict::Pass, "{:?}", r.univalence);
        assert_eq!(r.univalence.basepoints[0].eq_components, Some(2));
        assert_eq!(r.verdict(), Verdict::Pass);
    }

    #[test]
    fn split_input_fails_and_its_completion_passes() {
        let p = split_nonunivalent(2).unwrap();
        let cert = check_kan_fibration(&p, 2, &b()).unwrap();
        let u_cert = check_kan_complex(p.cod(), 2, &b()).unwrap();
        let report = univalence_certificate(&p, &cert, &u_cert, 64, &b()).unwrap();
        assert_eq!(report.verdict, Verdict::Fail);
        assert_eq!(report.component_condition, Verdict::Fail);
        let (a, bb) = (p.cod().id(0, 0).to_string(), p.cod().id(0, 1).to_string());
        assert!(report.counterexamples.contains(&(a, bb)));
        let r = complete(&p);
        assert_eq!(r.groupoid.ar.level_len(0), 4);
        assert_eq!(crate::homotopy::pi0(&r.space.base.sset).count(), 1);
        assert_eq!(r.verdict(), Verdict::Pass, "{:?}", r.summary());
    }

    #[test]
    fn point_is_its_own_completion() {
        let p = point_fibration(2);
        let r = complete(&p);
        assert_eq!(r.space.base.sset.level_sizes(), vec![1, 1, 1]);
        assert_eq!(r.verdict(), Verdict::Pass);
        let u_cert = check_kan_complex(p.cod(), 2, &b()).unwrap();
        let cert = check_kan_fibration(&p, 2, &b()).unwrap();
        assert!(u_cert.is_about(&terminal_map(p.cod())));
        let report = univalence_certificate(&p, &cert, &u_cert, 16, &b()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert_eq!(report.comparison_of("0"), Some(Comparison::Iso));
    }

    #[test]
    fn transport_around_the_loop_swaps() {
        let r = complete(&two_point_fiber(2).unwrap());
        let p = r.projection();
        let t = Transport::new(p, &r.kan_direct, &b()).unwrap();
        let base = p.cod();
        let identity = t.end.identity(0, 0);
        assert_eq!(
            t.transport_along_path(0, &[]).unwrap(),
            Some(t.class(identity))
        );
        let degenerate = base.degen(0, 0, 0);
        assert_eq!(
            t.transport_along_path(0, &[(degenerate, true)]).unwrap(),
            Some(t.class(identity))
        );
        let loop_edge = (0..base.level_len(1))
            .find(|&e| !base.is_degenerate(1, e))
            .unwrap();
        let moved = t
            .transport_along_path(0, &[(loop_edge, true)])
            .unwrap()
            .unwrap();
        assert_ne!(moved, t.class(identity));
        let swap = t
            .end
            .over(0, 0, 0)
            .into_iter()
            .find(|&a| t.class(a) == moved)
            .unwrap();
        assert!(t.end.is_iso(0, swap));
        let back = t
            .transport_along_path(0, &[(loop_edge, true), (loop_edge, false)])
            .unwrap();
        assert_eq!(back, Some(t.class(identity)));
    }
}
