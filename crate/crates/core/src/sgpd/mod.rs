mod action;
mod contract;
mod filling;
mod groupoid;
mod nerve;
mod quotient;

pub use action::{
    action_groupoid, automorphism_group, constant_action, hom_action, hom_from, hom_to,
    translation_action, trivial_action, validate_action, Automorphisms, GroupAction,
    GroupoidAction, HomTo, SimplicialGroup,
};
pub use contract::{contract_initial, loop_comparison, Contraction, LoopComparison};
pub use filling::{fill_horn_classifying, lift_action_horn};
pub use groupoid::{
    constant_group, constant_groupoid, discrete, indiscrete, letters, validate_groupoid,
    SimplicialGroupoid,
};
pub use nerve::{
    action_space, classifying_space, recenter, unit_inclusion, verify_fiber_square, ActionSpace,
    ClassifyingSpace, StarSimplex,
};
pub use quotient::{
    certify_pair_map, check_transitive, quotient_by_free_action, transitive_arrows_quotient,
    ArrowsCertificates, ArrowsQuotient, FreeQuotient, TransitivityReport,
};
