mod connection;
mod descent;
mod kan;
mod problem;
mod solver;

pub use connection::{build_connection, Connection};
pub use descent::{lift_through_quotient, transfer_by_descent, PullbackSquare};
pub(crate) use kan::lower_past;
pub use kan::{
    certify_with, check_kan_complex, check_kan_fibration, for_each_horn_problem, terminal_map,
    HornFailure, HornProblem, HornShapes, KanCertificate,
};
pub use problem::{enumerate_maps, enumerate_maps_over, solve_extension, LiftingProblem};
