pub mod budget;
pub mod error;
pub mod group;
pub mod homotopy;
pub mod io;
pub mod lifting;
pub mod sgpd;
pub mod sset;
pub mod univalence;
pub mod verdict;

pub use budget::Budget;
pub use error::{Error, Result};
pub use verdict::Verdict;
