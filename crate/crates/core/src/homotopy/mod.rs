//! Components, edge-path presentations of the fundamental group, bounded
//! coset enumeration and loop spaces.

mod components;
mod coset;
mod loops;
mod presentation;

pub use components::{component, pi0, Components};
pub use coset::{coset_enumeration, presented_order, GroupOrder};
pub use loops::{loop_space, LoopSpace};
pub use presentation::{
    fundamental_group_presentation, reduce_table_presentation, Comparison, ComparisonReport,
    GroupPresentation, Letter,
};
