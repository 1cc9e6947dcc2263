//! Triangle-cost of group presentations, finite covers and stable upper
//! bounds on presentation length.

pub mod abelian;
pub mod complex;
pub mod cosets;
pub mod estimator;
pub mod families;
pub mod fixtures;
pub mod format;
pub mod lattice;
pub mod presentation;
pub mod rewrite;
pub mod tietze;
pub mod word;

pub use cosets::{low_index_subgroups, todd_coxeter, CosetTable, SubgroupSpec};
pub use presentation::{Presentation, TriangleCost};
pub use word::{Letter, Word};
