//! Finite semi-simplicial models of joins, free group actions, lens spaces and
//! classifying spaces of finite groups, with exact integral homology.

pub mod action;
pub mod checks;
pub mod dset;
pub mod error;
pub mod expr;
pub mod group;
pub mod homology;
pub mod matrix;
pub mod oracle;
pub mod report;
pub mod snf;
pub mod spaces;

pub use action::{is_free, join_actions, quotient, rotation_action, translation_action, GroupAction};
pub use dset::{disjoint_union, join, DeltaMap, DeltaSet, ValidationReport};
pub use error::{Result, TopoError};
pub use group::FiniteGroup;
pub use homology::{
    all_homology, boundary_matrix, cohomology, homological_connectivity, homology, homology_of_complex,
    reduced_homology, ChainComplex, Connectivity, HomologyGroup,
};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};
pub use report::{ReportOptions, SpaceReport};
