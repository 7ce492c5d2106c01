//! Magnetic Schrödinger operators on finite graphs and the nodal surplus.
//!
//! Vertices are 0-based throughout the API; reports use 1-based eigenvalue positions.

pub mod example;
mod frame;
mod nodal;
mod weighted;

pub use frame::{bfs_tree, magnetic_h, magnetic_h_at, spanning_tree, MagneticFrame};
pub use nodal::{
    build_k_alpha, check_nowhere_zero, fiedler_check, flip_count, nodal_report, nodal_reports,
    real_eig, reference_matrix, tree_operator, FiedlerLevel, NodalOptions, NodalReport,
    DEFAULT_TORUS_STEP, NOWHERE_ZERO_TOL,
};
pub use weighted::{build_h, Edge, WeightedGraph};
