pub mod error;
pub mod graph;
pub mod hermitian;
pub mod inertia;
pub mod io;
pub mod lateral;
pub mod sample;
pub mod schur;
pub mod verify;

pub use error::{Error, ErrorCategory, FamilyInvariant, Result};
pub use hermitian::{eig_herm, CMatrix, CVector, Eigen, HermitianMatrix};
pub use inertia::{inertia, pinv, sylvester_conjugate, Inertia, DEFAULT_REL_TOL};
pub use schur::{
    haynsworth_report, schur_complement, BlockPartition, HaynsworthReport,
};
