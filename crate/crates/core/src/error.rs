use thiserror::Error;

/// Invariants a [`PerturbationFamily`](crate::lateral::PerturbationFamily) is validated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyInvariant {
    Dimensions,
    UnitEigenvector,
    EigenvectorOfS,
    AnnihilatedByK0,
    OmegaInvertible,
    SimpleInH0,
}

impl FamilyInvariant {
    pub fn name(self) -> &'static str {
        match self {
            FamilyInvariant::Dimensions => "dimensions",
            FamilyInvariant::UnitEigenvector => "unit_norm_f",
            FamilyInvariant::EigenvectorOfS => "S_f_equals_lambda0_f",
            FamilyInvariant::AnnihilatedByK0 => "K0_f_equals_zero",
            FamilyInvariant::OmegaInvertible => "omega_invertible",
            FamilyInvariant::SimpleInH0 => "lambda0_simple_in_H0",
        }
    }
}

impl std::fmt::Display for FamilyInvariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Coarse classification used to map errors to process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Parse,
    Invariant,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {limit:e}")]
    NotHermitian { asymmetry: f64, limit: f64 },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid block partition: {0}")]
    InvalidPartition(String),

    #[error("kernel condition violated: Ker D is not contained in Ker B (ratio {ratio:e})")]
    KernelConditionViolated { ratio: f64 },

    #[error("congruence matrix is singular (smallest/largest singular value {ratio:e})")]
    SingularCongruence { ratio: f64 },

    #[error("invalid perturbation family, invariant `{invariant}` violated: {detail}")]
    InvalidFamily {
        invariant: FamilyInvariant,
        detail: String,
    },

    #[error("eigenvalue is not simple: nullity {nullity} of H0 - lambda0")]
    SimplicityViolated { nullity: usize },

    #[error("rank ambiguity: eigenvalues {eigenvalues:?} lie within a factor 10 of tol {tol:e}")]
    AmbiguousRank { eigenvalues: Vec<f64>, tol: f64 },

    #[error("branch ambiguity at parameter {parameter}: best overlap {overlap:.6} < 1/sqrt(2)")]
    BranchAmbiguity { parameter: f64, overlap: f64 },

    #[error("initial eigenvalue {lambda} is not simple (gap {gap:e})")]
    DegenerateStart { lambda: f64, gap: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (last step {step:e})")]
    NoConvergence { iterations: usize, step: f64 },

    #[error("spectral gap {gap:e} around lambda0 is too small (need > {required:e})")]
    GapTooSmall { gap: f64, required: f64 },

    #[error("z = {z} is within {distance:e} of the spectrum of {operator}")]
    ResolventViolation {
        z: f64,
        distance: f64,
        operator: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph is a tree (first Betti number is zero)")]
    BetaZero,

    #[error("vector entry {index} is numerically zero ({value:e})")]
    ZeroEntry { index: usize, value: f64 },
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Parse(_) => ErrorCategory::Parse,
            Error::AmbiguousRank { .. }
            | Error::BranchAmbiguity { .. }
            | Error::DegenerateStart { .. }
            | Error::NoConvergence { .. }
            | Error::GapTooSmall { .. }
            | Error::ResolventViolation { .. }
            | Error::SingularCongruence { .. } => ErrorCategory::Numerical,
            _ => ErrorCategory::Invariant,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
