//! Resource accounting for optimal discrimination of equiprobable symmetric
//! pure states: POVM-based coherence, ancilla coherence and quantum discord
//! for state separation, minimum-error (ME), standard FRIO (fixed rate of
//! inconclusive outcomes) and concatenated FRIO measurements.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: dense Hermitian eigensolver, entropies, partial trace.
//! - [`ensemble`]: symmetric ensembles, distinguishability, coefficient
//!   families and a seeded random sampler.
//! - [`separation`]: optimal state separation and the system/ancilla states.
//! - [`povm`]: ME, FRIO and concatenated POVMs, measurement, POVM coherence.
//! - [`correlations`]: mutual information, classical correlation, discord.
//! - [`analysis`]: closed-form coherences, decomposition residuals, bounds.

pub mod analysis;
pub mod correlations;
pub mod ensemble;
pub mod linalg;
pub mod povm;
pub mod separation;

pub use analysis::CoherenceReport;
pub use ensemble::EnsembleSpec;
pub use linalg::{DensityMatrix, ProbabilityVector};
pub use povm::Povm;
pub use separation::SeparationProfile;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates by {defect:e}")]
    NotHermitian { row: usize, col: usize, defect: f64 },
    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),
    #[error("eigenvalue {0:e} is below the rounding floor")]
    NegativeEigenvalue(f64),
    #[error("probability {value:e} at index {index} is negative")]
    NegativeProbability { index: usize, value: f64 },
    #[error("probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),
    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),
    #[error("no failure branch: the ensemble is already maximally distinguishable")]
    NoFailureBranch,
    #[error("state has weight {weight:e} outside the measurement support")]
    SupportMismatch { weight: f64 },
    #[error("detection operators are not complete: residual {0:e}")]
    Incomplete(f64),
    #[error("POVM element {index} is not positive semidefinite (eigenvalue {value:e})")]
    NotPositive { index: usize, value: f64 },
    #[error("state is not diagonal: entry ({row}, {col}) is nonzero")]
    NotDiagonal { row: usize, col: usize },
    #[error("discord optimization failed: negative discord {0:e}")]
    OptimizationFailure(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
