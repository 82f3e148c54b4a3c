use thiserror::Error;

use crate::sample::Instance;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no perturbation entry for instance {0}")]
    MissingPerturbation(Instance),

    #[error("invalid perturbation list for instance {instance}: {reason}")]
    InvalidPerturbation { instance: Instance, reason: String },

    #[error("label {0} outside [0, 1]")]
    InvalidLabel(f64),

    #[error("empty sample")]
    EmptySample,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// No hypothesis meets the robust feasibility bound. `min_deviation` is the
    /// smallest worst-case deviation any member achieves; `gap` is how far that
    /// is above the requested tolerance.
    #[error("robust ERM infeasible (best worst-case deviation {min_deviation:.6}, gap {gap:.6})")]
    Infeasible { min_deviation: f64, gap: f64 },

    #[error("{what} of size {size} exceeds brute-force cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("weights sum to zero")]
    DegenerateWeights,

    #[error("no weak learner found (best violating mass {best_mass:.6})")]
    WeakLearnerNotFound { best_mass: f64 },

    #[error("no strong learner found (best violating mass {best_mass:.6})")]
    StrongLearnerNotFound { best_mass: f64 },

    #[error("ensemble member {member} carries no source points")]
    NotCompressible { member: usize },

    #[error("reconstruction failed on group {group}: {source}")]
    ReconstructionFailed {
        group: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("sparsification failed (best violation count {best_violations})")]
    SparsifyFailed { best_violations: usize },

    #[error("hypothesis pool is empty ({skipped} infeasible subsets)")]
    EmptyPool { skipped: usize },

    #[error("no class member robustly fits any sample point at scale {eta}")]
    NoFittableSubset { eta: f64 },

    #[error("instance spec is unrealizable: {0}")]
    UnrealizableSpec(String),

    #[error("guarantee check failed: {0}")]
    AssertionFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad inputs rather than a failed run.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::InvalidLabel(_)
                | Error::InvalidPerturbation { .. }
                | Error::MissingPerturbation(_)
                | Error::EmptySample
                | Error::CapExceeded { .. }
                | Error::Json(_)
                | Error::Csv(_)
                | Error::Io(_)
        )
    }
}
