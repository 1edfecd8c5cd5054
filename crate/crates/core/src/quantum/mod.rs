//! Complex state representation, exact propagators for piecewise-constant
//! Hamiltonians, and the fixed-step integrator used as the independent
//! numerical oracle.

pub mod eigen;
pub mod operator;
pub mod propagate;
pub mod states;
pub mod stepped;

pub use eigen::{eigendecompose, Eigendecomposition};
pub use operator::{HermitianOperator, Operator2, Operator3};
pub use propagate::{propagate_exact2, propagate_exact3, propagate_exact_amplitudes};
pub use states::{
    bloch_vector, global_phase_between2, global_phase_between3, BlochVector, GlobalPhase, State2,
    State3, Subspace,
};
pub use stepped::{check_step, frequency_scale_hz, propagate_stepped, HamiltonianSegment};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuantumError {
    #[error("states live in different subspaces ({left} vs {right})")]
    SubspaceMismatch { left: String, right: String },

    #[error("subspace {subspace} carries no amplitude; two-level view undefined")]
    EmptySubspace { subspace: String },

    #[error(
        "step dt = {dt:.3e} s too coarse for frequency scale {scale_hz:.3e} Hz; \
         need dt <= {limit:.3e} s (1/(50 * max frequency scale))"
    )]
    StepTooCoarse { dt: f64, scale_hz: f64, limit: f64 },

    #[error(
        "segment duration {duration:.6e} s is not a multiple of dt = {dt:.3e} s \
         within 1e-6 relative (nearest count {steps})"
    )]
    DurationNotMultiple {
        duration: f64,
        dt: f64,
        steps: usize,
    },

    #[error("dt must be positive, got {0:.3e} s")]
    NonPositiveStep(f64),
}
