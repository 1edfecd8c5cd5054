//! Simulation and phase-analysis toolkit for the spin-1 nitrogen-vacancy
//! ground state under microwave pulse sequences.
//!
//! The crate evolves triplet states through segmented pulse schedules in the
//! composite rotating frame, splits accumulated global phases into dynamic
//! and Aharonov-Anandan (geometric) parts, and relates the geometric part to
//! the solid angle swept on the Bloch sphere. An independent fixed-step
//! integrator backs every closed-form result.
//!
//! Conventions fixed crate-wide:
//!
//! * triplet basis order `(m_S = +1, 0, -1)`;
//! * all public frequencies are cyclic (Hz); conversion to angular units
//!   happens once, inside the Hamiltonian builders;
//! * `m_S = 0` sits at the `-z` pole of both subspace Bloch spheres;
//! * global phases are reported in `(-π, π]`; continuous unwrapping is the
//!   phase-analysis module's job.
//!
//! The core is generic over the floating-point scalar via [`scalar::Scalar`];
//! the aliases at the crate root fix `f64`, which is what the command-line
//! tool and the verification suite use.

// index loops mirror the matrix algebra; iterator forms obscure it here
#![allow(clippy::needless_range_loop)]

pub mod scalar;

pub mod quantum;
pub mod trajectory;

pub mod nv;
pub mod phase;
pub mod sequence;

pub mod fit;
pub mod seqfile;
pub mod verify;

// Concrete f64 surface.
pub type State2 = quantum::State2<f64>;
pub type State3 = quantum::State3<f64>;
pub type BlochVector = quantum::BlochVector<f64>;
pub type Operator2 = quantum::Operator2<f64>;
pub type Operator3 = quantum::Operator3<f64>;
pub type Trajectory2 = trajectory::Trajectory2<f64>;
pub type Trajectory3 = trajectory::Trajectory3<f64>;
pub type PhysicalConfig = nv::PhysicalConfig<f64>;
pub type DriveParams = nv::DriveParams<f64>;
pub type SegmentedSchedule = sequence::SegmentedSchedule<f64>;
pub type PhaseDecomposition = phase::PhaseDecomposition<f64>;
pub type SweepResult = sequence::SweepResult<f64>;

pub use quantum::Subspace;
pub use sequence::Mode;
