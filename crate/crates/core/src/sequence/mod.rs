//! Pulse sequences as segmented schedules: builders for every sequence the
//! toolkit analyzes, an executor that walks the segments in the composite
//! rotating frame, and a sweep driver.

pub mod builders;
pub mod run;
pub mod segment;
pub mod sweep;

pub use builders::{
    build_free_fringes, build_nested_spin_echo, build_sequence1, build_sequence2, build_sequence3,
    build_sequence4, build_spin_echo_plus, two_level_spin_echo, WAIT_CAP_S,
};
pub use run::{run, RunParams, RunResult};
pub use segment::{AnalysisFocus, Mode, PulseRole, Segment, SegmentKind, SegmentedSchedule};
pub use sweep::{sweep, SweepPoint, SweepResult};

use thiserror::Error;

use crate::nv::ModelError;
use crate::quantum::QuantumError;

#[derive(Debug, Error)]
pub enum SequenceError {
    #[error(transparent)]
    Model(#[from] ModelError),

    #[error("in segment '{label}': {source}")]
    Propagation { label: String, source: QuantumError },

    #[error(transparent)]
    Step(#[from] QuantumError),

    #[error(
        "schedule does not fit: needs {required_us:.3} us inside a window of \
         {available_us:.3} us (violated: required <= available)"
    )]
    Timing { required_us: f64, available_us: f64 },

    #[error("free evolution of {wait_us:.3} us exceeds the {cap_us:.0} us near-resonance cap")]
    WaitExceedsCap { wait_us: f64, cap_us: f64 },

    #[error("detuning must be nonzero (the free-evolution window 1/delta diverges)")]
    ZeroDetuning,

    #[error("split fraction eta = {0} outside [0, 1]")]
    InvalidEta(f64),

    #[error("sweep grid must be non-empty and strictly monotone")]
    BadGrid,

    #[error("sweep point at parameter {parameter} failed: {message}")]
    SweepPoint { parameter: f64, message: String },
}
