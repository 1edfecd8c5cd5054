//! Schedule data model: a time-ordered list of pulses and waits with
//! per-subspace rotating-frame bookkeeping.

use crate::nv::DriveParams;
use crate::quantum::states::{State3, Subspace};
use crate::scalar::{tau, Scalar};

/// How pulse segments are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Rotation pulses become instantaneous rotations
    /// `exp(-i angle sigma_phi / 2)` that accrue no detuning phase. The
    /// default analysis mode: every closed-form result treats the readout
    /// pulses as ideal rotations.
    #[default]
    HardPulse,
    /// Every pulse evolves under its full two-level Hamiltonian for its
    /// stated duration.
    FinitePulse,
}

/// What a pulse is for; keeps schedules exportable to the sequence DSL.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseRole<S: Scalar> {
    /// Fixed-angle rotation (radians), e.g. the Ramsey and echo pulses.
    Rotation { angle: S },
    /// Detuned drive for `cycles` generalized Rabi periods; `1.0` closes a
    /// full cone on the Bloch sphere, `0.5` is a half-cone.
    Cone { cycles: S },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SegmentKind<S: Scalar> {
    Pulse {
        drive: DriveParams<S>,
        /// Seconds. Zero for rotations in hard-pulse schedules.
        duration: S,
        role: PulseRole<S>,
    },
    Wait {
        duration: S,
        /// Rotating-frame detunings (Hz) kept alive during the wait, so the
        /// free-evolution operator is well-defined.
        detuning_plus: S,
        detuning_minus: S,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment<S: Scalar> {
    pub kind: SegmentKind<S>,
    pub label: String,
}

impl<S: Scalar> Segment<S> {
    pub fn duration(&self) -> S {
        match &self.kind {
            SegmentKind::Pulse { duration, .. } => *duration,
            SegmentKind::Wait { duration, .. } => *duration,
        }
    }

    pub fn wait(label: &str, duration: S, detuning_plus: S, detuning_minus: S) -> Self {
        Segment {
            kind: SegmentKind::Wait {
                duration,
                detuning_plus,
                detuning_minus,
            },
            label: label.to_string(),
        }
    }
}

/// Duration of a fixed-angle pulse at the given resonant Rabi frequency:
/// `angle / (2 pi rabi)`, i.e. `1/(4 rabi)` for pi/2 and `1/(2 rabi)` for pi.
pub fn rotation_duration<S: Scalar>(angle: S, rabi_hz: S) -> S {
    angle / (tau::<S>() * rabi_hz)
}

/// Segment the analysis of a schedule focuses on (the cone or free-evolution
/// stretch whose phase decomposition the sequence is built to expose).
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisFocus {
    pub label: String,
    pub subspace: Subspace,
}

#[derive(Debug, Clone)]
pub struct SegmentedSchedule<S: Scalar> {
    pub segments: Vec<Segment<S>>,
    pub initial_state: State3<S>,
    pub mode: Mode,
    pub analysis: Option<AnalysisFocus>,
}

impl<S: Scalar> SegmentedSchedule<S> {
    pub fn new(segments: Vec<Segment<S>>, initial_state: State3<S>, mode: Mode) -> Self {
        Self {
            segments,
            initial_state,
            mode,
            analysis: None,
        }
    }

    pub fn with_analysis(mut self, label: &str, subspace: Subspace) -> Self {
        self.analysis = Some(AnalysisFocus {
            label: label.to_string(),
            subspace,
        });
        self
    }

    pub fn total_duration(&self) -> S {
        self.segments
            .iter()
            .fold(S::zero(), |acc, s| acc + s.duration())
    }
}
