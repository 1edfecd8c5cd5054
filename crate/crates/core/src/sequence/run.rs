//! Schedule execution in the composite rotating frame.
//!
//! Each subspace carries a frame detuning that follows the active drive (or
//! the wait bookkeeping). When a segment changes a subspace's frame from
//! `f_a` to `f_b` at elapsed time `t`, the state picks up the diagonal gauge
//! `exp(i 2pi (f_b - f_a) t P)` on that subspace's `m_S = +-1` level; the
//! frames are synchronized at the start of the schedule. Pulses driven by one
//! source therefore stay mutually phase-coherent through interleaved waits,
//! while segments express their Hamiltonians in their own frame.
//!
//! Exact per-segment propagation produces the final state; in parallel, the
//! fixed-step integrator produces the sampled trajectory used for phase
//! analysis.

use crate::nv;
use crate::nv::{DriveParams, PhysicalConfig, RabiConvention};
use crate::quantum::operator::Operator3;
use crate::quantum::propagate::propagate_exact3;
use crate::quantum::states::{State3, Subspace};
use crate::quantum::stepped::{check_step, frequency_scale_hz, rk4_segment};
use crate::scalar::{tau, Scalar, C};
use crate::sequence::segment::{Mode, PulseRole, SegmentKind, SegmentedSchedule};
use crate::sequence::SequenceError;
use crate::trajectory::{Span3, StepLog, Trajectory3};

/// Execution parameters shared by every run.
#[derive(Debug, Clone, Copy)]
pub struct RunParams<S: Scalar> {
    pub physical: PhysicalConfig<S>,
    pub convention: RabiConvention,
    /// Trajectory sampling step, seconds.
    pub dt: S,
}

impl<S: Scalar> Default for RunParams<S> {
    fn default() -> Self {
        Self {
            physical: PhysicalConfig::default(),
            convention: RabiConvention::default(),
            dt: S::of(1.0e-9),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunResult<S: Scalar> {
    /// Step-integrator trajectory (spans per segment, frame jumps included).
    pub trajectory: Trajectory3<S>,
    /// Final state from chained exact propagation.
    pub final_state: State3<S>,
    /// Final state from the step integrator, for oracle-agreement checks.
    pub final_state_stepped: State3<S>,
    /// `|<0|final>|^2` of the exact final state.
    pub population0: S,
}

struct FrameState<S: Scalar> {
    /// Current frame detuning (Hz) per subspace, `[plus, minus]`.
    rates: [S; 2],
}

impl<S: Scalar> FrameState<S> {
    fn new() -> Self {
        Self {
            rates: [S::zero(); 2],
        }
    }

    /// Retarget one subspace's frame at elapsed time `t`, applying the gauge
    /// to both states. Returns true if anything changed.
    fn retarget(
        &mut self,
        subspace: Subspace,
        new_hz: S,
        t: S,
        states: &mut [&mut State3<S>],
    ) -> bool {
        let idx = match subspace {
            Subspace::PlusOne => 0,
            Subspace::MinusOne => 1,
        };
        let old = self.rates[idx];
        if old == new_hz {
            return false;
        }
        let angle = tau::<S>() * (new_hz - old) * t;
        let g = C::new(S::zero(), angle).exp();
        let amp_idx = match subspace {
            Subspace::PlusOne => 0,
            Subspace::MinusOne => 2,
        };
        for s in states.iter_mut() {
            s.amplitudes[amp_idx] *= g;
        }
        self.rates[idx] = new_hz;
        true
    }
}

/// Hamiltonian of one segment in the current frames.
fn segment_hamiltonian<S: Scalar>(
    params: &RunParams<S>,
    kind: &SegmentKind<S>,
    frames: &[S; 2],
) -> Result<Operator3<S>, nv::ModelError> {
    match kind {
        SegmentKind::Pulse { drive, .. } => {
            let spectator_plus = DriveParams::frame_only(Subspace::PlusOne, frames[0]);
            let spectator_minus = DriveParams::frame_only(Subspace::MinusOne, frames[1]);
            let (p, m) = match drive.subspace {
                Subspace::PlusOne => (drive, &spectator_minus),
                Subspace::MinusOne => (&spectator_plus, drive),
            };
            nv::build_composite_rotating_h(&params.physical, Some(p), Some(m), params.convention)
        }
        SegmentKind::Wait {
            detuning_plus,
            detuning_minus,
            ..
        } => nv::build_composite_rotating_h(
            &params.physical,
            Some(&DriveParams::frame_only(Subspace::PlusOne, *detuning_plus)),
            Some(&DriveParams::frame_only(
                Subspace::MinusOne,
                *detuning_minus,
            )),
            params.convention,
        ),
    }
}

/// Instantaneous rotation `exp(-i angle sigma_phi / 2)` applied to one
/// subspace block (hard-pulse execution of a rotation segment).
pub fn apply_hard_rotation<S: Scalar>(
    state: &mut State3<S>,
    subspace: Subspace,
    angle: S,
    phase: S,
) {
    let half = angle / S::of(2.0);
    let c = half.cos();
    let s = half.sin();
    let upper = C::new(S::zero(), -s) * C::new(S::zero(), -phase).exp();
    let lower = C::new(S::zero(), -s) * C::new(S::zero(), phase).exp();
    let block = state.block(subspace);
    let new_block = [
        block[0] * C::new(c, S::zero()) + block[1] * upper,
        block[0] * lower + block[1] * C::new(c, S::zero()),
    ];
    state.set_block(subspace, new_block);
}

/// Execute a schedule. An empty schedule returns the initial state as a
/// single-sample trajectory.
pub fn run<S: Scalar>(
    schedule: &SegmentedSchedule<S>,
    params: &RunParams<S>,
) -> Result<RunResult<S>, SequenceError> {
    // Validate the step against the stiffest segment up front.
    let mut frames_probe = [S::zero(); 2];
    let mut scale = S::zero();
    for seg in &schedule.segments {
        set_target_frames(&mut frames_probe, &seg.kind);
        let h = segment_hamiltonian(params, &seg.kind, &frames_probe)?;
        scale = scale.max(frequency_scale_hz(&h));
    }
    check_step(params.dt, scale)?;

    let mut frames = FrameState::new();
    let mut exact = schedule.initial_state;
    let mut stepped = schedule.initial_state;
    let mut t = S::zero();
    let mut spans: Vec<Span3<S>> = Vec::new();
    let mut log = StepLog {
        max_renorm_drift: S::zero(),
        steps: 0,
    };

    if schedule.segments.is_empty() {
        spans.push(Span3 {
            label: "initial".into(),
            h: Operator3::zero(),
            frame_hz: frames.rates,
            samples: vec![(t, exact)],
        });
    }

    for seg in &schedule.segments {
        // frame switches at segment entry
        let mut targets = frames.rates;
        set_target_frames(&mut targets, &seg.kind);
        frames.retarget(
            Subspace::PlusOne,
            targets[0],
            t,
            &mut [&mut exact, &mut stepped],
        );
        frames.retarget(
            Subspace::MinusOne,
            targets[1],
            t,
            &mut [&mut exact, &mut stepped],
        );

        let hard_rotation = matches!(
            (&seg.kind, schedule.mode),
            (
                SegmentKind::Pulse {
                    role: PulseRole::Rotation { .. },
                    ..
                },
                Mode::HardPulse
            )
        );

        if hard_rotation {
            if let SegmentKind::Pulse {
                drive,
                role: PulseRole::Rotation { angle },
                ..
            } = &seg.kind
            {
                apply_hard_rotation(&mut exact, drive.subspace, *angle, drive.phase);
                apply_hard_rotation(&mut stepped, drive.subspace, *angle, drive.phase);
                spans.push(Span3 {
                    label: seg.label.clone(),
                    h: Operator3::zero(),
                    frame_hz: frames.rates,
                    samples: vec![(t, stepped)],
                });
            }
            continue;
        }

        let h = segment_hamiltonian(params, &seg.kind, &frames.rates)?;
        let duration = seg.duration();
        let (raw, seg_log) =
            rk4_segment(&h, &stepped.amplitudes, duration, params.dt).map_err(|source| {
                SequenceError::Propagation {
                    label: seg.label.clone(),
                    source,
                }
            })?;
        log.absorb(&seg_log);
        let samples: Vec<(S, State3<S>)> = raw
            .into_iter()
            .map(|(off, amps)| (t + off, State3::new(amps)))
            .collect();
        stepped = samples.last().expect("segment samples").1;
        exact = propagate_exact3(&h, &exact, duration);
        t += duration;
        spans.push(Span3 {
            label: seg.label.clone(),
            h,
            frame_hz: frames.rates,
            samples,
        });
    }

    let population0 = exact.population0();
    Ok(RunResult {
        trajectory: Trajectory3 {
            spans,
            step_log: log,
        },
        final_state: exact,
        final_state_stepped: stepped,
        population0,
    })
}

fn set_target_frames<S: Scalar>(frames: &mut [S; 2], kind: &SegmentKind<S>) {
    match kind {
        SegmentKind::Pulse { drive, .. } => match drive.subspace {
            Subspace::PlusOne => {
                frames[0] = drive.detuning;
                frames[1] = S::zero();
            }
            Subspace::MinusOne => {
                frames[0] = S::zero();
                frames[1] = drive.detuning;
            }
        },
        SegmentKind::Wait {
            detuning_plus,
            detuning_minus,
            ..
        } => {
            frames[0] = *detuning_plus;
            frames[1] = *detuning_minus;
        }
    }
}

/// Fidelity between the exact and stepped final states,
/// `|<exact|stepped>|^2`.
pub fn oracle_fidelity<S: Scalar>(result: &RunResult<S>) -> S {
    result
        .final_state
        .inner(&result.final_state_stepped)
        .norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::states::State3;
    use crate::sequence::segment::{Segment, SegmentedSchedule};
    use approx::assert_abs_diff_eq;

    #[test]
    fn empty_schedule_returns_initial_state() {
        let schedule = SegmentedSchedule::new(vec![], State3::<f64>::ket0(), Mode::HardPulse);
        let out = run(&schedule, &RunParams::default()).unwrap();
        assert_abs_diff_eq!(out.population0, 1.0, epsilon = 1e-15);
        assert_eq!(out.trajectory.sample_count(), 1);
    }

    #[test]
    fn hard_pi_rotation_inverts_population() {
        let drive = crate::nv::DriveParams::new(Subspace::PlusOne, 500e3, 0.0, 0.0).unwrap();
        let schedule = SegmentedSchedule::new(
            vec![Segment {
                kind: SegmentKind::Pulse {
                    drive,
                    duration: 0.0,
                    role: PulseRole::Rotation {
                        angle: std::f64::consts::PI,
                    },
                },
                label: "pi".into(),
            }],
            State3::<f64>::ket0(),
            Mode::HardPulse,
        );
        let out = run(&schedule, &RunParams::default()).unwrap();
        assert_abs_diff_eq!(out.population0, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.final_state.populations()[0], 1.0, epsilon = 1e-15);
    }
}
