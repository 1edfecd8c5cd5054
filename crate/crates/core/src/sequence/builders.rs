//! Builders for every pulse sequence the toolkit analyzes.
//!
//! Conventions shared by all builders:
//!
//! * Ramsey readout pulses are resonant pi/2 pulses on the `{0,-1}` subspace
//!   with drive phase 0 (both of them, so a trivial interior leaves the
//!   interferometer at `|0> -> -i|-1>`).
//! * Spin-echo pulses carry their detuning during the pulse in finite mode;
//!   readout pulses are driven resonantly.
//! * Cone pulses (detuned drives lasting a whole number of generalized Rabi
//!   periods, or half of one) are always finite evolutions, in both modes.
//! * `phi0` of the readout-subspace cone sequence is the Bloch-sphere azimuth
//!   of the drive field; in the `{0,-1}` amplitude ordering that maps to a
//!   drive phase of `-phi0`.

use crate::nv::DriveParams;
use crate::quantum::states::{State3, Subspace};
use crate::scalar::Scalar;
use crate::sequence::segment::{
    rotation_duration, Mode, PulseRole, Segment, SegmentKind, SegmentedSchedule,
};
use crate::sequence::SequenceError;
use crate::{nv, quantum};

/// Near-resonance cap on free-evolution windows, seconds.
pub const WAIT_CAP_S: f64 = 10.0e-6;

fn rotation_segment<S: Scalar>(
    label: &str,
    subspace: Subspace,
    angle: S,
    phase: S,
    rabi: S,
    detuning_during: S,
    mode: Mode,
) -> Result<Segment<S>, SequenceError> {
    let drive = DriveParams::new(subspace, rabi, detuning_during, phase)?;
    let duration = match mode {
        Mode::HardPulse => S::zero(),
        Mode::FinitePulse => rotation_duration(angle, rabi),
    };
    Ok(Segment {
        kind: SegmentKind::Pulse {
            drive,
            duration,
            role: PulseRole::Rotation { angle },
        },
        label: label.to_string(),
    })
}

fn cone_segment<S: Scalar>(
    label: &str,
    subspace: Subspace,
    rabi: S,
    detuning: S,
    phase: S,
    cycles: S,
) -> Result<Segment<S>, SequenceError> {
    let drive = DriveParams::new(subspace, rabi, detuning, phase)?;
    let duration = nv::t_two_pi(&drive)? * cycles;
    Ok(Segment {
        kind: SegmentKind::Pulse {
            drive,
            duration,
            role: PulseRole::Cone { cycles },
        },
        label: label.to_string(),
    })
}

fn half_pi<S: Scalar>() -> S {
    S::PI() / S::of(2.0)
}

fn checked_wait<S: Scalar>(duration: S) -> Result<S, SequenceError> {
    if duration > S::of(WAIT_CAP_S) * (S::one() + S::of(1e-12)) {
        return Err(SequenceError::WaitExceedsCap {
            wait_us: duration.to_f64_lossy() * 1e6,
            cap_us: WAIT_CAP_S * 1e6,
        });
    }
    Ok(duration)
}

/// Bare spin echo on the `{0,+1}` subspace: pi/2 - tau/2 - pi - tau/2 - pi/2,
/// detuning applied during pulses and waits alike.
pub fn build_spin_echo_plus<S: Scalar>(
    delta: S,
    tau: S,
    rabi: S,
    initial: State3<S>,
    mode: Mode,
) -> Result<SegmentedSchedule<S>, SequenceError> {
    let sub = Subspace::PlusOne;
    let half = tau / S::of(2.0);
    let segments = vec![
        rotation_segment("se pi/2 a", sub, half_pi(), S::zero(), rabi, delta, mode)?,
        Segment::wait("se free a", half, delta, S::zero()),
        rotation_segment("se pi", sub, S::PI(), S::zero(), rabi, delta, mode)?,
        Segment::wait("se free b", half, delta, S::zero()),
        rotation_segment("se pi/2 b", sub, half_pi(), S::zero(), rabi, delta, mode)?,
    ];
    Ok(SegmentedSchedule::new(segments, initial, mode))
}

/// Variable-detuning spin echo on `{0,+1}` nested inside a resonant Ramsey
/// sequence on `{0,-1}`, padded symmetrically so the Ramsey window stays
/// fixed at `tau_r`.
pub fn build_nested_spin_echo<S: Scalar>(
    delta: S,
    tau_se: S,
    tau_r: S,
    rabi: S,
    mode: Mode,
) -> Result<SegmentedSchedule<S>, SequenceError> {
    let se_pulses = match mode {
        Mode::HardPulse => S::zero(),
        // two pi/2 and one pi at the resonant Rabi frequency
        Mode::FinitePulse => rotation_duration(S::of(2.0) * S::PI(), rabi),
    };
    let se_total = tau_se + se_pulses;
    if se_total > tau_r {
        return Err(SequenceError::Timing {
            required_us: se_total.to_f64_lossy() * 1e6,
            available_us: tau_r.to_f64_lossy() * 1e6,
        });
    }
    let pad = (tau_r - se_total) / S::of(2.0);
    let inner = build_spin_echo_plus(delta, tau_se, rabi, State3::ket0(), mode)?;

    let mut segments = vec![
        rotation_segment(
            "ramsey open",
            Subspace::MinusOne,
            half_pi(),
            S::zero(),
            rabi,
            S::zero(),
            mode,
        )?,
        Segment::wait("pad a", pad, S::zero(), S::zero()),
    ];
    segments.extend(inner.segments);
    segments.push(Segment::wait("pad b", pad, S::zero(), S::zero()));
    segments.push(rotation_segment(
        "ramsey close",
        Subspace::MinusOne,
        half_pi(),
        S::zero(),
        rabi,
        S::zero(),
        mode,
    )?);
    Ok(SegmentedSchedule::new(segments, State3::ket0(), mode)
        .with_analysis("se", Subspace::PlusOne))
}

/// Cone circuits on `{0,+1}` read out by a resonant Ramsey sequence on
/// `{0,-1}`: pi/2 - cone pulse for `n_cycles` periods - pi/2, from `|0>`.
pub fn build_sequence1<S: Scalar>(
    delta: S,
    rabi: S,
    n_cycles: usize,
    mode: Mode,
) -> Result<SegmentedSchedule<S>, SequenceError> {
    let segments = vec![
        rotation_segment(
            "ramsey open",
            Subspace::MinusOne,
            half_pi(),
            S::zero(),
            rabi,
            S::zero(),
            mode,
        )?,
        cone_segment(
            "cpulse",
            Subspace::PlusOne,
            rabi,
            delta,
            S::zero(),
            S::of(n_cycles as f64),
        )?,
        rotation_segment(
            "ramsey close",
            Subspace::MinusOne,
            half_pi(),
            S::zero(),
            rabi,
            S::zero(),
            mode,
        )?,
    ];
    Ok(SegmentedSchedule::new(segments, State3::ket0(), mode)
        .with_analysis("cpulse", Subspace::PlusOne))
}

/// Cone circuits on the same `{0,-1}` subspace the Ramsey sequence reads
/// out. `phi0` is the azimuth of the cone drive on the subspace Bloch
/// sphere, uncontrolled in the experiment and sampled by callers.
pub fn build_sequence2<S: Scalar>(
    delta: S,
    rabi: S,
    n_cycles: usize,
    phi0: S,
    mode: Mode,
) -> Result<SegmentedSchedule<S>, SequenceError> {
    let segments = vec![
        rotation_segment(
            "ramsey open",
            Subspace::MinusOne,
            half_pi(),
            S::zero(),
            rabi,
            S::zero(),
            mode,
        )?,
        // Bloch azimuth phi0 maps to drive phase -phi0 in this subspace's
        // amplitude ordering.
        cone_segment(
            "cpulse",
            Subspace::MinusOne,
            rabi,
            delta,
            -phi0,
            S::of(n_cycles as f64),
        )?,
        rotation_segment(
            "ramsey close",
            Subspace::MinusOne,
            half_pi(),
            S::zero(),
            rabi,
            S::zero(),
            mode,
        )?,
    ];
    Ok(SegmentedSchedule::new(segments, State3::ket0(), mode)
        .with_analysis("cpulse", Subspace::MinusOne))
}

/// Two half-cone pulses on `{0,+1}` separated by free precession for
/// `1/|delta|`, inside the resonant `{0,-1}` Ramsey readout.
pub fn build_sequence3<S: Scalar>(
    delta: S,
    rabi: S,
    mode: Mode,
) -> Result<SegmentedSchedule<S>, SequenceError> {
    if delta == S::zero() {
        return Err(SequenceError::ZeroDetuning);
    }
    let tau = checked_wait(S::one() / delta.abs())?;
    let segments = vec![
        rotation_segment(
            "ramsey open",
            Subspace::MinusOne,
            half_pi(),
            S::zero(),
            rabi,
            S::zero(),
            mode,
        )?,
        cone_segment(
            "cpulse a",
            Subspace::PlusOne,
            rabi,
            delta,
            S::zero(),
            S::of(0.5),
        )?,
        Segment::wait("free", tau, delta, S::zero()),
        cone_segment(
            "cpulse b",
            Subspace::PlusOne,
            rabi,
            delta,
            S::zero(),
            S::of(0.5),
        )?,
        rotation_segment(
            "ramsey close",
            Subspace::MinusOne,
            half_pi(),
            S::zero(),
            rabi,
            S::zero(),
            mode,
        )?,
    ];
    Ok(SegmentedSchedule::new(segments, State3::ket0(), mode)
        .with_analysis("free", Subspace::PlusOne))
}

/// Sequence 3 with a full cone pulse inserted a fraction `eta` from the end
/// of the free-evolution window: tau_1 = (1-eta) tau, tau_2 = eta tau.
pub fn build_sequence4<S: Scalar>(
    delta: S,
    rabi: S,
    eta: S,
    mode: Mode,
) -> Result<SegmentedSchedule<S>, SequenceError> {
    if delta == S::zero() {
        return Err(SequenceError::ZeroDetuning);
    }
    if eta < S::zero() || eta > S::one() {
        return Err(SequenceError::InvalidEta(eta.to_f64_lossy()));
    }
    let tau = checked_wait(S::one() / delta.abs())?;
    let tau1 = (S::one() - eta) * tau;
    let tau2 = eta * tau;
    let segments = vec![
        rotation_segment(
            "ramsey open",
            Subspace::MinusOne,
            half_pi(),
            S::zero(),
            rabi,
            S::zero(),
            mode,
        )?,
        cone_segment(
            "half a",
            Subspace::PlusOne,
            rabi,
            delta,
            S::zero(),
            S::of(0.5),
        )?,
        Segment::wait("free a", tau1, delta, S::zero()),
        cone_segment(
            "cpulse",
            Subspace::PlusOne,
            rabi,
            delta,
            S::zero(),
            S::one(),
        )?,
        Segment::wait("free b", tau2, delta, S::zero()),
        cone_segment(
            "half b",
            Subspace::PlusOne,
            rabi,
            delta,
            S::zero(),
            S::of(0.5),
        )?,
        rotation_segment(
            "ramsey close",
            Subspace::MinusOne,
            half_pi(),
            S::zero(),
            rabi,
            S::zero(),
            mode,
        )?,
    ];
    Ok(SegmentedSchedule::new(segments, State3::ket0(), mode)
        .with_analysis("cpulse", Subspace::PlusOne))
}

/// Free-precession fringes: only the two half-cone pulses applied to a pure
/// `|0>`, no reference interferometer; sweeping `wait` maps the precession.
pub fn build_free_fringes<S: Scalar>(
    delta: S,
    rabi: S,
    wait: S,
    mode: Mode,
) -> Result<SegmentedSchedule<S>, SequenceError> {
    if delta == S::zero() {
        return Err(SequenceError::ZeroDetuning);
    }
    let wait = checked_wait(wait)?;
    let segments = vec![
        cone_segment(
            "cpulse a",
            Subspace::PlusOne,
            rabi,
            delta,
            S::zero(),
            S::of(0.5),
        )?,
        Segment::wait("free", wait, delta, S::zero()),
        cone_segment(
            "cpulse b",
            Subspace::PlusOne,
            rabi,
            delta,
            S::zero(),
            S::of(0.5),
        )?,
    ];
    Ok(SegmentedSchedule::new(segments, State3::ket0(), mode)
        .with_analysis("free", Subspace::PlusOne))
}

/// Spin echo on an isolated two-level system, for contrasting the subspace
/// Hamiltonians against the symmetric pure spin-1/2 one: the former leaves a
/// detuning-dependent global phase, the latter a constant `pi`.
///
/// `pulse_h` acts during pulses (finite mode), `free_h` during the two
/// `tau/2` windows; hard mode replaces pulses by ideal rotations.
pub fn two_level_spin_echo<S: Scalar>(
    pulse_h: &quantum::Operator2<S>,
    free_h: &quantum::Operator2<S>,
    rabi: S,
    tau: S,
    initial: &quantum::State2<S>,
    mode: Mode,
) -> quantum::State2<S> {
    use crate::quantum::propagate::propagate_exact2;

    let half = tau / S::of(2.0);
    let mut s = *initial;
    let pulse = |state: &quantum::State2<S>, angle: S| -> quantum::State2<S> {
        match mode {
            Mode::HardPulse => {
                let mut embedded = state.embed();
                crate::sequence::run::apply_hard_rotation(
                    &mut embedded,
                    state.subspace,
                    angle,
                    S::zero(),
                );
                let (out, _) = embedded.subspace_state(state.subspace).expect("block");
                out
            }
            Mode::FinitePulse => propagate_exact2(pulse_h, state, rotation_duration(angle, rabi)),
        }
    };
    s = pulse(&s, half_pi());
    s = propagate_exact2(free_h, &s, half);
    s = pulse(&s, S::PI());
    s = propagate_exact2(free_h, &s, half);
    s = pulse(&s, half_pi());
    s
}
