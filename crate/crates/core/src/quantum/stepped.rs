//! Fixed-step fourth-order integrator for the Schrödinger equation. This is
//! the independent numerical oracle: it never touches the eigendecomposition
//! path, so agreement between the two is a meaningful check.
//!
//! Segment sample counts are rounded to the requested step, never the
//! durations, so each segment integrates with `dt_eff = duration / n`.

use crate::quantum::operator::{HermitianOperator, Operator3};
use crate::quantum::states::State3;
use crate::quantum::QuantumError;
use crate::scalar::{tau, Scalar, C};
use crate::trajectory::{Span3, StepLog, Trajectory3};

/// One piecewise-constant stretch fed to [`propagate_stepped`].
#[derive(Debug, Clone)]
pub struct HamiltonianSegment<S: Scalar> {
    pub h: Operator3<S>,
    pub duration: S,
    pub label: String,
}

/// Refuse steps coarser than 1/(50 * max frequency scale).
pub fn check_step<S: Scalar>(dt: S, scale_hz: S) -> Result<(), QuantumError> {
    if dt <= S::zero() {
        return Err(QuantumError::NonPositiveStep(dt.to_f64_lossy()));
    }
    if scale_hz > S::zero() {
        let limit = S::one() / (S::of(50.0) * scale_hz);
        if dt > limit {
            return Err(QuantumError::StepTooCoarse {
                dt: dt.to_f64_lossy(),
                scale_hz: scale_hz.to_f64_lossy(),
                limit: limit.to_f64_lossy(),
            });
        }
    }
    Ok(())
}

/// Frequency scale (Hz) of an operator: largest entry magnitude over 2pi.
pub fn frequency_scale_hz<S: Scalar, const N: usize>(h: &HermitianOperator<S, N>) -> S {
    h.max_abs_entry() / tau::<S>()
}

#[inline]
fn add_scaled<S: Scalar, const N: usize>(y: &[C<S>; N], k: &[C<S>; N], factor: S) -> [C<S>; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += k[i] * factor;
    }
    out
}

#[inline]
fn deriv<S: Scalar, const N: usize>(h: &HermitianOperator<S, N>, y: &[C<S>; N]) -> [C<S>; N] {
    // psi' = -i H psi
    let mut hy = h.apply(y);
    for c in &mut hy {
        *c = C::new(c.im, -c.re);
    }
    hy
}

/// `(time offset from segment start, amplitudes)` samples of one segment.
pub type SegmentSamples<S, const N: usize> = Vec<(S, [C<S>; N])>;

/// RK4 samples of one segment, starting state included. Returns the samples
/// as offsets from the segment start along with the renormalization log.
pub fn rk4_segment<S: Scalar, const N: usize>(
    h: &HermitianOperator<S, N>,
    start: &[C<S>; N],
    duration: S,
    dt: S,
) -> Result<(SegmentSamples<S, N>, StepLog<S>), QuantumError> {
    if dt <= S::zero() {
        return Err(QuantumError::NonPositiveStep(dt.to_f64_lossy()));
    }
    let mut log = StepLog {
        max_renorm_drift: S::zero(),
        steps: 0,
    };
    if duration <= S::zero() {
        return Ok((vec![(S::zero(), *start)], log));
    }
    let ratio = duration / dt;
    let n = ratio.round().to_f64_lossy() as usize;
    if n == 0 {
        return Err(QuantumError::DurationNotMultiple {
            duration: duration.to_f64_lossy(),
            dt: dt.to_f64_lossy(),
            steps: 0,
        });
    }
    let dt_eff = duration / S::of(n as f64);

    let mut samples = Vec::with_capacity(n + 1);
    let mut y = *start;
    samples.push((S::zero(), y));
    let half = dt_eff / S::of(2.0);
    let sixth = dt_eff / S::of(6.0);
    let two = S::of(2.0);
    for k in 0..n {
        let k1 = deriv(h, &y);
        let y2 = add_scaled(&y, &k1, half);
        let k2 = deriv(h, &y2);
        let y3 = add_scaled(&y, &k2, half);
        let k3 = deriv(h, &y3);
        let y4 = add_scaled(&y, &k3, dt_eff);
        let k4 = deriv(h, &y4);
        for i in 0..N {
            y[i] += (k1[i] + (k2[i] + k3[i]) * two + k4[i]) * sixth;
        }
        // renormalize, logging the drift
        let norm = y.iter().map(|c| c.norm_sqr()).sum::<S>().sqrt();
        let drift = (norm - S::one()).abs();
        if drift > log.max_renorm_drift {
            log.max_renorm_drift = drift;
        }
        for c in &mut y {
            *c /= norm;
        }
        log.steps += 1;
        samples.push((dt_eff * S::of((k + 1) as f64), y));
    }
    Ok((samples, log))
}

/// Integrate a piecewise-constant schedule from `initial`, producing one span
/// per segment. The step is validated against the largest frequency scale in
/// the list before any work happens.
pub fn propagate_stepped<S: Scalar>(
    segments: &[HamiltonianSegment<S>],
    initial: &State3<S>,
    dt: S,
) -> Result<Trajectory3<S>, QuantumError> {
    let mut scale = S::zero();
    for seg in segments {
        scale = scale.max(frequency_scale_hz(&seg.h));
    }
    check_step(dt, scale)?;

    let mut spans = Vec::new();
    let mut log = StepLog {
        max_renorm_drift: S::zero(),
        steps: 0,
    };
    let mut t0 = S::zero();
    let mut state = *initial;

    if segments.is_empty() {
        spans.push(Span3 {
            label: "initial".to_string(),
            h: Operator3::zero(),
            frame_hz: [S::zero(); 2],
            samples: vec![(t0, state)],
        });
    }

    for seg in segments {
        let (raw, seg_log) = rk4_segment(&seg.h, &state.amplitudes, seg.duration, dt)?;
        log.absorb(&seg_log);
        let samples: Vec<(S, State3<S>)> = raw
            .into_iter()
            .map(|(off, amps)| (t0 + off, State3::new(amps)))
            .collect();
        state = samples.last().expect("segment has samples").1;
        t0 += seg.duration;
        spans.push(Span3 {
            label: seg.label.clone(),
            h: seg.h,
            frame_hz: [S::zero(); 2],
            samples,
        });
    }

    Ok(Trajectory3 {
        spans,
        step_log: log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::propagate::propagate_exact3;
    use num_complex::Complex;
    use std::f64::consts::TAU;

    fn drive_plus(delta_hz: f64, rabi_hz: f64) -> Operator3<f64> {
        Operator3::from_upper(
            [-TAU * delta_hz, 0.0, 0.0],
            &[
                Complex::new(TAU * rabi_hz / 2.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
            ],
        )
    }

    #[test]
    fn zero_hamiltonian_trajectory_is_constant() {
        let seg = HamiltonianSegment {
            h: Operator3::zero(),
            duration: 2.0e-6,
            label: "idle".into(),
        };
        let init = State3::<f64>::ket0();
        let traj = propagate_stepped(&[seg], &init, 1.0e-9).unwrap();
        for (_, s) in &traj.spans[0].samples {
            assert!((s.population0() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn agrees_with_exact_propagator() {
        let h = drive_plus(250e3, 500e3);
        let seg = HamiltonianSegment {
            h,
            duration: 3.0e-6,
            label: "drive".into(),
        };
        let init = State3::<f64>::ket0();
        let traj = propagate_stepped(&[seg], &init, 1.0e-9).unwrap();
        let exact = propagate_exact3(&h, &init, 3.0e-6);
        let fidelity = traj.final_state().inner(&exact).norm_sqr();
        assert!(fidelity >= 1.0 - 1e-8, "fidelity {fidelity}");
        assert!(traj.step_log.max_renorm_drift < 1e-12);
    }

    #[test]
    fn refuses_coarse_steps() {
        let seg = HamiltonianSegment {
            h: drive_plus(0.0, 500e3),
            duration: 2.0e-6,
            label: "drive".into(),
        };
        let err = propagate_stepped(&[seg], &State3::<f64>::ket0(), 100.0e-9).unwrap_err();
        assert!(matches!(err, QuantumError::StepTooCoarse { .. }), "{err}");
    }
}
