//! Time-stamped state samples organized into spans, one span per smooth
//! stretch of evolution under a single Hamiltonian and rotating frame.
//!
//! Adjacent spans share their boundary time; the states recorded there may
//! differ, which is how instantaneous hard-pulse rotations and rotating-frame
//! gauge changes appear in a trajectory. Within a span, times are strictly
//! increasing and every sample is unit-norm.

use crate::quantum::operator::{Operator2, Operator3};
use crate::quantum::states::{State2, State3, Subspace};
use crate::quantum::QuantumError;
use crate::scalar::Scalar;

/// Worst per-step renormalization drift observed by the step integrator.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepLog<S> {
    pub max_renorm_drift: S,
    pub steps: usize,
}

impl<S: Scalar> StepLog<S> {
    pub fn absorb(&mut self, other: &StepLog<S>) {
        if other.max_renorm_drift > self.max_renorm_drift {
            self.max_renorm_drift = other.max_renorm_drift;
        }
        self.steps += other.steps;
    }
}

/// Smooth stretch of a triplet trajectory.
#[derive(Debug, Clone)]
pub struct Span3<S: Scalar> {
    pub label: String,
    /// Hamiltonian in force throughout the span (rad/s), in the span's frame.
    pub h: Operator3<S>,
    /// Rotating-frame detuning in Hz for the (PlusOne, MinusOne) subspaces.
    pub frame_hz: [S; 2],
    /// `(t, state)` samples; strictly increasing `t`, endpoints included.
    pub samples: Vec<(S, State3<S>)>,
}

/// Smooth stretch of a two-level trajectory.
#[derive(Debug, Clone)]
pub struct Span2<S: Scalar> {
    pub label: String,
    pub h: Operator2<S>,
    /// Frame (Hz) in which `h` is time-independent.
    pub h_frame_hz: S,
    /// Frame (Hz) in which the sampled states are expressed. Equal to
    /// `h_frame_hz` unless the trajectory has been frame-transformed.
    pub frame_hz: S,
    pub samples: Vec<(S, State2<S>)>,
}

#[derive(Debug, Clone)]
pub struct Trajectory3<S: Scalar> {
    pub spans: Vec<Span3<S>>,
    pub step_log: StepLog<S>,
}

#[derive(Debug, Clone)]
pub struct Trajectory2<S: Scalar> {
    pub subspace: Subspace,
    pub spans: Vec<Span2<S>>,
}

impl<S: Scalar> Trajectory3<S> {
    pub fn initial_state(&self) -> &State3<S> {
        &self.spans.first().expect("non-empty trajectory").samples[0].1
    }

    pub fn final_state(&self) -> &State3<S> {
        &self
            .spans
            .last()
            .expect("non-empty trajectory")
            .samples
            .last()
            .expect("non-empty span")
            .1
    }

    pub fn sample_count(&self) -> usize {
        self.spans.iter().map(|s| s.samples.len()).sum()
    }

    pub fn span_index_by_label(&self, label: &str) -> Option<usize> {
        self.spans.iter().position(|s| s.label == label)
    }

    /// Two-level view of the contiguous range of spans whose labels start
    /// with `prefix` (first match through last match).
    pub fn view_labeled(
        &self,
        subspace: Subspace,
        prefix: &str,
    ) -> Result<Trajectory2<S>, QuantumError> {
        let first = self
            .spans
            .iter()
            .position(|s| s.label.starts_with(prefix))
            .ok_or_else(|| QuantumError::EmptySubspace {
                subspace: format!("no span labeled '{prefix}*'"),
            })?;
        let last = self
            .spans
            .iter()
            .rposition(|s| s.label.starts_with(prefix))
            .unwrap_or(first);
        self.view_subspace(subspace, first..last + 1)
    }

    /// Two-level view of a contiguous span range, valid only while the
    /// evolution is block-diagonal in the chosen subspace (the spectator
    /// amplitude must stay constant). States are renormalized within the
    /// block; the Hamiltonian becomes the corresponding 2x2 block.
    pub fn view_subspace(
        &self,
        subspace: Subspace,
        spans: std::ops::Range<usize>,
    ) -> Result<Trajectory2<S>, QuantumError> {
        let tol = S::of(1e-9);
        let mut out = Vec::new();
        for span in &self.spans[spans] {
            let mut samples = Vec::with_capacity(span.samples.len());
            let mut weight0 = None;
            for (t, s3) in &span.samples {
                let (s2, w) = s3.subspace_state(subspace)?;
                match weight0 {
                    None => weight0 = Some(w),
                    Some(w0) => {
                        if (w - w0).abs() > tol {
                            return Err(QuantumError::EmptySubspace {
                                subspace: format!(
                                    "{subspace} (block weight drifts from {:.3e} to {:.3e} in \
                                     span '{}'; evolution is not block-diagonal there)",
                                    w0.to_f64_lossy(),
                                    w.to_f64_lossy(),
                                    span.label
                                ),
                            });
                        }
                    }
                }
                samples.push((*t, s2));
            }
            let frame = span.frame_hz[match subspace {
                Subspace::PlusOne => 0,
                Subspace::MinusOne => 1,
            }];
            out.push(Span2 {
                label: span.label.clone(),
                h: block_of(&span.h, subspace),
                h_frame_hz: frame,
                frame_hz: frame,
                samples,
            });
        }
        Ok(Trajectory2 {
            subspace,
            spans: out,
        })
    }
}

impl<S: Scalar> Trajectory2<S> {
    pub fn initial_state(&self) -> &State2<S> {
        &self.spans.first().expect("non-empty trajectory").samples[0].1
    }

    pub fn final_state(&self) -> &State2<S> {
        &self
            .spans
            .last()
            .expect("non-empty trajectory")
            .samples
            .last()
            .expect("non-empty span")
            .1
    }

    pub fn sample_count(&self) -> usize {
        self.spans.iter().map(|s| s.samples.len()).sum()
    }

    pub fn duration(&self) -> S {
        let t0 = self.spans.first().expect("non-empty").samples[0].0;
        let t1 = self
            .spans
            .last()
            .expect("non-empty")
            .samples
            .last()
            .expect("non-empty span")
            .0;
        t1 - t0
    }
}

/// 2x2 block of a triplet operator for one subspace, in that subspace's
/// amplitude ordering. Matches the effective two-level Hamiltonians exactly
/// when the triplet operator was built with the effective Rabi convention.
pub fn block_of<S: Scalar>(h: &Operator3<S>, subspace: Subspace) -> Operator2<S> {
    let [i, j] = subspace.triplet_indices();
    Operator2::from_upper([h.entry(i, i).re, h.entry(j, j).re], &[h.entry(i, j)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use std::f64::consts::TAU;

    #[test]
    fn block_of_matches_subspace_rows() {
        let h: Operator3<f64> = Operator3::from_upper(
            [-TAU * 2.5e5, 0.0, -TAU * 1.0e5],
            &[
                Complex::new(TAU * 2.5e5, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, -TAU * 1.25e5),
            ],
        );
        let plus = block_of(&h, Subspace::PlusOne);
        assert_eq!(plus.entry(0, 0).re, -TAU * 2.5e5);
        assert_eq!(plus.entry(0, 1), Complex::new(TAU * 2.5e5, 0.0));
        assert_eq!(plus.entry(1, 1).re, 0.0);

        let minus = block_of(&h, Subspace::MinusOne);
        assert_eq!(minus.entry(0, 0).re, 0.0);
        assert_eq!(minus.entry(0, 1), Complex::new(0.0, -TAU * 1.25e5));
        assert_eq!(minus.entry(1, 1).re, -TAU * 1.0e5);
    }
}
