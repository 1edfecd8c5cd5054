//! Exact evolution under a constant Hermitian Hamiltonian,
//! `|psi(t)> = exp(-i H t) |psi(0)>`, via eigendecomposition.

use crate::quantum::eigen::eigendecompose;
use crate::quantum::operator::HermitianOperator;
use crate::quantum::states::{State2, State3};
use crate::scalar::{Scalar, C};

/// `exp(-i h t) * amps`. `duration` is in seconds, `h` in rad/s.
///
/// Panics if `duration` is negative (caller contract).
pub fn propagate_exact_amplitudes<S: Scalar, const N: usize>(
    h: &HermitianOperator<S, N>,
    amps: &[C<S>; N],
    duration: S,
) -> [C<S>; N] {
    assert!(duration >= S::zero(), "propagation duration must be >= 0");
    let e = eigendecompose(h);

    // coefficients in the eigenbasis
    let mut coeff = [C::new(S::zero(), S::zero()); N];
    for k in 0..N {
        let mut acc = C::new(S::zero(), S::zero());
        for i in 0..N {
            acc += e.vectors[i][k].conj() * amps[i];
        }
        coeff[k] = acc;
    }
    for k in 0..N {
        let angle = -e.eigenvalues[k] * duration;
        coeff[k] *= C::new(angle.cos(), angle.sin());
    }
    let mut out = [C::new(S::zero(), S::zero()); N];
    for i in 0..N {
        let mut acc = C::new(S::zero(), S::zero());
        for k in 0..N {
            acc += e.vectors[i][k] * coeff[k];
        }
        out[i] = acc;
    }
    out
}

/// Exact evolution of a triplet state.
pub fn propagate_exact3<S: Scalar>(
    h: &HermitianOperator<S, 3>,
    state: &State3<S>,
    duration: S,
) -> State3<S> {
    State3::new(propagate_exact_amplitudes(h, &state.amplitudes, duration))
}

/// Exact evolution of a two-level state; the subspace tag is preserved.
pub fn propagate_exact2<S: Scalar>(
    h: &HermitianOperator<S, 2>,
    state: &State2<S>,
    duration: S,
) -> State2<S> {
    State2::new(
        propagate_exact_amplitudes(h, &state.amplitudes, duration),
        state.subspace,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::states::{global_phase_between2, Subspace};
    use crate::scalar::wrap_angle;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn zero_hamiltonian_is_identity() {
        let h = HermitianOperator::<f64, 3>::zero();
        let s = State3::new([
            Complex::new(0.5, 0.1),
            Complex::new(0.3, -0.2),
            Complex::new(0.2, 0.4),
        ])
        .normalized();
        let out = propagate_exact3(&h, &s, 17.0e-6);
        for i in 0..3 {
            assert_abs_diff_eq!(out.amplitudes[i].re, s.amplitudes[i].re, epsilon = 1e-14);
            assert_abs_diff_eq!(out.amplitudes[i].im, s.amplitudes[i].im, epsilon = 1e-14);
        }
    }

    /// Resonant pi-pulse at Omega/2pi = 500 kHz moves all population across
    /// the driven transition in 1 us.
    #[test]
    fn resonant_pi_pulse_transfers_population() {
        let omega = TAU * 500e3;
        let h: HermitianOperator<f64, 2> =
            HermitianOperator::from_upper([0.0, 0.0], &[Complex::new(omega / 2.0, 0.0)]);
        let s = State2::<f64>::ket0(Subspace::PlusOne);
        let out = propagate_exact2(&h, &s, 1.0e-6);
        // level index 0 is |+1> in the PlusOne ordering
        assert!(out.amplitudes[0].norm_sqr() > 1.0 - 1e-9);
        assert_abs_diff_eq!(out.norm(), 1.0, epsilon = 1e-12);
    }

    /// A detuned drive applied for one generalized Rabi period returns the
    /// state up to the global phase pi(1 + delta/sqrt(delta^2 + omega^2)).
    #[test]
    fn c_pulse_global_phase_at_equal_detuning() {
        let nu = 500e3;
        let (delta, omega) = (TAU * nu, TAU * nu);
        let h: HermitianOperator<f64, 2> =
            HermitianOperator::from_upper([-delta, 0.0], &[Complex::new(omega / 2.0, 0.0)]);
        let t_2pi = TAU / (delta * delta + omega * omega).sqrt();
        let s = State2::<f64>::ket0(Subspace::PlusOne);
        let out = propagate_exact2(&h, &s, t_2pi);
        let g = global_phase_between2(&s, &out).unwrap();
        assert!(g.overlap_magnitude >= 1.0 - 1e-12);
        let expected = wrap_angle(PI * (1.0 + 1.0 / 2.0f64.sqrt()));
        assert_abs_diff_eq!(wrap_angle(g.phase - expected), 0.0, epsilon = 1e-9);
    }

    /// exp(-i h (t1+t2)) == exp(-i h t2) exp(-i h t1)
    #[test]
    fn composition_property() {
        let h: HermitianOperator<f64, 3> = HermitianOperator::from_upper(
            [1.3e6, 0.0, -0.4e6],
            &[
                Complex::new(2.0e5, -3.1e5),
                Complex::new(0.0, 0.0),
                Complex::new(1.1e5, 0.9e5),
            ],
        );
        let s = State3::new([
            Complex::new(0.8, 0.0),
            Complex::new(0.0, 0.36),
            Complex::new(0.48, 0.0),
        ])
        .normalized();
        let (t1, t2) = (3.7e-6, 9.1e-6);
        let once = propagate_exact3(&h, &s, t1 + t2);
        let twice = propagate_exact3(&h, &propagate_exact3(&h, &s, t1), t2);
        let overlap = once.inner(&twice).norm();
        assert!(overlap >= 1.0 - 1e-10);
    }
}
