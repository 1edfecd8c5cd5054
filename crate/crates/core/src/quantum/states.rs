//! State vectors for the spin-1 triplet and its two-level subspaces.
//!
//! Basis ordering is fixed crate-wide to `(m_S = +1, 0, -1)`, matching the
//! row order of the composite rotating-frame Hamiltonian. Two-level states
//! inherit the ordering of the corresponding 2x2 block:
//!
//! * `PlusOne`  subspace: amplitudes `(c_+1, c_0)`
//! * `MinusOne` subspace: amplitudes `(c_0, c_-1)`
//!
//! On the Bloch sphere the `m_S = 0` level is mapped to the `-z` pole in both
//! subspaces, so a pure `|0>` always reads `(0, 0, -1)`.

use num_complex::Complex;

use crate::quantum::QuantumError;
use crate::scalar::{Scalar, C};

/// Which pair of triplet levels a two-level state lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subspace {
    /// `{m_S = 0, m_S = +1}`
    PlusOne,
    /// `{m_S = 0, m_S = -1}`
    MinusOne,
}

impl Subspace {
    /// Index of the `m_S = +-1` amplitude within the two-level ordering.
    #[inline]
    pub fn level_index(self) -> usize {
        match self {
            Subspace::PlusOne => 0,
            Subspace::MinusOne => 1,
        }
    }

    /// Index of the `m_S = 0` amplitude within the two-level ordering.
    #[inline]
    pub fn zero_index(self) -> usize {
        match self {
            Subspace::PlusOne => 1,
            Subspace::MinusOne => 0,
        }
    }

    /// Indices of this subspace's block inside the triplet ordering `(+1, 0, -1)`.
    #[inline]
    pub fn triplet_indices(self) -> [usize; 2] {
        match self {
            Subspace::PlusOne => [0, 1],
            Subspace::MinusOne => [1, 2],
        }
    }
}

impl std::fmt::Display for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Subspace::PlusOne => write!(f, "{{0,+1}}"),
            Subspace::MinusOne => write!(f, "{{0,-1}}"),
        }
    }
}

/// Triplet state, amplitudes ordered `(c_+1, c_0, c_-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State3<S: Scalar> {
    pub amplitudes: [C<S>; 3],
}

/// Two-level state tagged with the subspace it maps into.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State2<S: Scalar> {
    pub amplitudes: [C<S>; 2],
    pub subspace: Subspace,
}

/// Real Bloch vector `(Sx, Sy, Sz)` of a two-level state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector<S: Scalar> {
    pub x: S,
    pub y: S,
    pub z: S,
}

impl<S: Scalar> BlochVector<S> {
    pub fn norm(&self) -> S {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn as_array(&self) -> [S; 3] {
        [self.x, self.y, self.z]
    }
}

impl<S: Scalar> State3<S> {
    pub fn new(amplitudes: [C<S>; 3]) -> Self {
        Self { amplitudes }
    }

    /// `|0>` (the optically bright state).
    pub fn ket0() -> Self {
        Self::basis(1)
    }

    /// Basis state by triplet index: 0 -> `|+1>`, 1 -> `|0>`, 2 -> `|-1>`.
    pub fn basis(i: usize) -> Self {
        let mut a = [C::new(S::zero(), S::zero()); 3];
        a[i] = C::new(S::one(), S::zero());
        Self { amplitudes: a }
    }

    pub fn norm(&self) -> S {
        self.amplitudes
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<S>()
            .sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        for c in &mut self.amplitudes {
            *c /= n;
        }
        self
    }

    /// Population of `m_S = 0`.
    pub fn population0(&self) -> S {
        self.amplitudes[1].norm_sqr()
    }

    /// Populations in triplet order `(+1, 0, -1)`.
    pub fn populations(&self) -> [S; 3] {
        [
            self.amplitudes[0].norm_sqr(),
            self.amplitudes[1].norm_sqr(),
            self.amplitudes[2].norm_sqr(),
        ]
    }

    pub fn inner(&self, other: &Self) -> C<S> {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .fold(C::new(S::zero(), S::zero()), |acc, x| acc + x)
    }

    /// Amplitude pair of one subspace block, untouched (not renormalized).
    pub fn block(&self, subspace: Subspace) -> [C<S>; 2] {
        let [i, j] = subspace.triplet_indices();
        [self.amplitudes[i], self.amplitudes[j]]
    }

    /// Normalized view of one subspace block as a `State2`, together with the
    /// weight `|block|^2` it carries inside the triplet state.
    pub fn subspace_state(&self, subspace: Subspace) -> Result<(State2<S>, S), QuantumError> {
        let b = self.block(subspace);
        let w = b[0].norm_sqr() + b[1].norm_sqr();
        if w <= S::of(1e-24) {
            return Err(QuantumError::EmptySubspace {
                subspace: subspace.to_string(),
            });
        }
        let n = w.sqrt();
        Ok((
            State2 {
                amplitudes: [b[0] / n, b[1] / n],
                subspace,
            },
            w,
        ))
    }

    pub fn set_block(&mut self, subspace: Subspace, block: [C<S>; 2]) {
        let [i, j] = subspace.triplet_indices();
        self.amplitudes[i] = block[0];
        self.amplitudes[j] = block[1];
    }
}

impl<S: Scalar> State2<S> {
    pub fn new(amplitudes: [C<S>; 2], subspace: Subspace) -> Self {
        Self {
            amplitudes,
            subspace,
        }
    }

    /// `|0>` of the given subspace.
    pub fn ket0(subspace: Subspace) -> Self {
        let mut a = [C::new(S::zero(), S::zero()); 2];
        a[subspace.zero_index()] = C::new(S::one(), S::zero());
        Self {
            amplitudes: a,
            subspace,
        }
    }

    /// `|+1>` or `|-1>` of the given subspace.
    pub fn ket_level(subspace: Subspace) -> Self {
        let mut a = [C::new(S::zero(), S::zero()); 2];
        a[subspace.level_index()] = C::new(S::one(), S::zero());
        Self {
            amplitudes: a,
            subspace,
        }
    }

    pub fn norm(&self) -> S {
        (self.amplitudes[0].norm_sqr() + self.amplitudes[1].norm_sqr()).sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        for c in &mut self.amplitudes {
            *c /= n;
        }
        self
    }

    pub fn inner(&self, other: &Self) -> C<S> {
        self.amplitudes[0].conj() * other.amplitudes[0]
            + self.amplitudes[1].conj() * other.amplitudes[1]
    }

    /// Population of the `m_S = 0` level.
    pub fn population0(&self) -> S {
        self.amplitudes[self.subspace.zero_index()].norm_sqr()
    }

    /// Embed into a triplet state with zero amplitude on the spectator level.
    pub fn embed(&self) -> State3<S> {
        let mut s = State3::new([C::new(S::zero(), S::zero()); 3]);
        s.set_block(self.subspace, self.amplitudes);
        s
    }
}

/// Pauli expectation values with the `m_S = 0` level at the `-z` pole.
///
/// For `PlusOne` the stored order `(c_+1, c_0)` is already `(up, down)`; for
/// `MinusOne` the stored order `(c_0, c_-1)` is reversed, so the map swaps it.
pub fn bloch_vector<S: Scalar>(state: &State2<S>) -> BlochVector<S> {
    let (up, down) = match state.subspace {
        Subspace::PlusOne => (state.amplitudes[0], state.amplitudes[1]),
        Subspace::MinusOne => (state.amplitudes[1], state.amplitudes[0]),
    };
    let two = S::of(2.0);
    let z = up.conj() * down;
    BlochVector {
        x: two * z.re,
        y: two * z.im,
        z: up.norm_sqr() - down.norm_sqr(),
    }
}

/// Phase and overlap magnitude between two states of the same kind.
#[derive(Debug, Clone, Copy)]
pub struct GlobalPhase<S: Scalar> {
    /// `arg <a|b>` in `(-π, π]`.
    pub phase: S,
    /// `|<a|b>|`; callers should require `>= 1 - 1e-9` before reading `phase`
    /// as a global phase.
    pub overlap_magnitude: S,
}

fn global_phase_of<S: Scalar>(overlap: Complex<S>) -> GlobalPhase<S> {
    GlobalPhase {
        phase: overlap.arg(),
        overlap_magnitude: overlap.norm(),
    }
}

/// Global phase `arg <a|b>` between triplet states.
pub fn global_phase_between3<S: Scalar>(a: &State3<S>, b: &State3<S>) -> GlobalPhase<S> {
    global_phase_of(a.inner(b))
}

/// Global phase `arg <a|b>` between two-level states of the same subspace.
pub fn global_phase_between2<S: Scalar>(
    a: &State2<S>,
    b: &State2<S>,
) -> Result<GlobalPhase<S>, QuantumError> {
    if a.subspace != b.subspace {
        return Err(QuantumError::SubspaceMismatch {
            left: a.subspace.to_string(),
            right: b.subspace.to_string(),
        });
    }
    Ok(global_phase_of(a.inner(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    type C64 = Complex<f64>;

    #[test]
    fn ket0_is_minus_z_in_both_subspaces() {
        for sub in [Subspace::PlusOne, Subspace::MinusOne] {
            let b = bloch_vector(&State2::<f64>::ket0(sub));
            assert_abs_diff_eq!(b.x, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(b.y, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(b.z, -1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn equal_superposition_points_along_x() {
        let inv = 1.0 / 2.0f64.sqrt();
        for sub in [Subspace::PlusOne, Subspace::MinusOne] {
            let s = State2::new([C64::new(inv, 0.0), C64::new(inv, 0.0)], sub);
            let b = bloch_vector(&s);
            assert_abs_diff_eq!(b.x, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(b.y, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(b.z, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn pure_states_have_unit_bloch_norm() {
        let s =
            State2::new([C64::new(0.6, 0.3), C64::new(0.1, 0.2)], Subspace::PlusOne).normalized();
        assert_abs_diff_eq!(bloch_vector(&s).norm(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn global_phase_identity() {
        let s = State3::<f64>::ket0();
        let g = global_phase_between3(&s, &s);
        assert_eq!(g.phase, 0.0);
        assert_abs_diff_eq!(g.overlap_magnitude, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn subspace_mismatch_is_an_error() {
        let a = State2::<f64>::ket0(Subspace::PlusOne);
        let b = State2::<f64>::ket0(Subspace::MinusOne);
        assert!(global_phase_between2(&a, &b).is_err());
    }
}
