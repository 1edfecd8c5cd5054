//! Hermitian operators in angular-frequency units (rad/s).
//!
//! Frequencies enter the public API in cyclic units (Hz) and are converted to
//! angular units exactly once, inside the Hamiltonian builders; everything in
//! this module is already angular.

use crate::scalar::{Scalar, C};

/// Dense Hermitian matrix, `N` = 2 or 3.
///
/// Hermiticity holds exactly by construction: constructors take the diagonal
/// (real) and the strict upper triangle, and mirror conjugates below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianOperator<S: Scalar, const N: usize> {
    entries: [[C<S>; N]; N],
}

pub type Operator2<S> = HermitianOperator<S, 2>;
pub type Operator3<S> = HermitianOperator<S, 3>;

impl<S: Scalar, const N: usize> HermitianOperator<S, N> {
    pub fn zero() -> Self {
        Self {
            entries: [[C::new(S::zero(), S::zero()); N]; N],
        }
    }

    /// Build from the real diagonal and the strict upper triangle in row-major
    /// order (`(0,1), (0,2), (1,2)` for `N = 3`).
    pub fn from_upper(diag: [S; N], upper: &[C<S>]) -> Self {
        let mut m = [[C::new(S::zero(), S::zero()); N]; N];
        let mut k = 0;
        for i in 0..N {
            m[i][i] = C::new(diag[i], S::zero());
            for j in (i + 1)..N {
                m[i][j] = upper[k];
                m[j][i] = upper[k].conj();
                k += 1;
            }
        }
        debug_assert_eq!(k, upper.len());
        Self { entries: m }
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> C<S> {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[[C<S>; N]; N] {
        &self.entries
    }

    /// `self * v`
    pub fn apply(&self, v: &[C<S>; N]) -> [C<S>; N] {
        let mut out = [C::new(S::zero(), S::zero()); N];
        for i in 0..N {
            let mut acc = C::new(S::zero(), S::zero());
            for j in 0..N {
                acc += self.entries[i][j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// `<v|H|v>` (real for Hermitian `H` and any `v`).
    pub fn expectation(&self, v: &[C<S>; N]) -> S {
        let hv = self.apply(v);
        let mut acc = S::zero();
        for i in 0..N {
            acc += (v[i].conj() * hv[i]).re;
        }
        acc
    }

    /// Largest absolute entry, used as the frequency scale for step control.
    pub fn max_abs_entry(&self) -> S {
        let mut m = S::zero();
        for row in &self.entries {
            for e in row {
                let a = e.norm();
                if a > m {
                    m = a;
                }
            }
        }
        m
    }

    /// `self + shift * P` where `P` projects onto basis index `idx`.
    pub fn with_diagonal_shift(mut self, idx: usize, shift: S) -> Self {
        self.entries[idx][idx] += C::new(shift, S::zero());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn hermiticity_exact_by_construction() {
        let h: Operator3<f64> = HermitianOperator::from_upper(
            [1.0, -2.0, 0.5],
            &[
                Complex::new(0.3, -0.7),
                Complex::new(0.0, 0.0),
                Complex::new(-0.2, 0.1),
            ],
        );
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h.entry(i, j), h.entry(j, i).conj());
            }
        }
    }

    #[test]
    fn expectation_is_real_diagonal_weighting() {
        let h: Operator2<f64> =
            HermitianOperator::from_upper([2.0, -1.0], &[Complex::new(0.0, 0.0)]);
        let v = [Complex::new(0.6, 0.0), Complex::new(0.8, 0.0)];
        assert!((h.expectation(&v) - (2.0 * 0.36 - 0.64)).abs() < 1e-15);
    }
}
