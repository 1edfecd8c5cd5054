//! Eigendecomposition of small complex Hermitian matrices by cyclic Jacobi
//! rotations. Quadratic convergence; a handful of sweeps reaches machine
//! precision for the 2x2 and 3x3 matrices used here.

use crate::quantum::operator::HermitianOperator;
use crate::scalar::{Scalar, C};

/// Eigenvalues (ascending) and the unitary of column eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigendecomposition<S: Scalar, const N: usize> {
    pub eigenvalues: [S; N],
    /// `vectors[i][k]` is component `i` of eigenvector `k`.
    pub vectors: [[C<S>; N]; N],
}

const MAX_SWEEPS: usize = 64;

pub fn eigendecompose<S: Scalar, const N: usize>(
    h: &HermitianOperator<S, N>,
) -> Eigendecomposition<S, N> {
    let mut a = *h.entries();
    // v accumulates the rotations: columns converge to eigenvectors.
    let mut v = [[C::new(S::zero(), S::zero()); N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = C::new(S::one(), S::zero());
    }

    let scale = h.max_abs_entry().max(S::one());
    let tol = scale * S::epsilon() * S::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut off = S::zero();
        for i in 0..N {
            for j in (i + 1)..N {
                off += a[i][j].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut eigenvalues = [S::zero(); N];
    for i in 0..N {
        eigenvalues[i] = a[i][i].re;
    }

    // Sort ascending, carrying eigenvector columns along.
    let mut order: [usize; N] = [0; N];
    for (i, o) in order.iter_mut().enumerate() {
        *o = i;
    }
    order.sort_by(|&i, &j| eigenvalues[i].partial_cmp(&eigenvalues[j]).unwrap());

    let mut vals = [S::zero(); N];
    let mut vecs = [[C::new(S::zero(), S::zero()); N]; N];
    for (k, &src) in order.iter().enumerate() {
        vals[k] = eigenvalues[src];
        for i in 0..N {
            vecs[i][k] = v[i][src];
        }
    }

    Eigendecomposition {
        eigenvalues: vals,
        vectors: vecs,
    }
}

/// One complex Jacobi rotation zeroing `a[p][q]`.
fn rotate<S: Scalar, const N: usize>(
    a: &mut [[C<S>; N]; N],
    v: &mut [[C<S>; N]; N],
    p: usize,
    q: usize,
) {
    let apq = a[p][q];
    let mag = apq.norm();
    if mag == S::zero() {
        return;
    }
    // Absorb the phase so the active 2x2 block becomes real symmetric.
    let phase = apq / mag;
    let app = a[p][p].re;
    let aqq = a[q][q].re;

    let theta = (aqq - app) / (S::of(2.0) * mag);
    let t = {
        let s = if theta >= S::zero() {
            S::one()
        } else {
            -S::one()
        };
        s / (theta.abs() + (S::one() + theta * theta).sqrt())
    };
    let c = S::one() / (S::one() + t * t).sqrt();
    let s = t * c;

    // Column rotation R = diag(phase, 1) * [[c, s], [-s, c]] on the (p, q)
    // plane; R^dagger A R has zero (p, q) entry.
    let rpp = phase * c;
    let rpq = phase * s;
    let rqp = C::new(-s, S::zero());
    let rqq = C::new(c, S::zero());

    for i in 0..N {
        let aip = a[i][p];
        let aiq = a[i][q];
        a[i][p] = aip * rpp + aiq * rqp;
        a[i][q] = aip * rpq + aiq * rqq;
    }
    for j in 0..N {
        let apj = a[p][j];
        let aqj = a[q][j];
        a[p][j] = rpp.conj() * apj + rqp.conj() * aqj;
        a[q][j] = rpq.conj() * apj + rqq.conj() * aqj;
    }
    a[p][q] = C::new(S::zero(), S::zero());
    a[q][p] = C::new(S::zero(), S::zero());
    a[p][p] = C::new(a[p][p].re, S::zero());
    a[q][q] = C::new(a[q][q].re, S::zero());

    for i in 0..N {
        let vip = v[i][p];
        let viq = v[i][q];
        v[i][p] = vip * rpp + viq * rqp;
        v[i][q] = vip * rpq + viq * rqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn residual<const N: usize>(h: &HermitianOperator<f64, N>) -> f64 {
        let e = eigendecompose(h);
        let mut worst = 0.0f64;
        for k in 0..N {
            let mut col = [Complex::new(0.0, 0.0); N];
            for i in 0..N {
                col[i] = e.vectors[i][k];
            }
            let hv = h.apply(&col);
            for i in 0..N {
                worst = worst.max((hv[i] - col[i] * e.eigenvalues[k]).norm());
            }
        }
        // orthonormality
        for k in 0..N {
            for l in 0..N {
                let mut dot = Complex::new(0.0, 0.0);
                for i in 0..N {
                    dot += e.vectors[i][k].conj() * e.vectors[i][l];
                }
                let expect = if k == l { 1.0 } else { 0.0 };
                worst = worst.max((dot - expect).norm());
            }
        }
        worst
    }

    #[test]
    fn pauli_x_eigenpairs() {
        let h: HermitianOperator<f64, 2> =
            HermitianOperator::from_upper([0.0, 0.0], &[Complex::new(1.0, 0.0)]);
        let e = eigendecompose(&h);
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(residual(&h) < 1e-13);
    }

    #[test]
    fn complex_3x3_residual() {
        let h: HermitianOperator<f64, 3> = HermitianOperator::from_upper(
            [0.7, -1.3, 2.1],
            &[
                Complex::new(0.4, -0.9),
                Complex::new(-0.1, 0.25),
                Complex::new(1.7, 0.3),
            ],
        );
        assert!(residual(&h) < 1e-12);
    }

    #[test]
    fn already_diagonal() {
        let h: HermitianOperator<f64, 3> = HermitianOperator::from_upper(
            [3.0, 1.0, 2.0],
            &[
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
            ],
        );
        let e = eigendecompose(&h);
        assert_eq!(e.eigenvalues, [1.0, 2.0, 3.0]);
    }
}
