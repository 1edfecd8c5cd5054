//! Small deterministic least-squares fits for sweep outputs: the
//! squared-cosine fringe family used for cone-circuit populations, and a
//! plain sinusoid for free-precession fringes.
//!
//! Both fits split into a linear part (offset/amplitude, solved by normal
//! equations) and a single nonlinear parameter found by golden-section
//! search, so results are reproducible bit-for-bit.

use crate::scalar::Scalar;

/// Result of fitting `P = offset + amplitude * cos^2(n * phi(delta; omega))`
/// with `phi(delta; omega) = pi (1 + delta / sqrt(delta^2 + omega^2))`.
#[derive(Debug, Clone, Copy)]
pub struct CosSquaredFit<S: Scalar> {
    pub offset: S,
    pub amplitude: S,
    /// Fitted Rabi frequency entering the phase model, Hz.
    pub omega_hz: S,
    pub rms_residual: S,
}

/// Result of fitting `P = offset + amplitude * cos(2 pi t / period + phase)`.
#[derive(Debug, Clone, Copy)]
pub struct FringeFit<S: Scalar> {
    pub offset: S,
    pub amplitude: S,
    pub phase: S,
    pub period: S,
    pub rms_residual: S,
}

/// Cone-circuit phase model `pi (1 + delta / sqrt(delta^2 + omega^2))`.
pub fn cone_phase_model<S: Scalar>(delta: S, omega: S) -> S {
    S::PI() * (S::one() + delta / (delta * delta + omega * omega).sqrt())
}

fn golden_minimize<S: Scalar, F: Fn(S) -> S>(f: F, mut a: S, mut b: S, iters: usize) -> S {
    let inv_phi = (S::of(5.0).sqrt() - S::one()) / S::of(2.0);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    (a + b) / S::of(2.0)
}

/// Solve min ||y - (offset + amplitude * basis)||^2 by normal equations.
/// Returns (offset, amplitude, sum of squared residuals).
fn linear_two_param<S: Scalar>(basis: &[S], y: &[S]) -> (S, S, S) {
    let n = S::of(y.len() as f64);
    let sb: S = basis.iter().copied().sum();
    let sbb: S = basis.iter().map(|&v| v * v).sum();
    let sy: S = y.iter().copied().sum();
    let sby: S = basis.iter().zip(y).map(|(&b, &v)| b * v).sum();
    let det = n * sbb - sb * sb;
    let (offset, amplitude) = if det.abs() < S::of(1e-30) {
        (sy / n, S::zero())
    } else {
        ((sbb * sy - sb * sby) / det, (n * sby - sb * sy) / det)
    };
    let ss: S = basis
        .iter()
        .zip(y)
        .map(|(&b, &v)| {
            let r = v - offset - amplitude * b;
            r * r
        })
        .sum();
    (offset, amplitude, ss)
}

/// Fit populations over a detuning grid to `offset + amplitude *
/// cos^2(n_cycles * phi(delta))`, initializing the Rabi parameter at
/// `omega_init_hz`.
pub fn fit_cos_squared<S: Scalar>(
    detunings: &[S],
    populations: &[S],
    n_cycles: usize,
    omega_init_hz: S,
) -> CosSquaredFit<S> {
    assert_eq!(detunings.len(), populations.len());
    let n = S::of(n_cycles as f64);
    let residual = |omega: S| -> S {
        let basis: Vec<S> = detunings
            .iter()
            .map(|&d| {
                let c = (n * cone_phase_model(d, omega)).cos();
                c * c
            })
            .collect();
        linear_two_param(&basis, populations).2
    };
    // coarse scan first; the residual landscape has local minima in omega
    let lo = omega_init_hz / S::of(4.0);
    let hi = omega_init_hz * S::of(4.0);
    let coarse = 240;
    let mut best = (residual(lo), lo);
    for k in 1..=coarse {
        let w = lo + (hi - lo) * S::of(k as f64) / S::of(coarse as f64);
        let r = residual(w);
        if r < best.0 {
            best = (r, w);
        }
    }
    let width = (hi - lo) / S::of(coarse as f64);
    let omega = golden_minimize(residual, best.1 - width, best.1 + width, 90);
    let basis: Vec<S> = detunings
        .iter()
        .map(|&d| {
            let c = (n * cone_phase_model(d, omega)).cos();
            c * c
        })
        .collect();
    let (offset, amplitude, ss) = linear_two_param(&basis, populations);
    CosSquaredFit {
        offset,
        amplitude,
        omega_hz: omega,
        rms_residual: (ss / S::of(populations.len() as f64)).sqrt(),
    }
}

/// Fit a time series to `offset + amplitude cos(2 pi t / period + phase)`,
/// searching the period around `period_init`.
pub fn fit_fringe_period<S: Scalar>(times: &[S], values: &[S], period_init: S) -> FringeFit<S> {
    assert_eq!(times.len(), values.len());
    let tau = S::TAU();

    // linear solve for (offset, a, b) with basis [1, cos wt, sin wt]
    let solve = |omega: S| -> (S, S, S, S) {
        let n = S::of(values.len() as f64);
        let mut m = [[S::zero(); 3]; 3];
        let mut rhs = [S::zero(); 3];
        for (&t, &y) in times.iter().zip(values) {
            let (c, s) = ((omega * t).cos(), (omega * t).sin());
            let row = [S::one(), c, s];
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] += row[i] * row[j];
                }
                rhs[i] += row[i] * y;
            }
        }
        let _ = n;
        let sol = solve3(&m, &rhs);
        let ss: S = times
            .iter()
            .zip(values)
            .map(|(&t, &y)| {
                let r = y - sol[0] - sol[1] * (omega * t).cos() - sol[2] * (omega * t).sin();
                r * r
            })
            .sum();
        (sol[0], sol[1], sol[2], ss)
    };

    let omega_init = tau / period_init;
    let omega = golden_minimize(
        |w| solve(w).3,
        omega_init / S::of(2.0),
        omega_init * S::of(2.0),
        90,
    );
    let (offset, a, b, ss) = solve(omega);
    FringeFit {
        offset,
        amplitude: (a * a + b * b).sqrt(),
        phase: (-b).atan2(a),
        period: tau / omega,
        rms_residual: (ss / S::of(values.len() as f64)).sqrt(),
    }
}

fn solve3<S: Scalar>(m: &[[S; 3]; 3], rhs: &[S; 3]) -> [S; 3] {
    // Gaussian elimination with partial pivoting on a copy.
    let mut a = *m;
    let mut b = *rhs;
    for col in 0..3 {
        let mut pivot = col;
        for row in (col + 1)..3 {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let diag = a[col][col];
        if diag.abs() < S::of(1e-30) {
            continue;
        }
        for row in 0..3 {
            if row == col {
                continue;
            }
            let factor = a[row][col] / diag;
            for k in col..3 {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut out = [S::zero(); 3];
    for i in 0..3 {
        out[i] = if a[i][i].abs() < S::of(1e-30) {
            S::zero()
        } else {
            b[i] / a[i][i]
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::TAU;

    #[test]
    fn recovers_fringe_period() {
        let period = 4.0e-6;
        let times: Vec<f64> = (0..101).map(|k| 10.0e-6 * k as f64 / 100.0).collect();
        let values: Vec<f64> = times
            .iter()
            .map(|&t| 0.4 + 0.3 * (TAU * t / period + 0.7).cos())
            .collect();
        let fit = fit_fringe_period(&times, &values, 5.0e-6);
        assert_abs_diff_eq!(fit.period, period, epsilon = period * 1e-6);
        assert_abs_diff_eq!(fit.amplitude, 0.3, epsilon = 1e-6);
        assert_abs_diff_eq!(fit.offset, 0.4, epsilon = 1e-6);
    }

    #[test]
    fn recovers_cos_squared_parameters() {
        let omega = 500e3;
        let detunings: Vec<f64> = (0..41).map(|k| -1.0e6 + 2.0e6 * k as f64 / 40.0).collect();
        let populations: Vec<f64> = detunings
            .iter()
            .map(|&d| 0.1 + 0.8 * (2.0 * cone_phase_model(d, omega)).cos().powi(2))
            .collect();
        let fit = fit_cos_squared(&detunings, &populations, 2, 400e3);
        assert_abs_diff_eq!(fit.omega_hz, omega, epsilon = omega * 1e-4);
        assert_abs_diff_eq!(fit.amplitude, 0.8, epsilon = 1e-4);
        assert_abs_diff_eq!(fit.offset, 0.1, epsilon = 1e-4);
        assert!(fit.rms_residual < 1e-6);
    }
}
