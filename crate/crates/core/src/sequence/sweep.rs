//! Parameter sweeps over sequence builders. Points are independent and may
//! run concurrently; results are assembled in grid order either way, so the
//! output is deterministic. Setting `NVPL_NO_PARALLEL=1` forces serial
//! execution.

use rayon::prelude::*;

use crate::phase::PhaseDecomposition;
use crate::quantum::states::State3;
use crate::scalar::Scalar;
use crate::sequence::SequenceError;

/// Per-point sweep output.
#[derive(Debug, Clone)]
pub struct SweepPoint<S: Scalar> {
    pub parameter: S,
    pub final_state: State3<S>,
    /// Bright-state population `P(m_S = 0)`.
    pub population0: S,
    /// Decomposition of the schedule's analysis segment, when one exists.
    pub decomposition: Option<PhaseDecomposition<S>>,
}

/// Tabulated sweep over one parameter.
#[derive(Debug, Clone)]
pub struct SweepResult<S: Scalar> {
    pub parameter_name: String,
    pub grid: Vec<S>,
    pub points: Vec<SweepPoint<S>>,
}

fn grid_is_strictly_monotone<S: Scalar>(grid: &[S]) -> bool {
    if grid.is_empty() {
        return false;
    }
    if grid.len() == 1 {
        return true;
    }
    let increasing = grid[1] > grid[0];
    grid.windows(2)
        .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

/// Evaluate `point_fn` over a strictly monotone grid. Any point failure
/// aborts the sweep, reporting the offending parameter value.
pub fn sweep<S, F>(
    parameter_name: &str,
    grid: &[S],
    point_fn: F,
) -> Result<SweepResult<S>, SequenceError>
where
    S: Scalar,
    F: Fn(S) -> Result<SweepPoint<S>, SequenceError> + Sync + Send,
{
    if !grid_is_strictly_monotone(grid) {
        return Err(SequenceError::BadGrid);
    }

    let serial = std::env::var("NVPL_NO_PARALLEL").is_ok_and(|v| v == "1");
    let evaluated: Vec<Result<SweepPoint<S>, SequenceError>> = if serial {
        grid.iter().map(|&p| point_fn(p)).collect()
    } else {
        grid.par_iter().map(|&p| point_fn(p)).collect()
    };

    let mut points = Vec::with_capacity(grid.len());
    for (param, result) in grid.iter().zip(evaluated) {
        let point = result.map_err(|e| SequenceError::SweepPoint {
            parameter: param.to_f64_lossy(),
            message: e.to_string(),
        })?;
        debug_assert!(
            point.population0 >= -S::of(1e-12) && point.population0 <= S::one() + S::of(1e-12),
            "population outside [0, 1]"
        );
        points.push(point);
    }
    Ok(SweepResult {
        parameter_name: parameter_name.to_string(),
        grid: grid.to_vec(),
        points,
    })
}

/// Uniform grid of `steps` points from `start` to `stop` inclusive.
pub fn linear_grid<S: Scalar>(start: S, stop: S, steps: usize) -> Vec<S> {
    if steps <= 1 {
        return vec![start];
    }
    (0..steps)
        .map(|k| start + (stop - start) * S::of(k as f64) / S::of((steps - 1) as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::builders::build_sequence1;
    use crate::sequence::run::{run, RunParams};
    use crate::sequence::segment::Mode;

    fn seq1_point(delta: f64) -> Result<SweepPoint<f64>, SequenceError> {
        let schedule = build_sequence1(delta, 500e3, 1, Mode::HardPulse)?;
        let out = run(&schedule, &RunParams::default())?;
        Ok(SweepPoint {
            parameter: delta,
            final_state: out.final_state,
            population0: out.population0,
            decomposition: None,
        })
    }

    #[test]
    fn singleton_grid_equals_run() {
        let sweep_out = sweep("detuning", &[200e3], seq1_point).unwrap();
        assert_eq!(sweep_out.points.len(), 1);
        let direct = seq1_point(200e3).unwrap();
        assert_eq!(sweep_out.points[0].population0, direct.population0);
    }

    #[test]
    fn non_monotone_grid_rejected() {
        let err = sweep("detuning", &[1.0, 3.0, 2.0], seq1_point).unwrap_err();
        assert!(matches!(err, SequenceError::BadGrid));
    }

    #[test]
    fn parallel_and_serial_agree() {
        let grid = linear_grid(-400e3, 400e3, 9);
        let a = sweep("detuning", &grid, seq1_point).unwrap();
        std::env::set_var("NVPL_NO_PARALLEL", "1");
        let b = sweep("detuning", &grid, seq1_point).unwrap();
        std::env::remove_var("NVPL_NO_PARALLEL");
        for (pa, pb) in a.points.iter().zip(&b.points) {
            assert_eq!(pa.population0, pb.population0);
        }
    }
}
