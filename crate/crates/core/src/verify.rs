//! Verification suite: every closed-form result the simulator is built to
//! reproduce, checked at pinned tolerances against the numerical engine.
//! The CLI `verify` command and the acceptance test target both run this.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fit::fit_fringe_period;
use crate::nv::{build_h_2ls, FrameTag};
use crate::phase::{aa_phase, decompose, frame_transform, total_phase};
use crate::quantum::states::{
    global_phase_between2, global_phase_between3, State2, State3, Subspace,
};
use crate::scalar::wrap_angle;
use crate::seqfile;
use crate::seqfile::ast::{Angle, ConeTiming, SequenceDoc, Span, SpannedStatement, Statement};
use crate::sequence::builders::{
    build_free_fringes, build_nested_spin_echo, build_sequence1, build_sequence2, build_sequence3,
    build_sequence4, build_spin_echo_plus, two_level_spin_echo,
};
use crate::sequence::run::{oracle_fidelity, run, RunParams, RunResult};
use crate::sequence::segment::{Mode, SegmentedSchedule};
use crate::sequence::SequenceError;
use crate::trajectory::Trajectory2;

/// Rabi frequency every criterion drives at, Hz.
const RABI_HZ: f64 = 500e3;

/// Finite-pulse population offset of the nested spin echo at
/// delta/2pi = 100 kHz, tau_se = 10 us, tau_r = 25 us, rabi/2pi = 500 kHz.
/// Regression pin: the value is this implementation's own converged output,
/// not a published number.
const FINITE_NESTED_SE_OFFSET: f64 = 1.4417559053613e-2;

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub label: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckLine {
    fn against(label: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        let pass = (measured - expected).abs() <= tolerance && measured.is_finite();
        Self {
            label: label.into(),
            measured,
            expected,
            tolerance,
            pass,
        }
    }

    /// Worst deviation over a grid, compared against zero.
    fn worst(label: impl Into<String>, worst_abs_deviation: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            measured: worst_abs_deviation,
            expected: 0.0,
            tolerance,
            pass: worst_abs_deviation.abs() <= tolerance && worst_abs_deviation.is_finite(),
        }
    }

    fn failed(label: impl Into<String>, message: String) -> Self {
        Self {
            label: format!("{} [{message}]", label.into()),
            measured: f64::NAN,
            expected: 0.0,
            tolerance: 0.0,
            pass: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub index: usize,
    pub name: String,
    pub checks: Vec<CheckLine>,
    pub notes: Vec<String>,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn summary_line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let failing = self.checks.iter().filter(|c| !c.pass).count();
        let detail = if failing == 0 {
            format!("{} checks", self.checks.len())
        } else {
            format!("{failing}/{} checks failing", self.checks.len())
        };
        format!(
            "[{status}] criterion {:>2}: {} ({detail})",
            self.index, self.name
        )
    }
}

/// Full report of one verification run.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub criteria: Vec<CriterionResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(CriterionResult::passed)
    }
}

/// Run one criterion by its 1-based index.
pub fn run_criterion(index: usize, params: &RunParams<f64>, seed: u64) -> CriterionResult {
    match index {
        1 => criterion_1_spin_echo_phase(params),
        2 => criterion_2_pure_two_level_contrast(),
        3 => criterion_3_nested_spin_echo(params),
        4 => criterion_4_sequence1(params),
        5 => criterion_5_sequence2(params),
        6 => criterion_6_sequence3(params),
        7 => criterion_7_sequence4(params),
        8 => criterion_8_solid_angles(params),
        9 => criterion_9_gauge_and_frame(params, seed),
        10 => criterion_10_numerics(params),
        11 => criterion_11_parser(seed),
        other => panic!("no criterion {other}"),
    }
}

pub const CRITERION_COUNT: usize = 11;

/// Run the whole suite with the given execution parameters and RNG seed.
pub fn run_all(params: &RunParams<f64>, seed: u64) -> VerifyReport {
    VerifyReport {
        criteria: (1..=CRITERION_COUNT)
            .map(|i| run_criterion(i, params, seed))
            .collect(),
    }
}

fn generalized_rabi(delta: f64) -> f64 {
    (delta * delta + RABI_HZ * RABI_HZ).sqrt()
}

fn detuning_grid() -> Vec<f64> {
    crate::sequence::sweep::linear_grid(-200e3, 200e3, 9)
}

fn run_or_line(
    schedule: Result<SegmentedSchedule<f64>, SequenceError>,
    params: &RunParams<f64>,
    label: &str,
    checks: &mut Vec<CheckLine>,
) -> Option<RunResult<f64>> {
    let schedule = match schedule {
        Ok(s) => s,
        Err(e) => {
            checks.push(CheckLine::failed(label, e.to_string()));
            return None;
        }
    };
    match run(&schedule, params) {
        Ok(r) => Some(r),
        Err(e) => {
            checks.push(CheckLine::failed(label, e.to_string()));
            None
        }
    }
}

/// Two-level view of the schedule's analysis segment.
fn analysis_view(
    result: &RunResult<f64>,
    label: &str,
    subspace: Subspace,
) -> Option<Trajectory2<f64>> {
    let idx = result.trajectory.span_index_by_label(label)?;
    result.trajectory.view_subspace(subspace, idx..idx + 1).ok()
}

/// Criterion 1: Spin-echo global phase on {0,+1} from |+1>: pi + delta*tau/2 (mod 2pi).
fn criterion_1_spin_echo_phase(params: &RunParams<f64>) -> CriterionResult {
    let mut checks = Vec::new();
    let mut worst_phase = 0.0f64;
    let mut worst_overlap = 0.0f64;
    let initial = State3::basis(0);
    for &tau in &[5.0e-6, 10.0e-6, 20.0e-6] {
        for &delta in &detuning_grid() {
            let Some(out) = run_or_line(
                build_spin_echo_plus(delta, tau, RABI_HZ, initial, Mode::HardPulse),
                params,
                "spin echo run",
                &mut checks,
            ) else {
                continue;
            };
            let g = global_phase_between3(&initial, &out.final_state);
            let expected = PI + TAU * delta * tau / 2.0;
            worst_phase = worst_phase.max(wrap_angle(g.phase - expected).abs());
            worst_overlap = worst_overlap.max(1.0 - g.overlap_magnitude);
        }
    }
    checks.push(CheckLine::worst(
        "global phase = pi + delta*tau/2 (mod 2pi), worst over 9x3 grid",
        worst_phase,
        1e-9,
    ));
    checks.push(CheckLine::worst(
        "1 - overlap magnitude, worst over grid",
        worst_overlap,
        1e-12,
    ));
    CriterionResult {
        index: 1,
        name: "spin-echo global phase on {0,+1}".into(),
        checks,
        notes: vec![],
    }
}

/// Criterion 2: The symmetric two-level Hamiltonian yields echo phase pi for every detuning.
fn criterion_2_pure_two_level_contrast() -> CriterionResult {
    let mut checks = Vec::new();
    let mut worst = 0.0f64;
    let up = State2::ket_level(Subspace::PlusOne);
    for &tau in &[5.0e-6, 10.0e-6, 20.0e-6] {
        for &delta in &detuning_grid() {
            let fin = two_level_spin_echo(
                &build_h_2ls(RABI_HZ, delta),
                &build_h_2ls(0.0, delta),
                RABI_HZ,
                tau,
                &up,
                Mode::HardPulse,
            );
            let g = global_phase_between2(&up, &fin).expect("same subspace");
            worst = worst.max(wrap_angle(g.phase - PI).abs());
            worst = worst.max(1.0 - g.overlap_magnitude);
        }
    }
    checks.push(CheckLine::worst(
        "echo phase = pi for all detunings (incl. overlap deficit)",
        worst,
        1e-9,
    ));
    CriterionResult {
        index: 2,
        name: "pure two-level spin-echo contrast".into(),
        checks,
        notes: vec![],
    }
}

/// Criterion 3: Nested spin-echo fringes cos^2(delta*tau_se/4), with the finite-pulse
/// offset regression-pinned.
fn criterion_3_nested_spin_echo(params: &RunParams<f64>) -> CriterionResult {
    let mut checks = Vec::new();
    let tau_r = 25.0e-6;
    let mut worst = 0.0f64;
    for &tau_se in &[5.0e-6, 10.0e-6, 20.0e-6] {
        for &delta in &detuning_grid() {
            let Some(out) = run_or_line(
                build_nested_spin_echo(delta, tau_se, tau_r, RABI_HZ, Mode::HardPulse),
                params,
                "nested spin echo run",
                &mut checks,
            ) else {
                continue;
            };
            let expected = (TAU * delta * tau_se / 4.0).cos().powi(2);
            worst = worst.max((out.population0 - expected).abs());
        }
    }
    checks.push(CheckLine::worst(
        "population = cos^2(delta*tau_se/4), hard pulse, worst over grid",
        worst,
        1e-9,
    ));

    // finite-pulse systematic offset, pinned as a regression value
    if let Some(out) = run_or_line(
        build_nested_spin_echo(100e3, 10.0e-6, tau_r, RABI_HZ, Mode::FinitePulse),
        params,
        "finite-pulse nested spin echo",
        &mut checks,
    ) {
        let ideal = (TAU * 100e3 * 10.0e-6 / 4.0).cos().powi(2);
        checks.push(CheckLine::against(
            "finite-pulse offset at delta = 100 kHz, tau_se = 10 us (regression pin)",
            out.population0 - ideal,
            FINITE_NESTED_SE_OFFSET,
            1e-9,
        ));
    }
    CriterionResult {
        index: 3,
        name: "nested spin-echo fringes".into(),
        checks,
        notes: vec![],
    }
}

/// Criterion 4: Cone circuits on {0,+1} (readout on {0,-1}).
fn criterion_4_sequence1(params: &RunParams<f64>) -> CriterionResult {
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let grid: Vec<f64> = crate::sequence::sweep::linear_grid(-3.0, 3.0, 25)
        .into_iter()
        .map(|r| r * RABI_HZ)
        .collect();
    let mut worst_pop_vs_quoted = 0.0f64;
    let mut worst_pop_vs_model = 0.0f64;
    let mut worst_dyn = 0.0f64;
    let mut worst_aa = 0.0f64;
    for n in 1..=4usize {
        for &delta in &grid {
            let Some(out) = run_or_line(
                build_sequence1(delta, RABI_HZ, n, Mode::HardPulse),
                params,
                "sequence-1 run",
                &mut checks,
            ) else {
                continue;
            };
            let phi_cycle = PI * (1.0 + delta / generalized_rabi(delta));
            let quoted = (n as f64 * phi_cycle).cos().powi(2);
            worst_pop_vs_quoted = worst_pop_vs_quoted.max((out.population0 - quoted).abs());
            let model = (n as f64 * phi_cycle / 2.0).sin().powi(2);
            worst_pop_vs_model = worst_pop_vs_model.max((out.population0 - model).abs());

            if let Some(view) = analysis_view(&out, "cpulse", Subspace::PlusOne) {
                match decompose(&view) {
                    Ok(d) => {
                        worst_dyn = worst_dyn.max(d.phi_dyn.abs());
                        worst_aa = worst_aa.max((d.phi_aa - n as f64 * phi_cycle).abs());
                    }
                    Err(e) => checks.push(CheckLine::failed("cone decomposition", e.to_string())),
                }
            }
        }
    }
    checks.push(CheckLine::worst(
        "population = cos^2(N pi (1 + delta/W)) as quoted, worst over grid",
        worst_pop_vs_quoted,
        1e-6,
    ));
    checks.push(CheckLine::worst(
        "cone-segment phi_dyn = 0, worst over grid",
        worst_dyn,
        1e-6,
    ));
    checks.push(CheckLine::worst(
        "cone-segment phi_aa = N pi (1 + delta/W), worst over grid",
        worst_aa,
        1e-6,
    ));
    notes.push(format!(
        "the propagated interferometer gives population = sin^2(N phi_AA / 2) instead \
         (worst deviation {worst_pop_vs_model:.3e}); the quoted cos^2(N phi_AA) form \
         doubles the fringe rate and is inconsistent with the sequence-2 doubling and \
         the sequence-3 equivalence that criteria 5 and 6 pin"
    ));
    CriterionResult {
        index: 4,
        name: "sequence 1 cone circuits".into(),
        checks,
        notes,
    }
}

/// Criterion 5: Cone circuits on the readout subspace with sampled drive azimuth.
fn criterion_5_sequence2(params: &RunParams<f64>) -> CriterionResult {
    let mut checks = Vec::new();
    let delta = 250e3;
    let w = generalized_rabi(delta);
    let mut populations = Vec::new();
    let mut worst_dyn = 0.0f64;
    let mut worst_aa = 0.0f64;
    let mut sums = Vec::new();
    for k in 0..32 {
        let phi0 = TAU * k as f64 / 32.0;
        let Some(out) = run_or_line(
            build_sequence2(delta, RABI_HZ, 1, phi0, Mode::HardPulse),
            params,
            "sequence-2 run",
            &mut checks,
        ) else {
            continue;
        };
        populations.push(out.population0);
        let Some(view) = analysis_view(&out, "cpulse", Subspace::MinusOne) else {
            checks.push(CheckLine::failed(
                "sequence-2 view",
                "no cpulse span".into(),
            ));
            continue;
        };
        match decompose(&view) {
            Ok(d) => {
                let expected_dyn = PI * (delta - RABI_HZ * phi0.sin()) / w;
                let expected_aa = PI * (1.0 + RABI_HZ * phi0.sin() / w);
                worst_dyn = worst_dyn.max((d.phi_dyn - expected_dyn).abs());
                worst_aa = worst_aa.max((d.phi_aa - expected_aa).abs());
                sums.push(d.phi_dyn + d.phi_aa);
            }
            Err(e) => checks.push(CheckLine::failed("sequence-2 decomposition", e.to_string())),
        }
    }
    let pop_spread = spread(&populations);
    checks.push(CheckLine::worst(
        "population spread over 32 drive azimuths",
        pop_spread,
        1e-9,
    ));
    checks.push(CheckLine::worst(
        "phi_dyn(phi0) = pi (delta - rabi sin phi0)/W, worst",
        worst_dyn,
        1e-5,
    ));
    checks.push(CheckLine::worst(
        "phi_aa(phi0) = pi (1 + rabi sin phi0 / W), worst",
        worst_aa,
        1e-5,
    ));
    checks.push(CheckLine::worst(
        "phi_dyn + phi_aa constant in phi0",
        spread(&sums),
        1e-6,
    ));

    // measured per-cycle phase doubles sequence 1's (mod 2pi)
    match (
        per_cycle_arm_phase(params, |n| {
            build_sequence2(delta, RABI_HZ, n, 0.0, Mode::HardPulse)
        }),
        per_cycle_arm_phase(params, |n| {
            build_sequence1(delta, RABI_HZ, n, Mode::HardPulse)
        }),
    ) {
        (Some(pc2), Some(pc1)) => {
            checks.push(CheckLine::worst(
                "per-cycle phase = 2x sequence-1's (mod 2pi)",
                wrap_angle(pc2 - 2.0 * pc1).abs(),
                1e-6,
            ));
        }
        _ => checks.push(CheckLine::failed(
            "per-cycle phase extraction",
            "arm phases unavailable".into(),
        )),
    }
    CriterionResult {
        index: 5,
        name: "sequence 2 drive-azimuth independence".into(),
        checks,
        notes: vec![],
    }
}

/// Relative phase between the m_S = 0 and m_S = -1 amplitudes accumulated
/// per cone cycle, measured from the states before the closing readout pulse
/// at N = 1 and N = 2.
fn per_cycle_arm_phase<F>(params: &RunParams<f64>, build: F) -> Option<f64>
where
    F: Fn(usize) -> Result<SegmentedSchedule<f64>, SequenceError>,
{
    let mut arm = [0.0f64; 2];
    for (i, n) in [1usize, 2].iter().enumerate() {
        let schedule = build(*n).ok()?;
        let out = run(&schedule, params).ok()?;
        let idx = out.trajectory.span_index_by_label("cpulse")?;
        let span = &out.trajectory.spans[idx];
        let (t, state) = span.samples.last()?;
        // move the span-frame state back to the resonant frame the readout
        // pulses are phase-referenced to
        let c0 = state.amplitudes[1];
        let cm = state.amplitudes[2]
            * num_complex::Complex::from_polar(1.0, -TAU * span.frame_hz[1] * t);
        if c0.norm() < 1e-6 || cm.norm() < 1e-6 {
            return None;
        }
        arm[i] = (c0 * cm.conj()).arg();
    }
    Some(wrap_angle(arm[1] - arm[0]))
}

/// Criterion 6: Composite trajectories: two half-cones with 1/delta free evolution.
fn criterion_6_sequence3(params: &RunParams<f64>) -> CriterionResult {
    let mut checks = Vec::new();
    let grid = crate::sequence::sweep::linear_grid(100e3, 600e3, 11);
    let mut worst_pop = 0.0f64;
    let mut worst_dyn = 0.0f64;
    let mut worst_cancel = 0.0f64;
    for &delta in &grid {
        let (Some(out3), Some(out1)) = (
            run_or_line(
                build_sequence3(delta, RABI_HZ, Mode::HardPulse),
                params,
                "sequence-3 run",
                &mut checks,
            ),
            run_or_line(
                build_sequence1(delta, RABI_HZ, 1, Mode::HardPulse),
                params,
                "sequence-1 reference run",
                &mut checks,
            ),
        ) else {
            continue;
        };
        worst_pop = worst_pop.max((out3.population0 - out1.population0).abs());

        let w = generalized_rabi(delta);
        let cos_theta = (RABI_HZ * RABI_HZ - delta * delta) / (w * w);
        if let Some(view) = analysis_view(&out3, "free", Subspace::PlusOne) {
            match decompose(&view) {
                Ok(d) => {
                    worst_dyn = worst_dyn.max((d.phi_dyn - PI * (1.0 + cos_theta)).abs());
                    worst_cancel = worst_cancel.max((d.phi_aa + d.phi_dyn).abs());
                }
                Err(e) => checks.push(CheckLine::failed(
                    "free-segment decomposition",
                    e.to_string(),
                )),
            }
        }
    }
    checks.push(CheckLine::worst(
        "population identical to sequence 1 (N = 1), worst over grid",
        worst_pop,
        1e-9,
    ));
    checks.push(CheckLine::worst(
        "free-segment phi_dyn = pi (1 + cos theta), worst",
        worst_dyn,
        1e-6,
    ));
    checks.push(CheckLine::worst(
        "free-segment phi_aa = -phi_dyn, worst",
        worst_cancel,
        1e-6,
    ));

    // free-precession fringe periods
    for &delta in &[100e3, 250e3, 500e3] {
        let times = crate::sequence::sweep::linear_grid(0.0, 10.0e-6f64.min(2.0 / delta), 81);
        let mut populations = Vec::new();
        let mut ok = true;
        for &t in &times {
            match build_free_fringes(delta, RABI_HZ, t, Mode::HardPulse)
                .and_then(|s| run(&s, params))
            {
                Ok(out) => populations.push(out.population0),
                Err(e) => {
                    checks.push(CheckLine::failed("free-fringes run", e.to_string()));
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let fit = fit_fringe_period(&times, &populations, 1.0 / delta);
            checks.push(CheckLine::against(
                format!("fringe period at delta = {} kHz (relative)", delta / 1e3),
                fit.period * delta,
                1.0,
                1e-3,
            ));
        }
    }
    CriterionResult {
        index: 6,
        name: "sequence 3 composite trajectory".into(),
        checks,
        notes: vec![],
    }
}

/// Criterion 7: Sequence 4: interrupted free evolution.
fn criterion_7_sequence4(params: &RunParams<f64>) -> CriterionResult {
    let mut checks = Vec::new();
    let delta = 250e3;
    let w = generalized_rabi(delta);
    let cos_theta = (RABI_HZ * RABI_HZ - delta * delta) / (w * w);
    let sin_theta = 2.0 * delta * RABI_HZ / (w * w);
    let tau = 1.0 / delta;
    let mut populations = Vec::new();
    let mut worst_dyn = 0.0f64;
    let mut worst_aa = 0.0f64;
    let mut worst_total = 0.0f64;
    for &eta in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        let Some(out) = run_or_line(
            build_sequence4(delta, RABI_HZ, eta, Mode::HardPulse),
            params,
            "sequence-4 run",
            &mut checks,
        ) else {
            continue;
        };
        populations.push(out.population0);
        let tau1 = (1.0 - eta) * tau;
        let beta = TAU * delta * tau1;
        let geom = (delta * cos_theta - RABI_HZ * beta.cos() * sin_theta) / w;
        let expected_dyn = PI * (delta / w + geom);
        let expected_aa = PI * (1.0 - geom);
        if let Some(view) = analysis_view(&out, "cpulse", Subspace::PlusOne) {
            match decompose(&view) {
                Ok(d) => {
                    worst_dyn = worst_dyn.max((d.phi_dyn - expected_dyn).abs());
                    worst_aa = worst_aa.max((d.phi_aa - expected_aa).abs());
                    worst_total = worst_total.max((d.phi_total - PI * (1.0 + delta / w)).abs());
                }
                Err(e) => checks.push(CheckLine::failed(
                    "cone-segment decomposition",
                    e.to_string(),
                )),
            }
        }
    }
    checks.push(CheckLine::worst(
        "population spread over eta in {0, 0.25, 0.5, 0.75, 1}",
        spread(&populations),
        1e-9,
    ));
    checks.push(CheckLine::worst(
        "cone-segment phi_dyn matches the interrupted-evolution form, worst",
        worst_dyn,
        1e-5,
    ));
    checks.push(CheckLine::worst(
        "cone-segment phi_aa matches its complement, worst",
        worst_aa,
        1e-5,
    ));
    checks.push(CheckLine::worst(
        "cone-segment phi_total = pi (1 + delta/W), independent of tau1",
        worst_total,
        1e-6,
    ));
    CriterionResult {
        index: 7,
        name: "sequence 4 interrupted free evolution".into(),
        checks,
        notes: vec![],
    }
}

/// Criterion 8: Solid-angle relations.
fn criterion_8_solid_angles(params: &RunParams<f64>) -> CriterionResult {
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let mut worst_cone = 0.0f64;
    for &ratio in &[-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
        let delta = ratio * RABI_HZ;
        let Some(out) = run_or_line(
            build_sequence1(delta, RABI_HZ, 1, Mode::HardPulse),
            params,
            "sequence-1 run",
            &mut checks,
        ) else {
            continue;
        };
        if let Some(view) = analysis_view(&out, "cpulse", Subspace::PlusOne) {
            match crate::phase::solid_angle_check(&view) {
                Ok(c) => {
                    worst_cone = worst_cone.max(c.deviation_mod_2pi.abs());
                    if c.branch != 0 {
                        notes.push(format!(
                            "cone at delta/rabi = {ratio}: phi_aa sits {} turns from theta/2",
                            c.branch
                        ));
                    }
                }
                Err(e) => checks.push(CheckLine::failed("cone solid angle", e.to_string())),
            }
        }
    }
    checks.push(CheckLine::worst(
        "cone: theta = 2 phi_aa (mod 2pi), worst over detunings",
        worst_cone,
        1e-3,
    ));

    // sequence-4 cone segment
    let mut worst_s4 = 0.0f64;
    for &eta in &[0.25, 0.5] {
        let Some(out) = run_or_line(
            build_sequence4(250e3, RABI_HZ, eta, Mode::HardPulse),
            params,
            "sequence-4 run",
            &mut checks,
        ) else {
            continue;
        };
        if let Some(view) = analysis_view(&out, "cpulse", Subspace::PlusOne) {
            match crate::phase::solid_angle_check(&view) {
                Ok(c) => {
                    worst_s4 = worst_s4.max(c.deviation_mod_2pi.abs());
                    if c.branch != 0 {
                        notes.push(format!(
                            "sequence-4 cone at eta = {eta}: branch {} logged",
                            c.branch
                        ));
                    }
                }
                Err(e) => checks.push(CheckLine::failed("sequence-4 solid angle", e.to_string())),
            }
        }
    }
    checks.push(CheckLine::worst(
        "interrupted cone: theta = 2 phi_aa (mod 2pi), worst",
        worst_s4,
        1e-3,
    ));

    // sequence-3 free segment: theta = 2pi (1 - cos theta_polar)
    let mut worst_free = 0.0f64;
    for &delta in &[150e3, 250e3, 400e3] {
        let Some(out) = run_or_line(
            build_sequence3(delta, RABI_HZ, Mode::HardPulse),
            params,
            "sequence-3 run",
            &mut checks,
        ) else {
            continue;
        };
        let w = generalized_rabi(delta);
        let cos_theta = (RABI_HZ * RABI_HZ - delta * delta) / (w * w);
        if let Some(view) = analysis_view(&out, "free", Subspace::PlusOne) {
            match crate::phase::swept_solid_angle(&view) {
                Ok(theta) => worst_free = worst_free.max((theta - TAU * (1.0 - cos_theta)).abs()),
                Err(e) => checks.push(CheckLine::failed("free solid angle", e.to_string())),
            }
        }
    }
    checks.push(CheckLine::worst(
        "free precession: theta = 2pi (1 - cos theta_polar), worst",
        worst_free,
        1e-3,
    ));
    CriterionResult {
        index: 8,
        name: "solid-angle relations".into(),
        checks,
        notes,
    }
}

/// Criterion 9: Gauge invariance and frame transforms.
fn criterion_9_gauge_and_frame(params: &RunParams<f64>, seed: u64) -> CriterionResult {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6761_7567_6500);

    // gauge invariance of the connection-integral route on a cone
    let delta = 250e3;
    let mut worst_gauge = 0.0f64;
    match build_sequence1(delta, RABI_HZ, 1, Mode::HardPulse).and_then(|s| run(&s, params)) {
        Ok(out) => {
            let view = analysis_view(&out, "cpulse", Subspace::PlusOne);
            match view.as_ref().map(aa_phase) {
                Some(Ok(base)) => {
                    let view = view.unwrap();
                    let duration = view.duration();
                    let t0 = view.spans[0].samples[0].0;
                    for _ in 0..50 {
                        let coefs: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-0.4..0.4));
                        let mut gauged = view.clone();
                        for span in &mut gauged.spans {
                            for (t, s) in &mut span.samples {
                                let x = (*t - t0) / duration;
                                let alpha: f64 = coefs
                                    .iter()
                                    .enumerate()
                                    .map(|(k, a)| a * (PI * (k + 1) as f64 * x).sin())
                                    .sum();
                                let g = num_complex::Complex::from_polar(1.0, alpha);
                                for amp in &mut s.amplitudes {
                                    *amp *= g;
                                }
                            }
                        }
                        match aa_phase(&gauged) {
                            Ok(aa) => {
                                worst_gauge = worst_gauge.max((aa.direct - base.direct).abs())
                            }
                            Err(e) => {
                                checks.push(CheckLine::failed("gauged aa phase", e.to_string()))
                            }
                        }
                    }
                    checks.push(CheckLine::worst(
                        "phi_aa invariant under 50 random smooth closed gauges",
                        worst_gauge,
                        1e-6,
                    ));
                }
                _ => checks.push(CheckLine::failed(
                    "gauge baseline",
                    "cone view unavailable".into(),
                )),
            }
        }
        Err(e) => checks.push(CheckLine::failed("gauge test run", e.to_string())),
    }

    // sequence-2 frame transform: resonant view opens the path, the detuned
    // frame closes it and preserves phi_aa
    match build_sequence2(delta, RABI_HZ, 1, 0.7, Mode::HardPulse).and_then(|s| run(&s, params)) {
        Ok(out) => match analysis_view(&out, "cpulse", Subspace::MinusOne) {
            Some(native) => {
                let native_aa = aa_phase(&native);
                let resonant = frame_transform(&native, FrameTag::Resonant);
                let (_, open_residual) = total_phase(&resonant).expect("resonant view");
                let closed = frame_transform(&resonant, FrameTag::Detuned(delta));
                let (_, closed_residual) = total_phase(&closed).expect("closed view");
                checks.push(CheckLine::worst(
                    "resonant frame leaves the path open (residual well above closure)",
                    if open_residual > 1e-3 { 0.0 } else { 1.0 },
                    0.5,
                ));
                checks.push(CheckLine::worst(
                    "detuned frame closes the path (1 - endpoint overlap)",
                    closed_residual,
                    1e-9,
                ));
                match (native_aa, aa_phase(&closed)) {
                    (Ok(a), Ok(b)) => checks.push(CheckLine::worst(
                        "phi_aa invariant under the closing frame transform",
                        (a.value - b.value).abs(),
                        1e-5,
                    )),
                    _ => checks.push(CheckLine::failed(
                        "frame-transform phi_aa",
                        "decomposition failed".into(),
                    )),
                }
            }
            None => checks.push(CheckLine::failed(
                "sequence-2 view",
                "no cpulse span".into(),
            )),
        },
        Err(e) => checks.push(CheckLine::failed("frame test run", e.to_string())),
    }

    CriterionResult {
        index: 9,
        name: "gauge and frame invariance".into(),
        checks,
        notes: vec![],
    }
}

/// Named schedule with the span label and subspace its analysis focuses on.
type NumericsCase = (
    &'static str,
    Result<SegmentedSchedule<f64>, SequenceError>,
    &'static str,
    Subspace,
);

/// Criterion 10: Numerical quality: norm conservation, oracle agreement, and step
/// convergence of every reported phase.
fn criterion_10_numerics(params: &RunParams<f64>) -> CriterionResult {
    let mut checks = Vec::new();
    let cases: Vec<NumericsCase> = vec![
        (
            "sequence 1 (N=2, delta=rabi)",
            build_sequence1(RABI_HZ, RABI_HZ, 2, Mode::HardPulse),
            "cpulse",
            Subspace::PlusOne,
        ),
        (
            "sequence 3 (delta = 250 kHz)",
            build_sequence3(250e3, RABI_HZ, Mode::HardPulse),
            "free",
            Subspace::PlusOne,
        ),
        (
            "sequence 4 (eta = 0.25)",
            build_sequence4(250e3, RABI_HZ, 0.25, Mode::HardPulse),
            "cpulse",
            Subspace::PlusOne,
        ),
        (
            "sequence 2 (phi0 = 0.9)",
            build_sequence2(250e3, RABI_HZ, 1, 0.9, Mode::HardPulse),
            "cpulse",
            Subspace::MinusOne,
        ),
    ];

    let mut worst_norm = 0.0f64;
    let mut worst_fidelity_deficit = 0.0f64;
    let mut worst_phase_shift = 0.0f64;
    for (name, schedule, span_label, subspace) in cases {
        let schedule = match schedule {
            Ok(s) => s,
            Err(e) => {
                checks.push(CheckLine::failed(name, e.to_string()));
                continue;
            }
        };
        let fine = RunParams {
            dt: params.dt / 2.0,
            ..*params
        };
        let (out, out_fine) = match (run(&schedule, params), run(&schedule, &fine)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                checks.push(CheckLine::failed(name, e.to_string()));
                continue;
            }
        };
        worst_norm = worst_norm.max((out.final_state.norm() - 1.0).abs());
        worst_fidelity_deficit = worst_fidelity_deficit.max(1.0 - oracle_fidelity(&out));

        let views = (
            analysis_view(&out, span_label, subspace),
            analysis_view(&out_fine, span_label, subspace),
        );
        if let (Some(va), Some(vb)) = views {
            match (decompose(&va), decompose(&vb)) {
                (Ok(da), Ok(db)) => {
                    worst_phase_shift = worst_phase_shift
                        .max((da.phi_total - db.phi_total).abs())
                        .max((da.phi_dyn - db.phi_dyn).abs())
                        .max((da.phi_aa - db.phi_aa).abs());
                }
                _ => checks.push(CheckLine::failed(name, "decomposition failed".into())),
            }
        }
    }
    checks.push(CheckLine::worst(
        "norm drift of chained exact propagation",
        worst_norm,
        1e-12,
    ));
    checks.push(CheckLine::worst(
        "stepped-vs-exact fidelity deficit at dt",
        worst_fidelity_deficit,
        1e-8,
    ));
    checks.push(CheckLine::worst(
        "phase change when halving dt, worst over runs and phases",
        worst_phase_shift,
        1e-7,
    ));
    CriterionResult {
        index: 10,
        name: "numerical quality".into(),
        checks,
        notes: vec![],
    }
}

/// Criterion 11: Parser round-trip and builder-export fidelity.
fn criterion_11_parser(seed: u64) -> CriterionResult {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7061_7273_6500);
    let mut failures = 0usize;
    const DOCS: usize = 1000;
    for i in 0..DOCS {
        let doc = random_doc(&mut rng, i);
        let text = seqfile::serialize(&doc);
        let parsed = seqfile::parse(&text);
        if parsed.has_errors() || parsed.docs.len() != 1 || !parsed.docs[0].same_structure(&doc) {
            failures += 1;
        }
    }
    checks.push(CheckLine::worst(
        format!("AST round-trip failures over {DOCS} generated docs"),
        failures as f64,
        0.0,
    ));

    // the five builder sequences export, reparse and re-lower identically
    let builders: Vec<(&str, Result<SegmentedSchedule<f64>, SequenceError>)> = vec![
        (
            "nested_se",
            build_nested_spin_echo(100e3, 10.0e-6, 20.0e-6, RABI_HZ, Mode::HardPulse),
        ),
        ("seq1", build_sequence1(250e3, RABI_HZ, 2, Mode::HardPulse)),
        (
            "seq2",
            build_sequence2(250e3, RABI_HZ, 1, 0.0, Mode::HardPulse),
        ),
        ("seq3", build_sequence3(250e3, RABI_HZ, Mode::HardPulse)),
        (
            "seq4",
            build_sequence4(250e3, RABI_HZ, 0.5, Mode::HardPulse),
        ),
    ];
    let mut mismatches = 0usize;
    for (name, schedule) in builders {
        let Ok(schedule) = schedule else {
            mismatches += 1;
            continue;
        };
        let ok = seqfile::export(&schedule, name)
            .map(|doc| seqfile::serialize(&doc))
            .ok()
            .and_then(|text| {
                let parsed = seqfile::parse(&text);
                if parsed.has_errors() {
                    return None;
                }
                seqfile::to_schedule(
                    &parsed.docs[0],
                    &seqfile::LowerOptions {
                        mode: Mode::HardPulse,
                        rotation_rabi_hz: RABI_HZ,
                    },
                    State3::ket0(),
                )
                .ok()
            })
            .map(|lowered| seqfile::schedules_equivalent(&schedule, &lowered))
            .unwrap_or(false);
        if !ok {
            mismatches += 1;
        }
    }
    checks.push(CheckLine::worst(
        "builder exports re-lowering segment-for-segment (failures)",
        mismatches as f64,
        0.0,
    ));
    CriterionResult {
        index: 11,
        name: "sequence-file round trips".into(),
        checks,
        notes: vec![],
    }
}

fn spread(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max - min
}

fn random_doc(rng: &mut ChaCha8Rng, index: usize) -> SequenceDoc {
    let n_statements = rng.gen_range(0..=8);
    let mut statements = Vec::with_capacity(n_statements);
    for _ in 0..n_statements {
        statements.push(SpannedStatement {
            statement: random_statement(rng),
            span: Span::default(),
        });
    }
    SequenceDoc {
        name: format!("g{index}"),
        name_span: Span::default(),
        statements,
    }
}

fn random_sub(rng: &mut ChaCha8Rng) -> Subspace {
    if rng.gen_bool(0.5) {
        Subspace::PlusOne
    } else {
        Subspace::MinusOne
    }
}

/// Quantity that the grammar could have produced: a short decimal mantissa
/// times a unit factor.
fn random_quantity(rng: &mut ChaCha8Rng, factors: &[f64]) -> f64 {
    let mantissa = (rng.gen_range(1..100_000) as f64) / 10f64.powi(rng.gen_range(0..4));
    let factor = factors[rng.gen_range(0..factors.len())];
    mantissa * factor
}

fn random_statement(rng: &mut ChaCha8Rng) -> Statement {
    match rng.gen_range(0..3) {
        0 => Statement::Pulse {
            subspace: random_sub(rng),
            angle: match rng.gen_range(0..3) {
                0 => Angle::HalfPi,
                1 => Angle::Pi,
                _ => Angle::Rad((rng.gen_range(1..62) as f64) / 10.0),
            },
            phase: (rng.gen_range(-31i64..=31) as f64) / 10.0,
        },
        1 => {
            let rabi = random_quantity(rng, &[1e3, 1e6]);
            Statement::CPulse {
                subspace: random_sub(rng),
                detuning_hz: random_quantity(rng, &[1.0, 1e3])
                    * if rng.gen_bool(0.5) { -1.0 } else { 1.0 },
                rabi_hz: rabi,
                timing: if rng.gen_bool(0.5) {
                    ConeTiming::Cycles(rng.gen_range(1..6) as f64)
                } else {
                    ConeTiming::Fraction((rng.gen_range(1..=20) as f64) / 20.0)
                },
                phase: if rng.gen_bool(0.5) {
                    Some((rng.gen_range(-31i64..=31) as f64) / 10.0)
                } else {
                    None
                },
            }
        }
        _ => Statement::Wait {
            duration_s: random_quantity(rng, &[1e-9, 1e-6]),
            detuning: if rng.gen_bool(0.5) {
                Some((random_sub(rng), random_quantity(rng, &[1e3])))
            } else {
                None
            },
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A step too coarse for the field strengths is refused per run, and the
    /// report flags the affected criterion instead of crashing.
    #[test]
    fn coarse_step_is_flagged_not_fatal() {
        let params = RunParams {
            dt: 100.0e-9,
            ..RunParams::default()
        };
        let c = run_criterion(10, &params, 7);
        assert!(!c.passed());
        assert!(c
            .checks
            .iter()
            .any(|line| !line.pass && line.label.contains("too coarse")));
    }

    /// Development helper: print the measured finite-pulse offset so the
    /// regression constant can be pinned.
    #[test]
    #[ignore]
    fn print_finite_offset() {
        let params = RunParams::default();
        let out = run(
            &build_nested_spin_echo(100e3, 10.0e-6, 25.0e-6, RABI_HZ, Mode::FinitePulse).unwrap(),
            &params,
        )
        .unwrap();
        let ideal = (TAU * 100e3 * 10.0e-6 / 4.0).cos().powi(2);
        println!("finite offset = {:.13e}", out.population0 - ideal);
    }
}
