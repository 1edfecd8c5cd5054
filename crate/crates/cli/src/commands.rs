//! Implementations of the CLI subcommands.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use nvpl_core::fit::{fit_cos_squared, fit_fringe_period};
use nvpl_core::phase::{decompose, PhaseDecomposition};
use nvpl_core::quantum::states::{bloch_vector, State3, Subspace};
use nvpl_core::seqfile;
use nvpl_core::sequence::builders::{
    build_free_fringes, build_nested_spin_echo, build_sequence1, build_sequence2, build_sequence3,
    build_sequence4,
};
use nvpl_core::sequence::run::{run, RunResult};
use nvpl_core::sequence::segment::{Mode, SegmentedSchedule};
use nvpl_core::sequence::sweep::linear_grid;
use nvpl_core::trajectory::Trajectory3;
use nvpl_core::verify;

use crate::format::sig12;
use crate::RunConfig;

pub struct SweepFixed {
    pub delta: f64,
    pub n: usize,
    pub phi0: Option<f64>,
    pub tau_se: f64,
    pub tau_r: f64,
}

/// Run one `.seq` file: trajectory CSV and JSON summary.
pub fn run_file(path: &str, sequence: Option<&str>, config: &RunConfig) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let parsed = seqfile::parse(&text);
    for d in &parsed.diagnostics {
        eprintln!("{path}:{d}");
    }
    if parsed.has_errors() {
        bail!("{path}: parse errors");
    }
    if parsed.docs.is_empty() {
        bail!("{path}: no sequences found");
    }
    let doc = match sequence {
        Some(name) => parsed
            .docs
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| anyhow!("{path}: no sequence named '{name}'"))?,
        None => &parsed.docs[0],
    };

    let options = seqfile::LowerOptions {
        mode: config.mode(),
        rotation_rabi_hz: config.rabi,
    };
    let schedule = match seqfile::to_schedule(doc, &options, State3::ket0()) {
        Ok(s) => s,
        Err(diags) => {
            for d in &diags {
                eprintln!("{path}:{d}");
            }
            bail!("{path}: semantic errors in sequence '{}'", doc.name);
        }
    };

    let out = run(&schedule, &config.params())?;

    let csv_path = format!("{}.csv", config.output);
    write_trajectory_csv(&csv_path, &out.trajectory)?;

    let summary = run_summary(&doc.name, &out, config);
    let json_path = format!("{}.json", config.output);
    fs::write(&json_path, serde_json::to_string_pretty(&summary)? + "\n")?;

    println!(
        "{}: population0 = {}, wrote {csv_path} and {json_path}",
        doc.name,
        sig12(out.population0)
    );
    Ok(())
}

fn write_trajectory_csv(path: &str, traj: &Trajectory3<f64>) -> Result<()> {
    let mut f = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(
        f,
        "t_s,c_plus1_re,c_plus1_im,c_0_re,c_0_im,c_minus1_re,c_minus1_im,\
         bloch_x_plus,bloch_y_plus,bloch_z_plus,bloch_x_minus,bloch_y_minus,bloch_z_minus,\
         segment_label"
    )?;
    for span in &traj.spans {
        for (t, s) in &span.samples {
            let blochs: Vec<String> = [Subspace::PlusOne, Subspace::MinusOne]
                .iter()
                .flat_map(|&sub| {
                    match s.subspace_state(sub) {
                        Ok((s2, _)) => {
                            let b = bloch_vector(&s2);
                            [sig12(b.x), sig12(b.y), sig12(b.z)]
                        }
                        // block carries no amplitude; Bloch vector undefined
                        Err(_) => [sig12(0.0), sig12(0.0), sig12(0.0)],
                    }
                })
                .collect();
            writeln!(
                f,
                "{},{},{},{},{},{},{},{},{}",
                sig12(*t),
                sig12(s.amplitudes[0].re),
                sig12(s.amplitudes[0].im),
                sig12(s.amplitudes[1].re),
                sig12(s.amplitudes[1].im),
                sig12(s.amplitudes[2].re),
                sig12(s.amplitudes[2].im),
                blochs.join(","),
                span.label
            )?;
        }
    }
    Ok(())
}

fn decomposition_json(d: &PhaseDecomposition<f64>) -> serde_json::Value {
    json!({
        "phi_total": d.phi_total,
        "phi_dyn": d.phi_dyn,
        "phi_aa": d.phi_aa,
        "phi_aa_direct": d.phi_aa_direct,
        "solid_angle": d.solid_angle,
        "cyclicity_residual": d.cyclicity_residual,
        "non_cyclic": d.non_cyclic,
    })
}

/// Focus subspace of a span: the driven block if there is one, else the
/// block whose rotating frame is detuned.
fn span_focus(traj: &Trajectory3<f64>, idx: usize) -> Option<Subspace> {
    let span = &traj.spans[idx];
    for sub in [Subspace::PlusOne, Subspace::MinusOne] {
        if nvpl_core::trajectory::block_of(&span.h, sub)
            .entry(0, 1)
            .norm()
            > 0.0
        {
            return Some(sub);
        }
    }
    if span.frame_hz[0] != 0.0 {
        Some(Subspace::PlusOne)
    } else if span.frame_hz[1] != 0.0 {
        Some(Subspace::MinusOne)
    } else {
        None
    }
}

fn run_summary(name: &str, out: &RunResult<f64>, config: &RunConfig) -> serde_json::Value {
    let mut segments = Vec::new();
    let mut totals = (0.0, 0.0, 0.0);
    for (idx, span) in out.trajectory.spans.iter().enumerate() {
        if span.samples.len() < 2 {
            continue;
        }
        let Some(sub) = span_focus(&out.trajectory, idx) else {
            continue;
        };
        let entry = match out
            .trajectory
            .view_subspace(sub, idx..idx + 1)
            .map_err(|e| e.to_string())
            .and_then(|view| decompose(&view).map_err(|e| e.to_string()))
        {
            Ok(d) => {
                totals.0 += d.phi_total;
                totals.1 += d.phi_dyn;
                totals.2 += d.phi_aa;
                json!({
                    "label": span.label,
                    "subspace": sub.to_string(),
                    "decomposition": decomposition_json(&d),
                })
            }
            Err(e) => json!({
                "label": span.label,
                "subspace": sub.to_string(),
                "error": e,
            }),
        };
        segments.push(entry);
    }

    let populations = out.final_state.populations();
    let mut summary = json!({
        "sequence": name,
        "population0": out.population0,
        "final_populations": {
            "plus1": populations[0],
            "zero": populations[1],
            "minus1": populations[2],
        },
        "oracle_fidelity": nvpl_core::sequence::run::oracle_fidelity(out),
        "max_renorm_drift": out.trajectory.step_log.max_renorm_drift,
        "segments": segments,
        "totals": {
            "phi_total": totals.0,
            "phi_dyn": totals.1,
            "phi_aa": totals.2,
        },
    });
    if config.shots > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        summary["population0_sampled"] =
            json!(sample_binomial(&mut rng, config.shots, out.population0));
    }
    summary
}

/// Binomial shot-noise emulation: fraction of `shots` successes at
/// probability `p`.
fn sample_binomial(rng: &mut ChaCha8Rng, shots: u64, p: f64) -> f64 {
    let mut hits = 0u64;
    for _ in 0..shots {
        if rng.gen_bool(p.clamp(0.0, 1.0)) {
            hits += 1;
        }
    }
    hits as f64 / shots as f64
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("grid must be start:stop:steps, got '{spec}'");
    }
    let start: f64 = parts[0].parse().context("grid start")?;
    let stop: f64 = parts[1].parse().context("grid stop")?;
    let steps: usize = parts[2].parse().context("grid steps")?;
    if steps == 0 {
        bail!("grid needs at least one point");
    }
    Ok(linear_grid(start, stop, steps))
}

/// Sweep a built-in sequence over the grid; one CSV row per point plus a
/// JSON sidecar with fit results where the sequence family defines one.
pub fn sweep(builder: &str, grid_spec: &str, fixed: SweepFixed, config: &RunConfig) -> Result<()> {
    let grid = parse_grid(grid_spec)?;
    let mode = config.mode();
    let params = config.params();

    // pre-sample per-point drive azimuths for seq2
    let phi0s: Vec<f64> = match fixed.phi0 {
        Some(p) => vec![p; grid.len()],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            (0..grid.len())
                .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                .collect()
        }
    };

    let make = |parameter: f64,
                index: usize|
     -> Result<SegmentedSchedule<f64>, nvpl_core::sequence::SequenceError> {
        match builder {
            "nested_se" => {
                build_nested_spin_echo(parameter, fixed.tau_se, fixed.tau_r, config.rabi, mode)
            }
            "seq1" => build_sequence1(parameter, config.rabi, fixed.n, mode),
            "seq2" => build_sequence2(parameter, config.rabi, fixed.n, phi0s[index], mode),
            "seq3" => build_sequence3(parameter, config.rabi, mode),
            "seq4" => build_sequence4(fixed.delta, config.rabi, parameter, mode),
            "free_fringes" => build_free_fringes(fixed.delta, config.rabi, parameter, mode),
            _ => unreachable!(),
        }
    };
    if !matches!(
        builder,
        "nested_se" | "seq1" | "seq2" | "seq3" | "seq4" | "free_fringes"
    ) {
        bail!("unknown builder '{builder}'");
    }

    let sweep_out = nvpl_core::sequence::sweep::sweep("parameter", &grid, |p| {
        let index = grid
            .iter()
            .position(|&g| g == p)
            .expect("parameter from grid");
        let schedule = make(p, index)?;
        let out = run(&schedule, &params)?;
        let decomposition = schedule.analysis.as_ref().and_then(|focus| {
            let view = out
                .trajectory
                .view_labeled(focus.subspace, &focus.label)
                .ok()?;
            decompose(&view).ok()
        });
        Ok(nvpl_core::sequence::sweep::SweepPoint {
            parameter: p,
            final_state: out.final_state,
            population0: out.population0,
            decomposition,
        })
    })
    .map_err(|e| anyhow!("{e}"))?;

    // CSV
    let csv_path = format!("{}.csv", config.output);
    {
        let mut f = std::io::BufWriter::new(fs::File::create(&csv_path)?);
        let shot_col = if config.shots > 0 {
            ",population0_sampled"
        } else {
            ""
        };
        writeln!(
            f,
            "parameter,population0{shot_col},phi_total,phi_dyn,phi_aa,solid_angle"
        )?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x73686f74);
        for point in &sweep_out.points {
            let phases = match &point.decomposition {
                Some(d) => format!(
                    "{},{},{},{}",
                    sig12(d.phi_total),
                    sig12(d.phi_dyn),
                    sig12(d.phi_aa),
                    sig12(d.solid_angle)
                ),
                None => ",,,".to_string(),
            };
            let sampled = if config.shots > 0 {
                format!(
                    ",{}",
                    sig12(sample_binomial(&mut rng, config.shots, point.population0))
                )
            } else {
                String::new()
            };
            writeln!(
                f,
                "{},{}{},{}",
                sig12(point.parameter),
                sig12(point.population0),
                sampled,
                phases
            )?;
        }
    }

    // JSON sidecar with the family fit
    let populations: Vec<f64> = sweep_out.points.iter().map(|p| p.population0).collect();
    let fit = match builder {
        "seq1" | "seq2" => {
            let fit = fit_cos_squared(&grid, &populations, fixed.n, config.rabi);
            json!({
                "model": "offset + amplitude * cos^2(n * pi * (1 + delta / sqrt(delta^2 + omega^2)))",
                "n": fixed.n,
                "offset": fit.offset,
                "amplitude": fit.amplitude,
                "omega_hz": fit.omega_hz,
                "rms_residual": fit.rms_residual,
            })
        }
        "free_fringes" => {
            let fit = fit_fringe_period(&grid, &populations, 1.0 / fixed.delta);
            json!({
                "model": "offset + amplitude * cos(2 pi t / period + phase)",
                "offset": fit.offset,
                "amplitude": fit.amplitude,
                "period_s": fit.period,
                "phase": fit.phase,
                "rms_residual": fit.rms_residual,
            })
        }
        _ => serde_json::Value::Null,
    };
    let sidecar = json!({
        "builder": builder,
        "grid": { "start": grid[0], "stop": grid[grid.len() - 1], "steps": grid.len() },
        "fixed": {
            "delta_hz": fixed.delta,
            "n": fixed.n,
            "phi0": fixed.phi0,
            "tau_se_s": fixed.tau_se,
            "tau_r_s": fixed.tau_r,
            "rabi_hz": config.rabi,
        },
        "fit": fit,
    });
    let json_path = format!("{}.json", config.output);
    fs::write(&json_path, serde_json::to_string_pretty(&sidecar)? + "\n")?;

    println!(
        "{builder}: {} points, wrote {csv_path} and {json_path}",
        grid.len()
    );
    Ok(())
}

/// Run the verification suite and print the report.
pub fn verify(config: &RunConfig) -> Result<()> {
    let report = verify::run_all(&config.params(), config.seed);
    for c in &report.criteria {
        println!("{}", c.summary_line());
        for line in &c.checks {
            let mark = if line.pass { "ok  " } else { "FAIL" };
            println!(
                "    {mark} {}: measured {}, expected {}, tolerance {:.1e}",
                line.label,
                sig12(line.measured),
                sig12(line.expected),
                line.tolerance
            );
        }
        for note in &c.notes {
            println!("    note: {note}");
        }
    }

    let json = json!({
        "all_passed": report.all_passed(),
        "criteria": report.criteria.iter().map(|c| json!({
            "index": c.index,
            "name": c.name,
            "passed": c.passed(),
            "checks": c.checks.iter().map(|l| json!({
                "label": l.label,
                "measured": l.measured,
                "expected": l.expected,
                "tolerance": l.tolerance,
                "pass": l.pass,
            })).collect::<Vec<_>>(),
            "notes": c.notes,
        })).collect::<Vec<_>>(),
    });
    let json_path = format!("{}.json", config.output);
    fs::write(&json_path, serde_json::to_string_pretty(&json)? + "\n")?;
    println!("report written to {json_path}");

    let failed: Vec<usize> = report
        .criteria
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.index)
        .collect();
    if failed.is_empty() {
        println!("all criteria passed");
        Ok(())
    } else {
        bail!("criteria failing: {failed:?}")
    }
}

/// Write the five builder sequences as canonical .seq files.
pub fn export_builders(dir: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    let rabi = 500e3;
    let exports: Vec<(&str, SegmentedSchedule<f64>)> = vec![
        (
            "nested_se",
            build_nested_spin_echo(100e3, 10.0e-6, 20.0e-6, rabi, Mode::HardPulse)?,
        ),
        ("seq1", build_sequence1(250e3, rabi, 2, Mode::HardPulse)?),
        (
            "seq2",
            build_sequence2(250e3, rabi, 1, 0.0, Mode::HardPulse)?,
        ),
        ("seq3", build_sequence3(250e3, rabi, Mode::HardPulse)?),
        ("seq4", build_sequence4(250e3, rabi, 0.5, Mode::HardPulse)?),
    ];
    for (name, schedule) in exports {
        let doc = seqfile::export(&schedule, name).map_err(|e| anyhow!("{name}: {e}"))?;
        let path = Path::new(dir).join(format!("{name}.seq"));
        fs::write(&path, seqfile::serialize(&doc))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
