//! Command-line front end: run `.seq` files, sweep the built-in sequences to
//! CSV, run the verification suite, and export the builder sequences.

mod commands;
mod format;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};

use nvpl_core::nv::RabiConvention;
use nvpl_core::sequence::run::RunParams;
use nvpl_core::sequence::segment::Mode;

#[derive(Parser)]
#[command(
    name = "nvpl",
    about = "Spin-1 NV pulse-sequence simulator with geometric/dynamic phase analysis",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Readout pulses as instantaneous rotations (analysis default).
    Hard,
    /// Every pulse evolves under its full Hamiltonian.
    Finite,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// Three-level couplings Omega/2, matching the two-level forms (default).
    Effective,
    /// Raw spin-1 ladder couplings Omega/(2 sqrt 2).
    Ladder,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Pulse execution mode.
    #[arg(long, value_enum, default_value = "hard")]
    mode: ModeArg,

    /// Trajectory sampling step, seconds.
    #[arg(long, default_value_t = 1.0e-9)]
    dt: f64,

    /// Seed for sampled drive azimuths and shot noise.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Off-diagonal normalization of the three-level Hamiltonian.
    #[arg(long, value_enum, default_value = "effective")]
    rabi_convention: ConventionArg,

    /// Output path prefix (files get .csv / .json suffixes).
    #[arg(long, default_value = "nvpl_out")]
    output: String,

    /// Photon budget for optional binomial shot-noise sampling (0 = off).
    #[arg(long, default_value_t = 0)]
    shots: u64,

    /// Resonant Rabi frequency for readout/rotation pulses, Hz.
    #[arg(long, default_value_t = 500e3)]
    rabi: f64,
}

impl RunConfig {
    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Hard => Mode::HardPulse,
            ModeArg::Finite => Mode::FinitePulse,
        }
    }

    fn params(&self) -> RunParams<f64> {
        RunParams {
            physical: nvpl_core::PhysicalConfig::default(),
            convention: match self.rabi_convention {
                ConventionArg::Effective => RabiConvention::EffectiveTwoLevel,
                ConventionArg::Ladder => RabiConvention::SpinOneLadder,
            },
            dt: self.dt,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a .seq file: trajectory CSV plus a JSON phase summary.
    Run {
        /// Path to the .seq file.
        seqfile: String,

        /// Sequence name to run when the file holds several (default: first).
        #[arg(long)]
        sequence: Option<String>,

        #[command(flatten)]
        config: RunConfig,
    },

    /// Sweep a built-in sequence over a parameter grid to CSV.
    Sweep {
        /// Builder: nested_se | seq1 | seq2 | seq3 | seq4 | free_fringes.
        builder: String,

        /// Grid as start:stop:steps. Detunings in Hz, waits in seconds,
        /// eta unitless.
        #[arg(long)]
        grid: String,

        /// Cone-pulse detuning, Hz (fixed parameter where not swept).
        #[arg(long, default_value_t = 250e3)]
        delta: f64,

        /// Cycle count for seq1/seq2.
        #[arg(long, default_value_t = 1)]
        n: usize,

        /// Fixed drive azimuth for seq2 (radians); omit to sample per point.
        #[arg(long)]
        phi0: Option<f64>,

        /// Spin-echo window for nested_se, seconds.
        #[arg(long, default_value_t = 10.0e-6)]
        tau_se: f64,

        /// Ramsey window for nested_se, seconds.
        #[arg(long, default_value_t = 25.0e-6)]
        tau_r: f64,

        #[command(flatten)]
        config: RunConfig,
    },

    /// Run the verification suite; exit 0 only if every criterion passes.
    Verify {
        #[command(flatten)]
        config: RunConfig,
    },

    /// Write the five builder sequences as canonical .seq files.
    ExportBuilders {
        /// Directory to write into.
        #[arg(long, default_value = ".")]
        output: String,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            seqfile,
            sequence,
            config,
        } => commands::run_file(&seqfile, sequence.as_deref(), &config),
        Command::Sweep {
            builder,
            grid,
            delta,
            n,
            phi0,
            tau_se,
            tau_r,
            config,
        } => commands::sweep(
            &builder,
            &grid,
            commands::SweepFixed {
                delta,
                n,
                phi0,
                tau_se,
                tau_r,
            },
            &config,
        ),
        Command::Verify { config } => commands::verify(&config),
        Command::ExportBuilders { output } => commands::export_builders(&output),
    }
}
