//! Hamiltonian builders for the NV ground-state triplet and its driven
//! two-level subspaces, all taking cyclic frequencies (Hz) and returning
//! operators in angular units.
//!
//! Detunings are signed quantities of the rotating frame and enter the
//! builders directly; the builders never convert between drive frequency and
//! detuning. The drive phase is the phase of the upper off-diagonal factor
//! `exp(-i phase)` of the two-level block.

use num_complex::Complex;
use thiserror::Error;

use crate::quantum::operator::{Operator2, Operator3};
use crate::quantum::states::Subspace;
use crate::scalar::{tau, Scalar, C};

/// Zero-field splitting, Hz.
pub const DEFAULT_ZFS_HZ: f64 = 2.870e9;
/// Gyromagnetic ratio, Hz/G.
pub const DEFAULT_GYROMAGNETIC_HZ_PER_G: f64 = 2.8e6;
/// Bias field magnitude, G.
pub const DEFAULT_FIELD_G: f64 = 15.0;
/// Angle between the bias field and the NV axis, radians (54.7 degrees).
pub const DEFAULT_FIELD_ANGLE_RAD: f64 = 54.7 * std::f64::consts::PI / 180.0;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid physical config: {0}")]
    InvalidConfig(String),

    #[error(
        "drive rejected: rabi = {rabi_hz:.3e} Hz, detuning = {detuning_hz:.3e} Hz is outside \
         the non-adiabatic guardrail |detuning| <= 10 * rabi"
    )]
    DetuningGuardrail { rabi_hz: f64, detuning_hz: f64 },

    #[error("negative Rabi frequency {0:.3e} Hz")]
    NegativeRabi(f64),

    #[error("pulses on the two subspaces are never applied simultaneously")]
    SimultaneousDrives,

    #[error("Rabi period undefined: rabi and detuning are both zero")]
    UndefinedPeriod,
}

/// Off-diagonal normalization of the three-level rotating-frame matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RabiConvention {
    /// Couplings `Omega / (2 sqrt 2)`, the raw spin-1 ladder matrix elements.
    SpinOneLadder,
    /// Couplings `Omega / 2`, matching the effective two-level Hamiltonians
    /// that every closed-form result uses. Default.
    #[default]
    EffectiveTwoLevel,
}

impl RabiConvention {
    fn coupling_factor<S: Scalar>(self) -> S {
        match self {
            RabiConvention::SpinOneLadder => S::of(0.5) / S::of(2.0).sqrt(),
            RabiConvention::EffectiveTwoLevel => S::of(0.5),
        }
    }
}

/// Static NV parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig<S: Scalar> {
    /// Zero-field splitting, Hz.
    pub d_zfs: S,
    /// Gyromagnetic ratio, Hz/G.
    pub gyromagnetic: S,
    /// Field projection onto the NV axis, G.
    pub b_parallel: S,
}

impl<S: Scalar> Default for PhysicalConfig<S> {
    fn default() -> Self {
        Self {
            d_zfs: S::of(DEFAULT_ZFS_HZ),
            gyromagnetic: S::of(DEFAULT_GYROMAGNETIC_HZ_PER_G),
            b_parallel: projected_field(S::of(DEFAULT_FIELD_G), S::of(DEFAULT_FIELD_ANGLE_RAD)),
        }
    }
}

impl<S: Scalar> PhysicalConfig<S> {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.d_zfs <= S::zero() {
            return Err(ModelError::InvalidConfig("d_zfs must be positive".into()));
        }
        if self.b_parallel < S::zero() {
            return Err(ModelError::InvalidConfig(
                "b_parallel must be non-negative".into(),
            ));
        }
        let zeeman = self.gyromagnetic * self.b_parallel;
        if zeeman >= self.d_zfs / S::of(10.0) {
            return Err(ModelError::InvalidConfig(format!(
                "Zeeman splitting {:.3e} Hz violates the low-field regime (< d_zfs/10)",
                zeeman.to_f64_lossy()
            )));
        }
        Ok(())
    }

    /// Zeeman shift `gamma * B_parallel`, Hz.
    pub fn zeeman_hz(&self) -> S {
        self.gyromagnetic * self.b_parallel
    }
}

/// Axial projection of a tilted bias field.
pub fn projected_field<S: Scalar>(magnitude_g: S, angle_rad: S) -> S {
    magnitude_g * angle_rad.cos()
}

/// Microwave drive acting on one two-level subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams<S: Scalar> {
    pub subspace: Subspace,
    /// Resonant Rabi frequency, Hz.
    pub rabi: S,
    /// Detuning of the drive from its transition, Hz (signed).
    pub detuning: S,
    /// Drive phase, radians.
    pub phase: S,
}

impl<S: Scalar> DriveParams<S> {
    pub fn new(subspace: Subspace, rabi: S, detuning: S, phase: S) -> Result<Self, ModelError> {
        if rabi < S::zero() {
            return Err(ModelError::NegativeRabi(rabi.to_f64_lossy()));
        }
        if rabi > S::zero() && detuning.abs() > S::of(10.0) * rabi {
            return Err(ModelError::DetuningGuardrail {
                rabi_hz: rabi.to_f64_lossy(),
                detuning_hz: detuning.to_f64_lossy(),
            });
        }
        Ok(Self {
            subspace,
            rabi,
            detuning,
            phase,
        })
    }

    /// Frame-only entry: no drive, but the rotating-frame detuning persists.
    pub fn frame_only(subspace: Subspace, detuning: S) -> Self {
        Self {
            subspace,
            rabi: S::zero(),
            detuning,
            phase: S::zero(),
        }
    }

    pub fn is_driving(&self) -> bool {
        self.rabi > S::zero()
    }

    /// Generalized Rabi frequency `sqrt(rabi^2 + detuning^2)`, Hz.
    pub fn generalized_rabi(&self) -> S {
        (self.rabi * self.rabi + self.detuning * self.detuning).sqrt()
    }
}

/// Reference frame of a two-level trajectory: rotating at the transition
/// frequency, or offset from it by a drive detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameTag<S: Scalar> {
    Resonant,
    Detuned(S),
}

impl<S: Scalar> FrameTag<S> {
    pub fn rate_hz(&self) -> S {
        match self {
            FrameTag::Resonant => S::zero(),
            FrameTag::Detuned(hz) => *hz,
        }
    }
}

/// Static triplet Hamiltonian: diagonal `(D + gB, 0, D - gB)` in angular
/// units over the `(+1, 0, -1)` basis.
pub fn build_ground_state_h<S: Scalar>(cfg: &PhysicalConfig<S>) -> Operator3<S> {
    let t = tau::<S>();
    let zeeman = cfg.zeeman_hz();
    Operator3::from_upper(
        [
            t * (cfg.d_zfs + zeeman),
            S::zero(),
            t * (cfg.d_zfs - zeeman),
        ],
        &[
            C::new(S::zero(), S::zero()),
            C::new(S::zero(), S::zero()),
            C::new(S::zero(), S::zero()),
        ],
    )
}

fn coupling<S: Scalar>(drive: &DriveParams<S>, factor: S) -> C<S> {
    // upper off-diagonal carries exp(-i phase)
    let mag = tau::<S>() * drive.rabi * factor;
    Complex::from_polar(mag, -drive.phase)
}

/// Three-level Hamiltonian in the composite frame rotating at each microwave
/// frequency. A `None` drive leaves that subspace undriven with zero frame
/// detuning; pass [`DriveParams::frame_only`] to keep a detuned frame alive
/// during free evolution. At most one subspace may be actively driven.
pub fn build_composite_rotating_h<S: Scalar>(
    cfg: &PhysicalConfig<S>,
    drive_plus: Option<&DriveParams<S>>,
    drive_minus: Option<&DriveParams<S>>,
    convention: RabiConvention,
) -> Result<Operator3<S>, ModelError> {
    cfg.validate()?;
    let driving_plus = drive_plus.is_some_and(DriveParams::is_driving);
    let driving_minus = drive_minus.is_some_and(DriveParams::is_driving);
    if driving_plus && driving_minus {
        return Err(ModelError::SimultaneousDrives);
    }

    let t = tau::<S>();
    let factor = convention.coupling_factor::<S>();
    let zero = C::new(S::zero(), S::zero());

    let delta_plus = drive_plus.map_or(S::zero(), |d| d.detuning);
    let delta_minus = drive_minus.map_or(S::zero(), |d| d.detuning);
    let coup_plus = drive_plus.map_or(zero, |d| coupling(d, factor));
    let coup_minus = drive_minus.map_or(zero, |d| coupling(d, factor));

    Ok(Operator3::from_upper(
        [-t * delta_plus, S::zero(), -t * delta_minus],
        &[coup_plus, zero, coup_minus],
    ))
}

/// Effective two-level Hamiltonian of one driven subspace. The `m_S = 0`
/// diagonal entry is the zero of energy; the detuning sits on the `+-1`
/// level, so the matrix follows the subspace amplitude ordering.
pub fn build_subspace_h<S: Scalar>(drive: &DriveParams<S>) -> Operator2<S> {
    let t = tau::<S>();
    let coup = coupling(drive, S::of(0.5));
    match drive.subspace {
        Subspace::PlusOne => Operator2::from_upper([-t * drive.detuning, S::zero()], &[coup]),
        Subspace::MinusOne => Operator2::from_upper([S::zero(), -t * drive.detuning], &[coup]),
    }
}

/// Symmetric pure spin-1/2 Hamiltonian `-delta/2 sigma_z + rabi/2 sigma_x`,
/// the comparison system whose spin-echo global phase is detuning-independent.
pub fn build_h_2ls<S: Scalar>(rabi_hz: S, detuning_hz: S) -> Operator2<S> {
    let t = tau::<S>();
    let half = S::of(0.5);
    Operator2::from_upper(
        [-t * detuning_hz * half, t * detuning_hz * half],
        &[C::new(t * rabi_hz * half, S::zero())],
    )
}

/// One generalized Rabi period `1 / sqrt(rabi^2 + detuning^2)`, seconds.
/// This is the duration of a closed cone (one full precession about the
/// effective field).
pub fn t_two_pi<S: Scalar>(drive: &DriveParams<S>) -> Result<S, ModelError> {
    let w = drive.generalized_rabi();
    if w <= S::zero() {
        return Err(ModelError::UndefinedPeriod);
    }
    Ok(S::one() / w)
}

/// Warn when the splitting between the two transitions is not large compared
/// to the drive strength, i.e. when dropping the cross-subspace coupling is
/// strained. Fires below a 20x margin.
pub fn cross_coupling_warning<S: Scalar>(
    cfg: &PhysicalConfig<S>,
    drive: &DriveParams<S>,
) -> Option<String> {
    if !drive.is_driving() {
        return None;
    }
    let separation = (S::of(2.0) * cfg.zeeman_hz() + drive.detuning).abs();
    if separation < S::of(20.0) * drive.rabi {
        Some(format!(
            "drive on {} at rabi {:.3e} Hz sees the opposite transition only {:.3e} Hz away \
             (< 20x rabi); dropped cross-coupling terms are strained",
            drive.subspace,
            drive.rabi.to_f64_lossy(),
            separation.to_f64_lossy()
        ))
    } else {
        None
    }
}
