//! Lowering of parsed documents into segmented schedules, with semantic
//! checks reported as diagnostics.

use crate::nv::DriveParams;
use crate::quantum::states::State3;
use crate::scalar::Scalar;
use crate::seqfile::ast::{ConeTiming, Diagnostic, SequenceDoc, Statement};
use crate::sequence::segment::{
    rotation_duration, Mode, PulseRole, Segment, SegmentKind, SegmentedSchedule,
};
use crate::sequence::WAIT_CAP_S;
use crate::{nv, sequence};

/// Options for lowering: execution mode and the resonant Rabi frequency used
/// for plain rotation pulses (which the grammar keeps unit-free).
#[derive(Debug, Clone, Copy)]
pub struct LowerOptions<S: Scalar> {
    pub mode: Mode,
    pub rotation_rabi_hz: S,
}

impl<S: Scalar> Default for LowerOptions<S> {
    fn default() -> Self {
        Self {
            mode: Mode::HardPulse,
            rotation_rabi_hz: S::of(500e3),
        }
    }
}

/// Lower one document. Returns the schedule or the list of semantic errors.
pub fn to_schedule<S: Scalar>(
    doc: &SequenceDoc,
    options: &LowerOptions<S>,
    initial_state: State3<S>,
) -> Result<SegmentedSchedule<S>, Vec<Diagnostic>> {
    let mut segments = Vec::new();
    let mut diagnostics = Vec::new();

    for (idx, stmt) in doc.statements.iter().enumerate() {
        let span = stmt.span;
        match &stmt.statement {
            Statement::Pulse {
                subspace,
                angle,
                phase,
            } => {
                let angle_rad = S::of(angle.radians());
                let drive = match DriveParams::new(
                    *subspace,
                    options.rotation_rabi_hz,
                    S::zero(),
                    S::of(*phase),
                ) {
                    Ok(d) => d,
                    Err(e) => {
                        diagnostics.push(Diagnostic::error(span, e.to_string()));
                        continue;
                    }
                };
                let duration = match options.mode {
                    Mode::HardPulse => S::zero(),
                    Mode::FinitePulse => rotation_duration(angle_rad, options.rotation_rabi_hz),
                };
                segments.push(Segment {
                    kind: SegmentKind::Pulse {
                        drive,
                        duration,
                        role: PulseRole::Rotation { angle: angle_rad },
                    },
                    label: format!("s{idx} pulse"),
                });
            }
            Statement::CPulse {
                subspace,
                detuning_hz,
                rabi_hz,
                timing,
                phase,
            } => {
                let cycles = timing.cycles();
                match timing {
                    ConeTiming::Fraction(f) => {
                        if !(*f > 0.0 && *f <= 1.0) {
                            diagnostics.push(
                                Diagnostic::error(span, format!("fraction {f} outside (0, 1]"))
                                    .with_hint("use 'cycles N' for whole Rabi periods"),
                            );
                            continue;
                        }
                    }
                    ConeTiming::Cycles(n) => {
                        if *n < 1.0 || n.fract() != 0.0 {
                            diagnostics.push(
                                Diagnostic::error(
                                    span,
                                    format!("cycles must be a positive integer, got {n}"),
                                )
                                .with_hint("use 'fraction F' for partial periods"),
                            );
                            continue;
                        }
                    }
                }
                let drive = match DriveParams::new(
                    *subspace,
                    S::of(*rabi_hz),
                    S::of(*detuning_hz),
                    S::of(phase.unwrap_or(0.0)),
                ) {
                    Ok(d) => d,
                    Err(e) => {
                        diagnostics.push(Diagnostic::error(span, e.to_string()));
                        continue;
                    }
                };
                let duration = match nv::t_two_pi(&drive) {
                    Ok(t) => t * S::of(cycles),
                    Err(e) => {
                        diagnostics.push(Diagnostic::error(span, e.to_string()));
                        continue;
                    }
                };
                segments.push(Segment {
                    kind: SegmentKind::Pulse {
                        drive,
                        duration,
                        role: PulseRole::Cone {
                            cycles: S::of(cycles),
                        },
                    },
                    label: format!("s{idx} cpulse"),
                });
            }
            Statement::Wait {
                duration_s,
                detuning,
            } => {
                if *duration_s > WAIT_CAP_S * (1.0 + 1e-12) {
                    diagnostics.push(Diagnostic::error(
                        span,
                        sequence::SequenceError::WaitExceedsCap {
                            wait_us: duration_s * 1e6,
                            cap_us: WAIT_CAP_S * 1e6,
                        }
                        .to_string(),
                    ));
                    continue;
                }
                if *duration_s < 0.0 {
                    diagnostics.push(Diagnostic::error(span, "negative wait duration"));
                    continue;
                }
                let (dp, dm) = match detuning {
                    Some((crate::quantum::states::Subspace::PlusOne, hz)) => {
                        (S::of(*hz), S::zero())
                    }
                    Some((crate::quantum::states::Subspace::MinusOne, hz)) => {
                        (S::zero(), S::of(*hz))
                    }
                    None => (S::zero(), S::zero()),
                };
                segments.push(Segment {
                    kind: SegmentKind::Wait {
                        duration: S::of(*duration_s),
                        detuning_plus: dp,
                        detuning_minus: dm,
                    },
                    label: format!("s{idx} wait"),
                });
            }
        }
    }

    if diagnostics.is_empty() {
        Ok(SegmentedSchedule::new(
            segments,
            initial_state,
            options.mode,
        ))
    } else {
        Err(diagnostics)
    }
}

/// Segment-for-segment equivalence of two schedules: same kinds, drives and
/// roles, durations within `1e-12` relative. Labels are ignored.
pub fn schedules_equivalent<S: Scalar>(a: &SegmentedSchedule<S>, b: &SegmentedSchedule<S>) -> bool {
    if a.segments.len() != b.segments.len() || a.mode != b.mode {
        return false;
    }
    let close = |x: S, y: S| {
        let scale = x.abs().max(y.abs()).max(S::of(1e-30));
        (x - y).abs() <= scale * S::of(1e-12)
    };
    a.segments.iter().zip(&b.segments).all(|(sa, sb)| {
        match (&sa.kind, &sb.kind) {
            (
                SegmentKind::Pulse {
                    drive: da,
                    duration: ta,
                    role: ra,
                },
                SegmentKind::Pulse {
                    drive: db,
                    duration: tb,
                    role: rb,
                },
            ) => {
                let roles = match (ra, rb) {
                    (PulseRole::Rotation { angle: aa }, PulseRole::Rotation { angle: ab }) => {
                        close(*aa, *ab)
                    }
                    (PulseRole::Cone { cycles: ca }, PulseRole::Cone { cycles: cb }) => {
                        close(*ca, *cb)
                    }
                    _ => false,
                };
                roles
                    && da.subspace == db.subspace
                    && close(da.rabi, db.rabi)
                    && close(da.phase, db.phase)
                    && close(*ta, *tb)
                    // rotation-pulse detuning is not representable in the DSL,
                    // so it only participates for cone pulses
                    && match ra {
                        PulseRole::Cone { .. } => close(da.detuning, db.detuning),
                        PulseRole::Rotation { .. } => true,
                    }
            }
            (
                SegmentKind::Wait {
                    duration: ta,
                    detuning_plus: pa,
                    detuning_minus: ma,
                },
                SegmentKind::Wait {
                    duration: tb,
                    detuning_plus: pb,
                    detuning_minus: mb,
                },
            ) => close(*ta, *tb) && close(*pa, *pb) && close(*ma, *mb),
            _ => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nv::t_two_pi;
    use crate::quantum::states::Subspace;
    use crate::seqfile::parser::parse;
    use approx::assert_abs_diff_eq;

    fn lower(src: &str) -> Result<SegmentedSchedule<f64>, Vec<Diagnostic>> {
        let out = parse(src);
        assert!(!out.has_errors(), "{:?}", out.diagnostics);
        to_schedule(&out.docs[0], &LowerOptions::default(), State3::ket0())
    }

    #[test]
    fn cone_durations_from_rabi_period() {
        let schedule = lower(
            "sequence s1 { pulse minus pi/2 phase 0  cpulse plus detuning 250kHz rabi 500kHz \
             cycles 2  pulse minus pi/2 phase 0 }",
        )
        .unwrap();
        assert_eq!(schedule.segments.len(), 3);
        let drive = DriveParams::new(Subspace::PlusOne, 500e3, 250e3, 0.0).unwrap();
        let expected = 2.0 * t_two_pi(&drive).unwrap();
        assert_abs_diff_eq!(schedule.segments[1].duration(), expected, epsilon = 1e-18);
    }

    #[test]
    fn wait_without_clause_has_zero_detunings() {
        let schedule = lower("sequence s { wait 10us }").unwrap();
        match schedule.segments[0].kind {
            SegmentKind::Wait {
                detuning_plus,
                detuning_minus,
                ..
            } => {
                assert_eq!(detuning_plus, 0.0);
                assert_eq!(detuning_minus, 0.0);
            }
            _ => panic!("expected wait"),
        }
    }

    #[test]
    fn overlong_fraction_is_a_semantic_error() {
        let out = parse("sequence s { cpulse plus detuning 250kHz rabi 500kHz fraction 1.5 }");
        let err = to_schedule(
            &out.docs[0],
            &LowerOptions::<f64>::default(),
            State3::ket0(),
        )
        .unwrap_err();
        assert!(err[0].message.contains("fraction"));
    }

    #[test]
    fn wait_cap_is_a_semantic_error() {
        let out = parse("sequence s { wait 11us }");
        let err = to_schedule(
            &out.docs[0],
            &LowerOptions::<f64>::default(),
            State3::ket0(),
        )
        .unwrap_err();
        assert!(err[0].message.contains("cap"));
    }
}
