//! Syntax tree for `.seq` files. Quantities are stored normalized (Hz,
//! seconds, radians); the canonical serializer re-derives display units.

use crate::quantum::states::Subspace;

/// Source location of a token, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
    pub len: usize,
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// Parse or lowering message tied to a source span. Errors prevent schedule
/// construction; warnings never do.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Span,
    pub message: String,
    pub hint: Option<String>,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            span,
            message: message.into(),
            hint: None,
        }
    }

    pub fn warning(span: Span, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            span,
            message: message.into(),
            hint: None,
        }
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} at {}: {}", self.span, self.message)?;
        if let Some(h) = &self.hint {
            write!(f, " (hint: {h})")?;
        }
        Ok(())
    }
}

/// Rotation angle of a `pulse` statement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    HalfPi,
    Pi,
    Rad(f64),
}

impl Angle {
    pub fn radians(&self) -> f64 {
        match self {
            Angle::HalfPi => std::f64::consts::FRAC_PI_2,
            Angle::Pi => std::f64::consts::PI,
            Angle::Rad(r) => *r,
        }
    }
}

/// Duration clause of a `cpulse`: whole Rabi periods or a fraction of one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConeTiming {
    Cycles(f64),
    Fraction(f64),
}

impl ConeTiming {
    pub fn cycles(&self) -> f64 {
        match self {
            ConeTiming::Cycles(n) => *n,
            ConeTiming::Fraction(f) => *f,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Pulse {
        subspace: Subspace,
        angle: Angle,
        phase: f64,
    },
    CPulse {
        subspace: Subspace,
        detuning_hz: f64,
        rabi_hz: f64,
        timing: ConeTiming,
        phase: Option<f64>,
    },
    Wait {
        duration_s: f64,
        detuning: Option<(Subspace, f64)>,
    },
}

#[derive(Debug, Clone)]
pub struct SpannedStatement {
    pub statement: Statement,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct SequenceDoc {
    pub name: String,
    pub name_span: Span,
    pub statements: Vec<SpannedStatement>,
}

impl SequenceDoc {
    /// Structural equality, spans excepted.
    pub fn same_structure(&self, other: &SequenceDoc) -> bool {
        self.name == other.name
            && self.statements.len() == other.statements.len()
            && self
                .statements
                .iter()
                .zip(&other.statements)
                .all(|(a, b)| a.statement == b.statement)
    }
}
