//! Canonical serialization: one statement per line, two-space indent, and
//! the largest unit that gives a mantissa >= 1 (`0.25MHz` prints as
//! `250kHz`). The chosen mantissa is verified to reparse to the exact stored
//! value; if a unit cannot represent the value exactly the next smaller one
//! is tried.

use crate::quantum::states::Subspace;
use crate::seqfile::ast::{Angle, ConeTiming, SequenceDoc, Statement};

const FREQ_UNITS_DESC: [(&str, f64); 3] = [("MHz", 1e6), ("kHz", 1e3), ("Hz", 1.0)];
const TIME_UNITS_DESC: [(&str, f64); 3] = [("ms", 1e-3), ("us", 1e-6), ("ns", 1e-9)];

fn sub_name(s: Subspace) -> &'static str {
    match s {
        Subspace::PlusOne => "plus",
        Subspace::MinusOne => "minus",
    }
}

/// Shortest decimal string that reparses to exactly `v`.
fn number(v: f64) -> String {
    format!("{v}")
}

/// Shortest decimal mantissa that reproduces `value` exactly when multiplied
/// back by `factor`. The rounded quotient does not always multiply back to
/// the value, so its ulp neighbours are searched as well.
fn exact_mantissa_digits(value: f64, factor: f64, digits: usize) -> Option<String> {
    let q = value / factor;
    for cand in [
        q,
        q.next_up(),
        q.next_down(),
        q.next_up().next_up(),
        q.next_down().next_down(),
    ] {
        let s = format!("{cand:.digits$e}");
        if let Ok(m) = s.parse::<f64>() {
            if m * factor == value {
                return Some(number(m));
            }
        }
    }
    None
}

fn quantity(value: f64, units_desc: &[(&str, f64)]) -> String {
    let magnitude = value.abs();
    if magnitude == 0.0 {
        return format!("0{}", units_desc[units_desc.len() - 1].0);
    }
    // Prefer the shortest exact mantissa; at equal length the largest unit
    // with mantissa >= 1 wins.
    for digits in 0..=17usize {
        for (name, factor) in units_desc {
            if magnitude < *factor {
                continue;
            }
            if let Some(m) = exact_mantissa_digits(value, *factor, digits) {
                return format!("{m}{name}");
            }
        }
    }
    // Some values are only exactly representable with a sub-unit mantissa
    // (decimal grids of different units interleave); exactness wins over the
    // mantissa >= 1 preference. Smallest unit first here.
    for digits in 0..=17usize {
        for (name, factor) in units_desc.iter().rev() {
            if let Some(m) = exact_mantissa_digits(value, *factor, digits) {
                return format!("{m}{name}");
            }
        }
    }
    let (base, factor) = units_desc[units_desc.len() - 1];
    format!("{}{base}", number(value / factor))
}

pub fn freq(hz: f64) -> String {
    quantity(hz, &FREQ_UNITS_DESC)
}

pub fn time(seconds: f64) -> String {
    quantity(seconds, &TIME_UNITS_DESC)
}

fn angle(a: &Angle) -> String {
    match a {
        Angle::HalfPi => "pi/2".into(),
        Angle::Pi => "pi".into(),
        Angle::Rad(r) => format!("{}rad", number(*r)),
    }
}

fn statement(s: &Statement) -> String {
    match s {
        Statement::Pulse {
            subspace,
            angle: a,
            phase,
        } => format!(
            "pulse {} {} phase {}",
            sub_name(*subspace),
            angle(a),
            number(*phase)
        ),
        Statement::CPulse {
            subspace,
            detuning_hz,
            rabi_hz,
            timing,
            phase,
        } => {
            let timing_str = match timing {
                ConeTiming::Cycles(n) => format!("cycles {}", number(*n)),
                ConeTiming::Fraction(f) => format!("fraction {}", number(*f)),
            };
            let mut out = format!(
                "cpulse {} detuning {} rabi {} {}",
                sub_name(*subspace),
                freq(*detuning_hz),
                freq(*rabi_hz),
                timing_str
            );
            if let Some(p) = phase {
                out.push_str(&format!(" phase {}", number(*p)));
            }
            out
        }
        Statement::Wait {
            duration_s,
            detuning,
        } => {
            let mut out = format!("wait {}", time(*duration_s));
            if let Some((sub, hz)) = detuning {
                out.push_str(&format!(" detuning {} {}", sub_name(*sub), freq(*hz)));
            }
            out
        }
    }
}

/// Canonical text of one document.
pub fn serialize(doc: &SequenceDoc) -> String {
    let mut out = format!("sequence {} {{\n", doc.name);
    for s in &doc.statements {
        out.push_str("  ");
        out.push_str(&statement(&s.statement));
        out.push('\n');
    }
    out.push_str("}\n");
    out
}

/// Canonical text of a whole file.
pub fn serialize_all(docs: &[SequenceDoc]) -> String {
    docs.iter().map(serialize).collect::<Vec<_>>().join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqfile::parser::parse;

    #[test]
    fn unit_normalization() {
        assert_eq!(freq(250e3), "250kHz");
        assert_eq!(freq(0.25 * 1e6), "250kHz");
        assert_eq!(freq(1.5e6), "1.5MHz");
        assert_eq!(freq(500.0), "500Hz");
        assert_eq!(freq(0.5), "0.5Hz");
        assert_eq!(freq(0.0), "0Hz");
        // values as the parser would construct them (mantissa * unit factor)
        assert_eq!(time(4.0 * 1e-6), "4us");
        assert_eq!(time(1.0 / 250e3), "4us");
        assert_eq!(time(10.0 * 1e-6), "10us");
        assert_eq!(time(2.0 * 1e-3), "2ms");
        assert_eq!(time(1.0 * 1e-9), "1ns");
        assert_eq!(time(0.0), "0ns");
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let src = "sequence s1 {\n pulse minus pi/2 phase 0\n cpulse plus detuning 0.25MHz \
                   rabi 500 kHz cycles 2\n wait 4us\n}";
        let once = serialize(&parse(src).docs[0]);
        let twice = serialize(&parse(&once).docs[0]);
        assert_eq!(once, twice);
        assert!(once.contains("detuning 250kHz"));
        assert!(once.contains("wait 4us"));
    }

    #[test]
    fn round_trip_preserves_structure() {
        let src = "sequence demo {\n  pulse plus 1.25rad phase -0.5\n  cpulse minus detuning \
                   -120kHz rabi 500kHz fraction 0.5 phase 3.1\n  wait 2.5us detuning minus 120kHz\n}";
        let doc = &parse(src).docs[0];
        let text = serialize(doc);
        let reparsed = parse(&text);
        assert!(!reparsed.has_errors(), "{:?}", reparsed.diagnostics);
        assert!(doc.same_structure(&reparsed.docs[0]));
    }
}
