//! Textual pulse-sequence format (`.seq`): hand-written recursive-descent
//! parser with spanned diagnostics and error recovery, canonical
//! serialization, lowering into segmented schedules, and export of builder
//! schedules back into the DSL.
//!
//! Grammar (whitespace-insensitive, `#` line comments):
//!
//! ```text
//! file     = { sequence } ;
//! sequence = "sequence" IDENT "{" { stmt } "}" ;
//! stmt     = "pulse" SUB ANGLE "phase" NUM
//!          | "cpulse" SUB "detuning" FREQ "rabi" FREQ
//!            ("cycles" NUM | "fraction" NUM) [ "phase" NUM ]
//!          | "wait" TIME [ "detuning" SUB FREQ ] ;
//! SUB      = "plus" | "minus" ;
//! ANGLE    = "pi/2" | "pi" | NUM "rad" ;
//! FREQ     = NUM ("Hz" | "kHz" | "MHz") ;
//! TIME     = NUM ("ns" | "us" | "ms") ;
//! NUM      = decimal literal, optional sign and exponent ;
//! ```
//!
//! `fraction 0.5` expresses half of one generalized Rabi period; `cycles N`
//! expresses `N` whole periods.

pub mod ast;
pub mod export;
pub mod lexer;
pub mod lower;
pub mod parser;
pub mod serialize;

pub use ast::{Angle, ConeTiming, Diagnostic, SequenceDoc, Severity, Span, Statement};
pub use export::export;
pub use lower::{schedules_equivalent, to_schedule, LowerOptions};
pub use parser::{parse, ParseOutput};
pub use serialize::{serialize, serialize_all};
