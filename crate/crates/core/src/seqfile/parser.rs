//! Recursive-descent parser with single-token lookahead. On an error the
//! parser records a diagnostic and skips to the next statement keyword or
//! closing brace, so one pass surfaces every problem in a file.

use crate::quantum::states::Subspace;
use crate::seqfile::ast::{
    Angle, ConeTiming, Diagnostic, SequenceDoc, Span, SpannedStatement, Statement,
};
use crate::seqfile::lexer::{tokenize, Token, TokenKind};

pub struct ParseOutput {
    pub docs: Vec<SequenceDoc>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseOutput {
    pub fn has_errors(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| d.severity == crate::seqfile::ast::Severity::Error)
    }
}

pub fn parse(text: &str) -> ParseOutput {
    Parser::new(tokenize(text)).parse_file()
}

const FREQ_UNITS: [(&str, f64); 3] = [("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6)];
const TIME_UNITS: [(&str, f64); 3] = [("ns", 1e-9), ("us", 1e-6), ("ms", 1e-3)];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    diagnostics: Vec<Diagnostic>,
}

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Self {
            tokens,
            pos: 0,
            diagnostics: Vec::new(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn last_span(&self) -> Span {
        self.tokens
            .get(self.pos.saturating_sub(1))
            .or_else(|| self.tokens.last())
            .map(|t| t.span)
            .unwrap_or_default()
    }

    fn error_here(&mut self, span: Span, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::error(span, message));
    }

    fn parse_file(mut self) -> ParseOutput {
        let mut docs: Vec<SequenceDoc> = Vec::new();
        while let Some(tok) = self.peek().cloned() {
            match &tok.kind {
                TokenKind::Ident(w) if w == "sequence" => {
                    self.advance();
                    if let Some(doc) = self.parse_sequence() {
                        if docs.iter().any(|d| d.name == doc.name) {
                            self.diagnostics.push(
                                Diagnostic::error(
                                    doc.name_span,
                                    format!("duplicate sequence name '{}'", doc.name),
                                )
                                .with_hint("sequence names must be unique per file"),
                            );
                        }
                        docs.push(doc);
                    }
                }
                _ => {
                    self.error_here(
                        tok.span,
                        format!("expected 'sequence', found {}", describe(&tok.kind)),
                    );
                    self.advance();
                    self.skip_to_sequence();
                }
            }
        }
        ParseOutput {
            docs,
            diagnostics: self.diagnostics,
        }
    }

    fn skip_to_sequence(&mut self) {
        while let Some(tok) = self.peek() {
            if matches!(&tok.kind, TokenKind::Ident(w) if w == "sequence") {
                return;
            }
            self.pos += 1;
        }
    }

    /// Recover inside a sequence body: skip to the next statement keyword or
    /// the closing brace.
    fn skip_to_statement(&mut self) {
        while let Some(tok) = self.peek() {
            match &tok.kind {
                TokenKind::RBrace => return,
                TokenKind::Ident(w)
                    if w == "pulse" || w == "cpulse" || w == "wait" || w == "sequence" =>
                {
                    return
                }
                _ => self.pos += 1,
            }
        }
    }

    fn parse_sequence(&mut self) -> Option<SequenceDoc> {
        let (name, name_span) = match self.advance() {
            Some(Token {
                kind: TokenKind::Ident(name),
                span,
            }) if !is_keyword(&name) => (name, span),
            Some(tok) => {
                self.error_here(
                    tok.span,
                    format!("expected sequence name, found {}", describe(&tok.kind)),
                );
                self.skip_to_sequence();
                return None;
            }
            None => {
                let span = self.last_span();
                self.error_here(span, "expected sequence name, found end of file");
                return None;
            }
        };

        match self.advance() {
            Some(Token {
                kind: TokenKind::LBrace,
                ..
            }) => {}
            Some(tok) => {
                self.error_here(
                    tok.span,
                    format!("expected '{{', found {}", describe(&tok.kind)),
                );
                self.skip_to_sequence();
                return None;
            }
            None => {
                let span = self.last_span();
                self.error_here(span, "expected '{', found end of file");
                return None;
            }
        }

        let mut statements = Vec::new();
        loop {
            match self.peek().cloned() {
                Some(Token {
                    kind: TokenKind::RBrace,
                    ..
                }) => {
                    self.advance();
                    break;
                }
                Some(tok) => {
                    if let Some(stmt) = self.parse_statement(&tok) {
                        statements.push(stmt);
                    } else {
                        self.skip_to_statement();
                    }
                }
                None => {
                    let span = self.last_span();
                    self.error_here(span, "unclosed sequence body; expected '}'");
                    break;
                }
            }
        }

        Some(SequenceDoc {
            name,
            name_span,
            statements,
        })
    }

    fn parse_statement(&mut self, head: &Token) -> Option<SpannedStatement> {
        let keyword = match &head.kind {
            TokenKind::Ident(w) => w.clone(),
            other => {
                self.error_here(
                    head.span,
                    format!("expected a statement keyword, found {}", describe(other)),
                );
                self.advance();
                return None;
            }
        };
        let span = head.span;
        self.advance();
        let statement = match keyword.as_str() {
            "pulse" => self.parse_pulse()?,
            "cpulse" => self.parse_cpulse()?,
            "wait" => self.parse_wait()?,
            other => {
                self.error_here(span, format!("unknown keyword '{other}'"));
                return None;
            }
        };
        Some(SpannedStatement { statement, span })
    }

    // pulse SUB ANGLE "phase" NUM
    fn parse_pulse(&mut self) -> Option<Statement> {
        let subspace = self.expect_subspace()?;
        let angle = self.expect_angle()?;
        self.expect_keyword("phase")?;
        let phase = self.expect_bare_number("phase (radians)")?;
        Some(Statement::Pulse {
            subspace,
            angle,
            phase,
        })
    }

    // cpulse SUB "detuning" FREQ "rabi" FREQ ("cycles" NUM | "fraction" NUM) ["phase" NUM]
    fn parse_cpulse(&mut self) -> Option<Statement> {
        let subspace = self.expect_subspace()?;
        self.expect_keyword("detuning")?;
        let detuning_hz = self.expect_freq()?;
        self.expect_keyword("rabi")?;
        let rabi_hz = self.expect_freq()?;
        let timing = match self.advance() {
            Some(Token {
                kind: TokenKind::Ident(w),
                ..
            }) if w == "cycles" => ConeTiming::Cycles(self.expect_bare_number("cycle count")?),
            Some(Token {
                kind: TokenKind::Ident(w),
                ..
            }) if w == "fraction" => {
                ConeTiming::Fraction(self.expect_bare_number("period fraction")?)
            }
            Some(tok) => {
                self.error_here(
                    tok.span,
                    format!(
                        "expected 'cycles' or 'fraction', found {}",
                        describe(&tok.kind)
                    ),
                );
                return None;
            }
            None => {
                let span = self.last_span();
                self.error_here(span, "expected 'cycles' or 'fraction', found end of file");
                return None;
            }
        };
        let phase = match self.peek() {
            Some(Token {
                kind: TokenKind::Ident(w),
                ..
            }) if w == "phase" => {
                self.advance();
                Some(self.expect_bare_number("phase (radians)")?)
            }
            _ => None,
        };
        Some(Statement::CPulse {
            subspace,
            detuning_hz,
            rabi_hz,
            timing,
            phase,
        })
    }

    // wait TIME ["detuning" SUB FREQ]
    fn parse_wait(&mut self) -> Option<Statement> {
        let duration_s = self.expect_time()?;
        let detuning = match self.peek() {
            Some(Token {
                kind: TokenKind::Ident(w),
                ..
            }) if w == "detuning" => {
                self.advance();
                let sub = self.expect_subspace()?;
                let freq = self.expect_freq()?;
                Some((sub, freq))
            }
            _ => None,
        };
        Some(Statement::Wait {
            duration_s,
            detuning,
        })
    }

    fn expect_keyword(&mut self, keyword: &str) -> Option<()> {
        match self.advance() {
            Some(Token {
                kind: TokenKind::Ident(w),
                ..
            }) if w == keyword => Some(()),
            Some(tok) => {
                self.error_here(
                    tok.span,
                    format!("expected '{keyword}', found {}", describe(&tok.kind)),
                );
                None
            }
            None => {
                let span = self.last_span();
                self.error_here(span, format!("expected '{keyword}', found end of file"));
                None
            }
        }
    }

    fn expect_subspace(&mut self) -> Option<Subspace> {
        match self.advance() {
            Some(Token {
                kind: TokenKind::Ident(w),
                span,
            }) => match w.as_str() {
                "plus" => Some(Subspace::PlusOne),
                "minus" => Some(Subspace::MinusOne),
                other => {
                    self.error_here(span, format!("expected 'plus' or 'minus', found '{other}'"));
                    None
                }
            },
            Some(tok) => {
                self.error_here(
                    tok.span,
                    format!("expected 'plus' or 'minus', found {}", describe(&tok.kind)),
                );
                None
            }
            None => {
                let span = self.last_span();
                self.error_here(span, "expected 'plus' or 'minus', found end of file");
                None
            }
        }
    }

    // ANGLE = "pi/2" | "pi" | NUM "rad"
    fn expect_angle(&mut self) -> Option<Angle> {
        match self.advance() {
            Some(Token {
                kind: TokenKind::Ident(w),
                span,
            }) => {
                if w != "pi" {
                    self.error_here(span, format!("expected an angle, found '{w}'"));
                    return None;
                }
                if matches!(self.peek(), Some(t) if t.kind == TokenKind::Slash) {
                    self.advance();
                    match self.advance() {
                        Some(Token {
                            kind:
                                TokenKind::Number {
                                    value,
                                    suffix: None,
                                },
                            span,
                        }) => {
                            if value == 2.0 {
                                Some(Angle::HalfPi)
                            } else {
                                self.error_here(
                                    span,
                                    "only 'pi/2' is supported; use 'NUM rad' for other angles",
                                );
                                None
                            }
                        }
                        Some(tok) => {
                            self.error_here(
                                tok.span,
                                format!("expected '2' after 'pi/', found {}", describe(&tok.kind)),
                            );
                            None
                        }
                        None => {
                            let span = self.last_span();
                            self.error_here(span, "expected '2' after 'pi/'");
                            None
                        }
                    }
                } else {
                    Some(Angle::Pi)
                }
            }
            Some(Token {
                kind: TokenKind::Number { value, suffix },
                span,
            }) => {
                let has_rad = match suffix {
                    Some(s) if s == "rad" => true,
                    Some(s) => {
                        self.error_here(span, format!("expected angle unit 'rad', found '{s}'"));
                        return None;
                    }
                    None => {
                        // detached 'rad'
                        if matches!(self.peek(), Some(Token { kind: TokenKind::Ident(w), .. }) if w == "rad")
                        {
                            self.advance();
                            true
                        } else {
                            false
                        }
                    }
                };
                if has_rad {
                    Some(Angle::Rad(value))
                } else {
                    self.diagnostics.push(
                        Diagnostic::error(span, "missing angle unit")
                            .with_hint("write the angle as 'pi', 'pi/2' or 'NUM rad'"),
                    );
                    None
                }
            }
            Some(tok) => {
                self.error_here(
                    tok.span,
                    format!("expected an angle, found {}", describe(&tok.kind)),
                );
                None
            }
            None => {
                let span = self.last_span();
                self.error_here(span, "expected an angle, found end of file");
                None
            }
        }
    }

    fn expect_bare_number(&mut self, what: &str) -> Option<f64> {
        match self.advance() {
            Some(Token {
                kind:
                    TokenKind::Number {
                        value,
                        suffix: None,
                    },
                ..
            }) => Some(value),
            Some(Token {
                kind: TokenKind::Number {
                    suffix: Some(s), ..
                },
                span,
            }) => {
                self.error_here(span, format!("{what} takes no unit, found '{s}'"));
                None
            }
            Some(tok) => {
                self.error_here(
                    tok.span,
                    format!("expected {what}, found {}", describe(&tok.kind)),
                );
                None
            }
            None => {
                let span = self.last_span();
                self.error_here(span, format!("expected {what}, found end of file"));
                None
            }
        }
    }

    fn expect_with_unit(&mut self, units: &[(&str, f64)], kind_name: &str) -> Option<f64> {
        match self.advance() {
            Some(Token {
                kind: TokenKind::Number { value, suffix },
                span,
            }) => {
                let unit = match suffix {
                    Some(s) => Some(s),
                    None => match self.peek() {
                        Some(Token {
                            kind: TokenKind::Ident(w),
                            ..
                        }) if units.iter().any(|(u, _)| u == w) => {
                            let w = w.clone();
                            self.advance();
                            Some(w)
                        }
                        _ => None,
                    },
                };
                match unit {
                    Some(u) => match units.iter().find(|(name, _)| *name == u) {
                        Some((_, factor)) => Some(value * factor),
                        None => {
                            let expected: Vec<&str> = units.iter().map(|(name, _)| *name).collect();
                            self.diagnostics.push(
                                Diagnostic::error(span, format!("unknown {kind_name} unit '{u}'"))
                                    .with_hint(format!("expected one of {}", expected.join(", "))),
                            );
                            None
                        }
                    },
                    None => {
                        let expected: Vec<&str> = units.iter().map(|(name, _)| *name).collect();
                        self.diagnostics.push(
                            Diagnostic::error(span, format!("missing {kind_name} unit"))
                                .with_hint(format!("expected one of {}", expected.join(", "))),
                        );
                        None
                    }
                }
            }
            Some(tok) => {
                self.error_here(
                    tok.span,
                    format!("expected a {kind_name}, found {}", describe(&tok.kind)),
                );
                None
            }
            None => {
                let span = self.last_span();
                self.error_here(span, format!("expected a {kind_name}, found end of file"));
                None
            }
        }
    }

    fn expect_freq(&mut self) -> Option<f64> {
        self.expect_with_unit(&FREQ_UNITS, "frequency")
    }

    fn expect_time(&mut self) -> Option<f64> {
        self.expect_with_unit(&TIME_UNITS, "time")
    }
}

fn is_keyword(word: &str) -> bool {
    matches!(
        word,
        "sequence"
            | "pulse"
            | "cpulse"
            | "wait"
            | "phase"
            | "detuning"
            | "rabi"
            | "cycles"
            | "fraction"
            | "plus"
            | "minus"
            | "pi"
            | "rad"
    )
}

fn describe(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Ident(w) => format!("'{w}'"),
        TokenKind::Number { value, suffix } => match suffix {
            Some(s) => format!("number '{value}{s}'"),
            None => format!("number '{value}'"),
        },
        TokenKind::LBrace => "'{'".into(),
        TokenKind::RBrace => "'}'".into(),
        TokenKind::Slash => "'/'".into(),
        TokenKind::Unrecognized(c) => format!("unrecognized character '{c}'"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_fine() {
        let out = parse("");
        assert!(out.docs.is_empty());
        assert!(out.diagnostics.is_empty());
    }

    #[test]
    fn parses_a_cone_readout_sequence() {
        let out = parse(
            "sequence s1 {\n  pulse minus pi/2 phase 0\n  cpulse plus detuning 250kHz \
             rabi 500kHz cycles 2\n  pulse minus pi/2 phase 0\n}\n",
        );
        assert!(!out.has_errors(), "{:?}", out.diagnostics);
        assert_eq!(out.docs.len(), 1);
        let doc = &out.docs[0];
        assert_eq!(doc.name, "s1");
        assert_eq!(doc.statements.len(), 3);
        match &doc.statements[1].statement {
            Statement::CPulse {
                detuning_hz,
                rabi_hz,
                timing,
                ..
            } => {
                assert_eq!(*detuning_hz, 250e3);
                assert_eq!(*rabi_hz, 500e3);
                assert_eq!(*timing, ConeTiming::Cycles(2.0));
            }
            other => panic!("wrong statement {other:?}"),
        }
    }

    #[test]
    fn missing_unit_is_reported_at_the_number() {
        let out = parse("sequence s { cpulse plus detuning 250 rabi 500kHz cycles 1 }");
        assert!(out.has_errors());
        let d = &out.diagnostics[0];
        assert!(
            d.message.contains("missing frequency unit"),
            "{}",
            d.message
        );
        assert_eq!(d.span.line, 1);
        // span points inside the offending token
        assert_eq!(d.span.col, 35);
    }

    #[test]
    fn recovery_surfaces_multiple_errors() {
        let out = parse(
            "sequence s {\n  pulse minus pi/2 phase 0\n  bogus stuff here\n  wait 10ns\n  \
             cpulse plus detuning 1 rabi 2 cycles 1\n}",
        );
        assert!(out.has_errors());
        assert!(out.diagnostics.len() >= 2);
        // the good statements still parse
        assert_eq!(out.docs[0].statements.len(), 2);
    }

    #[test]
    fn duplicate_names_rejected() {
        let out = parse("sequence a { } sequence a { }");
        assert!(out.has_errors());
        assert!(out.diagnostics[0].message.contains("duplicate"));
    }

    #[test]
    fn detached_units_accepted() {
        let out = parse("sequence s { wait 4 us detuning plus 250 kHz }");
        assert!(!out.has_errors(), "{:?}", out.diagnostics);
        match &out.docs[0].statements[0].statement {
            Statement::Wait {
                duration_s,
                detuning,
            } => {
                assert_eq!(*duration_s, 4e-6);
                assert_eq!(detuning.unwrap().1, 250e3);
            }
            other => panic!("wrong statement {other:?}"),
        }
    }
}
