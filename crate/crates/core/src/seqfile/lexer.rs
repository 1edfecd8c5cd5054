//! Tokenizer for `.seq` files. Whitespace-insensitive, `#` starts a line
//! comment. Numbers may carry an attached unit suffix (`250kHz`, `4us`,
//! `1.5rad`); a detached suffix is also accepted by the parser.

use crate::seqfile::ast::Span;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Number {
        value: f64,
        suffix: Option<String>,
    },
    LBrace,
    RBrace,
    Slash,
    /// Anything the lexer cannot interpret; reported by the parser.
    Unrecognized(char),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

pub fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1usize;
    let mut col = 1usize;

    let n = chars.len();
    while i < n {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c == '#' {
            while i < n && chars[i] != '\n' {
                i += 1;
                col += 1;
            }
            continue;
        }
        let start_col = col;
        let start_line = line;
        match c {
            '{' => {
                out.push(Token {
                    kind: TokenKind::LBrace,
                    span: Span { line, col, len: 1 },
                });
                i += 1;
                col += 1;
            }
            '}' => {
                out.push(Token {
                    kind: TokenKind::RBrace,
                    span: Span { line, col, len: 1 },
                });
                i += 1;
                col += 1;
            }
            '/' => {
                out.push(Token {
                    kind: TokenKind::Slash,
                    span: Span { line, col, len: 1 },
                });
                i += 1;
                col += 1;
            }
            _ if c.is_ascii_digit()
                || c == '.' && i + 1 < n && chars[i + 1].is_ascii_digit()
                || (c == '-' || c == '+')
                    && i + 1 < n
                    && (chars[i + 1].is_ascii_digit() || chars[i + 1] == '.') =>
            {
                let mut j = i;
                if chars[j] == '-' || chars[j] == '+' {
                    j += 1;
                }
                while j < n && (chars[j].is_ascii_digit() || chars[j] == '.') {
                    j += 1;
                }
                // exponent part
                if j < n
                    && (chars[j] == 'e' || chars[j] == 'E')
                    && j + 1 < n
                    && (chars[j + 1].is_ascii_digit()
                        || (chars[j + 1] == '-' || chars[j + 1] == '+')
                            && j + 2 < n
                            && chars[j + 2].is_ascii_digit())
                {
                    j += 2;
                    while j < n && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                let number_str: String = chars[i..j].iter().collect();
                // attached alphabetic suffix (unit)
                let mut k = j;
                while k < n && chars[k].is_ascii_alphabetic() {
                    k += 1;
                }
                let suffix = if k > j {
                    Some(chars[j..k].iter().collect::<String>())
                } else {
                    None
                };
                let len = k - i;
                let kind = match number_str.parse::<f64>() {
                    Ok(value) => TokenKind::Number { value, suffix },
                    Err(_) => TokenKind::Unrecognized(c),
                };
                out.push(Token {
                    kind,
                    span: Span {
                        line: start_line,
                        col: start_col,
                        len,
                    },
                });
                col += len;
                i = k;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < n && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let len = j - i;
                out.push(Token {
                    kind: TokenKind::Ident(word),
                    span: Span {
                        line: start_line,
                        col: start_col,
                        len,
                    },
                });
                col += len;
                i = j;
            }
            other => {
                out.push(Token {
                    kind: TokenKind::Unrecognized(other),
                    span: Span { line, col, len: 1 },
                });
                i += 1;
                col += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_with_and_without_suffix() {
        let toks = tokenize("250kHz 4us -1.5e3 0.5 pi/2");
        assert_eq!(
            toks[0].kind,
            TokenKind::Number {
                value: 250.0,
                suffix: Some("kHz".into())
            }
        );
        assert_eq!(
            toks[1].kind,
            TokenKind::Number {
                value: 4.0,
                suffix: Some("us".into())
            }
        );
        assert_eq!(
            toks[2].kind,
            TokenKind::Number {
                value: -1500.0,
                suffix: None
            }
        );
        assert_eq!(
            toks[3].kind,
            TokenKind::Number {
                value: 0.5,
                suffix: None
            }
        );
        assert_eq!(toks[4].kind, TokenKind::Ident("pi".into()));
        assert_eq!(toks[5].kind, TokenKind::Slash);
    }

    #[test]
    fn comments_and_spans() {
        let toks = tokenize("pulse # a comment\n  { }");
        assert_eq!(toks.len(), 3);
        assert_eq!(toks[1].span.line, 2);
        assert_eq!(toks[1].span.col, 3);
    }
}
