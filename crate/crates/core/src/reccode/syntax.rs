//! Concrete syntax for codes.
//!
//! ```text
//! code ::= "Z" | "S" | "P" num num
//!        | "C" "(" code ";" code ("," code)* ")"
//!        | "R" "(" code ";" code ")"
//!        | "M" "(" code ")"
//! ```
//!
//! Whitespace may appear between any two tokens. The printer produces the
//! canonical spacing, e.g. `R(P 1 1; C(S; P 3 3))`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{RecCode, RecError};

/// Syntax error; `position` is a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: expected {expected}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Rec(#[from] RecError),
}

/// Parses and arity-checks a code.
pub fn parse_code(text: &str) -> Result<RecCode, CodeError> {
    let code: RecCode = text.parse()?;
    code.arity()?;
    Ok(code)
}

impl FromStr for RecCode {
    type Err = ParseError;

    /// Syntax only; see [`parse_code`] for the arity check.
    fn from_str(text: &str) -> Result<Self, ParseError> {
        let mut p = Parser { text, pos: 0 };
        let code = p.code()?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(p.error("end of input"));
        }
        Ok(code)
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            position: self.pos,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        let n = rest[..len].parse().map_err(|_| self.error("a number"))?;
        self.pos += len;
        Ok(n)
    }

    fn code(&mut self) -> Result<RecCode, ParseError> {
        let expected = "one of Z, S, P, C, R, M";
        let head = self.peek().ok_or_else(|| self.error(expected))?;
        let start = self.pos;
        self.pos += head.len_utf8();
        match head {
            'Z' => Ok(RecCode::Zero),
            'S' => Ok(RecCode::Succ),
            'P' => {
                let i = self.number()?;
                let n = self.number()?;
                Ok(RecCode::proj(i, n))
            }
            'C' => {
                self.expect('(')?;
                let f = self.code()?;
                self.expect(';')?;
                let mut gs = vec![self.code()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    gs.push(self.code()?);
                }
                self.expect(')')?;
                Ok(RecCode::comp(f, gs))
            }
            'R' => {
                self.expect('(')?;
                let f = self.code()?;
                self.expect(';')?;
                let g = self.code()?;
                self.expect(')')?;
                Ok(RecCode::prim_rec(f, g))
            }
            'M' => {
                self.expect('(')?;
                let f = self.code()?;
                self.expect(')')?;
                Ok(RecCode::min(f))
            }
            _ => {
                self.pos = start;
                Err(self.error(expected))
            }
        }
    }
}

impl fmt::Display for RecCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecCode::Zero => f.write_str("Z"),
            RecCode::Succ => f.write_str("S"),
            RecCode::Proj { i, n } => write!(f, "P {i} {n}"),
            RecCode::Comp(h, gs) => {
                write!(f, "C({h};")?;
                for (j, g) in gs.iter().enumerate() {
                    let sep = if j == 0 { " " } else { ", " };
                    write!(f, "{sep}{g}")?;
                }
                f.write_str(")")
            }
            RecCode::PrimRec(h, g) => write!(f, "R({h}; {g})"),
            RecCode::Min(h) => write!(f, "M({h})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::corpus::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_plus() {
        assert_eq!(parse_code("R(P 1 1; C(S; P 3 3))"), Ok(plus()));
        assert_eq!(parse_code("  R ( P 1 1 ;C(S;P 3 3 ) )  "), Ok(plus()));
        assert_eq!(plus().to_string(), "R(P 1 1; C(S; P 3 3))");
    }

    #[test]
    fn arity_errors() {
        assert_eq!(parse_code("M(S)"), Ok(RecCode::min(RecCode::Succ)));
        assert!(matches!(
            parse_code("C(S; Z, Z)"),
            Err(CodeError::Rec(RecError::IllFormed { .. }))
        ));
        assert!(matches!(
            parse_code("P 0 2"),
            Err(CodeError::Rec(RecError::IllFormed { .. }))
        ));
    }

    #[test]
    fn syntax_errors() {
        let at = |s: &str| match parse_code(s) {
            Err(CodeError::Parse(e)) => e.position,
            other => panic!("{s:?} gave {other:?}"),
        };
        assert_eq!(at(""), 0);
        assert_eq!(at("Q"), 0);
        assert_eq!(at("P 1"), 3);
        assert_eq!(at("C(S P 1 1)"), 4);
        assert_eq!(at("C(S;)"), 4);
        assert_eq!(at("S S"), 2);
        assert_eq!(at("M(S"), 3);
    }

    fn arb_code() -> impl Strategy<Value = RecCode> {
        let leaf = prop_oneof![
            Just(RecCode::Zero),
            Just(RecCode::Succ),
            (0usize..5, 0usize..5).prop_map(|(i, n)| RecCode::proj(i, n)),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (inner.clone(), prop::collection::vec(inner.clone(), 1..4))
                    .prop_map(|(f, gs)| RecCode::comp(f, gs)),
                (inner.clone(), inner.clone()).prop_map(|(f, g)| RecCode::prim_rec(f, g)),
                inner.prop_map(RecCode::min),
            ]
        })
    }

    proptest! {
        #[test]
        fn printer_round_trips(code in arb_code()) {
            prop_assert_eq!(code.to_string().parse::<RecCode>(), Ok(code));
        }
    }
}
