//! Recursive-descent parser for polynomial expressions in `x`:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' natural)?
//! atom   := rational | 'x' | '(' expr ')'
//! rational := ['-'] natural ['/' natural]
//! ```
//!
//! Whitespace is ignored. A leading `-` on the first term of an expression
//! negates that term, so `-x^2 + 1` is accepted. Juxtaposition is not
//! multiplication: `25x` is rejected.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::Polynomial;
use crate::ground::Rat;

const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    ExpectedNatural,
    ZeroDenominator,
    ExponentTooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected {c:?} at byte {}", self.offset),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input at byte {}", self.offset),
            ParseErrorKind::ExpectedNatural => write!(f, "expected a natural number at byte {}", self.offset),
            ParseErrorKind::ZeroDenominator => write!(f, "division by zero in literal at byte {}", self.offset),
            ParseErrorKind::ExponentTooLarge => {
                write!(f, "exponent exceeds {MAX_EXPONENT} at byte {}", self.offset)
            }
        }
    }
}

impl std::error::Error for ParseError {}

pub fn parse(text: &str) -> Result<Polynomial, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let poly = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(poly),
        Some(c) => Err(p.err_at(p.pos, ParseErrorKind::UnexpectedChar(c as char))),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err_at(&self, offset: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { offset, kind }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(c) => self.err_at(self.pos, ParseErrorKind::UnexpectedChar(c as char)),
            None => self.err_at(self.pos, ParseErrorKind::UnexpectedEnd),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// Next non-whitespace byte after the current one.
    fn peek_after(&self) -> Option<u8> {
        self.src[self.pos + 1..].iter().copied().find(|c| !c.is_ascii_whitespace())
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        self.skip_ws();
        let mut acc = if self.peek() == Some(b'-') && !self.peek_after().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
            -&self.term()?
        } else {
            self.term()?
        };
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() != Some(b'*') {
                return Ok(acc);
            }
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let e = self.natural()?;
        let e = u32::try_from(&e)
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| self.err_at(at, ParseErrorKind::ExponentTooLarge))?;
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Polynomial::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') | Some(b'0'..=b'9') => self.rational().map(Polynomial::constant),
            _ => Err(self.unexpected()),
        }
    }

    fn rational(&mut self) -> Result<Rat, ParseError> {
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
            self.skip_ws();
        }
        let num = self.natural()?;
        self.skip_ws();
        let den = if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let d = self.natural()?;
            if d.is_zero() {
                return Err(self.err_at(at, ParseErrorKind::ZeroDenominator));
            }
            d
        } else {
            BigInt::from(1)
        };
        let q = Rat::new(num, den);
        Ok(if neg { -q } else { q })
    }

    fn natural(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.peek() {
                None => self.err_at(self.pos, ParseErrorKind::UnexpectedEnd),
                Some(_) => self.err_at(self.pos, ParseErrorKind::ExpectedNatural),
            });
        }
        // ascii digits only, so this cannot fail
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::rat;

    #[test]
    fn reads_examples() {
        assert_eq!(parse("x^2-5").unwrap(), Polynomial::from_i64s(&[-5, 0, 1]));
        assert_eq!(parse("(x^2-5)^2-25*x").unwrap(), Polynomial::from_i64s(&[25, -25, -10, 0, 1]));
        assert_eq!(parse("3/2").unwrap(), Polynomial::constant(rat(3, 2)));
        assert_eq!(parse("  - x ^ 2 + 1 ").unwrap(), Polynomial::from_i64s(&[1, 0, -1]));
        assert_eq!(parse("-3/6*x").unwrap(), Polynomial::monomial(rat(-1, 2), 1));
        assert_eq!(parse("x*x*x - (x - 1)").unwrap(), Polynomial::from_i64s(&[1, -1, 0, 1]));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let e = parse("25x").unwrap_err();
        assert_eq!(e, ParseError { offset: 2, kind: ParseErrorKind::UnexpectedChar('x') });
        assert!(e.to_string().contains("byte 2"));
    }

    #[test]
    fn reports_offsets() {
        assert_eq!(parse("x^2 +").unwrap_err(), ParseError { offset: 5, kind: ParseErrorKind::UnexpectedEnd });
        assert_eq!(parse("1/0").unwrap_err(), ParseError { offset: 2, kind: ParseErrorKind::ZeroDenominator });
        assert_eq!(parse("(x+1").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(parse("y").unwrap_err(), ParseError { offset: 0, kind: ParseErrorKind::UnexpectedChar('y') });
        assert_eq!(parse("x^y").unwrap_err(), ParseError { offset: 2, kind: ParseErrorKind::ExpectedNatural });
        assert_eq!(parse("x^99999").unwrap_err().kind, ParseErrorKind::ExponentTooLarge);
        assert_eq!(parse("").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
    }
}
