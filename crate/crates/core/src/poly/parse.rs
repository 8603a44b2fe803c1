//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```
//!
//! `/` appears only inside rational literals. Juxtaposition (`2A`) is an error.

use alloc::format;
use alloc::string::String;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Poly, Var};
use crate::arith::rat_make;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(usize, Tok)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        let single = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((start, t));
        }
        if b.is_ascii_digit() {
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let n = BigInt::from_str(&self.src[start..self.pos]).expect("digits");
            return Ok((start, Tok::Int(n)));
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self.pos < bytes.len()
                && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
            {
                self.pos += 1;
            }
            return Ok((start, Tok::Ident(self.src[start..self.pos].into())));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(err(start, format!("unexpected character {ch:?}")))
    }
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    pos: usize,
    tok: Tok,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        let mut lexer = Lexer { src, pos: 0 };
        let (pos, tok) = lexer.next()?;
        Ok(Parser { lexer, pos, tok })
    }

    fn bump(&mut self) -> Result<Tok> {
        let (pos, tok) = self.lexer.next()?;
        self.pos = pos;
        Ok(core::mem::replace(&mut self.tok, tok))
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.tok {
                Tok::Plus => {
                    self.bump()?;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump()?;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.tok == Tok::Star {
            self.bump()?;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.tok == Tok::Minus {
            self.bump()?;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.tok != Tok::Caret {
            return Ok(base);
        }
        self.bump()?;
        let at = self.pos;
        match self.bump()? {
            Tok::Int(n) => {
                let e = n
                    .to_u32()
                    .ok_or_else(|| err(at, "exponent too large"))?;
                Ok(base.pow(e))
            }
            _ => Err(err(at, "exponent must be a nonnegative integer literal")),
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let at = self.pos;
        match self.bump()? {
            Tok::Int(n) => {
                if self.tok == Tok::Slash {
                    self.bump()?;
                    let dat = self.pos;
                    match self.bump()? {
                        Tok::Int(d) => {
                            let r = rat_make(n, d)
                                .map_err(|_| err(dat, "zero denominator in rational literal"))?;
                            Ok(Poly::constant(r))
                        }
                        _ => Err(err(dat, "'/' must be followed by an integer denominator")),
                    }
                } else {
                    Ok(Poly::constant(n))
                }
            }
            Tok::Ident(name) => Ok(Poly::var(Var::new(name)?)),
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.pos;
                match self.bump()? {
                    Tok::RParen => Ok(inner),
                    _ => Err(err(close, "expected ')'")),
                }
            }
            Tok::End => Err(err(at, "unexpected end of input")),
            other => Err(err(at, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses and expands `text` into canonical form.
pub fn parse_poly(text: &str) -> Result<Poly> {
    let mut p = Parser::new(text)?;
    let out = p.expr()?;
    match p.tok {
        Tok::End => Ok(out),
        Tok::Slash => Err(err(p.pos, "'/' is only allowed inside rational literals")),
        Tok::Int(_) | Tok::Ident(_) | Tok::LParen => {
            Err(err(p.pos, "implicit multiplication is not allowed; use '*'"))
        }
        ref t => Err(err(p.pos, format!("unexpected token {t:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use crate::poly::Monomial;

    fn pos_of(e: Error) -> usize {
        match e {
            Error::Parse { pos, .. } => pos,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn single_term() {
        let p = parse_poly("9*A^2").unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(
            p.coefficient(&Monomial::var(Var::named("A"), 2)),
            Rational::from(9)
        );
        assert!(parse_poly("0").unwrap().is_zero());
        assert!(parse_poly("  A - A ").unwrap().is_zero());
    }

    #[test]
    fn precedence() {
        // ^ binds tighter than unary minus
        assert_eq!(parse_poly("-A^2").unwrap(), parse_poly("-(A^2)").unwrap());
        assert_eq!(parse_poly("2*-A").unwrap(), parse_poly("-2*A").unwrap());
        assert_eq!(parse_poly("1 - 2*3").unwrap(), Poly::constant(-5));
        assert_eq!(parse_poly("(1-2)*3").unwrap(), Poly::constant(-3));
        assert_eq!(parse_poly("2^3^").map_err(pos_of), Err(3));
        assert_eq!(
            parse_poly("3/6*A").unwrap(),
            Poly::var(Var::named("A")).scale(&crate::rat_make(1, 2).unwrap())
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_poly("2A").map_err(pos_of), Err(1));
        assert_eq!(parse_poly("A B").map_err(pos_of), Err(2));
        assert_eq!(parse_poly("A^B").map_err(pos_of), Err(2));
        assert_eq!(parse_poly("A^-1").map_err(pos_of), Err(2));
        assert_eq!(parse_poly("(A+1").map_err(pos_of), Err(4));
        assert_eq!(parse_poly("A/3").map_err(pos_of), Err(1));
        assert_eq!(parse_poly("1/0").map_err(pos_of), Err(2));
        assert_eq!(parse_poly("A + ").map_err(pos_of), Err(4));
        assert_eq!(parse_poly("A # 2").map_err(pos_of), Err(2));
        assert_eq!(parse_poly("").map_err(pos_of), Err(0));
    }
}
