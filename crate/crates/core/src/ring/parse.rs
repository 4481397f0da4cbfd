//! Expression grammar: integers, `a/b`, variables `x1..`, optional center
//! variables `a1..` and the formal parameter `lam`, with `+ - * / ^` and
//! parentheses.

use super::{int, LambdaSeries, Polynomial, Rational};
use crate::error::RingError;
use num_bigint::BigInt;
use num_traits::Zero;

/// Variable naming for a chart of dimension `2ν`, optionally with the
/// center variables `a1..a{2ν}` appended after the coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarSpace {
    coords: usize,
    centers: bool,
}

impl VarSpace {
    pub fn new(nu: usize) -> Self {
        VarSpace {
            coords: 2 * nu,
            centers: false,
        }
    }

    pub fn with_centers(nu: usize) -> Self {
        VarSpace {
            coords: 2 * nu,
            centers: true,
        }
    }

    /// Names `x1..x{nvars}` with no centers.
    pub fn plain(nvars: usize) -> Self {
        VarSpace {
            coords: nvars,
            centers: false,
        }
    }

    /// Chooses the space matching a polynomial with `nvars` variables over `2ν` coordinates.
    pub fn for_nvars(nu: usize, nvars: usize) -> Self {
        if nvars == 4 * nu {
            Self::with_centers(nu)
        } else {
            Self::plain(nvars)
        }
    }

    pub fn nvars(&self) -> usize {
        if self.centers {
            2 * self.coords
        } else {
            self.coords
        }
    }

    pub fn name(&self, i: usize) -> String {
        if i < self.coords {
            format!("x{}", i + 1)
        } else {
            format!("a{}", i - self.coords + 1)
        }
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        let (prefix, digits) = name.split_at(1);
        let n: usize = digits.parse().ok()?;
        if n == 0 || n > self.coords || digits.starts_with('0') {
            return None;
        }
        match prefix {
            "x" => Some(n - 1),
            "a" if self.centers => Some(self.coords + n - 1),
            _ => None,
        }
    }
}

pub fn parse_polynomial(text: &str, space: &VarSpace) -> Result<Polynomial, RingError> {
    let s = Parser::new(text, space, false).parse()?;
    Ok(s.coeff(0))
}

/// Parses an expression that may contain `lam`.
pub fn parse_series(text: &str, space: &VarSpace) -> Result<LambdaSeries, RingError> {
    Parser::new(text, space, true).parse()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    space: &'a VarSpace,
    allow_lambda: bool,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, space: &'a VarSpace, allow_lambda: bool) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            space,
            allow_lambda,
        }
    }

    fn err(&self, message: impl Into<String>) -> RingError {
        RingError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<LambdaSeries, RingError> {
        let e = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<LambdaSeries, RingError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LambdaSeries, RingError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    let c = constant_of(&d).ok_or_else(|| RingError::Syntax {
                        position: at,
                        message: "divisor must be a rational constant".into(),
                    })?;
                    if c.is_zero() {
                        return Err(RingError::Syntax {
                            position: at,
                            message: "division by zero".into(),
                        });
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<LambdaSeries, RingError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.scale(&int(-1)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<LambdaSeries, RingError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a non-negative integer exponent"));
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("exponent too large"))?;
            let mut acc = LambdaSeries::from_poly(Polynomial::one(self.space.nvars()));
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<LambdaSeries, RingError> {
        let nvars = self.space.nvars();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(LambdaSeries::from_poly(Polynomial::constant(
                    nvars,
                    Rational::from_integer(n),
                )))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "lam" {
                    if !self.allow_lambda {
                        return Err(RingError::UnknownVariable {
                            name: name.into(),
                            position: start,
                        });
                    }
                    let mut s = LambdaSeries::zero(nvars);
                    s.add_at(1, &Polynomial::one(nvars));
                    return Ok(s);
                }
                match self.space.lookup(name) {
                    Some(i) => Ok(LambdaSeries::from_poly(Polynomial::var(nvars, i))),
                    None => Err(RingError::UnknownVariable {
                        name: name.into(),
                        position: start,
                    }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn constant_of(s: &LambdaSeries) -> Option<Rational> {
    if s.is_zero() {
        return Some(Rational::zero());
    }
    if s.max_order() != Some(0) {
        return None;
    }
    s.coeff(0).as_constant()
}
