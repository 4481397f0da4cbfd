//! Reader for the canonical Weyl rendering, e.g.
//! `x2 - y1 + lam * (x1 + 1) * y1*y2^2 * dx1^dx2`.
//!
//! A term is a `*`-separated product of factors read in the symmetric
//! picture: scalars, coordinates, `lam`, fiber generators `y{i}` and wedge
//! chains `dx{i}^dx{j}`. Parenthesized factors are ordinary expressions.

use super::{FiberMonomial, FormMonomial, WeylElement};
use crate::error::{RingError, WeylError};
use crate::ring::{int, parse_series, LambdaSeries, Polynomial, Rational, VarSpace};
use num_bigint::BigInt;
use num_traits::Zero;

pub fn parse_weyl(text: &str, nu: usize, trunc: u32) -> Result<WeylElement, WeylError> {
    parse_weyl_in(text, &VarSpace::new(nu), nu, trunc)
}

pub fn parse_weyl_in(
    text: &str,
    space: &VarSpace,
    nu: usize,
    trunc: u32,
) -> Result<WeylElement, WeylError> {
    let mut r = Reader {
        src: text.as_bytes(),
        pos: 0,
        space,
        dim: 2 * nu,
    };
    let mut out = WeylElement::zero(2 * nu, space.nvars(), trunc);
    let mut first = true;
    loop {
        r.skip_ws();
        if r.pos >= r.src.len() {
            if first {
                return Err(r.err("empty input"));
            }
            break;
        }
        let mut negative = false;
        match r.src[r.pos] {
            b'+' if !first => r.pos += 1,
            b'-' => {
                negative = true;
                r.pos += 1;
            }
            _ if first => {}
            _ => return Err(r.err("expected '+' or '-'")),
        }
        first = false;
        r.term(&mut out, negative)?;
    }
    Ok(out)
}

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
    space: &'a VarSpace,
    dim: usize,
}

impl Reader<'_> {
    fn err(&self, message: &str) -> WeylError {
        WeylError::Ring(RingError::Syntax {
            position: self.pos,
            message: message.into(),
        })
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

    fn number(&mut self) -> Result<BigInt, WeylError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .unwrap())
    }

    fn ident(&mut self) -> (usize, String) {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        (
            start,
            std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string(),
        )
    }

    fn exponent(&mut self) -> Result<u32, WeylError> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.number()?;
            return n.try_into().map_err(|_| self.err("exponent too large"));
        }
        Ok(1)
    }

    fn index(&self, name: &str, prefix: &str, start: usize) -> Result<usize, WeylError> {
        let n: usize = name[prefix.len()..].parse().map_err(|_| unknown(name, start))?;
        if n == 0 || n > self.dim {
            return Err(unknown(name, start));
        }
        Ok(n - 1)
    }

    fn term(&mut self, out: &mut WeylElement, negative: bool) -> Result<(), WeylError> {
        let nvars = self.space.nvars();
        let mut coeff = LambdaSeries::from_poly(Polynomial::one(nvars));
        let mut fiber = FiberMonomial::one(self.dim);
        let mut form = FormMonomial::one();
        let mut sign = if negative { -1 } else { 1 };
        loop {
            match self.peek() {
                Some(b'(') => {
                    let open = self.pos;
                    let mut depth = 0usize;
                    let mut close = None;
                    for (k, &c) in self.src[open..].iter().enumerate() {
                        match c {
                            b'(' => depth += 1,
                            b')' => {
                                depth -= 1;
                                if depth == 0 {
                                    close = Some(open + k);
                                    break;
                                }
                            }
                            _ => {}
                        }
                    }
                    let close = close.ok_or_else(|| self.err("unbalanced '('"))?;
                    let inner = std::str::from_utf8(&self.src[open + 1..close]).unwrap();
                    let s = parse_series(inner, self.space).map_err(|e| shift(e, open + 1))?;
                    coeff = coeff.mul(&s);
                    self.pos = close + 1;
                }
                Some(c) if c.is_ascii_digit() => {
                    let n = self.number()?;
                    let mut v = Rational::from_integer(n);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let d = self.number()?;
                        if d.is_zero() {
                            return Err(self.err("division by zero"));
                        }
                        v /= Rational::from_integer(d);
                    }
                    coeff = coeff.scale(&v);
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let (start, name) = self.ident();
                    if name == "lam" {
                        let e = self.exponent()?;
                        let mut l = LambdaSeries::zero(nvars);
                        l.add_at(e, &Polynomial::one(nvars));
                        coeff = coeff.mul(&l);
                    } else if name.starts_with("dx") {
                        let mut i = self.index(&name, "dx", start)?;
                        loop {
                            match form.wedge(&FormMonomial::dx(i)) {
                                Some((s, f)) => {
                                    sign *= s;
                                    form = f;
                                }
                                None => {
                                    coeff = LambdaSeries::zero(nvars);
                                }
                            }
                            if self.peek() == Some(b'^') {
                                self.pos += 1;
                                let (st, nm) = self.ident();
                                if !nm.starts_with("dx") {
                                    return Err(unknown(&nm, st));
                                }
                                i = self.index(&nm, "dx", st)?;
                            } else {
                                break;
                            }
                        }
                    } else if name.starts_with('y') {
                        let i = self.index(&name, "y", start)?;
                        let e = self.exponent()?;
                        fiber.0[i] += e as u16;
                    } else {
                        self.exponent()?;
                        let at = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                        let v = parse_series(at, self.space).map_err(|e| shift(e, start))?;
                        coeff = coeff.mul(&v);
                    }
                }
                _ => return Err(self.err("expected a factor")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        let coeff = coeff.scale(&int(sign as i64));
        for (k, p) in coeff.orders() {
            out.push(k, p.clone(), fiber.clone(), form);
        }
        Ok(())
    }
}

fn unknown(name: &str, position: usize) -> WeylError {
    WeylError::Ring(RingError::UnknownVariable {
        name: name.into(),
        position,
    })
}

fn shift(e: RingError, offset: usize) -> WeylError {
    WeylError::Ring(match e {
        RingError::Syntax { position, message } => RingError::Syntax {
            position: position + offset,
            message,
        },
        RingError::UnknownVariable { name, position } => RingError::UnknownVariable {
            name,
            position: position + offset,
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_canonical_rendering() {
        let a = parse_weyl(
            "x2 - y1 + lam*(x1 + 1)*y1*y2^2*dx2^dx1 - 1/3*y2*y1*dx1 + lam^2",
            1,
            8,
        )
        .unwrap();
        let text = a.to_string();
        assert_eq!(parse_weyl(&text, 1, 8).unwrap(), a);
        assert_eq!(
            text,
            "x2 - y1 + lam^2 - 1/3 * y1*y2 * dx1 - lam * (x1 + 1) * y1*y2^2 * dx1^dx2"
        );
    }

    #[test]
    fn repeated_forms_vanish() {
        assert!(parse_weyl("y1*dx1^dx1", 1, 8).unwrap().is_zero());
    }

    #[test]
    fn unknown_generators() {
        assert!(parse_weyl("y3", 1, 8).is_err());
        assert!(parse_weyl("dx0", 1, 8).is_err());
        assert!(parse_weyl("y1 +", 1, 8).is_err());
    }
}
