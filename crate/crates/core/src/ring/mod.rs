//! Exact arithmetic over `Q[x_1, .., x_m]`.
//!
//! Coefficients are arbitrary-precision rationals. Polynomials are stored as
//! an ordered map from exponent vectors to non-zero coefficients, so equality
//! is structural and rendering is deterministic.

mod parse;
mod rational;
mod series;

pub use parse::{parse_polynomial, parse_series, VarSpace};
pub use rational::Rational;
pub use series::LambdaSeries;

use crate::error::RingError;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Builds the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_i64(n)
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    /// The variable `x_{i+1}` (zero-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Self::term(Monomial::var(nvars, i), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map_or(false, |(m, c)| m.degree() == 0 && c.is_one())
    }

    /// Returns the constant value when the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn check_vars(&self, other: &Polynomial) -> Result<(), RingError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(RingError::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.nvars(), self.nvars);
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        out.add_assign_ref(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_vars(other)?;
        let mut out = Polynomial::zero(self.nvars);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub(crate) fn add_assign_ref(&mut self, other: &Polynomial) {
        assert_eq!(self.nvars, other.nvars, "variable-set mismatch");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i` (zero-based).
    pub fn diff(&self, i: usize) -> Result<Polynomial, RingError> {
        if i >= self.nvars {
            return Err(RingError::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[i] -= 1;
            out.add_term(dm, c * int(e as i64));
        }
        Ok(out)
    }

    /// Simultaneous substitution `x_i -> bindings[i]`; unbound variables are kept.
    pub fn subst(&self, bindings: &BTreeMap<usize, Polynomial>) -> Result<Polynomial, RingError> {
        let target_vars = match bindings.values().next() {
            Some(p) => p.nvars,
            None => return Ok(self.clone()),
        };
        for (&i, p) in bindings {
            if i >= self.nvars {
                return Err(RingError::IndexOutOfRange {
                    index: i,
                    nvars: self.nvars,
                });
            }
            if p.nvars != target_vars {
                return Err(RingError::VariableMismatch {
                    left: target_vars,
                    right: p.nvars,
                });
            }
        }
        if target_vars != self.nvars && bindings.len() != self.nvars {
            // Unbound variables must survive, which needs a common variable set.
            return Err(RingError::VariableMismatch {
                left: self.nvars,
                right: target_vars,
            });
        }
        let mut powers: BTreeMap<(usize, u16), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero(target_vars);
        for (m, c) in &self.terms {
            let mut acc = Polynomial::constant(target_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = match bindings.get(&i) {
                    Some(p) => powers
                        .entry((i, e))
                        .or_insert_with(|| p.pow(e as u32))
                        .clone(),
                    None => {
                        let mut mm = Monomial::one(target_vars);
                        mm.0[i] = e;
                        Polynomial::term(mm, Rational::one())
                    }
                };
                acc = &acc * &factor;
            }
            out.add_assign_ref(&acc);
        }
        Ok(out)
    }

    /// Substitutes constants for a subset of variables.
    pub fn eval_partial(&self, values: &BTreeMap<usize, Rational>) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut c = c.clone();
            let mut mm = m.clone();
            for (&i, v) in values {
                let e = mm.0[i];
                if e > 0 {
                    c *= num_traits::pow(v.clone(), e as usize);
                    mm.0[i] = 0;
                }
            }
            out.add_term(mm, c);
        }
        out
    }

    /// Re-embeds into a larger variable set by appending unused variables.
    pub fn extend_vars(&self, nvars: usize) -> Polynomial {
        assert!(nvars >= self.nvars);
        Polynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.resize(nvars, 0);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Drops trailing variables; fails if any of them occurs.
    pub fn restrict_vars(&self, nvars: usize) -> Option<Polynomial> {
        let mut out = Polynomial::zero(nvars);
        for (m, c) in &self.terms {
            if m.0[nvars..].iter().any(|&e| e > 0) {
                return None;
            }
            out.add_term(Monomial(m.0[..nvars].iter().copied().collect()), c.clone());
        }
        Some(out)
    }

    /// Applies a permutation of variable slots: variable `i` becomes `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Polynomial {
        assert_eq!(perm.len(), self.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e: SmallVec<[u16; 8]> = SmallVec::from_elem(0, self.nvars);
            for (i, &x) in m.0.iter().enumerate() {
                e[perm[i]] = x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Whether any variable in `vars` occurs.
    pub fn depends_on(&self, vars: impl IntoIterator<Item = usize> + Clone) -> bool {
        self.terms
            .keys()
            .any(|m| vars.clone().into_iter().any(|i| m.0[i] > 0))
    }

    /// Canonical text with variables named by `space`.
    pub fn render(&self, space: &VarSpace) -> String {
        render_terms(
            self.terms
                .iter()
                .rev()
                .map(|(m, c)| (c.clone(), monomial_factors(m, space))),
        )
    }
}

pub(crate) fn monomial_factors(m: &Monomial, space: &VarSpace) -> Vec<String> {
    m.0.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            let name = space.name(i);
            if e == 1 {
                name
            } else {
                format!("{name}^{e}")
            }
        })
        .collect()
}

pub fn render_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Joins `(coefficient, factors)` pairs into `a - b + c` form.
pub(crate) fn render_terms(terms: impl Iterator<Item = (Rational, Vec<String>)>) -> String {
    let mut out = String::new();
    for (c, factors) in terms {
        let negative = c.is_negative();
        let mag = c.abs();
        let body = if factors.is_empty() {
            render_rational(&mag)
        } else if mag.is_one() {
            factors.join("*")
        } else {
            format!("{}*{}", render_rational(&mag), factors.join("*"))
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&VarSpace::plain(self.nvars)))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("variable-set mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("variable-set mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("variable-set mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
