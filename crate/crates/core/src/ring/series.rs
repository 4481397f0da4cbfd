use super::{monomial_factors, render_terms, Polynomial, Rational, VarSpace};
use std::collections::BTreeMap;
use std::fmt;

/// A polynomial in the formal parameter `lam` with coefficients in `Q[x]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LambdaSeries {
    nvars: usize,
    coeffs: BTreeMap<u32, Polynomial>,
}

impl LambdaSeries {
    pub fn zero(nvars: usize) -> Self {
        LambdaSeries {
            nvars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let mut s = Self::zero(p.nvars());
        s.add_at(0, &p);
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `lam^k`.
    pub fn coeff(&self, k: u32) -> Polynomial {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    pub fn orders(&self) -> impl Iterator<Item = (u32, &Polynomial)> {
        self.coeffs.iter().map(|(&k, p)| (k, p))
    }

    pub fn max_order(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_at(&mut self, k: u32, p: &Polynomial) {
        assert_eq!(p.nvars(), self.nvars, "variable-set mismatch");
        if p.is_zero() {
            return;
        }
        let slot = self
            .coeffs
            .entry(k)
            .or_insert_with(|| Polynomial::zero(self.nvars));
        slot.add_assign_ref(p);
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// Keeps orders `lam^k` with `k <= max`.
    pub fn truncate(&self, max: u32) -> LambdaSeries {
        LambdaSeries {
            nvars: self.nvars,
            coeffs: self
                .coeffs
                .range(..=max)
                .map(|(&k, p)| (k, p.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &LambdaSeries) -> LambdaSeries {
        let mut out = self.clone();
        for (k, p) in other.orders() {
            out.add_at(k, p);
        }
        out
    }

    pub fn sub(&self, other: &LambdaSeries) -> LambdaSeries {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Rational) -> LambdaSeries {
        let mut out = Self::zero(self.nvars);
        for (k, p) in self.orders() {
            out.add_at(k, &p.scale(c));
        }
        out
    }

    /// Commutative product in `Q[x][lam]`.
    pub fn mul(&self, other: &LambdaSeries) -> LambdaSeries {
        let mut out = Self::zero(self.nvars);
        for (i, p) in self.orders() {
            for (j, q) in other.orders() {
                out.add_at(i + j, &(p * q));
            }
        }
        out
    }

    /// Applies `f` to every coefficient polynomial.
    pub fn map(&self, nvars: usize, f: impl Fn(&Polynomial) -> Polynomial) -> LambdaSeries {
        let mut out = Self::zero(nvars);
        for (k, p) in self.orders() {
            out.add_at(k, &f(p));
        }
        out
    }

    pub fn render(&self, space: &VarSpace) -> String {
        render_terms(self.coeffs.iter().flat_map(|(&k, p)| {
            p.terms().rev().map(move |(m, c)| {
                let mut factors = Vec::new();
                match k {
                    0 => {}
                    1 => factors.push("lam".to_string()),
                    _ => factors.push(format!("lam^{k}")),
                }
                factors.extend(monomial_factors(m, space));
                (c.clone(), factors)
            })
        }))
    }
}

impl fmt::Display for LambdaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&VarSpace::plain(self.nvars)))
    }
}
