//! The algebra `W(E) ⊗ ∧E*` in the symmetric picture.
//!
//! A Weyl element is a finite sum of terms
//! `lam^k · c(x) · y^I ⊗ dx^J` where `y^I` is a normal-ordered fiber monomial
//! (β-generators to the left of α-generators, which is why a commuting
//! exponent vector suffices) and `dx^J` is a strictly increasing wedge
//! product. Every element carries a Fedosov-degree bound `trunc`; terms with
//! `2k + |I| > trunc` are dropped and the drop is remembered.

mod ideal;
mod koszul;
mod pbw;
mod product;
mod symplectic;
mod text;

pub use ideal::{ideal_membership, Ideal, Membership};
pub use koszul::{koszul_delta, koszul_delta_inv, tau, untwisted_delta_inv};
pub use pbw::{pbw_reduce, TensorWord};
pub use product::{contracted_product, fiber_product, graded_commutator};
pub use symplectic::Symplectic;
pub use text::parse_weyl;

use crate::error::WeylError;
use crate::ring::{LambdaSeries, Polynomial, Rational, VarSpace};
use num_traits::{One, Zero};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponents of `y^1..y^{2ν}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct FiberMonomial(pub SmallVec<[u16; 4]>);

impl FiberMonomial {
    pub fn one(dim: usize) -> Self {
        FiberMonomial(SmallVec::from_elem(0, dim))
    }

    pub fn generator(dim: usize, i: usize) -> Self {
        let mut f = Self::one(dim);
        f.0[i] = 1;
        f
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        FiberMonomial(exps.iter().copied().collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &FiberMonomial) -> FiberMonomial {
        FiberMonomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

/// `dx^{i1} ∧ .. ∧ dx^{in}` as a bitmask over zero-based indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct FormMonomial(pub u32);

impl FormMonomial {
    pub fn one() -> Self {
        FormMonomial(0)
    }

    pub fn dx(i: usize) -> Self {
        FormMonomial(1 << i)
    }

    pub fn degree(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    /// Increasing list of zero-based indices.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// `self ∧ other` as `(sign, monomial)`, or `None` when an index repeats.
    pub fn wedge(&self, other: &FormMonomial) -> Option<(i32, FormMonomial)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Each pair (i in self, j in other) with i > j costs one transposition.
        let mut swaps = 0u32;
        for j in other.indices() {
            swaps += (self.0 >> (j + 1)).count_ones();
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((sign, FormMonomial(self.0 | other.0)))
    }
}

/// Index of a basis element of `W ⊗ ∧` together with its `lam` power.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeylKey {
    pub lambda: u32,
    pub fiber: FiberMonomial,
    pub form: FormMonomial,
}

impl WeylKey {
    pub fn fedosov_degree(&self) -> u32 {
        2 * self.lambda + self.fiber.degree()
    }
}

impl Ord for WeylKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.form
            .degree()
            .cmp(&other.form.degree())
            .then_with(|| self.form.0.cmp(&other.form.0))
            .then_with(|| self.fedosov_degree().cmp(&other.fedosov_degree()))
            .then_with(|| self.lambda.cmp(&other.lambda))
            .then_with(|| other.fiber.cmp(&self.fiber))
    }
}

impl PartialOrd for WeylKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A single term `lam^k · coeff · y^fiber ⊗ dx^form`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylTerm {
    pub lambda: u32,
    pub coeff: Polynomial,
    pub fiber: FiberMonomial,
    pub form: FormMonomial,
}

impl WeylTerm {
    pub fn fedosov_degree(&self) -> u32 {
        2 * self.lambda + self.fiber.degree()
    }
}

#[derive(Clone, Debug)]
pub struct WeylElement {
    dim: usize,
    nvars: usize,
    trunc: u32,
    terms: BTreeMap<WeylKey, Polynomial>,
    truncated: bool,
}

impl PartialEq for WeylElement {
    /// Values are compared; the truncation flag is provenance, not value.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.terms == other.terms
    }
}

impl Eq for WeylElement {}

impl WeylElement {
    /// Zero with `dim = 2ν` fiber generators and coefficients in `nvars` variables.
    pub fn zero(dim: usize, nvars: usize, trunc: u32) -> Self {
        WeylElement {
            dim,
            nvars,
            trunc,
            terms: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn from_poly(dim: usize, p: &Polynomial, trunc: u32) -> Self {
        let mut w = Self::zero(dim, p.nvars(), trunc);
        w.push(0, p.clone(), FiberMonomial::one(dim), FormMonomial::one());
        w
    }

    pub fn from_series(dim: usize, s: &LambdaSeries, trunc: u32) -> Self {
        let mut w = Self::zero(dim, s.nvars(), trunc);
        for (k, p) in s.orders() {
            w.push(k, p.clone(), FiberMonomial::one(dim), FormMonomial::one());
        }
        w
    }

    /// Single term; dropped (with the flag set) if it exceeds `trunc`.
    pub fn monomial(
        dim: usize,
        trunc: u32,
        lambda: u32,
        coeff: Polynomial,
        fiber: FiberMonomial,
        form: FormMonomial,
    ) -> Self {
        let mut w = Self::zero(dim, coeff.nvars(), trunc);
        w.push(lambda, coeff, fiber, form);
        w
    }

    /// The generator `y^{i+1}`.
    pub fn y(dim: usize, nvars: usize, trunc: u32, i: usize) -> Self {
        Self::monomial(
            dim,
            trunc,
            0,
            Polynomial::one(nvars),
            FiberMonomial::generator(dim, i),
            FormMonomial::one(),
        )
    }

    /// The one-form `dx^{i+1}`.
    pub fn dx(dim: usize, nvars: usize, trunc: u32, i: usize) -> Self {
        Self::monomial(
            dim,
            trunc,
            0,
            Polynomial::one(nvars),
            FiberMonomial::one(dim),
            FormMonomial::dx(i),
        )
    }

    /// Merges, sorts, drops zeros and terms above `trunc`.
    pub fn normalize(
        dim: usize,
        nvars: usize,
        trunc: u32,
        raw: impl IntoIterator<Item = WeylTerm>,
    ) -> Self {
        let mut w = Self::zero(dim, nvars, trunc);
        for t in raw {
            w.push(t.lambda, t.coeff, t.fiber, t.form);
        }
        w
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nu(&self) -> usize {
        self.dim / 2
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    /// Whether a term was ever dropped by truncation while building this value.
    pub fn was_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = WeylTerm> + '_ {
        self.terms.iter().map(|(k, c)| WeylTerm {
            lambda: k.lambda,
            coeff: c.clone(),
            fiber: k.fiber.clone(),
            form: k.form,
        })
    }

    pub(crate) fn raw_terms(&self) -> impl Iterator<Item = (&WeylKey, &Polynomial)> {
        self.terms.iter()
    }

    pub(crate) fn push_key(&mut self, key: WeylKey, coeff: Polynomial) {
        if coeff.is_zero() {
            return;
        }
        if key.fedosov_degree() > self.trunc {
            self.truncated = true;
            return;
        }
        debug_assert_eq!(coeff.nvars(), self.nvars);
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&coeff);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn push(
        &mut self,
        lambda: u32,
        coeff: Polynomial,
        fiber: FiberMonomial,
        form: FormMonomial,
    ) {
        debug_assert_eq!(fiber.0.len(), self.dim);
        self.push_key(
            WeylKey {
                lambda,
                fiber,
                form,
            },
            coeff,
        );
    }

    pub(crate) fn mark_truncated(&mut self, flag: bool) {
        self.truncated |= flag;
    }

    pub(crate) fn like(&self) -> Self {
        let mut w = Self::zero(self.dim, self.nvars, self.trunc);
        w.truncated = self.truncated;
        w
    }

    pub fn check_compatible(&self, other: &WeylElement) -> Result<(), WeylError> {
        if self.dim != other.dim {
            return Err(WeylError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.nvars != other.nvars {
            return Err(WeylError::Ring(crate::error::RingError::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            }));
        }
        Ok(())
    }

    pub fn add(&self, other: &WeylElement) -> WeylElement {
        self.check_compatible(other).expect("incompatible Weyl elements");
        let mut out = self.clone();
        out.trunc = self.trunc.min(other.trunc);
        out.retruncate_in_place();
        out.truncated |= other.truncated;
        for (k, c) in &other.terms {
            out.push_key(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &WeylElement) -> WeylElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> WeylElement {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> WeylElement {
        let mut out = self.like();
        if c.is_zero() {
            return out;
        }
        for (k, p) in &self.terms {
            out.terms.insert(k.clone(), p.scale(c));
        }
        out
    }

    /// Multiplies every coefficient by a function `f(x)`.
    pub fn mul_poly(&self, f: &Polynomial) -> WeylElement {
        let mut out = self.like();
        for (k, p) in &self.terms {
            out.push_key(k.clone(), p * f);
        }
        out
    }

    /// `lam^k · self`.
    pub fn shift_lambda(&self, k: u32) -> WeylElement {
        let mut out = self.like();
        for (key, p) in &self.terms {
            let mut key = key.clone();
            key.lambda += k;
            out.push_key(key, p.clone());
        }
        out
    }

    /// `(1/lam) · self`; fails if a `lam^0` term is present.
    pub fn divide_by_lambda(&self) -> Result<WeylElement, WeylError> {
        let mut out = self.like();
        for (key, p) in &self.terms {
            if key.lambda == 0 {
                let t = WeylTerm {
                    lambda: 0,
                    coeff: p.clone(),
                    fiber: key.fiber.clone(),
                    form: key.form,
                };
                return Err(WeylError::NotDivisibleByLambda {
                    witness: render_term(&t, &VarSpace::for_nvars(self.nu(), self.nvars)),
                });
            }
            let mut key = key.clone();
            key.lambda -= 1;
            out.terms.insert(key, p.clone());
        }
        Ok(out)
    }

    /// Same value with a (lower or higher) bound; raising it does not recover dropped terms.
    pub fn with_trunc(&self, trunc: u32) -> WeylElement {
        let mut out = self.clone();
        out.trunc = trunc;
        out.retruncate_in_place();
        out
    }

    /// Keeps terms of Fedosov degree `<= max` without changing the bound.
    pub fn up_to_degree(&self, max: u32) -> WeylElement {
        let mut out = self.like();
        for (k, p) in &self.terms {
            if k.fedosov_degree() <= max {
                out.terms.insert(k.clone(), p.clone());
            }
        }
        out
    }

    fn retruncate_in_place(&mut self) {
        let trunc = self.trunc;
        let before = self.terms.len();
        self.terms.retain(|k, _| k.fedosov_degree() <= trunc);
        if self.terms.len() != before {
            self.truncated = true;
        }
    }

    /// Terms whose key satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&WeylKey) -> bool) -> WeylElement {
        let mut out = self.like();
        for (k, p) in &self.terms {
            if keep(k) {
                out.terms.insert(k.clone(), p.clone());
            }
        }
        out
    }

    /// Component of the given form degree.
    pub fn form_part(&self, degree: u32) -> WeylElement {
        let mut out = self.like();
        for (k, p) in &self.terms {
            if k.form.degree() == degree {
                out.terms.insert(k.clone(), p.clone());
            }
        }
        out
    }

    pub fn min_fedosov_degree(&self) -> Option<u32> {
        self.terms.keys().map(WeylKey::fedosov_degree).min()
    }

    pub fn max_fiber_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.fiber.degree()).max().unwrap_or(0)
    }

    /// Set of form degrees that occur.
    pub fn form_degrees(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().map(|k| k.form.degree()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Applies a coefficient map (e.g. substitution or re-embedding).
    pub fn map_coeffs(&self, nvars: usize, f: impl Fn(&Polynomial) -> Polynomial) -> WeylElement {
        let mut out = WeylElement::zero(self.dim, nvars, self.trunc);
        out.truncated = self.truncated;
        for (k, p) in &self.terms {
            out.push_key(k.clone(), f(p));
        }
        out
    }

    pub fn extend_vars(&self, nvars: usize) -> WeylElement {
        self.map_coeffs(nvars, |p| p.extend_vars(nvars))
    }

    pub fn render(&self, space: &VarSpace) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for t in self.terms() {
            let (negative, body) = term_body(&t, space);
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

fn term_body(t: &WeylTerm, space: &VarSpace) -> (bool, String) {
    let mut factors = Vec::new();
    match t.lambda {
        0 => {}
        1 => factors.push("lam".to_string()),
        k => factors.push(format!("lam^{k}")),
    }
    let negative;
    let coeff_factor = if t.coeff.len() == 1 {
        let (m, c) = t.coeff.terms().next().unwrap();
        negative = c.is_negative();
        let mut fs = Vec::new();
        let mag = c.abs();
        if !mag.is_one() || m.degree() == 0 {
            fs.push(crate::ring::render_rational(&mag));
        }
        fs.extend(crate::ring::monomial_factors(m, space));
        fs.join("*")
    } else {
        // Pull the sign of the leading (first rendered) term out of the parentheses.
        let lead = t.coeff.terms().next_back().unwrap().1;
        negative = lead.is_negative();
        let shown = if negative { -&t.coeff } else { t.coeff.clone() };
        format!("({})", shown.render(space))
    };
    let fiber: Vec<String> = t
        .fiber
        .0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("y{}", i + 1)
            } else {
                format!("y{}^{}", i + 1, e)
            }
        })
        .collect();
    let form: Vec<String> = t.form.indices().map(|i| format!("dx{}", i + 1)).collect();
    let has_more = !fiber.is_empty() || !form.is_empty() || t.lambda > 0;
    if !(coeff_factor == "1" && has_more) {
        factors.push(coeff_factor);
    }
    if !fiber.is_empty() {
        factors.push(fiber.join("*"));
    }
    if !form.is_empty() {
        factors.push(form.join("^"));
    }
    (negative, factors.join(" * "))
}

pub(crate) fn render_term(t: &WeylTerm, space: &VarSpace) -> String {
    let (neg, body) = term_body(t, space);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&VarSpace::for_nvars(self.nu(), self.nvars)))
    }
}

impl fmt::Display for WeylTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dim = self.fiber.0.len();
        f.write_str(&render_term(
            self,
            &VarSpace::for_nvars(dim / 2, self.coeff.nvars()),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    #[test]
    fn normalize_merges_like_terms() {
        let y1 = WeylTerm {
            lambda: 0,
            coeff: Polynomial::one(2),
            fiber: FiberMonomial::generator(2, 0),
            form: FormMonomial::one(),
        };
        let w = WeylElement::normalize(2, 2, 6, vec![y1.clone(), y1.clone()]);
        assert_eq!(w.len(), 1);
        assert_eq!(w.terms().next().unwrap().coeff, Polynomial::constant(2, int(2)));
    }

    #[test]
    fn normalize_drops_zero_coefficients() {
        let t = WeylTerm {
            lambda: 0,
            coeff: Polynomial::zero(2),
            fiber: FiberMonomial::generator(2, 0),
            form: FormMonomial::one(),
        };
        let w = WeylElement::normalize(2, 2, 6, vec![t]);
        assert!(w.is_zero());
        assert!(!w.was_truncated());
    }

    #[test]
    fn normalize_truncates_with_flag() {
        let t = WeylTerm {
            lambda: 2,
            coeff: Polynomial::one(2),
            fiber: FiberMonomial::generator(2, 1),
            form: FormMonomial::one(),
        };
        let w = WeylElement::normalize(2, 2, 4, vec![t]);
        assert!(w.is_zero());
        assert!(w.was_truncated());
    }

    #[test]
    fn normalize_is_idempotent() {
        let a = parse_weyl("x1*y1 + y2*dx1 + 2*lam*y1 - x1*y1", 1, 6).unwrap();
        let b = WeylElement::normalize(2, 2, 6, a.terms());
        assert_eq!(a, b);
    }

    #[test]
    fn wedge_signs() {
        let a = FormMonomial::dx(1);
        let b = FormMonomial::dx(0);
        assert_eq!(a.wedge(&b), Some((-1, FormMonomial(0b11))));
        assert_eq!(b.wedge(&a), Some((1, FormMonomial(0b11))));
        assert_eq!(a.wedge(&a), None);
        let ab = FormMonomial(0b101);
        assert_eq!(FormMonomial::dx(1).wedge(&ab), Some((-1, FormMonomial(0b111))));
    }

    #[test]
    fn lambda_division_requires_lambda() {
        let w = parse_weyl("lam*y1 + y2", 1, 6).unwrap();
        assert!(matches!(
            w.divide_by_lambda(),
            Err(WeylError::NotDivisibleByLambda { .. })
        ));
        let w = parse_weyl("lam*y1 + lam^2", 1, 6).unwrap();
        assert_eq!(w.divide_by_lambda().unwrap(), parse_weyl("y1 + lam", 1, 6).unwrap());
    }
}
