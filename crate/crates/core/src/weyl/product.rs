//! The normal-ordered fiber product `∘`.
//!
//! With β-generators kept to the left of α-generators, the product of two
//! normal monomials only has to move the left factor's α-letters past the
//! right factor's β-letters. Each such exchange contributes `lam·ω_{αβ}`,
//! which gives
//!
//! `a ∘ b = Σ_n  Π (lam ω_{αβ})^{n_{αβ}} / n_{αβ}!  ·  ∂_α^{r} a · ∂_β^{c} b`
//!
//! summed over count matrices `n_{αβ}` with row sums `r` and column sums `c`.

use super::{FiberMonomial, FormMonomial, Symplectic, WeylElement, WeylKey};
use crate::error::WeylError;
use crate::ring::{int, Polynomial, Rational};
use num_traits::One;
use smallvec::SmallVec;
use std::collections::HashMap;

type Exps = SmallVec<[u16; 4]>;

struct Pattern {
    lambda: u32,
    scalar: Rational,
    poly: Option<Polynomial>,
    left_dec: Exps,
    right_dec: Exps,
}

struct Contractions<'a> {
    omega: &'a Symplectic,
    pairs: Vec<(usize, usize)>,
    cache: HashMap<(Exps, Exps), Vec<Pattern>>,
    omega_powers: HashMap<(usize, usize, u16), Polynomial>,
}

impl<'a> Contractions<'a> {
    fn new(omega: &'a Symplectic) -> Self {
        let nu = omega.nu();
        let mut pairs = Vec::new();
        for a in 0..nu {
            for b in nu..2 * nu {
                if !omega.omega(a, b).is_zero() {
                    pairs.push((a, b));
                }
            }
        }
        Contractions {
            omega,
            pairs,
            cache: HashMap::new(),
            omega_powers: HashMap::new(),
        }
    }

    fn omega_pow(&mut self, a: usize, b: usize, n: u16) -> Polynomial {
        let omega = self.omega;
        self.omega_powers
            .entry((a, b, n))
            .or_insert_with(|| omega.omega(a, b).pow(n as u32))
            .clone()
    }

    fn patterns(&mut self, left_alpha: &Exps, right_beta: &Exps) -> &Vec<Pattern> {
        let key = (left_alpha.clone(), right_beta.clone());
        if !self.cache.contains_key(&key) {
            let mut counts = vec![0u16; self.pairs.len()];
            let mut raw = Vec::new();
            let mut left_cap = left_alpha.clone();
            let mut right_cap = right_beta.clone();
            enumerate(
                &self.pairs,
                0,
                self.omega.nu(),
                &mut left_cap,
                &mut right_cap,
                &mut counts,
                &mut raw,
            );
            let mut pats = Vec::with_capacity(raw.len());
            for counts in raw {
                pats.push(self.build(&counts, left_alpha, right_beta));
            }
            self.cache.insert(key.clone(), pats);
        }
        &self.cache[&key]
    }

    fn build(&mut self, counts: &[u16], left_alpha: &Exps, right_beta: &Exps) -> Pattern {
        let nu = self.omega.nu();
        let nvars = self.omega.nvars();
        let mut left_dec: Exps = SmallVec::from_elem(0, nu);
        let mut right_dec: Exps = SmallVec::from_elem(0, nu);
        let mut scalar = Rational::one();
        let mut poly: Option<Polynomial> = None;
        let mut lambda = 0u32;
        for (idx, &n) in counts.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let (a, b) = self.pairs[idx];
            left_dec[a] += n;
            right_dec[b - nu] += n;
            lambda += n as u32;
            scalar /= factorial(n);
            let w = self.omega_pow(a, b, n);
            match w.as_constant() {
                Some(c) => scalar *= c,
                None => {
                    poly = Some(match poly {
                        Some(p) => &p * &w,
                        None => w,
                    })
                }
            }
        }
        for a in 0..nu {
            scalar *= falling(left_alpha[a], left_dec[a]);
            scalar *= falling(right_beta[a], right_dec[a]);
        }
        debug_assert!(poly.as_ref().map_or(true, |p| p.nvars() == nvars));
        Pattern {
            lambda,
            scalar,
            poly,
            left_dec,
            right_dec,
        }
    }
}

fn enumerate(
    pairs: &[(usize, usize)],
    idx: usize,
    nu: usize,
    left_cap: &mut Exps,
    right_cap: &mut Exps,
    counts: &mut Vec<u16>,
    out: &mut Vec<Vec<u16>>,
) {
    if idx == pairs.len() {
        out.push(counts.clone());
        return;
    }
    let (a, b) = pairs[idx];
    let max = left_cap[a].min(right_cap[b - nu]);
    for n in 0..=max {
        counts[idx] = n;
        left_cap[a] -= n;
        right_cap[b - nu] -= n;
        enumerate(pairs, idx + 1, nu, left_cap, right_cap, counts, out);
        left_cap[a] += n;
        right_cap[b - nu] += n;
    }
    counts[idx] = 0;
}

fn factorial(n: u16) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

/// `e (e-1) .. (e-n+1)`.
fn falling(e: u16, n: u16) -> Rational {
    (0..n as i64).fold(Rational::one(), |acc, k| acc * int(e as i64 - k))
}

fn check(a: &WeylElement, b: &WeylElement, omega: &Symplectic) -> Result<(), WeylError> {
    a.check_compatible(b)?;
    if omega.dim() != a.dim() {
        return Err(WeylError::DimensionMismatch {
            left: omega.dim(),
            right: a.dim(),
        });
    }
    if omega.nvars() != a.nvars() {
        return Err(WeylError::Ring(crate::error::RingError::VariableMismatch {
            left: omega.nvars(),
            right: a.nvars(),
        }));
    }
    Ok(())
}

/// Adds `sign · (ka ∘ kb)` for a single pair of basis terms, optionally
/// leaving out the uncontracted (supercommutative) part.
fn accumulate(
    out: &mut WeylElement,
    ctx: &mut Contractions<'_>,
    (ka, ca): (&WeylKey, &Polynomial),
    (kb, cb): (&WeylKey, &Polynomial),
    sign: i32,
    contracted_only: bool,
) {
    if ka.fedosov_degree() + kb.fedosov_degree() > out.trunc() {
        out.mark_truncated(true);
        return;
    }
    let Some((wsign, form)) = ka.form.wedge(&kb.form) else {
        return;
    };
    let nu = ctx.omega.nu();
    let left_alpha: Exps = ka.fiber.0[..nu].iter().copied().collect();
    let right_beta: Exps = kb.fiber.0[nu..].iter().copied().collect();
    let patterns = ctx.patterns(&left_alpha, &right_beta);
    // The empty contraction is always the first pattern.
    if contracted_only && patterns.len() == 1 {
        return;
    }
    let base = ca * cb;
    let base = if sign * wsign < 0 { -base } else { base };
    let fiber = ka.fiber.mul(&kb.fiber);
    let lambda = ka.lambda + kb.lambda;
    for p in patterns {
        if contracted_only && p.lambda == 0 {
            continue;
        }
        let mut f = fiber.clone();
        for a in 0..nu {
            f.0[a] -= p.left_dec[a];
            f.0[a + nu] -= p.right_dec[a];
        }
        let coeff = match &p.poly {
            Some(w) => (&base * w).scale(&p.scalar),
            None => base.scale(&p.scalar),
        };
        out.push_key(
            WeylKey {
                lambda: lambda + p.lambda,
                fiber: f,
                form,
            },
            coeff,
        );
    }
}

/// `a ∘ b`, truncated to the smaller of the two bounds.
pub fn fiber_product(
    a: &WeylElement,
    b: &WeylElement,
    omega: &Symplectic,
) -> Result<WeylElement, WeylError> {
    check(a, b, omega)?;
    let mut out = WeylElement::zero(a.dim(), a.nvars(), a.trunc().min(b.trunc()));
    out.mark_truncated(a.was_truncated() || b.was_truncated());
    let mut ctx = Contractions::new(omega);
    for ta in a.raw_terms() {
        for tb in b.raw_terms() {
            accumulate(&mut out, &mut ctx, ta, tb, 1, false);
        }
    }
    Ok(out)
}

/// `a∘b` minus its uncontracted part `a·b`; every surviving term carries
/// at least one `lam`. For odd `a` this is all of `a∘a`.
pub fn contracted_product(
    a: &WeylElement,
    b: &WeylElement,
    omega: &Symplectic,
) -> Result<WeylElement, WeylError> {
    check(a, b, omega)?;
    let mut out = WeylElement::zero(a.dim(), a.nvars(), a.trunc().min(b.trunc()));
    out.mark_truncated(a.was_truncated() || b.was_truncated());
    let mut ctx = Contractions::new(omega);
    for ta in a.raw_terms() {
        for tb in b.raw_terms() {
            accumulate(&mut out, &mut ctx, ta, tb, 1, true);
        }
    }
    Ok(out)
}

/// `⟦a, b⟧ = a∘b − (−1)^{|a||b|} b∘a`, graded by form degree.
pub fn graded_commutator(
    a: &WeylElement,
    b: &WeylElement,
    omega: &Symplectic,
) -> Result<WeylElement, WeylError> {
    check(a, b, omega)?;
    let mut out = WeylElement::zero(a.dim(), a.nvars(), a.trunc().min(b.trunc()));
    out.mark_truncated(a.was_truncated() || b.was_truncated());
    let mut ctx = Contractions::new(omega);
    for ta in a.raw_terms() {
        for tb in b.raw_terms() {
            // Fiber-constant factors are central up to the form sign.
            if ta.0.fiber.degree() == 0 || tb.0.fiber.degree() == 0 {
                continue;
            }
            let parity = (ta.0.form.degree() * tb.0.form.degree()) % 2;
            // The uncontracted parts of the two orders cancel.
            accumulate(&mut out, &mut ctx, ta, tb, 1, true);
            accumulate(&mut out, &mut ctx, tb, ta, if parity == 0 { -1 } else { 1 }, true);
        }
    }
    Ok(out)
}

impl FiberMonomial {
    pub(crate) fn alpha_part(&self, nu: usize) -> &[u16] {
        &self.0[..nu]
    }
}

impl FormMonomial {
    pub(crate) fn has_beta(&self, nu: usize) -> bool {
        (nu..2 * nu).any(|b| self.contains(b))
    }
}
