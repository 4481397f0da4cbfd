#![allow(dead_code)]

use fedosov_core::ring::{rat, Monomial, Polynomial};
use fedosov_core::weyl::{FiberMonomial, FormMonomial, WeylElement};
use proptest::prelude::*;
use smallvec::SmallVec;

pub fn rational() -> impl Strategy<Value = fedosov_core::Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Sparse polynomials in `nvars` variables with exponents below `max_exp`.
pub fn polynomial(nvars: usize, max_exp: u16, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..max_exp, nvars), rational()), 0..=max_terms).prop_map(
        move |terms| {
            terms.into_iter().fold(Polynomial::zero(nvars), |acc, (e, c)| {
                acc + Polynomial::term(Monomial(SmallVec::from_vec(e)), c)
            })
        },
    )
}

/// Polynomials of total degree at most `max_deg` in the first `dim` of `nvars` variables.
pub fn bounded_polynomial(dim: usize, nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=max_deg as u16, dim), rational()), 1..=max_terms).prop_map(
        move |terms| {
            terms.into_iter().fold(Polynomial::zero(nvars), |acc, (mut e, c)| {
                while e.iter().map(|&k| k as u32).sum::<u32>() > max_deg {
                    let i = e.iter().position(|&k| k > 0).unwrap();
                    e[i] -= 1;
                }
                e.resize(nvars, 0);
                acc + Polynomial::term(Monomial(SmallVec::from_vec(e)), c)
            })
        },
    )
}

/// Weyl elements of mixed bidegree: each term has fiber degree `<= max_fiber`,
/// an arbitrary form monomial and a coefficient of degree `<= 1`.
pub fn weyl(dim: usize, nvars: usize, trunc: u32, max_fiber: u16, max_lambda: u32) -> impl Strategy<Value = WeylElement> {
    let term = (
        0..=max_lambda,
        prop::collection::vec(0..=max_fiber, dim),
        0u32..(1 << dim),
        bounded_polynomial(dim, nvars, 1, 2),
    );
    prop::collection::vec(term, 1..=5).prop_map(move |terms| {
        terms.into_iter().fold(WeylElement::zero(dim, nvars, trunc), |acc, (k, fiber, form, c)| {
            acc.add(&WeylElement::monomial(
                dim,
                trunc,
                k,
                c,
                FiberMonomial::from_exponents(&fiber),
                FormMonomial(form),
            ))
        })
    })
}

pub fn monomial_poly(nvars: usize, exps: &[u16]) -> Polynomial {
    let mut e = exps.to_vec();
    e.resize(nvars, 0);
    Polynomial::term(Monomial(SmallVec::from_vec(e)), rat(1, 1))
}
