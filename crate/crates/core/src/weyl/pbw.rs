//! Normal form of tensor words by direct rewriting.
//!
//! This path never touches the closed contraction formula in `product.rs`;
//! it applies `e_i ⊗ e_j → e_j ⊗ e_i + lam ω_{ij}` to the first ascent
//! until every word is nonincreasing, then reads the word as a symmetric
//! monomial.

use super::{FiberMonomial, FormMonomial, Symplectic, WeylElement};
use crate::ring::Polynomial;

/// `lam^k · c(x) · e_{i1} ⊗ .. ⊗ e_{ip}` with zero-based letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorWord {
    pub letters: Vec<usize>,
    pub coeff: Polynomial,
    pub lambda: u32,
}

impl TensorWord {
    pub fn new(letters: Vec<usize>, coeff: Polynomial) -> Self {
        TensorWord {
            letters,
            coeff,
            lambda: 0,
        }
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] >= w[1])
    }
}

pub fn pbw_reduce(word: &TensorWord, omega: &Symplectic, trunc: u32) -> WeylElement {
    let dim = omega.dim();
    let mut out = WeylElement::zero(dim, word.coeff.nvars(), trunc);
    let mut stack = vec![word.clone()];
    while let Some(w) = stack.pop() {
        if w.coeff.is_zero() {
            continue;
        }
        let ascent = w.letters.windows(2).position(|p| p[0] < p[1]);
        match ascent {
            None => {
                let mut fiber = FiberMonomial::one(dim);
                for &l in &w.letters {
                    fiber.0[l] += 1;
                }
                out.push(w.lambda, w.coeff, fiber, FormMonomial::one());
            }
            Some(p) => {
                let (i, j) = (w.letters[p], w.letters[p + 1]);
                let mut swapped = w.letters.clone();
                swapped.swap(p, p + 1);
                let bracket = omega.omega(i, j);
                if !bracket.is_zero() {
                    let mut contracted = w.letters.clone();
                    contracted.drain(p..p + 2);
                    stack.push(TensorWord {
                        letters: contracted,
                        coeff: &w.coeff * bracket,
                        lambda: w.lambda + 1,
                    });
                }
                stack.push(TensorWord {
                    letters: swapped,
                    coeff: w.coeff,
                    lambda: w.lambda,
                });
            }
        }
    }
    out
}
