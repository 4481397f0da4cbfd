//! Bidifferential coefficients `Λ^{I|J}_k` of the star product.
//!
//! With center variables `a` adjoined, `(x−a)^I ∗ (x−a)^J` evaluated at
//! `x = a` isolates `I!·J!·Λ^{I|J}_k(a)` in its `lam^k` coefficient.

use super::FedosovContext;
use crate::error::FedosovError;
use crate::ring::{int, LambdaSeries, Polynomial, Rational, VarSpace};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector over the `2ν` coordinates.
pub type MultiIndex = Vec<u16>;

/// All exponent vectors over `dim` slots with total degree `<= max`,
/// ordered by degree, then lexicographically.
pub fn multi_indices(dim: usize, max: u32) -> Vec<MultiIndex> {
    let mut out = vec![vec![0u16; dim]];
    let mut frontier = out.clone();
    for _ in 0..max {
        let mut next = Vec::new();
        for m in &frontier {
            // Only raise slots at or after the last nonzero one, so each vector appears once.
            let start = m.iter().rposition(|&e| e > 0).unwrap_or(0);
            for i in start..dim {
                let mut n = m.clone();
                n[i] += 1;
                next.push(n);
            }
        }
        next.sort_by(|a, b| b.cmp(a));
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn factorial(idx: &[u16]) -> Rational {
    let mut f = int(1);
    for &e in idx {
        for k in 2..=e as i64 {
            f *= int(k);
        }
    }
    f
}

/// `∂^I p`.
pub fn derivative(p: &Polynomial, idx: &[u16]) -> Polynomial {
    let mut q = p.clone();
    for (i, &e) in idx.iter().enumerate() {
        for _ in 0..e {
            q = q.diff(i).expect("index in range");
        }
    }
    q
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BidiffTable {
    nu: usize,
    max_deriv: u32,
    max_lambda: u32,
    entries: BTreeMap<(u32, MultiIndex, MultiIndex), Polynomial>,
}

impl BidiffTable {
    pub fn new(nu: usize, max_deriv: u32, max_lambda: u32) -> Self {
        BidiffTable {
            nu,
            max_deriv,
            max_lambda,
            entries: BTreeMap::new(),
        }
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn max_deriv(&self) -> u32 {
        self.max_deriv
    }

    pub fn max_lambda(&self) -> u32 {
        self.max_lambda
    }

    pub fn get(&self, k: u32, i: &[u16], j: &[u16]) -> Polynomial {
        self.entries
            .get(&(k, i.to_vec(), j.to_vec()))
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(2 * self.nu))
    }

    /// Overwrites one entry; zero removes it.
    pub fn insert(&mut self, k: u32, i: MultiIndex, j: MultiIndex, value: Polynomial) {
        if value.is_zero() {
            self.entries.remove(&(k, i, j));
        } else {
            self.entries.insert((k, i, j), value);
        }
    }

    /// Nonzero entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, &MultiIndex, &MultiIndex, &Polynomial)> {
        self.entries.iter().map(|((k, i, j), p)| (*k, i, j, p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ lam^k Λ^{I|J}_k ∂_I f ∂_J g`.
    pub fn apply(&self, f: &Polynomial, g: &Polynomial) -> LambdaSeries {
        let mut out = LambdaSeries::zero(f.nvars());
        for (k, i, j, c) in self.entries() {
            out.add_at(k, &(c * &derivative(f, i) * derivative(g, j)));
        }
        out
    }

    /// Exponent vector as a list of 1-based letters, e.g. `[2, 1]` as `1,1,2`; empty as `-`.
    pub fn render_index(idx: &[u16]) -> String {
        let letters: Vec<String> = idx
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat((i + 1).to_string()).take(e as usize))
            .collect();
        if letters.is_empty() {
            "-".into()
        } else {
            letters.join(",")
        }
    }
}

impl fmt::Display for BidiffTable {
    /// One line `k | I | J | Λ` per nonzero entry.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let space = VarSpace::new(self.nu);
        for (k, i, j, p) in self.entries() {
            writeln!(
                f,
                "{} | {} | {} | {}",
                k,
                Self::render_index(i),
                Self::render_index(j),
                p.render(&space)
            )?;
        }
        Ok(())
    }
}

/// Extracts all `Λ^{I|J}_k` with `|I|, |J| <= max_deriv` and `k <= max_lambda`.
pub fn bidiff_table(
    ctx: &FedosovContext,
    max_deriv: u32,
    max_lambda: u32,
) -> Result<BidiffTable, FedosovError> {
    let guaranteed = ctx.guaranteed_order();
    if max_lambda > guaranteed {
        return Err(FedosovError::OrderTooHigh {
            requested: max_lambda,
            guaranteed,
            required_n: 2 * max_lambda,
        });
    }
    let nu = ctx.nu();
    let dim = 2 * nu;
    let wide = ctx.with_centers();
    let nvars = wide.nvars();
    let shifted: Vec<Polynomial> = (0..dim)
        .map(|i| &Polynomial::var(nvars, i) - &Polynomial::var(nvars, dim + i))
        .collect();
    let indices = multi_indices(dim, max_deriv);
    let mut lifts = Vec::with_capacity(indices.len());
    for idx in &indices {
        let mut p = Polynomial::one(nvars);
        for (i, &e) in idx.iter().enumerate() {
            p = p * shifted[i].pow(e as u32);
        }
        lifts.push(wide.lift(&LambdaSeries::from_poly(p))?);
    }
    // Evaluating at x = a and renaming a to x is the substitution a -> x.
    let collapse: BTreeMap<usize, Polynomial> =
        (0..dim).map(|i| (dim + i, Polynomial::var(nvars, i))).collect();
    let mut table = BidiffTable::new(nu, max_deriv, max_lambda);
    for (ii, i) in indices.iter().enumerate() {
        for (jj, j) in indices.iter().enumerate() {
            let s = wide.star_lifted_unchecked(&lifts[ii], &lifts[jj])?;
            let norm = int(1) / (factorial(i) * factorial(j));
            for k in 0..=max_lambda {
                let c = s.value.coeff(k);
                if c.is_zero() {
                    continue;
                }
                let v = c
                    .subst(&collapse)?
                    .restrict_vars(dim)
                    .expect("centers eliminated")
                    .scale(&norm);
                table.insert(k, i.clone(), j.clone(), v);
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_enumeration() {
        let all = multi_indices(2, 2);
        assert_eq!(
            all,
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert_eq!(multi_indices(4, 3).len(), 35);
    }

    #[test]
    fn index_rendering() {
        assert_eq!(BidiffTable::render_index(&[2, 1]), "1,1,2");
        assert_eq!(BidiffTable::render_index(&[0, 0]), "-");
    }
}
