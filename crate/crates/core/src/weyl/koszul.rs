//! Koszul differential, contracting homotopy and the `(0,0)` projection.

use super::{FiberMonomial, FormMonomial, Symplectic, WeylElement, WeylKey};
use crate::ring::{int, LambdaSeries, Polynomial, Rational};

/// `δ a = Σ_i u(e_i) ∧ ∂a/∂y^i` with `u(e_i) = Σ_j ω_{ij} dx^j`.
pub fn koszul_delta(a: &WeylElement, omega: &Symplectic) -> WeylElement {
    let dim = a.dim();
    let mut out = a.like();
    for (key, c) in a.raw_terms() {
        for i in 0..dim {
            let e = key.fiber.0[i];
            if e == 0 {
                continue;
            }
            let mut fiber = key.fiber.clone();
            fiber.0[i] -= 1;
            let base = c.scale(&int(e as i64));
            for j in 0..dim {
                let w = omega.omega(i, j);
                if w.is_zero() {
                    continue;
                }
                let Some((sign, form)) = FormMonomial::dx(j).wedge(&key.form) else {
                    continue;
                };
                let coeff = &base * w;
                out.push_key(
                    WeylKey {
                        lambda: key.lambda,
                        fiber: fiber.clone(),
                        form,
                    },
                    if sign < 0 { -coeff } else { coeff },
                );
            }
        }
    }
    out
}

/// `δ⁻¹` on a term of bidegree `(m, n)`:
/// `(1/(m+n)) Σ_p (−1)^p u⁻¹(dx^{j_p}) ⊙ y^I ⊗ dx^{J \ j_p}`,
/// with `u⁻¹(dx^j) = Σ_i ω^{ji} e_i`.
pub fn koszul_delta_inv(a: &WeylElement, omega: &Symplectic) -> WeylElement {
    homotopy(a, |j, i| {
        let w = omega.omega_inv(j, i);
        (!w.is_zero()).then(|| w.clone())
    })
}

/// Same shape as `koszul_delta_inv` but pairing `dx^j ↦ y^j`, ignoring `ω`.
/// It does not preserve the ideal `I`; kept as a negative control.
pub fn untwisted_delta_inv(a: &WeylElement) -> WeylElement {
    let nvars = a.nvars();
    homotopy(a, |j, i| (i == j).then(|| Polynomial::one(nvars)))
}

fn homotopy(a: &WeylElement, pairing: impl Fn(usize, usize) -> Option<Polynomial>) -> WeylElement {
    let dim = a.dim();
    let mut out = a.like();
    for (key, c) in a.raw_terms() {
        let n = key.form.degree();
        if n == 0 {
            continue;
        }
        let m = key.fiber.degree();
        let norm = Rational::new(1.into(), ((m + n) as i64).into());
        for (p, j) in key.form.indices().enumerate() {
            let form = FormMonomial(key.form.0 & !(1 << j));
            let signed = if p % 2 == 0 { norm.clone() } else { -norm.clone() };
            for i in 0..dim {
                let Some(w) = pairing(j, i) else { continue };
                let mut fiber: FiberMonomial = key.fiber.clone();
                fiber.0[i] += 1;
                out.push_key(
                    WeylKey {
                        lambda: key.lambda,
                        fiber,
                        form,
                    },
                    (c * &w).scale(&signed),
                );
            }
        }
    }
    out
}

/// Component of fiber degree 0 and form degree 0, keyed by `lam` power.
pub fn tau(a: &WeylElement) -> LambdaSeries {
    let mut s = LambdaSeries::zero(a.nvars());
    for (key, c) in a.raw_terms() {
        if key.fiber.degree() == 0 && key.form.degree() == 0 {
            s.add_at(key.lambda, c);
        }
    }
    s
}
