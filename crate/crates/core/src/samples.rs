//! Reference geometries used by tests, the CLI and documentation.

use crate::geometry::GeometryData;
use crate::ring::{Polynomial, VarSpace};
use crate::weyl::Symplectic;
use std::collections::BTreeMap;

fn poly(nu: usize, s: &str) -> Polynomial {
    crate::ring::parse_polynomial(s, &VarSpace::new(nu)).expect("sample polynomial")
}

/// Builds a geometry from `(k, i, j) -> Γ^k_{ij}` entries (1-based) over Darboux `ω`.
fn with_gamma(nu: usize, entries: &[((usize, usize, usize), &str)]) -> GeometryData {
    let dim = 2 * nu;
    let nvars = dim;
    let mut gamma = vec![Polynomial::zero(nvars); dim * dim * dim];
    for &((k, i, j), s) in entries {
        gamma[((k - 1) * dim + (i - 1)) * dim + (j - 1)] = poly(nu, s);
    }
    GeometryData::new(Symplectic::darboux(nu, nvars), gamma)
        .expect("well-formed sample")
        .validated()
        .expect("valid sample")
}

/// Darboux form with the zero connection.
pub fn flat(nu: usize) -> GeometryData {
    GeometryData::flat(Symplectic::darboux(nu, 2 * nu))
        .validated()
        .expect("flat model is valid")
}

/// `ν = 1`, `Γ¹₁₁ = x2`, `Γ²₁₂ = Γ²₂₁ = −x2`: torsion-free, curved.
pub fn curved() -> GeometryData {
    with_gamma(1, &[((1, 1, 1), "x2"), ((2, 1, 2), "-x2"), ((2, 2, 1), "-x2")])
}

/// `ν = 1`, `Γ¹₁₂ = 1`: flat but with torsion.
pub fn torsionful() -> GeometryData {
    with_gamma(1, &[((1, 1, 2), "1")])
}

/// The curved sample with the torsion of [`torsionful`] added.
pub fn curved_torsion() -> GeometryData {
    with_gamma(
        1,
        &[((1, 1, 1), "x2"), ((2, 1, 2), "-x2"), ((2, 2, 1), "-x2"), ((1, 1, 2), "1")],
    )
}

/// `ν = 1`, `Γ¹₂₂ = 1`: valid, but the transversal `L'` is not self-parallel.
pub fn skew_transversal() -> GeometryData {
    with_gamma(1, &[((1, 2, 2), "1")])
}

/// Torsion-free symplectic connection `Γ^l_{ki} = Σ_j S_{kij} ω^{jl}` over
/// Darboux `ω`, from a totally symmetric `S` given by its entries with
/// sorted zero-based indices. `L` (resp. `L'`) is self-parallel exactly when
/// `S` has no all-`L` (resp. all-`L'`) entries.
pub fn symmetric_connection(nu: usize, s: &BTreeMap<[usize; 3], Polynomial>) -> GeometryData {
    let dim = 2 * nu;
    let nvars = dim;
    let sym = Symplectic::darboux(nu, nvars);
    let get = |a: usize, b: usize, c: usize| {
        let mut key = [a, b, c];
        key.sort_unstable();
        s.get(&key).cloned().unwrap_or_else(|| Polynomial::zero(nvars))
    };
    let mut gamma = vec![Polynomial::zero(nvars); dim * dim * dim];
    for l in 0..dim {
        for k in 0..dim {
            for i in 0..dim {
                let mut g = Polynomial::zero(nvars);
                for j in 0..dim {
                    let w = sym.omega_inv(j, l);
                    if !w.is_zero() {
                        g = g + get(k, i, j) * w.clone();
                    }
                }
                gamma[(l * dim + k) * dim + i] = g;
            }
        }
    }
    GeometryData::new(sym, gamma).expect("well-formed")
}

/// A curved `ν = 2` sample built by [`symmetric_connection`].
pub fn nu2() -> GeometryData {
    let mut s = BTreeMap::new();
    s.insert([0, 0, 2], poly(2, "x3"));
    s.insert([0, 1, 3], poly(2, "x1"));
    s.insert([1, 2, 3], poly(2, "1/2*x4"));
    s.insert([0, 2, 2], poly(2, "x2"));
    symmetric_connection(2, &s).validated().expect("valid sample")
}

/// A curved `ν = 2` sample whose connection preserves both `L` and `L'`
/// (so it carries torsion): `Γ^a_{kb} = A_k[a][b]` on `L` and
/// `Γ^{a+2}_{k,b+2} = −A_k[b][a]` on `L'`.
pub fn nu2_parallel() -> GeometryData {
    let a: [[[&str; 2]; 2]; 4] = [
        [["x3", "0"], ["1", "0"]],
        [["0", "0"], ["0", "x4"]],
        [["0", "x2"], ["0", "0"]],
        [["x1", "0"], ["0", "0"]],
    ];
    let mut entries = Vec::new();
    for (k, m) in a.iter().enumerate() {
        for r in 0..2 {
            for c in 0..2 {
                if m[r][c] != "0" {
                    entries.push(((r + 1, k + 1, c + 1), m[r][c].to_string()));
                    entries.push(((c + 3, k + 1, r + 3), format!("-({})", m[r][c])));
                }
            }
        }
    }
    let refs: Vec<_> = entries.iter().map(|(i, s)| (*i, s.as_str())).collect();
    with_gamma(2, &refs)
}

/// `ν = 2` symplectic form with a non-constant `L`–`L'` block,
/// `ω = dx1∧dx3 + x1 dx1∧dx4 + dx2∧dx4`, and its inverse.
pub fn varying_symplectic() -> Symplectic {
    let nvars = 4;
    let mut omega = vec![Polynomial::zero(nvars); 16];
    let mut inv = omega.clone();
    let x1 = Polynomial::var(nvars, 0);
    let one = Polynomial::one(nvars);
    let set = |m: &mut Vec<Polynomial>, i: usize, j: usize, p: &Polynomial| {
        m[i * 4 + j] = p.clone();
        m[j * 4 + i] = -p.clone();
    };
    set(&mut omega, 0, 2, &one);
    set(&mut omega, 0, 3, &x1);
    set(&mut omega, 1, 3, &one);
    set(&mut inv, 0, 2, &-one.clone());
    set(&mut inv, 1, 2, &x1);
    set(&mut inv, 1, 3, &-one.clone());
    Symplectic::new(2, omega, inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_validate() {
        for g in [flat(1), flat(2), curved(), torsionful(), curved_torsion(), skew_transversal(), nu2(), nu2_parallel()] {
            assert!(g.check().all_pass(), "{}", g.check());
        }
        assert!(curved().is_torsion_free());
        assert!(!torsionful().is_torsion_free());
        assert!(!skew_transversal().complement_self_parallel());
        assert!(nu2().complement_self_parallel());
        assert!(!nu2().preserves_polarizations());
        assert!(nu2_parallel().preserves_polarizations());
        assert!(!nu2_parallel().is_torsion_free());
    }

    #[test]
    fn varying_form_is_valid() {
        let g = GeometryData::flat(varying_symplectic());
        let report = g.check();
        for name in ["omega_antisymmetric", "omega_inverse", "omega_closed", "lagrangian_L", "lagrangian_L_prime"] {
            assert_eq!(report.get(name).unwrap().status, crate::report::Status::Pass, "{report}");
        }
    }
}
