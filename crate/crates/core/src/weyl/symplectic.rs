use crate::ring::Polynomial;

/// The matrices `ω_{ij}(x)` and `ω^{ij}(x)` in the coordinate frame.
///
/// Indices `0..ν` span the polarization `L`, `ν..2ν` its complement `L'`.
/// Nothing is checked here; see `GeometryData::check`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symplectic {
    nu: usize,
    omega: Vec<Polynomial>,
    omega_inv: Vec<Polynomial>,
}

impl Symplectic {
    /// Row-major `2ν × 2ν` matrices.
    pub fn new(nu: usize, omega: Vec<Polynomial>, omega_inv: Vec<Polynomial>) -> Self {
        let dim = 2 * nu;
        assert_eq!(omega.len(), dim * dim, "omega must be 2nu x 2nu");
        assert_eq!(omega_inv.len(), dim * dim, "omega_inv must be 2nu x 2nu");
        Symplectic {
            nu,
            omega,
            omega_inv,
        }
    }

    /// Constant Darboux form `ω_{α,α+ν} = 1` with its inverse.
    pub fn darboux(nu: usize, nvars: usize) -> Self {
        let dim = 2 * nu;
        let mut omega = vec![Polynomial::zero(nvars); dim * dim];
        let mut inv = omega.clone();
        for a in 0..nu {
            let b = a + nu;
            omega[a * dim + b] = Polynomial::one(nvars);
            omega[b * dim + a] = -Polynomial::one(nvars);
            inv[a * dim + b] = -Polynomial::one(nvars);
            inv[b * dim + a] = Polynomial::one(nvars);
        }
        Symplectic::new(nu, omega, inv)
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn dim(&self) -> usize {
        2 * self.nu
    }

    pub fn nvars(&self) -> usize {
        self.omega[0].nvars()
    }

    pub fn omega(&self, i: usize, j: usize) -> &Polynomial {
        &self.omega[i * self.dim() + j]
    }

    pub fn omega_inv(&self, i: usize, j: usize) -> &Polynomial {
        &self.omega_inv[i * self.dim() + j]
    }

    pub fn is_alpha(&self, i: usize) -> bool {
        i < self.nu
    }

    pub fn extend_vars(&self, nvars: usize) -> Symplectic {
        Symplectic {
            nu: self.nu,
            omega: self.omega.iter().map(|p| p.extend_vars(nvars)).collect(),
            omega_inv: self.omega_inv.iter().map(|p| p.extend_vars(nvars)).collect(),
        }
    }
}
