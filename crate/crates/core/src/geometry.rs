//! Chart geometry: symplectic form, polarization split and connection.
//!
//! The frame is the coordinate frame `e_i = ∂/∂x^i`; indices `0..ν` span the
//! polarization `L` and `ν..2ν` the transversal `L'`. Both distributions are
//! integrable automatically because coordinate fields commute. `Γ^k_{ij}` is
//! read as `∇_{e_i} e_j = Γ^k_{ij} e_k`.

use crate::error::{GeometryError, WeylError};
use crate::report::CheckReport;
use crate::ring::{Polynomial, Rational, VarSpace};
use crate::weyl::{koszul_delta, koszul_delta_inv, FiberMonomial, FormMonomial, Symplectic, WeylElement, WeylKey};
use std::collections::BTreeMap;

/// A leaf `x^β = c^β` (β = ν+1..2ν) of the polarization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafSpec {
    nu: usize,
    constants: Vec<Rational>,
}

impl LeafSpec {
    pub fn new(nu: usize, constants: Vec<Rational>) -> Self {
        assert_eq!(constants.len(), nu, "one constant per transversal coordinate");
        LeafSpec { nu, constants }
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn constants(&self) -> &[Rational] {
        &self.constants
    }

    fn bindings(&self) -> BTreeMap<usize, Rational> {
        self.constants
            .iter()
            .enumerate()
            .map(|(b, c)| (self.nu + b, c.clone()))
            .collect()
    }

    /// `p|_{x^β = c^β}`.
    pub fn restrict(&self, p: &Polynomial) -> Polynomial {
        p.eval_partial(&self.bindings())
    }

    /// Membership of `p` in the vanishing ideal `Φ` of the leaf.
    pub fn vanishes(&self, p: &Polynomial) -> bool {
        self.restrict(p).is_zero()
    }

    /// `x^β − c^β`, the generators of `Φ`.
    pub fn generators(&self, nvars: usize) -> Vec<Polynomial> {
        self.constants
            .iter()
            .enumerate()
            .map(|(b, c)| &Polynomial::var(nvars, self.nu + b) - &Polynomial::constant(nvars, c.clone()))
            .collect()
    }

    pub fn render(&self) -> String {
        self.constants
            .iter()
            .enumerate()
            .map(|(b, c)| format!("x{}={}", self.nu + b + 1, crate::ring::render_rational(c)))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// `R^i_{jkl}`, the components of `R(e_k, e_l) e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureTensor {
    dim: usize,
    data: Vec<Polynomial>,
}

impl CurvatureTensor {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Polynomial {
        let d = self.dim;
        &self.data[((i * d + j) * d + k) * d + l]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Polynomial::is_zero)
    }
}

/// `T^i_{jk}`, the components of `T(e_j, e_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionTensor {
    dim: usize,
    data: Vec<Polynomial>,
}

impl TorsionTensor {
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Polynomial {
        let d = self.dim;
        &self.data[(i * d + j) * d + k]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Polynomial::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometryData {
    sym: Symplectic,
    gamma: Vec<Polynomial>,
    validated: bool,
    torsion_free: bool,
}

impl GeometryData {
    /// `gamma[(k*dim + i)*dim + j] = Γ^k_{ij}`.
    pub fn new(sym: Symplectic, gamma: Vec<Polynomial>) -> Result<Self, GeometryError> {
        let dim = sym.dim();
        if gamma.len() != dim * dim * dim {
            return Err(GeometryError::Malformed(format!(
                "expected {} Christoffel symbols, got {}",
                dim * dim * dim,
                gamma.len()
            )));
        }
        if gamma.iter().any(|g| g.nvars() != sym.nvars()) {
            return Err(GeometryError::Malformed(
                "Christoffel symbols and omega use different variable sets".into(),
            ));
        }
        if sym.nvars() < dim {
            return Err(GeometryError::Malformed(format!(
                "coefficients need at least {dim} variables"
            )));
        }
        let mut g = GeometryData {
            sym,
            gamma,
            validated: false,
            torsion_free: false,
        };
        g.torsion_free = g.torsion_data().iter().all(Polynomial::is_zero);
        Ok(g)
    }

    /// Zero connection.
    pub fn flat(sym: Symplectic) -> Self {
        let dim = sym.dim();
        let nvars = sym.nvars();
        Self::new(sym, vec![Polynomial::zero(nvars); dim * dim * dim]).expect("well-formed")
    }

    pub fn nu(&self) -> usize {
        self.sym.nu()
    }

    pub fn dim(&self) -> usize {
        self.sym.dim()
    }

    pub fn nvars(&self) -> usize {
        self.sym.nvars()
    }

    pub fn symplectic(&self) -> &Symplectic {
        &self.sym
    }

    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &Polynomial {
        let d = self.dim();
        &self.gamma[(k * d + i) * d + j]
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion_free
    }

    /// Re-embeds all data into `nvars` variables (e.g. to adjoin centers).
    pub fn extend_vars(&self, nvars: usize) -> GeometryData {
        GeometryData {
            sym: self.sym.extend_vars(nvars),
            gamma: self.gamma.iter().map(|p| p.extend_vars(nvars)).collect(),
            validated: self.validated,
            torsion_free: self.torsion_free,
        }
    }

    fn space(&self) -> VarSpace {
        VarSpace::for_nvars(self.nu(), self.nvars())
    }

    fn d(&self, p: &Polynomial, i: usize) -> Polynomial {
        p.diff(i).expect("coordinate index in range")
    }

    /// Runs every structural condition; never fails on bad geometry.
    pub fn check(&self) -> CheckReport {
        let dim = self.dim();
        let nu = self.nu();
        let space = self.space();
        let w = |i: usize, j: usize| self.sym.omega(i, j);
        let mut report = CheckReport::new();

        let mut witness = None;
        'anti: for i in 0..dim {
            for j in i..dim {
                let s = w(i, j) + w(j, i);
                if !s.is_zero() {
                    witness = Some(format!("omega{}{} + omega{}{} = {}", i + 1, j + 1, j + 1, i + 1, s.render(&space)));
                    break 'anti;
                }
            }
        }
        report.record("omega_antisymmetric", witness);

        let mut witness = None;
        'inv: for i in 0..dim {
            for j in 0..dim {
                let mut s = Polynomial::zero(self.nvars());
                for k in 0..dim {
                    s = s + w(i, k) * self.sym.omega_inv(k, j);
                }
                let target = if i == j { Polynomial::one(self.nvars()) } else { Polynomial::zero(self.nvars()) };
                if s != target {
                    witness = Some(format!("(omega*omega_inv){}{} = {}", i + 1, j + 1, s.render(&space)));
                    break 'inv;
                }
            }
        }
        report.record("omega_inverse", witness);

        let mut witness = None;
        'closed: for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let s = self.d(w(j, k), i) + self.d(w(k, i), j) + self.d(w(i, j), k);
                    if !s.is_zero() {
                        witness = Some(format!("(d omega){}{}{} = {}", i + 1, j + 1, k + 1, s.render(&space)));
                        break 'closed;
                    }
                }
            }
        }
        report.record("omega_closed", witness);

        let block = |range: std::ops::Range<usize>| {
            for i in range.clone() {
                for j in range.clone() {
                    if !w(i, j).is_zero() {
                        return Some(format!("omega{}{} = {}", i + 1, j + 1, w(i, j).render(&space)));
                    }
                }
            }
            None
        };
        report.record("lagrangian_L", block(0..nu));
        report.record("lagrangian_L_prime", block(nu..dim));
        report.pass("involutive_L", "coordinate frame");
        report.pass("involutive_L_prime", "coordinate frame");

        let mut witness = None;
        'par: for k in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    let mut s = self.d(w(i, j), k);
                    for l in 0..dim {
                        s = s - self.gamma(l, k, i) * w(l, j) - self.gamma(l, k, j) * w(i, l);
                    }
                    if !s.is_zero() {
                        witness = Some(format!(
                            "(nabla_{} omega){}{} = {}",
                            k + 1,
                            i + 1,
                            j + 1,
                            s.render(&space)
                        ));
                        break 'par;
                    }
                }
            }
        }
        report.record("nabla_omega", witness);

        report.record("self_parallel_L", self.self_parallel_witness(0..nu, nu..dim));

        match self.torsion_witness() {
            None => report.note("torsion_free", "yes"),
            Some(w) => report.note("torsion_free", format!("no ({w})")),
        }
        match self.self_parallel_witness(nu..dim, 0..nu) {
            None => report.note("self_parallel_L_prime", "yes"),
            Some(w) => report.note("self_parallel_L_prime", format!("no ({w})")),
        }
        match self.parallel_witness() {
            None => report.note("preserves_L_and_L_prime", "yes"),
            Some(w) => report.note("preserves_L_and_L_prime", format!("no ({w})")),
        }
        report
    }

    /// First `Γ^k_{ij}` moving `e_j` from one of `L`, `L'` into the other.
    fn parallel_witness(&self) -> Option<String> {
        let (nu, dim) = (self.nu(), self.dim());
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let g = self.gamma(k, i, j);
                    if (j < nu) != (k < nu) && !g.is_zero() {
                        return Some(format!("gamma{}{}{} = {}", k + 1, i + 1, j + 1, g.render(&self.space())));
                    }
                }
            }
        }
        None
    }

    /// First `Γ^out_{ij}` with `i, j` in `inside` and `out` outside it.
    fn self_parallel_witness(
        &self,
        inside: std::ops::Range<usize>,
        outside: std::ops::Range<usize>,
    ) -> Option<String> {
        for i in inside.clone() {
            for j in inside.clone() {
                for k in outside.clone() {
                    let g = self.gamma(k, i, j);
                    if !g.is_zero() {
                        return Some(format!("gamma{}{}{} = {}", k + 1, i + 1, j + 1, g.render(&self.space())));
                    }
                }
            }
        }
        None
    }

    fn torsion_witness(&self) -> Option<String> {
        let dim = self.dim();
        let t = self.torsion_data();
        for i in 0..dim {
            for j in 0..dim {
                for k in j + 1..dim {
                    let v = &t[(i * dim + j) * dim + k];
                    if !v.is_zero() {
                        return Some(format!("T{}{}{} = {}", i + 1, j + 1, k + 1, v.render(&self.space())));
                    }
                }
            }
        }
        None
    }

    /// Whether `L'` is also self-parallel.
    pub fn complement_self_parallel(&self) -> bool {
        self.self_parallel_witness(self.nu()..self.dim(), 0..self.nu()).is_none()
    }

    /// Whether `∇_z` maps `L` into `L` and `L'` into `L'` for every `z`,
    /// the hypothesis under which separation of variables is asserted.
    pub fn preserves_polarizations(&self) -> bool {
        self.parallel_witness().is_none()
    }

    /// Consumes the geometry and marks it validated if every check passes.
    pub fn validated(mut self) -> Result<Self, GeometryError> {
        let report = self.check();
        if report.all_pass() {
            self.validated = true;
            Ok(self)
        } else {
            Err(GeometryError::Invalid(report.to_string()))
        }
    }

    fn require_valid(&self) -> Result<(), GeometryError> {
        if self.validated {
            Ok(())
        } else {
            Err(GeometryError::Unvalidated)
        }
    }

    fn torsion_data(&self) -> Vec<Polynomial> {
        let dim = self.dim();
        let mut data = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    data.push(self.gamma(i, j, k) - self.gamma(i, k, j));
                }
            }
        }
        data
    }

    /// `R^i_{jkl} = ∂_kΓ^i_{lj} − ∂_lΓ^i_{kj} + Γ^i_{km}Γ^m_{lj} − Γ^i_{lm}Γ^m_{kj}`.
    pub fn curvature(&self) -> Result<CurvatureTensor, GeometryError> {
        self.require_valid()?;
        let dim = self.dim();
        let mut data = Vec::with_capacity(dim.pow(4));
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        let mut r = self.d(self.gamma(i, l, j), k) - self.d(self.gamma(i, k, j), l);
                        for m in 0..dim {
                            r = r + self.gamma(i, k, m) * self.gamma(m, l, j)
                                - self.gamma(i, l, m) * self.gamma(m, k, j);
                        }
                        data.push(r);
                    }
                }
            }
        }
        Ok(CurvatureTensor { dim, data })
    }

    /// `T^i_{jk} = Γ^i_{jk} − Γ^i_{kj}`.
    pub fn torsion(&self) -> Result<TorsionTensor, GeometryError> {
        self.require_valid()?;
        Ok(TorsionTensor {
            dim: self.dim(),
            data: self.torsion_data(),
        })
    }

    /// `u(v) = ω(v, ·)` on fiber-linear, form-free elements.
    pub fn u_map(&self, v: &WeylElement) -> Result<WeylElement, GeometryError> {
        if v.terms().any(|t| t.fiber.degree() != 1 || t.form.degree() != 0 || t.lambda != 0) {
            return Err(WeylError::NotHomogeneous {
                what: "fiber degree 1 and form degree 0",
            }
            .into());
        }
        Ok(koszul_delta(v, &self.sym))
    }

    /// Inverse of `u_map` on one-forms.
    pub fn u_inv(&self, form: &WeylElement) -> Result<WeylElement, GeometryError> {
        if form.terms().any(|t| t.fiber.degree() != 0 || t.form.degree() != 1 || t.lambda != 0) {
            return Err(WeylError::NotHomogeneous {
                what: "fiber degree 0 and form degree 1",
            }
            .into());
        }
        Ok(koszul_delta_inv(form, &self.sym))
    }

    /// `∇a = Σ_i dx^i ∧ ∇_{e_i} a`, where `∇_{e_i}` differentiates the
    /// coefficient and replaces one letter `e_j` of the normal word by
    /// `Γ^k_{ij} e_k`, re-normal-ordering the result (see `reordering`).
    /// Forms are differentiated as by `d` in the commuting frame.
    pub fn nabla(&self, a: &WeylElement) -> Result<WeylElement, GeometryError> {
        self.require_valid()?;
        Ok(self.nabla_unchecked(a))
    }

    pub(crate) fn nabla_unchecked(&self, a: &WeylElement) -> WeylElement {
        let dim = self.dim();
        let mut out = a.like();
        for t in a.terms() {
            for i in 0..dim {
                let Some((sign, form)) = FormMonomial::dx(i).wedge(&t.form) else {
                    continue;
                };
                let mut push = |fiber: FiberMonomial, c: Polynomial| {
                    out.push_key(
                        WeylKey {
                            lambda: t.lambda,
                            fiber,
                            form,
                        },
                        if sign < 0 { -c } else { c },
                    );
                };
                push(t.fiber.clone(), self.d(&t.coeff, i));
                for j in 0..dim {
                    let e = t.fiber.0[j];
                    if e == 0 {
                        continue;
                    }
                    for k in 0..dim {
                        let g = self.gamma(k, i, j);
                        if g.is_zero() {
                            continue;
                        }
                        let mut fiber = t.fiber.clone();
                        fiber.0[j] -= 1;
                        fiber.0[k] += 1;
                        push(fiber, (&t.coeff * g).scale(&crate::ring::int(e as i64)));
                    }
                }
                for (fiber, c) in self.reordering(i, &t.fiber) {
                    out.push_key(
                        WeylKey {
                            lambda: t.lambda + 1,
                            fiber,
                            form,
                        },
                        if sign < 0 { -(&t.coeff * &c) } else { &t.coeff * &c },
                    );
                }
            }
        }
        out
    }

    /// `lam`-terms from restoring normal order after `∇_{e_i}` swaps a
    /// letter across the polarization. A `β`-letter turned into `e_k`
    /// (`k ∈ L`) must pass the `β`-letters to its right, and an `α`-letter
    /// turned into `e_k` (`k ∈ L'`) the `α`-letters to its left; each
    /// exchange costs `lam·ω`. Since `∇ω = 0` makes the pair weight symmetric,
    /// the sum over positions is `½ Σ_{j≠j'}` over the block's letters.
    fn reordering(&self, i: usize, fiber: &FiberMonomial) -> Vec<(FiberMonomial, Polynomial)> {
        let nu = self.nu();
        let dim = self.dim();
        let half = crate::ring::rat(1, 2);
        let mut out = Vec::new();
        for block in [0..nu, nu..dim] {
            let alpha = block.start == 0;
            for j in block.clone() {
                let nj = fiber.0[j];
                if nj == 0 {
                    continue;
                }
                for jp in block.clone() {
                    let njp = fiber.0[jp] - u16::from(j == jp);
                    if njp == 0 || (j == jp && nj < 2) {
                        continue;
                    }
                    let mut c = Polynomial::zero(self.nvars());
                    for k in 0..dim {
                        let g = self.gamma(k, i, j);
                        if g.is_zero() {
                            continue;
                        }
                        let w = if alpha { self.sym.omega(jp, k) } else { self.sym.omega(k, jp) };
                        if !w.is_zero() {
                            c = c + g * w;
                        }
                    }
                    if c.is_zero() {
                        continue;
                    }
                    let mut f = fiber.clone();
                    f.0[j] -= 1;
                    f.0[jp] -= 1;
                    let weight = &half * crate::ring::int(nj as i64 * njp as i64);
                    out.push((f, c.scale(&weight)));
                }
            }
        }
        out
    }

    /// The element `R = Σ_{k<l} δ⁻¹(𝓡(e_k, e_l)) dx^k∧dx^l` with
    /// `𝓡(e_k,e_l) = R^i_{jkl} e_i ⊗ dx^j`, i.e.
    /// `Σ_{k<l} ½ R^i_{jkl} ω^{jp} y^i y^p dx^k∧dx^l`.
    /// Its commutator reproduces `∇²`: `∇²a = (1/lam)⟦R, a⟧`.
    ///
    /// The quadratic symbol is read symmetrically, so each mixed term
    /// `c y^α y^β` also carries the central `½ lam ω_{αβ} c`. Commutators
    /// do not see it, but without it `∇R ≠ 0` once `ν > 1`.
    pub fn curvature_element(&self, trunc: u32) -> Result<WeylElement, GeometryError> {
        let r = self.curvature()?;
        let dim = self.dim();
        let nvars = self.nvars();
        let mut out = WeylElement::zero(dim, nvars, trunc);
        for k in 0..dim {
            for l in k + 1..dim {
                let mut lift = WeylElement::zero(dim, nvars, trunc);
                for i in 0..dim {
                    for j in 0..dim {
                        let c = r.get(i, j, k, l);
                        if c.is_zero() {
                            continue;
                        }
                        let mut fiber = FiberMonomial::one(dim);
                        fiber.0[i] = 1;
                        lift.push(0, c.clone(), fiber, FormMonomial::dx(j));
                    }
                }
                let slot = FormMonomial(FormMonomial::dx(k).0 | FormMonomial::dx(l).0);
                for t in koszul_delta_inv(&lift, &self.sym).terms() {
                    if let Some(w) = self.symmetrization(&t.fiber) {
                        let c = (&t.coeff * &w).scale(&crate::ring::rat(1, 2));
                        out.push(t.lambda + 1, c, FiberMonomial::one(dim), slot);
                    }
                    out.push(t.lambda, t.coeff, t.fiber, slot);
                }
            }
        }
        Ok(out)
    }

    /// `ω_{αβ}` when `fiber` is the single mixed word `y^α y^β`.
    fn symmetrization(&self, fiber: &FiberMonomial) -> Option<Polynomial> {
        let nu = self.nu();
        if fiber.degree() != 2 {
            return None;
        }
        let a = fiber.0[..nu].iter().position(|&e| e == 1)?;
        let b = fiber.0[nu..].iter().position(|&e| e == 1)? + nu;
        let w = self.sym.omega(a, b);
        (!w.is_zero()).then(|| w.clone())
    }

    /// `T = Σ_{j<k} T^i_{jk} y^i dx^j∧dx^k`.
    pub fn torsion_element(&self, trunc: u32) -> Result<WeylElement, GeometryError> {
        let t = self.torsion()?;
        let dim = self.dim();
        let mut out = WeylElement::zero(dim, self.nvars(), trunc);
        for i in 0..dim {
            for j in 0..dim {
                for k in j + 1..dim {
                    let c = t.get(i, j, k);
                    if c.is_zero() {
                        continue;
                    }
                    out.push(
                        0,
                        c.clone(),
                        FiberMonomial::generator(dim, i),
                        FormMonomial(FormMonomial::dx(j).0 | FormMonomial::dx(k).0),
                    );
                }
            }
        }
        Ok(out)
    }
}
