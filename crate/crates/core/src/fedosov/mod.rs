//! The Fedosov machine: the element `r`, the flat differential `D`, the
//! quantization map `Q` and its inverse, and the adapted star product.
//!
//! Reference convention (see [`Convention::reference`]):
//!
//! * `D = δ + ∇ + (1/lam)⟦r,·⟧`
//! * `r = δ⁻¹(T − R − ∇r − (1/lam) r∘r)`, with `T` present in every iterate
//! * `Q = Id + δ⁻¹P` with `P = ∇ + (1/lam)⟦r,·⟧ = D − δ`, so `δQ = QD`
//! * the lift of `f` is the fixed point `a = f − δ⁻¹P(a)`
//!
//! Internally `r` is carried two Fedosov degrees past the user bound, and
//! every division by `lam` is taken from a product computed two degrees
//! higher. This makes lifts, `Q` and `Q⁻¹` exact through degree `N`; `D`
//! is exact through `N − 1` because `δ` lowers the degree.

mod bidiff;
mod checks;
mod convention;

pub use bidiff::{bidiff_table, multi_indices, BidiffTable, MultiIndex};
pub use checks::{
    associativity_witness, check_adapted, check_left_ideal, check_wick, coordinate_monomials,
    d_squared_witness, intertwining_witness, invariant_report, lift_witness, module_action,
    poisson_bracket, poisson_sign, resolve_convention, spanning_set, ConventionScan,
};
pub use convention::{Convention, Sign, TorsionPlacement};

use crate::error::{FedosovError, WeylError};
use crate::geometry::{GeometryData, LeafSpec};
use crate::ring::{LambdaSeries, Polynomial, VarSpace};
use crate::weyl::{
    contracted_product, fiber_product, graded_commutator, koszul_delta, koszul_delta_inv, tau, Symplectic, WeylElement,
};

/// A star product value together with the `lam`-order through which it is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarProduct {
    pub value: LambdaSeries,
    pub exact_order: u32,
}

#[derive(Clone, Debug)]
pub struct FedosovContext {
    geometry: GeometryData,
    trunc: u32,
    convention: Convention,
    r: WeylElement,
    r_ext: WeylElement,
    iterations: u32,
}

impl FedosovContext {
    pub fn new(geometry: GeometryData, trunc: u32) -> Result<Self, FedosovError> {
        Self::with_convention(geometry, trunc, Convention::reference())
    }

    pub fn with_convention(
        geometry: GeometryData,
        trunc: u32,
        convention: Convention,
    ) -> Result<Self, FedosovError> {
        if trunc < 2 {
            return Err(FedosovError::TruncationTooSmall(trunc));
        }
        if !geometry.is_validated() {
            return Err(crate::error::GeometryError::Unvalidated.into());
        }
        let (r_ext, iterations) = compute_r(&geometry, trunc + 2, &convention)?;
        Ok(FedosovContext {
            r: r_ext.with_trunc(trunc),
            r_ext,
            geometry,
            trunc,
            convention,
            iterations,
        })
    }

    pub fn geometry(&self) -> &GeometryData {
        &self.geometry
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn convention(&self) -> &Convention {
        &self.convention
    }

    pub fn nu(&self) -> usize {
        self.geometry.nu()
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim()
    }

    pub fn nvars(&self) -> usize {
        self.geometry.nvars()
    }

    pub fn space(&self) -> VarSpace {
        VarSpace::for_nvars(self.nu(), self.nvars())
    }

    fn sym(&self) -> &Symplectic {
        self.geometry.symplectic()
    }

    /// The element `r`, truncated at `N`.
    pub fn r(&self) -> &WeylElement {
        &self.r
    }

    /// Number of recursion steps until the truncated iterate was fixed.
    pub fn r_iterations(&self) -> u32 {
        self.iterations
    }

    /// Highest `lam`-order of a star product that is exact at truncation `N`.
    pub fn guaranteed_order(&self) -> u32 {
        self.trunc / 2
    }

    /// The recursion for `r` run directly at bound `trunc`, without the
    /// two spare degrees the context keeps.
    pub fn r_at(&self, trunc: u32) -> Result<WeylElement, FedosovError> {
        Ok(compute_r(&self.geometry, trunc, &self.convention)?.0)
    }

    /// Same geometry and convention at another truncation.
    pub fn retruncated(&self, trunc: u32) -> Result<FedosovContext, FedosovError> {
        Self::with_convention(self.geometry.clone(), trunc, self.convention)
    }

    /// Re-embeds into `4ν` variables, adjoining the centers `a1..a{2ν}`.
    pub fn with_centers(&self) -> FedosovContext {
        let nvars = 4 * self.nu();
        if self.nvars() == nvars {
            return self.clone();
        }
        FedosovContext {
            geometry: self.geometry.extend_vars(nvars),
            trunc: self.trunc,
            convention: self.convention,
            r: self.r.extend_vars(nvars),
            r_ext: self.r_ext.extend_vars(nvars),
            iterations: self.iterations,
        }
    }

    pub fn zero(&self) -> WeylElement {
        WeylElement::zero(self.dim(), self.nvars(), self.trunc)
    }

    pub fn element(&self, f: &Polynomial) -> WeylElement {
        WeylElement::from_poly(self.dim(), f, self.trunc)
    }

    /// `(1/lam)⟦r, a⟧`, exact through the bound of `a`.
    pub fn ad_r(&self, a: &WeylElement) -> WeylElement {
        ad_over_lambda(&self.r_ext, a, self.sym())
    }

    /// `P = ∇ + (1/lam)⟦r,·⟧`, the degree-raising part of `D`.
    pub fn p_operator(&self, a: &WeylElement) -> WeylElement {
        self.geometry
            .nabla(a)
            .expect("validated geometry")
            .add(&self.ad_r(a))
    }

    /// `D = ±δ + ∇ + (1/lam)⟦r,·⟧`.
    pub fn fedosov_d(&self, a: &WeylElement) -> WeylElement {
        let delta = self.convention.delta.apply(&koszul_delta(a, self.sym()));
        delta.add(&self.p_operator(a))
    }

    /// `Q = Id ± δ⁻¹P`.
    pub fn quantize(&self, a: &WeylElement) -> WeylElement {
        let step = koszul_delta_inv(&self.p_operator(a), self.sym());
        a.add(&self.convention.lift.apply(&step))
    }

    /// `Q⁻¹` as the fixed point `b = a ∓ δ⁻¹P(b)`, summed as the series
    /// `Σ (∓δ⁻¹P)^n a`; each term raises the degree, so it terminates.
    pub fn quantize_inv(&self, a: &WeylElement) -> Result<WeylElement, FedosovError> {
        let cap = a.trunc() + 2;
        let mut total = a.clone();
        let mut inc = a.clone();
        for _ in 0..cap {
            let step = koszul_delta_inv(&self.p_operator(&inc), self.sym());
            inc = self.convention.lift.apply(&step).neg();
            if inc.is_zero() {
                return Ok(total);
            }
            total = total.add(&inc);
        }
        Err(FedosovError::ConventionResolution {
            what: "inverse quantization",
            iterations: cap,
        })
    }

    /// The flat section `Q⁻¹f` with `τ(Q⁻¹f) = f`.
    pub fn lift(&self, f: &LambdaSeries) -> Result<WeylElement, FedosovError> {
        self.check_series(f)?;
        self.quantize_inv(&WeylElement::from_series(self.dim(), f, self.trunc))
    }

    fn check_series(&self, f: &LambdaSeries) -> Result<(), FedosovError> {
        if f.nvars() != self.nvars() {
            return Err(crate::error::RingError::VariableMismatch {
                left: self.nvars(),
                right: f.nvars(),
            }
            .into());
        }
        Ok(())
    }

    /// `f ∗ g = Q(Q⁻¹f ∘ Q⁻¹g)` on its exact `lam`-orders.
    pub fn star(&self, f: &LambdaSeries, g: &LambdaSeries) -> Result<StarProduct, FedosovError> {
        let a = self.lift(f)?;
        let b = self.lift(g)?;
        self.star_lifted(&a, &b)
    }

    pub fn star_poly(&self, f: &Polynomial, g: &Polynomial) -> Result<StarProduct, FedosovError> {
        self.star(&LambdaSeries::from_poly(f.clone()), &LambdaSeries::from_poly(g.clone()))
    }

    /// Star product of two already lifted elements.
    pub fn star_lifted(&self, a: &WeylElement, b: &WeylElement) -> Result<StarProduct, FedosovError> {
        let product = fiber_product(a, b, self.sym())?;
        let q = self.quantize(&product);
        self.flatten(&q)
    }

    /// `τ(a∘b)` without forming `Q`. For flat `a`, `b` this equals
    /// [`star_lifted`](Self::star_lifted), which also verifies flatness.
    pub fn star_lifted_unchecked(&self, a: &WeylElement, b: &WeylElement) -> Result<StarProduct, FedosovError> {
        let nu = self.nu();
        let left = a.filter(|k| k.form.degree() == 0 && k.fiber.0[nu..].iter().all(|&e| e == 0));
        let right = b.filter(|k| k.form.degree() == 0 && k.fiber.0[..nu].iter().all(|&e| e == 0));
        let product = fiber_product(&left, &right, self.sym())?;
        let k = self.guaranteed_order();
        Ok(StarProduct {
            value: tau(&product).truncate(k),
            exact_order: k,
        })
    }

    /// Reads off `τ` and insists nothing else survives.
    fn flatten(&self, q: &WeylElement) -> Result<StarProduct, FedosovError> {
        if let Some(t) = q.terms().find(|t| t.fiber.degree() > 0 || t.form.degree() > 0) {
            return Err(FedosovError::Residual(crate::weyl::render_term(&t, &self.space())));
        }
        let k = self.guaranteed_order();
        Ok(StarProduct {
            value: tau(q).truncate(k),
            exact_order: k,
        })
    }

    /// Leaf-module action: extend `m` constantly in `x^β`, multiply from the
    /// left by `f`, restrict to the leaf.
    pub fn act(
        &self,
        f: &LambdaSeries,
        m: &LambdaSeries,
        leaf: &LeafSpec,
    ) -> Result<StarProduct, FedosovError> {
        module_action(self, f, m, leaf)
    }
}

/// `(1/lam)⟦r, a⟧` with the commutator formed two degrees above the bound of `a`.
fn ad_over_lambda(r: &WeylElement, a: &WeylElement, sym: &Symplectic) -> WeylElement {
    let t = a.trunc();
    let c = graded_commutator(&r.with_trunc(t + 2), &a.with_trunc(t + 2), sym)
        .expect("compatible elements");
    c.divide_by_lambda()
        .expect("commutators are divisible by lam")
        .with_trunc(t)
}

/// `(1/lam) r∘r` for the odd element `r`. Its uncontracted part `r∧r`
/// vanishes, so only contractions are formed.
fn square_over_lambda(r: &WeylElement, sym: &Symplectic) -> Result<WeylElement, WeylError> {
    let t = r.trunc();
    let wide = r.with_trunc(t + 2);
    let sq = contracted_product(&wide, &wide, sym)?;
    Ok(sq.divide_by_lambda()?.with_trunc(t))
}

/// Iterates `r ↦ δ⁻¹(±T ± R ± ∇r ± (1/lam) r∘r)` until the truncated value is fixed.
///
/// Each step fixes one more degree, so early iterates are formed at a lower
/// bound that grows to `trunc`; only the last few pay for the full bound.
fn compute_r(
    g: &GeometryData,
    trunc: u32,
    conv: &Convention,
) -> Result<(WeylElement, u32), FedosovError> {
    let sym = g.symplectic();
    let t_elt = conv.torsion.apply(&g.torsion_element(trunc)?);
    let r_elt = conv.curvature.apply(&g.curvature_element(trunc)?);
    let cap = trunc + 2;
    let mut r = WeylElement::zero(g.dim(), g.nvars(), trunc.min(3));
    for it in 0..cap {
        let bound = trunc.min(it + 3);
        let r_in = r.with_trunc(bound);
        let seed = it == 0;
        let mut src = if seed || conv.torsion_at == TorsionPlacement::EveryStep {
            t_elt.with_trunc(bound)
        } else {
            WeylElement::zero(g.dim(), g.nvars(), bound)
        };
        if !(seed && conv.torsion_at == TorsionPlacement::Seed) {
            src = src
                .add(&r_elt.with_trunc(bound))
                .add(&conv.connection.apply(&g.nabla(&r_in)?))
                .add(&conv.square.apply(&square_over_lambda(&r_in, sym)?));
        }
        let next = koszul_delta_inv(&src, sym);
        let settled = r.trunc() == trunc && !(seed && conv.torsion_at == TorsionPlacement::Seed);
        if settled && next == r {
            return Ok((next, it + 1));
        }
        r = next;
    }
    Err(FedosovError::ConventionResolution {
        what: "the recursion for r",
        iterations: cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_polynomial, parse_series};
    use crate::samples;
    use crate::weyl::parse_weyl;

    fn series(s: &str) -> LambdaSeries {
        parse_series(s, &VarSpace::new(1)).unwrap()
    }

    #[test]
    fn flat_model_lifts() {
        let ctx = FedosovContext::new(samples::flat(1), 8).unwrap();
        assert!(ctx.r().is_zero());
        assert_eq!(ctx.lift(&series("x2")).unwrap(), parse_weyl("x2 - y1", 1, 8).unwrap());
        assert_eq!(ctx.lift(&series("x1")).unwrap(), parse_weyl("x1 + y2", 1, 8).unwrap());
        assert_eq!(ctx.lift(&series("7/2")).unwrap(), parse_weyl("7/2", 1, 8).unwrap());
    }

    #[test]
    fn flat_model_d_kills_lift() {
        let ctx = FedosovContext::new(samples::flat(1), 8).unwrap();
        let a = parse_weyl("x2 - y1", 1, 8).unwrap();
        assert!(ctx.fedosov_d(&a).is_zero());
        let f = ctx.element(&parse_polynomial("x1^2*x2", &VarSpace::new(1)).unwrap());
        assert!(koszul_delta(&f, ctx.geometry().symplectic()).is_zero());
    }

    #[test]
    fn flat_model_star() {
        let ctx = FedosovContext::new(samples::flat(1), 8).unwrap();
        let s = ctx.star(&series("x2"), &series("x1")).unwrap();
        assert_eq!(s.value.to_string(), "x1*x2 - lam");
        let s = ctx.star(&series("x1"), &series("x2")).unwrap();
        assert_eq!(s.value.to_string(), "x1*x2");
        assert_eq!(s.exact_order, 4);
    }

    #[test]
    fn curved_r_shape() {
        let ctx = FedosovContext::new(samples::curved(), 6).unwrap();
        let r = ctx.r();
        assert!(!r.is_zero());
        assert_eq!(r.form_degrees(), vec![1]);
        assert!(r.min_fedosov_degree().unwrap() >= 2);
        assert!(crate::weyl::ideal_membership(r, crate::weyl::Ideal::Polarization).member);
    }

    #[test]
    fn torsion_seeds_r() {
        let ctx = FedosovContext::new(samples::torsionful(), 6).unwrap();
        let low = ctx.r().up_to_degree(2);
        assert_eq!(low, parse_weyl("-1/3*y1^2*dx1 - 1/3*y1*y2*dx2", 1, 6).unwrap());
    }

    #[test]
    fn small_truncation_rejected() {
        assert!(matches!(
            FedosovContext::new(samples::flat(1), 1),
            Err(FedosovError::TruncationTooSmall(1))
        ));
    }
}
