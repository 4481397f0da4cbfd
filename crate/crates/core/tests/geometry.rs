mod common;

use common::weyl;
use fedosov_core::geometry::{GeometryData, LeafSpec};
use fedosov_core::report::Status;
use fedosov_core::ring::{int, parse_polynomial, Polynomial, VarSpace};
use fedosov_core::samples;
use fedosov_core::weyl::{fiber_product, graded_commutator, ideal_membership, parse_weyl, Ideal, Symplectic, WeylElement};
use proptest::prelude::*;

const T: u32 = 8;

fn w(s: &str) -> WeylElement {
    parse_weyl(s, 1, T).unwrap()
}

fn p(s: &str) -> Polynomial {
    parse_polynomial(s, &VarSpace::new(1)).unwrap()
}

#[test]
fn validation_examples() {
    assert!(samples::flat(1).check().all_pass());
    assert!(samples::curved().check().all_pass());

    let mut gamma = vec![Polynomial::zero(2); 8];
    gamma[4] = Polynomial::one(2); // Γ²₁₁
    let g = GeometryData::new(Symplectic::darboux(1, 2), gamma).unwrap();
    let report = g.check();
    let line = report.get("self_parallel_L").unwrap();
    assert_eq!(line.status, Status::Fail);
    assert!(!line.detail.is_empty());
    assert!(g.validated().is_err());
}

#[test]
fn unvalidated_geometry_is_refused() {
    let g = GeometryData::flat(Symplectic::darboux(1, 2));
    assert!(g.nabla(&w("y1")).is_err());
    assert!(g.curvature().is_err());
}

/// `R(e_k, e_l) e_j` by composing covariant derivatives of frame fields.
fn curvature_oracle(g: &GeometryData, j: usize, k: usize, l: usize) -> Vec<Polynomial> {
    let dim = g.dim();
    let nabla_field = |i: usize, v: &[Polynomial]| -> Vec<Polynomial> {
        (0..dim)
            .map(|m| {
                let mut c = v[m].diff(i).unwrap();
                for n in 0..dim {
                    c = c + g.gamma(m, i, n) * &v[n];
                }
                c
            })
            .collect()
    };
    let mut e = vec![Polynomial::zero(g.nvars()); dim];
    e[j] = Polynomial::one(g.nvars());
    let kl = nabla_field(k, &nabla_field(l, &e));
    let lk = nabla_field(l, &nabla_field(k, &e));
    kl.into_iter().zip(lk).map(|(a, b)| a - b).collect()
}

#[test]
fn curvature_of_the_curved_sample() {
    let g = samples::curved();
    let r = g.curvature().unwrap();
    assert_eq!(r.get(0, 0, 0, 1), &p("-1"));
    assert_eq!(r.get(1, 0, 0, 1), &p("2*x2^2"));
    assert!(g.torsion().unwrap().is_zero());
    for sample in [samples::curved(), samples::curved_torsion(), samples::nu2(), samples::nu2_parallel()] {
        let r = sample.curvature().unwrap();
        let d = sample.dim();
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let oracle = curvature_oracle(&sample, j, k, l);
                    for (i, o) in oracle.iter().enumerate() {
                        assert_eq!(r.get(i, j, k, l), o, "R^{i}_{j}{k}{l}");
                    }
                }
            }
        }
    }
    let flat = samples::flat(1);
    assert!(flat.curvature().unwrap().is_zero());
    assert!(flat.torsion().unwrap().is_zero());
    assert!(!samples::torsionful().torsion().unwrap().is_zero());
}

#[test]
fn musical_map_examples() {
    let g = samples::flat(1);
    assert_eq!(g.u_map(&w("y1")).unwrap(), w("dx2"));
    assert_eq!(g.u_inv(&w("dx1")).unwrap(), w("-y2"));
    assert_eq!(g.u_inv(&g.u_map(&w("y2")).unwrap()).unwrap(), w("y2"));
    assert!(g.u_map(&w("y1*y2")).is_err());
}

#[test]
fn nabla_examples() {
    for g in [samples::flat(1), samples::curved()] {
        assert_eq!(g.nabla(&w("x2")).unwrap(), w("dx2"));
    }
    let g = samples::curved();
    let v = p("x1^2 + 3*x2");
    let mut expect = WeylElement::zero(2, 2, T);
    for i in 0..2 {
        let c1 = v.diff(i).unwrap() + g.gamma(0, i, 0) * &v;
        let c2 = g.gamma(1, i, 0) * &v;
        expect = expect
            .add(&WeylElement::y(2, 2, T, 0).mul_poly(&c1).form_wedge(i))
            .add(&WeylElement::y(2, 2, T, 1).mul_poly(&c2).form_wedge(i));
    }
    assert_eq!(g.nabla(&WeylElement::y(2, 2, T, 0).mul_poly(&v)).unwrap(), expect);

    let df = w("x2^2*dx1 + 2*x1*x2*dx2");
    let lhs = g.nabla(&w("x1*x2^2*dx1")).unwrap();
    assert_eq!(lhs, fiber_product(&df, &w("dx1"), g.symplectic()).unwrap());
    assert_eq!(lhs, w("-2*x1*x2*dx1^dx2"));
}

trait FormWedge {
    fn form_wedge(&self, i: usize) -> WeylElement;
}

impl FormWedge for WeylElement {
    /// `dx^i ∧ a` for form-free `a`.
    fn form_wedge(&self, i: usize) -> WeylElement {
        let dx = WeylElement::dx(self.dim(), self.nvars(), self.trunc(), i);
        fiber_product(&dx, self, &Symplectic::darboux(self.nu(), self.nvars())).unwrap()
    }
}

#[test]
fn curvature_and_torsion_elements_lie_in_the_ideal() {
    let flat = samples::flat(1);
    assert!(flat.curvature_element(T).unwrap().is_zero());
    assert!(flat.torsion_element(T).unwrap().is_zero());
    for g in [samples::curved(), samples::curved_torsion(), samples::torsionful(), samples::nu2(), samples::nu2_parallel()] {
        let r = g.curvature_element(T).unwrap();
        let t = g.torsion_element(T).unwrap();
        assert!(ideal_membership(&r, Ideal::Polarization).is_member(), "{r}");
        assert!(ideal_membership(&t, Ideal::Polarization).is_member(), "{t}");
    }
    assert!(!samples::curved().curvature_element(T).unwrap().is_zero());
    assert!(!samples::torsionful().torsion_element(T).unwrap().is_zero());
}

fn form_parts(a: &WeylElement) -> Vec<(u32, WeylElement)> {
    a.form_degrees().into_iter().map(|d| (d, a.form_part(d))).collect()
}

fn check_nabla_identities(g: &GeometryData, a: &WeylElement, b: &WeylElement) -> Result<(), TestCaseError> {
    let s = g.symplectic();
    let nab = |x: &WeylElement| g.nabla(x).unwrap();
    let prod = |x: &WeylElement, y: &WeylElement| fiber_product(x, y, s).unwrap();

    // Graded derivation of the fiber product.
    let mut rhs = prod(&nab(a), b);
    for (d, part) in form_parts(a) {
        let term = prod(&part, &nab(b));
        rhs = if d % 2 == 0 { rhs.add(&term) } else { rhs.sub(&term) };
    }
    prop_assert_eq!(nab(&prod(a, b)), rhs);

    // ∇²a = (1/lam)⟦R, a⟧.
    let t = a.trunc();
    let r = g.curvature_element(t + 2).unwrap();
    let c = graded_commutator(&r, &a.with_trunc(t + 2), s).unwrap();
    prop_assert_eq!(nab(&nab(a)), c.divide_by_lambda().unwrap().with_trunc(t));

    // Ideal preservation.
    let nu = g.nu();
    let x = a.filter(|k| k.fiber.0[..nu].iter().any(|&e| e > 0) || (nu..2 * nu).any(|i| k.form.contains(i)));
    prop_assert!(ideal_membership(&nab(&x), Ideal::Polarization).is_member());
    let leaf = LeafSpec::new(nu, (0..nu).map(|i| int(i as i64 - 1)).collect());
    let fin = x.add(&b.mul_poly(&leaf.generators(g.nvars())[0]));
    prop_assert!(ideal_membership(&nab(&fin), Ideal::Leaf(&leaf)).is_member());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nabla_identities_curved(a in weyl(2, 2, T, 3, 1), b in weyl(2, 2, T, 2, 1)) {
        check_nabla_identities(&samples::curved(), &a, &b)?;
    }

    #[test]
    fn nabla_identities_curved_torsion(a in weyl(2, 2, T, 3, 1), b in weyl(2, 2, T, 2, 1)) {
        check_nabla_identities(&samples::curved_torsion(), &a, &b)?;
    }

    #[test]
    fn nabla_identities_nu2(a in weyl(4, 4, 6, 2, 1), b in weyl(4, 4, 6, 2, 1)) {
        check_nabla_identities(&samples::nu2(), &a, &b)?;
    }

    #[test]
    fn nabla_identities_nu2_parallel(a in weyl(4, 4, 6, 2, 1), b in weyl(4, 4, 6, 2, 1)) {
        check_nabla_identities(&samples::nu2_parallel(), &a, &b)?;
    }
}
