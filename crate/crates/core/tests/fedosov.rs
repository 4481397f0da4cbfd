mod common;

use common::{bounded_polynomial, weyl};
use fedosov_core::fedosov::{
    bidiff_table, check_left_ideal, check_wick, coordinate_monomials, multi_indices, BidiffTable,
};
use fedosov_core::geometry::LeafSpec;
use fedosov_core::ring::{int, parse_polynomial, parse_series, rat, LambdaSeries, Polynomial, Rational, VarSpace};
use fedosov_core::samples;
use fedosov_core::weyl::{ideal_membership, koszul_delta, koszul_delta_inv, parse_weyl, Ideal, WeylElement};
use fedosov_core::{FedosovContext, FedosovError};
use proptest::prelude::*;
use std::sync::OnceLock;

fn p(s: &str) -> Polynomial {
    parse_polynomial(s, &VarSpace::new(1)).unwrap()
}

fn series(s: &str) -> LambdaSeries {
    parse_series(s, &VarSpace::new(1)).unwrap()
}

fn flat(n: u32) -> FedosovContext {
    FedosovContext::new(samples::flat(1), n).unwrap()
}

fn curved4() -> &'static FedosovContext {
    static CTX: OnceLock<FedosovContext> = OnceLock::new();
    CTX.get_or_init(|| FedosovContext::new(samples::curved(), 4).unwrap())
}

fn curved6() -> &'static FedosovContext {
    static CTX: OnceLock<FedosovContext> = OnceLock::new();
    CTX.get_or_init(|| FedosovContext::new(samples::curved(), 6).unwrap())
}

fn star(ctx: &FedosovContext, f: &LambdaSeries, g: &LambdaSeries) -> LambdaSeries {
    ctx.star(f, g).unwrap().value
}

/// `Σ_k ((−lam)^k / k!) ∂₂^k f ∂₁^k g`, truncated at `lam^max`.
fn flat_closed_form(f: &Polynomial, g: &Polynomial, max: u32) -> LambdaSeries {
    let mut out = LambdaSeries::zero(2);
    let (mut df, mut dg) = (f.clone(), g.clone());
    let mut c = Rational::from_i64(1);
    for k in 0..=max {
        out.add_at(k, &(&df * &dg).scale(&c));
        df = df.diff(1).unwrap();
        dg = dg.diff(0).unwrap();
        c = -c / int(k as i64 + 1);
    }
    out
}

#[test]
fn r_examples() {
    assert!(flat(8).r().is_zero());

    let ctx = curved6();
    let r = ctx.r();
    assert!(!r.is_zero());
    assert!(ideal_membership(r, Ideal::Polarization).is_member());
    assert!(r.min_fedosov_degree().unwrap() >= 2);
    assert_eq!(r.form_degrees(), vec![1]);

    let t = FedosovContext::new(samples::torsionful(), 4).unwrap();
    let g = t.geometry();
    let r0 = koszul_delta_inv(&g.torsion_element(4).unwrap(), g.symplectic());
    assert!(!r0.is_zero());
    assert_eq!(r0.min_fedosov_degree(), Some(2));
    assert_eq!(t.r().up_to_degree(2), r0);
}

#[test]
fn fedosov_differential_examples() {
    let ctx = flat(6);
    let w = |s: &str| parse_weyl(s, 1, 6).unwrap();
    assert!(ctx.fedosov_d(&w("x2 - y1")).is_zero());
    assert!(!ctx.fedosov_d(&w("x2 + y1")).is_zero());
    let g = curved6().geometry();
    let f = WeylElement::from_poly(2, &p("x1^2*x2 - 3*x2"), 6);
    assert!(koszul_delta(&f, g.symplectic()).is_zero());
}

#[test]
fn lift_examples() {
    let ctx = flat(6);
    let w = |s: &str| parse_weyl(s, 1, 6).unwrap();
    assert_eq!(ctx.lift(&series("x2")).unwrap(), w("x2 - y1"));
    assert_eq!(ctx.lift(&series("x1")).unwrap(), w("x1 + y2"));
    assert_eq!(ctx.lift(&series("7/3")).unwrap(), w("7/3"));
    assert_eq!(curved6().lift(&series("5")).unwrap(), parse_weyl("5", 1, 6).unwrap());

    let leaf = LeafSpec::new(1, vec![int(0)]);
    let q = ctx.lift(&series("x2")).unwrap();
    assert!(ideal_membership(&q, Ideal::Leaf(&leaf)).is_member());
}

#[test]
fn flat_star_examples() {
    let ctx = flat(8);
    assert_eq!(star(&ctx, &series("x2"), &series("x1")), series("x1*x2 - lam"));
    assert_eq!(star(&ctx, &series("x1"), &series("x2")), series("x1*x2"));
    let f = series("x1^3*x2 - 2*x2^2 + 1/5");
    assert_eq!(star(&ctx, &f, &series("1")), f);
    assert_eq!(star(&ctx, &series("1"), &f), f);
}

#[test]
fn flat_closed_form_on_all_small_monomials() {
    let ctx = flat(8);
    let k = ctx.guaranteed_order();
    assert_eq!(k, 4);
    let ms = coordinate_monomials(2, 2, 4);
    assert_eq!(ms.len(), 15);
    for f in &ms {
        for g in &ms {
            let s = ctx.star_poly(f, g).unwrap();
            assert_eq!(s.exact_order, k);
            assert_eq!(s.value, flat_closed_form(f, g, k), "{f:?} * {g:?}");
        }
    }
}

#[test]
fn non_flat_input_is_reported() {
    let ctx = flat(4);
    let a = parse_weyl("y1", 1, 4).unwrap();
    assert!(matches!(ctx.star_lifted(&a, &a), Err(FedosovError::Residual(_))));
}

#[test]
fn bidiff_examples() {
    let ctx = flat(6);
    let table = bidiff_table(&ctx, 2, 2).unwrap();
    assert!(table.get(0, &[0, 0], &[0, 0]).is_one());
    assert_eq!(table.get(1, &[0, 1], &[1, 0]), p("-1"));
    for (k, i, j, v) in table.entries() {
        if k == 0 {
            assert!(i.iter().chain(j.iter()).all(|&e| e == 0), "{i:?} {j:?} {v:?}");
        }
        if k == 1 && !(i.as_slice() == [0, 1] && j.as_slice() == [1, 0]) {
            panic!("unexpected order-one entry {i:?} | {j:?}");
        }
    }
    assert!(matches!(bidiff_table(&ctx, 1, 4), Err(FedosovError::OrderTooHigh { .. })));
}

#[test]
fn bidiff_table_reconstructs_the_flat_product() {
    let ctx = flat(6);
    let table = bidiff_table(&ctx, 3, 3).unwrap();
    for f in coordinate_monomials(2, 2, 3) {
        for g in coordinate_monomials(2, 2, 3) {
            assert_eq!(table.apply(&f, &g), flat_closed_form(&f, &g, 3));
        }
    }
}

#[test]
fn separation_of_variables() {
    for ctx in [&flat(6), curved6()] {
        let table = bidiff_table(ctx, 3, 3).unwrap();
        assert!(check_wick(&table).all_pass(), "{}", check_wick(&table));
    }

    let ctx = flat(4);
    let mut table = bidiff_table(&ctx, 1, 1).unwrap();
    table.insert(1, vec![1, 0], vec![1, 0], Polynomial::one(2));
    let report = check_wick(&table);
    assert!(!report.all_pass());
    assert!(report.failures().any(|l| l.name == "separation_of_variables"));
}

#[test]
fn module_action_examples() {
    let ctx = flat(6);
    let leaf = LeafSpec::new(1, vec![int(0)]);
    let act = |f: &str, m: &str| ctx.act(&series(f), &series(m), &leaf).unwrap().value;
    assert_eq!(act("x1", "x1^2 + 3"), series("x1^3 + 3*x1"));
    assert_eq!(act("x2", "x1^2"), series("-2*lam*x1"));
    assert_eq!(act("1", "x1^4 - x1"), series("x1^4 - x1"));
    assert!(matches!(
        ctx.act(&series("x1"), &series("x2"), &leaf),
        Err(FedosovError::NotLeafFunction(_))
    ));
    assert!(ctx.act(&series("x1"), &series("x1"), &LeafSpec::new(2, vec![int(0), int(0)])).is_err());
}

#[test]
fn left_ideal_with_right_ideal_probe() {
    let ctx = flat(6);
    for f in coordinate_monomials(2, 2, 3) {
        let s = ctx.star(&LambdaSeries::from_poly(f.clone()), &series("x2")).unwrap();
        assert_eq!(s.value, LambdaSeries::from_poly(&f * &p("x2")));
    }
    let right = star(&ctx, &series("x2"), &series("x1^2")).sub(&series("x1^2*x2"));
    assert_eq!(right, series("-2*lam*x1"));
}

#[test]
fn adaptedness_on_three_leaves() {
    let fs = coordinate_monomials(2, 2, 3);
    let hs = fs.clone();
    assert!(fs.len() * hs.len() >= 100);
    for ctx in [flat(6), curved4().clone(), FedosovContext::new(samples::curved_torsion(), 4).unwrap()] {
        for c in [rat(0, 1), rat(1, 1), rat(-3, 2)] {
            let leaf = LeafSpec::new(1, vec![c]);
            let report = check_left_ideal(&ctx, &leaf, &fs, &hs);
            assert!(report.all_pass(), "{report}");
            assert_eq!(report.get("right_ideal_probe").unwrap().status, fedosov_core::Status::Pass);
        }
    }
}

fn module_checks(ctx: &FedosovContext, leaf: &LeafSpec, f: &Polynomial, g: &Polynomial, m: &Polynomial, h: &Polynomial) {
    let k = ctx.guaranteed_order();
    let s = |p: &Polynomial| LambdaSeries::from_poly(p.clone());
    let act = |f: &LambdaSeries, m: &LambdaSeries| ctx.act(f, m, leaf).unwrap().value.truncate(k);
    let fg = ctx.star(&s(f), &s(g)).unwrap().value;
    assert_eq!(act(&fg, &s(m)), act(&s(f), &act(&s(g), &s(m))));

    let phi = &leaf.generators(ctx.nvars())[0] * h;
    let shifted = ctx.star(&s(f), &s(&(m + &phi))).unwrap().value;
    assert_eq!(shifted.map(ctx.nvars(), |p| leaf.restrict(p)).truncate(k), act(&s(f), &s(m)));
}

fn leaf_function() -> impl Strategy<Value = Polynomial> {
    bounded_polynomial(1, 2, 3, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn module_structure_flat(
        f in bounded_polynomial(2, 2, 2, 3), g in bounded_polynomial(2, 2, 2, 3),
        m in leaf_function(), h in bounded_polynomial(2, 2, 2, 2), c in 0usize..3,
    ) {
        let leaf = LeafSpec::new(1, vec![[rat(0, 1), rat(2, 1), rat(-1, 3)][c].clone()]);
        module_checks(&flat(6), &leaf, &f, &g, &m, &h);
    }

    #[test]
    fn module_structure_curved(
        f in bounded_polynomial(2, 2, 2, 2), g in bounded_polynomial(2, 2, 2, 2),
        m in leaf_function(), h in bounded_polynomial(2, 2, 1, 2), c in 0usize..3,
    ) {
        let leaf = LeafSpec::new(1, vec![[rat(0, 1), rat(2, 1), rat(-1, 3)][c].clone()]);
        module_checks(curved4(), &leaf, &f, &g, &m, &h);
    }

    #[test]
    fn flatness_on_random_elements(a in weyl(2, 2, 6, 3, 1)) {
        let ctx = curved6();
        prop_assert!(ctx.fedosov_d(&ctx.fedosov_d(&a)).up_to_degree(4).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn associativity_flat(f in bounded_polynomial(2, 2, 3, 3), g in bounded_polynomial(2, 2, 3, 3), h in bounded_polynomial(2, 2, 3, 3)) {
        let ctx = flat(6);
        let s = |p: &Polynomial| LambdaSeries::from_poly(p.clone());
        let fg = star(&ctx, &s(&f), &s(&g));
        let gh = star(&ctx, &s(&g), &s(&h));
        prop_assert_eq!(star(&ctx, &fg, &s(&h)), star(&ctx, &s(&f), &gh));
    }

    #[test]
    fn associativity_curved(f in bounded_polynomial(2, 2, 3, 2), g in bounded_polynomial(2, 2, 3, 2), h in bounded_polynomial(2, 2, 3, 2)) {
        let ctx = curved4();
        let s = |p: &Polynomial| LambdaSeries::from_poly(p.clone());
        let fg = star(ctx, &s(&f), &s(&g));
        let gh = star(ctx, &s(&g), &s(&h));
        prop_assert_eq!(star(ctx, &fg, &s(&h)), star(ctx, &s(&f), &gh));
        prop_assert_eq!(star(ctx, &s(&f), &LambdaSeries::from_poly(Polynomial::one(2))), s(&f));
        let classical = fg.coeff(0);
        prop_assert_eq!(classical, &f * &g);
    }
}

#[test]
fn multi_indices_count() {
    assert_eq!(multi_indices(2, 3).len(), 10);
    assert_eq!(multi_indices(4, 2).len(), 15);
    let t = BidiffTable::new(1, 1, 1);
    assert!(t.is_empty());
    assert!(t.get(0, &[1, 0], &[0, 0]).is_zero());
}
