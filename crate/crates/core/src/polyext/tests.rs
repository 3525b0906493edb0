use super::*;
use crate::series::{q, qi, series_q};
use proptest::prelude::*;

const Q: CoefficientField = CoefficientField::Rationals;
const F2: CoefficientField = CoefficientField::PrimeField(2);

/// Polynomial from `(degree, [(c_num, c_den, e_num, e_den)])` data.
fn poly(field: CoefficientField, coeffs: &[&[(i64, i64, i64, i64)]]) -> NovikovPoly {
    NovikovPoly::new(field, coeffs.iter().map(|c| series_q(field, c)).collect()).unwrap()
}

fn x2_minus_t(field: CoefficientField) -> NovikovPoly {
    poly(field, &[&[(-1, 1, 1, 1)], &[], &[(1, 1, 0, 1)]])
}

#[test]
fn bezout_examples() {
    let f = x2_minus_t(Q);
    let g = poly(Q, &[&[], &[(2, 1, 0, 1)]]);
    let res = gcd_bezout(&f, &g).unwrap();
    assert_eq!(res.gcd, NovikovPoly::one(Q));
    let cert = res.certificate.unwrap();
    assert_eq!(cert.r, poly(Q, &[&[(-2, 1, 0, 1)]]));
    assert_eq!(cert.q, poly(Q, &[&[], &[(1, 1, 0, 1)]]));
    assert_eq!(cert.theta, series_q(Q, &[(2, 1, 1, 1)]));
    assert!(cert.residual(&f, &g).is_zero());

    let lin = poly(Q, &[&[(-1, 1, 0, 1)], &[(1, 1, 0, 1)]]);
    let res = gcd_bezout(&lin, &lin).unwrap();
    assert_eq!(res.gcd, lin);
    assert!(res.certificate.is_none());

    let f2 = x2_minus_t(F2);
    let d = f2.derivative();
    assert!(d.is_zero());
    let res = gcd_bezout(&f2, &d).unwrap();
    assert_eq!(res.gcd, f2);
    assert!(res.certificate.is_none());
    assert_eq!(
        gcd_bezout(&NovikovPoly::zero(Q), &NovikovPoly::zero(Q)).unwrap_err().code(),
        "ZERO_INPUTS"
    );
}

#[test]
fn bezout_over_integers_is_integral() {
    let z = CoefficientField::Integers;
    let f = poly(z, &[&[(1, 1, 0, 1), (3, 1, 1, 2)], &[(2, 1, 0, 1)], &[(1, 1, 0, 1)]]);
    let g = f.derivative();
    let cert = gcd_bezout(&f, &g).unwrap().certificate.unwrap();
    assert_eq!(cert.theta.field(), z);
    assert!(cert.residual(&f, &g).is_zero());
}

#[test]
fn squarefree_examples() {
    let f = x2_minus_t(Q);
    let r = squarefree_mod_p(&f, 5).unwrap();
    assert!(r.squarefree && r.from_lift);
    if let SquarefreeWitness::Bezout(b) = &r.witness {
        let fp = f.reduce_mod_p(5).unwrap();
        assert!(b.residual(&fp, &fp.derivative()).is_zero());
    } else {
        panic!("expected a Bezout witness");
    }
    assert!(!squarefree_mod_p(&f, 2).unwrap().squarefree);

    let sq = poly(Q, &[&[(1, 1, 0, 1)], &[(-2, 1, 0, 1)], &[(1, 1, 0, 1)]]);
    let r = squarefree_mod_p(&sq, 5).unwrap();
    assert!(!r.squarefree);
    let lin5 = poly(CoefficientField::PrimeField(5), &[&[(-1, 1, 0, 1)], &[(1, 1, 0, 1)]]);
    assert_eq!(r.witness, SquarefreeWitness::CommonFactor(lin5));

    let third = poly(Q, &[&[(-1, 3, 1, 1)], &[], &[(1, 1, 0, 1)]]);
    assert_eq!(squarefree_mod_p(&third, 3).unwrap_err().code(), "REDUCTION_FAILURE");
}

#[test]
fn reduction_examples() {
    let f = poly(Q, &[&[(-1, 3, 1, 1)], &[], &[(1, 1, 0, 1)]]);
    let f5 = CoefficientField::PrimeField(5);
    assert_eq!(
        f.reduce_mod_p(5).unwrap(),
        poly(f5, &[&[(3, 1, 1, 1)], &[], &[(1, 1, 0, 1)]])
    );
    match f.reduce_mod_p(3).unwrap_err() {
        Error::DenominatorDivisibleByP { p, location } => {
            assert_eq!(p, 3);
            assert!(location.starts_with("degree 0"), "{location}");
        }
        e => panic!("unexpected {e:?}"),
    }
}

#[test]
fn extension_valuation_examples() {
    let m = poly(F2, &[&[(1, 1, 0, 1)], &[(1, 1, 0, 1)], &[(1, 1, 0, 1)]]);
    let ext = ExtensionField::certify(&m, &qi(4)).unwrap();
    assert!(ext.is_verified());
    let xb = ext.generator();
    let mm = ext.multiplication_matrix(&xb);
    assert_eq!(mm[0][1], NovikovSeries::one(F2));
    assert_eq!(mm[1][1], NovikovSeries::one(F2));
    assert_eq!(ext.extend_valuation(&xb).unwrap(), Valuation::Finite(qi(0)));
    let t3 = NovikovPoly::constant(NovikovSeries::t_power(qi(3), F2));
    assert_eq!(ext.extend_valuation(&t3).unwrap(), Valuation::Finite(qi(3)));

    let m = poly(Q, &[&[(-2, 1, 0, 1), (-1, 1, 1, 1)], &[], &[(1, 1, 0, 1)]]);
    let ext = ExtensionField::certify(&m, &qi(4)).unwrap();
    assert!(ext.is_verified());
    assert_eq!(ext.norm(&ext.generator()), series_q(Q, &[(-2, 1, 0, 1), (-1, 1, 1, 1)]));
    assert_eq!(ext.extend_valuation(&ext.generator()).unwrap(), Valuation::Finite(qi(0)));

    let unverified = ExtensionField::new(&m, false).unwrap();
    assert_eq!(unverified.extend_valuation(&xb).unwrap_err().code(), "UNVERIFIED_MODULUS");
}

#[test]
fn extension_uniqueness_on_equal_moduli() {
    let a = poly(F2, &[&[(1, 1, 0, 1)], &[(1, 1, 0, 1)], &[(1, 1, 0, 1)]]);
    // the same modulus written with a vanishing T-term
    let b = NovikovPoly::new(
        F2,
        vec![
            &series_q(F2, &[(1, 1, 0, 1)]) + &(&series_q(F2, &[(1, 1, 1, 1)]) * &NovikovSeries::zero(F2)),
            series_q(F2, &[(1, 1, 0, 1)]),
            series_q(F2, &[(1, 1, 0, 1)]),
        ],
    )
    .unwrap();
    let (ea, eb) = (
        ExtensionField::certify(&a, &qi(4)).unwrap(),
        ExtensionField::certify(&b, &qi(4)).unwrap(),
    );
    let el = poly(F2, &[&[(1, 1, 1, 2)], &[(1, 1, 2, 1)]]);
    assert_eq!(ea.extend_valuation(&el).unwrap(), eb.extend_valuation(&el).unwrap());
}

#[test]
fn newton_polygon_examples() {
    let np = newton_polygon(&x2_minus_t(Q));
    assert_eq!(np.segments, vec![(q(-1, 2), 2)]);
    let np = newton_polygon(&poly(Q, &[&[(-1, 1, 0, 1)], &[], &[(1, 1, 0, 1)]]));
    assert_eq!(np.segments, vec![(qi(0), 2)]);
    let np = newton_polygon(&poly(Q, &[&[(-1, 1, 1, 1)], &[(-1, 1, 2, 1)], &[(1, 1, 0, 1)]]));
    assert_eq!(np.segments, vec![(q(-1, 2), 2)]);
    // x(x − T)(x − 1): slopes −1 then 0
    let f = poly(Q, &[&[], &[(1, 1, 1, 1)], &[(-1, 1, 0, 1), (-1, 1, 1, 1)], &[(1, 1, 0, 1)]]);
    let np = newton_polygon(&f);
    assert_eq!(np.start, 1);
    assert_eq!(np.segments, vec![(qi(-1), 1), (qi(0), 1)]);
}

#[test]
fn factor_sqrt_one_plus_t() {
    let f = poly(Q, &[&[(-1, 1, 0, 1), (-1, 1, 1, 1)], &[], &[(1, 1, 0, 1)]]);
    let order = qi(3);
    let fac = factor(&f, &order).unwrap();
    assert_eq!(fac.factors.len(), 2);
    assert!(fac.factors.iter().all(|f| f.irreducible));
    assert!(fac.product().agrees_below(&f, &order));
    let root = series_q(Q, &[(1, 1, 0, 1), (1, 2, 1, 1), (-1, 8, 2, 1)]);
    let constants: Vec<NovikovSeries> = fac.factors.iter().map(|f| f.poly.coeff(0)).collect();
    assert!(constants.iter().any(|c| c.agrees_below(&-&root, &order)));
    assert!(constants.iter().any(|c| c.agrees_below(&root, &order)));
}

#[test]
fn factor_ramified_splits_exactly() {
    let fac = factor(&x2_minus_t(Q), &qi(3)).unwrap();
    let sqrt_t = NovikovSeries::t_power(q(1, 2), Q);
    let mut constants: Vec<NovikovSeries> = fac.factors.iter().map(|f| f.poly.coeff(0)).collect();
    constants.sort_by_key(|c| format!("{c}"));
    assert_eq!(constants, vec![-&sqrt_t, sqrt_t]);
    assert!(fac.factors.iter().all(|f| f.poly.is_exact()));
}

#[test]
fn factor_irreducible_over_f2() {
    let f = poly(F2, &[&[(1, 1, 0, 1)], &[(1, 1, 0, 1)], &[(1, 1, 0, 1)]]);
    let fac = factor(&f, &qi(3)).unwrap();
    assert_eq!(fac.factors.len(), 1);
    assert!(fac.factors[0].irreducible);
    assert_eq!(factor(&x2_minus_t(F2), &qi(3)).unwrap_err().code(), "NOT_SQUAREFREE");
}

#[test]
fn factor_mixed_segments_and_close_roots() {
    // (x − 1)(x − 1 − T)(x − T^2): two roots share the residue 1
    let lin = |c: NovikovSeries| NovikovPoly::new(Q, vec![-c, NovikovSeries::one(Q)]).unwrap();
    let f = lin(NovikovSeries::one(Q))
        .mul(&lin(series_q(Q, &[(1, 1, 0, 1), (1, 1, 1, 1)])))
        .mul(&lin(NovikovSeries::t_power(qi(2), Q)));
    let order = qi(4);
    let fac = factor(&f, &order).unwrap();
    assert_eq!(fac.factors.len(), 3);
    assert!(fac.product().agrees_below(&f, &order));
    for fc in &fac.factors {
        assert!(newton_polygon(&fc.poly).segments.len() <= 1);
    }
}

#[test]
fn determinant_of_small_matrices() {
    let s = |n: i64| NovikovSeries::from_i64(n, Q);
    let m = vec![vec![s(1), s(2), s(3)], vec![s(0), s(1), s(4)], vec![s(5), s(6), s(0)]];
    assert_eq!(determinant(&m, Q), s(1));
}

fn arb_coeff() -> impl Strategy<Value = NovikovSeries> {
    prop::collection::vec((-3i64..=3, 0i64..=4, 1i64..=2), 0..3)
        .prop_map(|ts| series_q(Q, &ts.iter().map(|&(c, e, d)| (c, 1, e, d)).collect::<Vec<_>>()))
}

fn arb_poly(max_deg: usize) -> impl Strategy<Value = NovikovPoly> {
    prop::collection::vec(arb_coeff(), 1..=max_deg + 1).prop_map(|c| NovikovPoly::new(Q, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bezout_resubstitutes_exactly(f in arb_poly(3), g in arb_poly(2)) {
        prop_assume!(!f.is_zero() || !g.is_zero());
        let res = gcd_bezout(&f, &g).unwrap();
        if let Some(cert) = res.certificate {
            prop_assert!(cert.residual(&f, &g).is_zero());
        }
    }

    #[test]
    fn extended_valuation_is_multiplicative(
        c0 in arb_coeff(), c1 in arb_coeff(), d0 in arb_coeff(), d1 in arb_coeff(), k in 1i64..=3,
    ) {
        // x^2 − (k + T) with k not a square in Q: irreducible slope-0 modulus
        let k = [2, 3, 5][(k - 1) as usize];
        let m = NovikovPoly::new(Q, vec![series_q(Q, &[(-k, 1, 0, 1), (-1, 1, 1, 1)]), NovikovSeries::zero(Q), NovikovSeries::one(Q)]).unwrap();
        let ext = ExtensionField::certify(&m, &qi(4)).unwrap();
        prop_assert!(ext.is_verified());
        let a = NovikovPoly::new(Q, vec![c0.clone(), c1]).unwrap();
        let b = NovikovPoly::new(Q, vec![d0, d1]).unwrap();
        let va = ext.extend_valuation(&a).unwrap();
        let vb = ext.extend_valuation(&b).unwrap();
        let vab = ext.extend_valuation(&ext.mul(&a, &b)).unwrap();
        let sum = match (va, vb) {
            (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x + y),
            _ => Valuation::Infinity,
        };
        prop_assert_eq!(vab, sum);
        let base = NovikovPoly::constant(c0.clone());
        prop_assert_eq!(ext.extend_valuation(&base).unwrap(), c0.valuation());
    }

    #[test]
    fn squarefree_mod_p_matches_direct_gcd(cs in prop::collection::vec(-4i64..=4, 2..=5), p in prop::sample::select(vec![3u64, 5, 7])) {
        // constant coefficients: the answer is the gcd over F_p of the residue polynomials
        let f = NovikovPoly::new(Q, cs.iter().map(|&c| NovikovSeries::from_i64(c, Q)).collect()).unwrap();
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let fp = KPoly::from_i64s(CoefficientField::PrimeField(p), &cs);
        prop_assume!(fp.degree() == f.degree());
        let expected = fp.gcd(&fp.derivative()).degree() == Some(0);
        prop_assert_eq!(squarefree_mod_p(&f, p).unwrap().squarefree, expected);
    }

    #[test]
    fn factor_product_matches(r1 in arb_coeff(), r2 in arb_coeff(), r3 in arb_coeff()) {
        let lin = |c: &NovikovSeries| NovikovPoly::new(Q, vec![-c, NovikovSeries::one(Q)]).unwrap();
        let f = lin(&r1).mul(&lin(&r2)).mul(&lin(&r3));
        prop_assume!(gcd_bezout(&f, &f.derivative()).unwrap().certificate.is_some());
        let order = qi(3);
        let fac = factor(&f, &order).unwrap();
        prop_assert!(fac.product().agrees_below(&f, &order));
        for fc in &fac.factors {
            prop_assert!(newton_polygon(&fc.poly).segments.len() <= 1);
        }
    }
}
