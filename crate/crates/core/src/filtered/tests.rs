use super::*;
use crate::series::{q, qi, series_q};
use alloc::vec;

const QF: CoefficientField = CoefficientField::Rationals;

fn gen(name: &str, degree: i64, action: BigRational) -> Generator {
    Generator::new(name, degree, action)
}

fn mono(c: i64, e: BigRational) -> NovikovSeries {
    NovikovSeries::monomial(QF.from_i64(c), e, QF)
}

/// x (action 1) -> y (action 0), coefficient 1.
pub(crate) fn e1(field: CoefficientField) -> FilteredComplex {
    FilteredComplex::new(
        field,
        Grading::Z,
        vec![gen("x", 1, qi(1)), gen("y", 0, qi(0))],
        vec![(0, 1, NovikovSeries::one(field))],
    )
    .unwrap()
}

#[test]
fn filtration_level_examples() {
    let c = FilteredComplex::new(QF, Grading::Z, vec![gen("x", 0, qi(2))], vec![]).unwrap();
    assert_eq!(c.filtration_level(&[mono(1, qi(3))]).unwrap(), Some(qi(-1)));
    assert_eq!(c.filtration_level(&[NovikovSeries::zero(QF)]).unwrap(), None);
    let c2 = FilteredComplex::new(QF, Grading::Z, vec![gen("x", 0, qi(1)), gen("y", 0, qi(0))], vec![])
        .unwrap();
    assert_eq!(c2.filtration_level(&[mono(1, qi(0)), mono(1, q(1, 2))]).unwrap(), Some(qi(1)));
    let t = NovikovSeries::zero(QF).with_truncation(Some(qi(1)));
    assert_eq!(
        c2.filtration_level(&[NovikovSeries::zero(QF), t]).unwrap_err().code(),
        "TRUNCATION_TOO_COARSE"
    );
}

#[test]
fn validation_diagnostics() {
    let ok = FilteredComplex::unchecked(QF, Grading::Z, vec![gen("x", 0, qi(0))], vec![]);
    assert!(ok.validate().is_empty());
    let flat = FilteredComplex::unchecked(
        QF,
        Grading::Z,
        vec![gen("x", 1, qi(0)), gen("y", 0, qi(0))],
        vec![(0, 1, NovikovSeries::one(QF))],
    );
    assert_eq!(flat.validate()[0].code, "STRICTNESS_VIOLATION");
    let dd = FilteredComplex::unchecked(
        QF,
        Grading::Z,
        vec![gen("x", 2, qi(2)), gen("y", 1, qi(1)), gen("z", 0, qi(0))],
        vec![(0, 1, NovikovSeries::one(QF)), (1, 2, NovikovSeries::one(QF))],
    );
    assert!(dd.validate().iter().any(|d| d.code == "D_SQUARED_NONZERO"));
}

#[test]
fn e1_single_bar() {
    let c = e1(QF);
    let basis = svd(&c).unwrap();
    basis.verify(&c).unwrap();
    assert_eq!((basis.b(), basis.k()), (0, 1));
    assert_eq!(basis.bar_lengths, [qi(1)]);
    let r = barcode_of(&c).unwrap();
    assert_eq!((r.n, r.b, r.k), (2, 0, 1));
    assert_eq!((r.boundary_depth.clone(), r.beta_total.clone()), (qi(1), qi(1)));
    assert_eq!(r.barcode.finite().iter().next().unwrap().0, &(qi(0), qi(1)));
    assert_eq!(torsion_decomposition(&c).unwrap(), [qi(1)]);
}

#[test]
fn zero_differential() {
    let c = FilteredComplex::new(
        QF,
        Grading::Z,
        vec![gen("a", 0, qi(0)), gen("b", 0, qi(1)), gen("c", 1, qi(2))],
        vec![],
    )
    .unwrap();
    let basis = svd(&c).unwrap();
    basis.verify(&c).unwrap();
    assert_eq!((basis.b(), basis.k()), (3, 0));
    assert_eq!(barcode_of(&c).unwrap().boundary_depth, qi(0));
    assert!(torsion_decomposition(&c).unwrap().is_empty());
}

/// Two pairs with non-monomial coefficients, hidden by a basis change.
#[test]
fn four_generators_two_bars() {
    let c = FilteredComplex::new(
        QF,
        Grading::Z,
        vec![gen("z1", 1, qi(1)), gen("z2", 1, qi(3)), gen("e1", 0, qi(1)), gen("e2", 0, qi(1))],
        vec![
            (0, 2, series_q(QF, &[(1, 1, 1, 2), (3, 1, 1, 1)])),
            (1, 3, series_q(QF, &[(2, 1, 2, 1), (1, 1, 5, 2)])),
        ],
    )
    .unwrap();
    let p = vec![
        vec![NovikovSeries::one(QF), NovikovSeries::zero(QF), NovikovSeries::zero(QF), NovikovSeries::zero(QF)],
        vec![mono(1, qi(2)), NovikovSeries::one(QF), NovikovSeries::zero(QF), NovikovSeries::zero(QF)],
        vec![NovikovSeries::zero(QF), NovikovSeries::zero(QF), NovikovSeries::one(QF), NovikovSeries::zero(QF)],
        vec![NovikovSeries::zero(QF), NovikovSeries::zero(QF), mono(-1, qi(0)), NovikovSeries::from_i64(2, QF)],
    ];
    let c2 = c.change_basis(&p).unwrap();
    for cx in [&c, &c2] {
        let basis = svd(cx).unwrap();
        basis.verify(cx).unwrap();
        assert_eq!(basis.bar_lengths, [q(1, 2), qi(4)]);
        assert_eq!(torsion_decomposition(cx).unwrap(), [q(1, 2), qi(4)]);
    }
}

#[test]
fn spectral_invariant_examples() {
    let c = FilteredComplex::new(QF, Grading::Z, vec![gen("x", 0, q(3, 2))], vec![]).unwrap();
    assert_eq!(spectral_invariant(&c, &[NovikovSeries::one(QF)]).unwrap(), q(3, 2));
    assert_eq!(spectral_invariant(&c, &[mono(1, qi(2))]).unwrap(), q(-1, 2));
    // x (3) -> y (0) and a cycle w (1): the class of w + y has representative
    // with removable top term y only when y is a boundary.
    let c = FilteredComplex::new(
        QF,
        Grading::Z,
        vec![gen("x", 1, qi(3)), gen("y", 0, qi(2)), gen("w", 0, qi(1))],
        vec![(0, 1, NovikovSeries::one(QF))],
    )
    .unwrap();
    let chain = vec![NovikovSeries::zero(QF), NovikovSeries::one(QF), NovikovSeries::one(QF)];
    assert_eq!(c.filtration_level(&chain).unwrap(), Some(qi(2)));
    assert_eq!(spectral_invariant(&c, &chain).unwrap(), qi(1));
    let y = vec![NovikovSeries::zero(QF), NovikovSeries::one(QF), NovikovSeries::zero(QF)];
    assert_eq!(spectral_invariant(&c, &y).unwrap_err(), Error::NullClass);
    let x = c.basis_vector(0);
    assert_eq!(spectral_invariant(&c, &x).unwrap_err(), Error::NotACycle);
    let r = duality_check(&c, &chain).unwrap();
    assert!(r.equal, "{r:?}");
}

#[test]
fn dual_complex_adjointness() {
    let c = e1(QF);
    let d = dual_pairing(&c);
    assert!(d.validate().is_empty());
    let a = vec![NovikovSeries::from_i64(1, QF), NovikovSeries::from_i64(2, QF)];
    let b = vec![NovikovSeries::from_i64(3, QF), NovikovSeries::from_i64(4, QF)];
    assert_eq!(pairing(&a, &b).unwrap(), NovikovSeries::from_i64(11, QF));
    let lhs = pairing(&c.apply(&a).unwrap(), &b).unwrap();
    let rhs = pairing(&a, &d.apply(&b).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn reduction_mod_p() {
    let c = e1(CoefficientField::Integers);
    let r = c.reduce_mod_p(7).unwrap();
    assert_eq!(svd(&r).unwrap().bar_lengths, [qi(1)]);
    let half = FilteredComplex::new(
        QF,
        Grading::Z,
        vec![gen("x", 1, qi(1)), gen("y", 0, qi(0))],
        vec![(0, 1, series_q(QF, &[(1, 2, 0, 1)]))],
    )
    .unwrap();
    let err = half.reduce_mod_p(2).unwrap_err();
    assert_eq!(err.code(), "DENOMINATOR_DIVISIBLE_BY_P");
    assert!(format!("{err}").contains("x -> y"));
}
