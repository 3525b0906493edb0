//! Small worked inputs shared by the self-test, the CLI tests and the
//! bundled data files.

use num_bigint::BigInt;
use num_rational::BigRational;

use novp_core::filtered::{FilteredComplex, Generator, Grading};
use novp_core::qalg::GradedAlgebra;
use novp_core::{CoefficientField, NovikovSeries};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `x` at action 1, `y` at action 0, `dx = y`: a single bar `[0, 1)`.
pub fn e1(field: CoefficientField) -> FilteredComplex {
    FilteredComplex::new(
        field,
        Grading::Z,
        vec![Generator::new("x", 1, int(1)), Generator::new("y", 0, int(0))],
        vec![(0, 1, NovikovSeries::one(field))],
    )
    .expect("E1 is a strict complex")
}

/// The sphere model: basis `{M, q}` with unit `M` and `q*q = T·M`.
pub fn sphere() -> GradedAlgebra {
    let f = CoefficientField::Rationals;
    let one = NovikovSeries::one(f);
    let zero = NovikovSeries::zero(f);
    GradedAlgebra::new(
        f,
        vec![("M".into(), 2), ("q".into(), 0)],
        0,
        vec![
            (0, 0, vec![one.clone(), zero.clone()]),
            (0, 1, vec![zero.clone(), one.clone()]),
            (1, 1, vec![NovikovSeries::t_power(int(1), f), zero]),
        ],
    )
    .expect("the sphere table is commutative and associative")
}

/// `e_± = ½M ± ½T^{−1/2}q` in the sphere model.
pub fn sphere_idempotent(sign: i64) -> Vec<NovikovSeries> {
    let f = CoefficientField::Rationals;
    let half = f.from_rational(&BigRational::new(1.into(), 2.into())).expect("1/2 in Q");
    let half_signed = f
        .from_rational(&BigRational::new(sign.into(), 2.into()))
        .expect("±1/2 in Q");
    vec![
        NovikovSeries::constant(half, f),
        NovikovSeries::monomial(half_signed, BigRational::new((-1).into(), 2.into()), f),
    ]
}
