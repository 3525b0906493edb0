//! Seeded random inputs for the property harnesses.
//!
//! Complexes are built as sums of two-term pairs `dζ = (c T^e + c' T^e') η`
//! and lone cycles, shuffled, then hidden behind a random unitriangular
//! filtration-preserving change of basis. Exponents and actions are
//! multiples of `1/2` or `1/3` (or integers).

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use novp_core::barcode::Barcode;
use novp_core::filtered::{FilteredComplex, Generator, Grading};
use novp_core::{CoefficientField, NovikovSeries, Scalar};

/// Independent stream per `(seed, suite, trial)`, so results do not depend
/// on how trials are sharded.
pub fn trial_rng(seed: u64, suite: &str, trial: u64) -> ChaCha8Rng {
    let salt = suite
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt);
    rng.set_stream(trial);
    rng
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The fields the harnesses sample from.
pub const FIELDS: [CoefficientField; 4] = [
    CoefficientField::Rationals,
    CoefficientField::PrimeField(2),
    CoefficientField::PrimeField(3),
    CoefficientField::PrimeField(5),
];

pub fn random_field<R: Rng>(rng: &mut R, fields: &[CoefficientField]) -> CoefficientField {
    *fields.choose(rng).expect("nonempty field list")
}

/// A nonzero scalar; small fractions over `Q`, small integers over `Z`.
pub fn random_scalar<R: Rng>(rng: &mut R, field: CoefficientField) -> Scalar {
    match field {
        CoefficientField::PrimeField(p) => Scalar::modular(rng.gen_range(1..p), p),
        CoefficientField::Integers => {
            let a: i64 = rng.gen_range(1..=5);
            Scalar::rational(if rng.gen() { a } else { -a }, 1)
        }
        CoefficientField::Rationals => {
            let a: i64 = rng.gen_range(1..=5);
            Scalar::rational(if rng.gen() { a } else { -a }, rng.gen_range(1..=4))
        }
    }
}

/// Common denominator for one complex's exponents.
pub fn random_denominator<R: Rng>(rng: &mut R) -> i64 {
    *[1, 2, 3].choose(rng).expect("nonempty")
}

/// An exact series with `terms` nonzero terms at distinct exponents `k/den`,
/// `lo ≤ k ≤ hi`.
pub fn random_series<R: Rng>(rng: &mut R, field: CoefficientField, den: i64, terms: usize, lo: i64, hi: i64) -> NovikovSeries {
    let span = (hi - lo + 1) as usize;
    let ks = rand::seq::index::sample(rng, span, terms.min(span)).into_vec();
    let terms: Vec<_> = ks
        .into_iter()
        .map(|k| (rat(lo + k as i64, den), random_scalar(rng, field)))
        .collect();
    NovikovSeries::new(field, terms, None).expect("valid series")
}

/// A strict complex of rank `1..=max_rank`.
pub fn random_complex<R: Rng>(rng: &mut R, field: CoefficientField, max_rank: usize) -> FilteredComplex {
    let den = random_denominator(rng);
    let n = rng.gen_range(1..=max_rank.max(1));
    let pairs = rng.gen_range(0..=n / 2);
    // (degree, action) per generator, and d entries (from, to, coeff)
    let mut gens: Vec<(i64, BigRational)> = Vec::with_capacity(n);
    let mut entries = Vec::new();
    for _ in 0..pairs {
        let deg = rng.gen_range(0..=2);
        let a_eta = rat(rng.gen_range(-6..=6), den);
        let e = rng.gen_range(0..=4);
        let len = rat(rng.gen_range(1..=6), den);
        let a_zeta = &a_eta - rat(e, den) + len;
        let mut coeff = NovikovSeries::monomial(random_scalar(rng, field), rat(e, den), field);
        if rng.gen_bool(0.5) {
            let e2 = e + rng.gen_range(1..=3);
            coeff = &coeff + &NovikovSeries::monomial(random_scalar(rng, field), rat(e2, den), field);
        }
        entries.push((gens.len(), gens.len() + 1, coeff));
        gens.push((deg + 1, a_zeta));
        gens.push((deg, a_eta));
    }
    while gens.len() < n {
        gens.push((rng.gen_range(0..=3), rat(rng.gen_range(-6..=6), den)));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut position = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let generators = order
        .iter()
        .enumerate()
        .map(|(k, &old)| Generator::new(format!("g{k}"), gens[old].0, gens[old].1.clone()))
        .collect();
    let entries = entries.into_iter().map(|(f, t, c)| (position[f], position[t], c));
    let c = FilteredComplex::new(field, Grading::Z, generators, entries).expect("pairs are strict");
    let p = random_basis_change(rng, &c);
    c.change_basis(&p).expect("filtration-preserving change")
}

/// Columns of a unit upper triangular matrix whose off-diagonal entries
/// never raise filtration and never mix degrees.
pub fn random_basis_change<R: Rng>(rng: &mut R, c: &FilteredComplex) -> Vec<Vec<NovikovSeries>> {
    let field = c.field();
    let g = c.generators();
    let n = g.len();
    let den = c
        .generators()
        .iter()
        .fold(BigInt::from(1), |l, x| num_integer::Integer::lcm(&l, x.action.denom()));
    let den: i64 = den.try_into().unwrap_or(6);
    let mut p = vec![vec![NovikovSeries::zero(field); n]; n];
    for j in 0..n {
        p[j][j] = NovikovSeries::one(field);
        for i in 0..j {
            if g[i].degree != g[j].degree || !rng.gen_bool(0.5) {
                continue;
            }
            // ν(p_ij) ≥ A(x_i) − A(x_j)
            let floor = &g[i].action - &g[j].action;
            let e = floor + rat(rng.gen_range(0..=2), den);
            p[j][i] = NovikovSeries::monomial(random_scalar(rng, field), e, field);
        }
    }
    p
}

/// A chain with random monomial coordinates, about half of them zero.
pub fn random_chain<R: Rng>(rng: &mut R, c: &FilteredComplex) -> Vec<NovikovSeries> {
    let field = c.field();
    (0..c.rank())
        .map(|_| {
            if rng.gen_bool(0.5) {
                NovikovSeries::monomial(random_scalar(rng, field), rat(rng.gen_range(-6..=6), 2), field)
            } else {
                NovikovSeries::zero(field)
            }
        })
        .collect()
}

/// Shifts each action by a multiple of `eps/4` in `[−eps, eps]`, retrying
/// until the differential stays strict. `None` if no attempt succeeds.
pub fn perturb_actions<R: Rng>(rng: &mut R, c: &FilteredComplex, eps: &BigRational) -> Option<FilteredComplex> {
    for _ in 0..32 {
        let actions: Vec<BigRational> = c
            .actions()
            .into_iter()
            .map(|a| a + eps * rat(rng.gen_range(-4..=4), 4))
            .collect();
        let moved = c.with_actions_raw(&actions);
        if moved.is_strict() {
            return Some(moved);
        }
    }
    None
}

/// Up to `max_bars` finite bars with half-integer endpoints, starting in
/// `[−4, 3]` with length at most 3, plus
/// `infinite` half-infinite bars.
pub fn random_barcode<R: Rng>(rng: &mut R, max_bars: usize, infinite: usize) -> Barcode {
    let mut b = Barcode::new();
    for _ in 0..rng.gen_range(0..=max_bars) {
        let a = rng.gen_range(-8..=6);
        let len = rng.gen_range(1..=6);
        b.add_finite(rat(a, 2), rat(a + len, 2), 1);
    }
    for _ in 0..infinite {
        b.add_infinite(rat(rng.gen_range(-8..=8), 2), 1);
    }
    b
}

#[cfg(test)]
mod tests {
    use num_traits::Signed;

    use super::*;

    #[test]
    fn complexes_are_valid_and_deterministic() {
        for trial in 0..50 {
            let mut rng = trial_rng(1, "t", trial);
            let field = random_field(&mut rng, &FIELDS);
            let c = random_complex(&mut rng, field, 8);
            assert!(c.validate().is_empty());
            assert!(c.rank() <= 8);
            let mut again = trial_rng(1, "t", trial);
            let field2 = random_field(&mut again, &FIELDS);
            assert_eq!(random_complex(&mut again, field2, 8), c);
        }
    }

    #[test]
    fn streams_differ() {
        let a: u64 = trial_rng(1, "a", 0).gen();
        assert_ne!(a, trial_rng(1, "b", 0).gen::<u64>());
        assert_ne!(a, trial_rng(1, "a", 1).gen::<u64>());
        assert_ne!(a, trial_rng(2, "a", 0).gen::<u64>());
    }

    #[test]
    fn perturbations_stay_close() {
        let eps = rat(1, 2);
        for trial in 0..20 {
            let mut rng = trial_rng(3, "p", trial);
            let c = random_complex(&mut rng, CoefficientField::Rationals, 6);
            if let Some(d) = perturb_actions(&mut rng, &c, &eps) {
                for (x, y) in c.actions().iter().zip(d.actions()) {
                    assert!((x - y).abs() <= eps);
                }
            }
        }
    }
}
