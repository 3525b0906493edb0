//! Universal Novikov series `Σ a_i T^{λ_i}` with rational exponents.
//!
//! A series is either exact (a finite sum) or truncated at some `τ`: then
//! only the terms with exponent `< τ` are known. Arithmetic propagates the
//! truncation pessimistically and never reports a term at or above it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{prime_divisors, CoefficientField, Scalar};

/// `ν(s)`: the leading exponent, or `+∞` for the zero series.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(BigRational),
    Infinity,
}

impl Valuation {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NovikovSeries {
    field: CoefficientField,
    terms: Vec<(BigRational, Scalar)>,
    truncation: Option<BigRational>,
}

/// Result of [`NovikovSeries::divide`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Division {
    pub quotient: NovikovSeries,
    /// Primes that had to be inverted: those dividing the leading
    /// coefficient of the divisor, plus any already present in the
    /// denominators of the operands.
    pub prime_support: BTreeSet<BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Neg,
    Mul,
}

fn min_opt(a: Option<BigRational>, b: Option<BigRational>) -> Option<BigRational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x <= y { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}

impl NovikovSeries {
    /// Builds a series, sorting and merging terms, dropping zero coefficients
    /// and anything at or above the truncation.
    pub fn new(
        field: CoefficientField,
        terms: impl IntoIterator<Item = (BigRational, Scalar)>,
        truncation: Option<BigRational>,
    ) -> Result<Self> {
        let mut merged: BTreeMap<BigRational, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            if !field.contains(&c) {
                return Err(Error::FieldMismatch {
                    left: field.tag(),
                    right: c.field().tag(),
                });
            }
            match merged.get_mut(&e) {
                Some(acc) => *acc = &*acc + &c,
                None => {
                    merged.insert(e, c);
                }
            }
        }
        Ok(Self::from_sorted(field, merged.into_iter().collect(), truncation))
    }

    /// Internal constructor: `terms` sorted by exponent with distinct
    /// exponents; zeros and terms beyond the truncation are removed here.
    pub(crate) fn from_sorted(
        field: CoefficientField,
        mut terms: Vec<(BigRational, Scalar)>,
        truncation: Option<BigRational>,
    ) -> Self {
        terms.retain(|(e, c)| !c.is_zero() && truncation.as_ref().is_none_or(|t| e < t));
        NovikovSeries {
            field,
            terms,
            truncation,
        }
    }

    pub fn zero(field: CoefficientField) -> Self {
        NovikovSeries {
            field,
            terms: Vec::new(),
            truncation: None,
        }
    }

    pub fn one(field: CoefficientField) -> Self {
        Self::monomial(field.one(), BigRational::zero(), field)
    }

    pub fn constant(c: Scalar, field: CoefficientField) -> Self {
        Self::monomial(c, BigRational::zero(), field)
    }

    pub fn from_i64(n: i64, field: CoefficientField) -> Self {
        Self::constant(field.from_i64(n), field)
    }

    /// `c·T^e`.
    pub fn monomial(c: Scalar, e: BigRational, field: CoefficientField) -> Self {
        Self::from_sorted(field, alloc::vec![(e, c)], None)
    }

    /// `T^e` with unit coefficient.
    pub fn t_power(e: BigRational, field: CoefficientField) -> Self {
        Self::monomial(field.one(), e, field)
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn terms(&self) -> &[(BigRational, Scalar)] {
        &self.terms
    }

    pub fn truncation(&self) -> Option<&BigRational> {
        self.truncation.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.truncation.is_none()
    }

    /// True when no term is stored. A truncated series can be "zero as far
    /// as known" without being the zero series.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The zero series, exactly.
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.truncation.is_none()
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Finite(e.clone()),
            None => Valuation::Infinity,
        }
    }

    /// A lower bound for the valuation of the true series: the leading
    /// exponent, or the truncation when nothing is known.
    pub fn valuation_lower_bound(&self) -> Valuation {
        match (self.terms.first(), &self.truncation) {
            (Some((e, _)), _) => Valuation::Finite(e.clone()),
            (None, Some(t)) => Valuation::Finite(t.clone()),
            (None, None) => Valuation::Infinity,
        }
    }

    pub fn leading_term(&self) -> Option<(&BigRational, &Scalar)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn coefficient(&self, e: &BigRational) -> Scalar {
        self.terms
            .binary_search_by(|(x, _)| x.cmp(e))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.field.zero())
    }

    pub fn with_truncation(mut self, truncation: Option<BigRational>) -> Self {
        let t = min_opt(self.truncation.take(), truncation);
        Self::from_sorted(self.field, self.terms, t)
    }

    /// Reinterprets the coefficients over another field with the same
    /// elements (used to view `Z`-series inside `Q`).
    pub fn retag(mut self, field: CoefficientField) -> Self {
        self.field = field;
        self
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field.fraction_field() == other.field.fraction_field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.tag(),
                right: other.field.tag(),
            })
        }
    }

    fn joint_field(&self, other: &Self) -> CoefficientField {
        if self.field == other.field {
            self.field
        } else {
            self.field.fraction_field()
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let truncation = min_opt(self.truncation.clone(), other.truncation.clone());
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    out.push((self.terms[i].0.clone(), c));
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(Self::from_sorted(self.joint_field(other), out, truncation))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        NovikovSeries {
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            truncation: self.truncation.clone(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let field = self.joint_field(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Self::zero(field));
        }
        let mut truncation = None;
        if let Some(ta) = &self.truncation {
            if let Valuation::Finite(vb) = other.valuation_lower_bound() {
                truncation = min_opt(truncation, Some(ta + vb));
            }
        }
        if let Some(tb) = &other.truncation {
            if let Valuation::Finite(va) = self.valuation_lower_bound() {
                truncation = min_opt(truncation, Some(tb + va));
            }
        }
        let mut acc: BTreeMap<BigRational, Scalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if truncation.as_ref().is_some_and(|t| &e >= t) {
                    break;
                }
                let c = ca * cb;
                match acc.get_mut(&e) {
                    Some(x) => *x = &*x + &c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        Ok(Self::from_sorted(field, acc.into_iter().collect(), truncation))
    }

    /// Ring operation by tag; `Neg` ignores `b`.
    pub fn arith(op: ArithOp, a: &Self, b: &Self) -> Result<Self> {
        match op {
            ArithOp::Add => a.checked_add(b),
            ArithOp::Neg => Ok(a.neg_ref()),
            ArithOp::Mul => a.checked_mul(b),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return NovikovSeries {
                field: self.field,
                terms: Vec::new(),
                truncation: self.truncation.clone(),
            };
        }
        NovikovSeries {
            field: self.field,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
            truncation: self.truncation.clone(),
        }
    }

    /// Multiplies by `T^s`.
    pub fn shift(&self, s: &BigRational) -> Self {
        NovikovSeries {
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (e + s, c.clone())).collect(),
            truncation: self.truncation.as_ref().map(|t| t + s),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.field);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Quotient `A/B` computed by repeated leading-term cancellation.
    ///
    /// The returned quotient `g` satisfies
    /// `ν(A − g·B) ≥ ν(A) − ν(B) + order` and is exact when the
    /// cancellation terminates. Integer inputs produce a rational quotient.
    pub fn divide(a: &Self, b: &Self, order: &BigRational) -> Result<Division> {
        Self::divide_impl(a, b, order, false)
    }

    /// As [`divide`](Self::divide) but insists on an integer-coefficient
    /// quotient, so the divisor's leading coefficient must be `±1`.
    pub fn divide_integral(a: &Self, b: &Self, order: &BigRational) -> Result<Division> {
        Self::divide_impl(a, b, order, true)
    }

    fn divide_impl(a: &Self, b: &Self, order: &BigRational, integral: bool) -> Result<Division> {
        a.check_field(b)?;
        let (vb, b0) = match b.leading_term() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let base = a.joint_field(b);
        let mut prime_support = BTreeSet::new();
        let out_field = if base == CoefficientField::Integers {
            if integral && !(b0.is_one() || (-&b0).is_one()) {
                return Err(Error::NonunitLeadingCoeff {
                    coeff: format!("{b0}"),
                });
            }
            if integral {
                CoefficientField::Integers
            } else {
                CoefficientField::Rationals
            }
        } else {
            base
        };
        if let Scalar::Rational(q) = &b0 {
            prime_support.extend(prime_divisors(q.numer()));
        }
        for s in [a, b] {
            for (_, c) in &s.terms {
                if let Scalar::Rational(q) = c {
                    prime_support.extend(prime_divisors(q.denom()));
                }
            }
        }
        let Some((va, _)) = a.leading_term() else {
            let t = a.truncation.as_ref().map(|t| t - &vb);
            return Ok(Division {
                quotient: Self::from_sorted(out_field, Vec::new(), t),
                prime_support,
            });
        };
        let va = va.clone();
        let b0_inv = b0.inv().ok_or(Error::DivisionByZero)?;
        let (a, b) = (a.clone().retag(out_field), b.clone().retag(out_field));

        // Residual target: ν(A) + max(order, order − ν(B)); the quotient is
        // then known below target − ν(B), further limited by operand precision.
        let slack = if vb.is_negative() { order - &vb } else { order.clone() };
        let mut q_trunc = &va + &slack - &vb;
        if let Some(ta) = &a.truncation {
            q_trunc = q_trunc.min(ta - &vb);
        }
        if let Some(tb) = &b.truncation {
            q_trunc = q_trunc.min(&va + tb - &vb - &vb);
        }
        let target = &q_trunc + &vb;

        let mut quotient: Vec<(BigRational, Scalar)> = Vec::new();
        let mut residual = a;
        while let Some((e, c)) = residual.leading_term() {
            if e >= &target {
                break;
            }
            let qe = e - &vb;
            let qc = c * &b0_inv;
            let step = b.shift(&qe).scale(&qc);
            residual = residual.checked_sub(&step)?;
            quotient.push((qe, qc));
        }
        let exact = residual.is_exact_zero();
        let truncation = if exact { None } else { Some(q_trunc) };
        Ok(Division {
            quotient: Self::from_sorted(out_field, quotient, truncation),
            prime_support,
        })
    }

    /// Coefficientwise reduction `[s]_p`.
    pub fn reduce_mod_p(&self, p: u64) -> Result<Self> {
        let field = CoefficientField::prime_field(p)?;
        if let CoefficientField::PrimeField(q) = self.field {
            if q == p {
                return Ok(self.clone());
            }
            return Err(Error::FieldMismatch {
                left: self.field.tag(),
                right: field.tag(),
            });
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let r = c.reduce_mod_p(p).ok_or_else(|| Error::DenominatorDivisibleByP {
                p,
                location: format!("exponent {e}"),
            })?;
            terms.push((e.clone(), r));
        }
        Ok(Self::from_sorted(field, terms, self.truncation.clone()))
    }

    /// `λ ↦ c·λ` on every exponent and on the truncation.
    pub fn rescale_exponents(&self, c: &BigRational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::NonpositiveFactor { factor: c.clone() });
        }
        Ok(NovikovSeries {
            field: self.field,
            terms: self.terms.iter().map(|(e, x)| (e * c, x.clone())).collect(),
            truncation: self.truncation.as_ref().map(|t| t * c),
        })
    }

    /// Least common multiple of the exponent denominators (and of the
    /// truncation's), at least 1.
    pub fn exponent_denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        let mut l = BigInt::one();
        for (e, _) in &self.terms {
            l = l.lcm(e.denom());
        }
        if let Some(t) = &self.truncation {
            l = l.lcm(t.denom());
        }
        l
    }

    /// True when the two series agree on every exponent below `bound`.
    pub fn agrees_below(&self, other: &Self, bound: &BigRational) -> bool {
        let cut = |s: &Self| -> Vec<(BigRational, Scalar)> {
            s.terms.iter().filter(|(e, _)| e < bound).cloned().collect()
        };
        cut(self) == cut(other)
    }
}

impl fmt::Display for NovikovSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*T^{e}")?;
        }
        if let Some(t) = &self.truncation {
            write!(f, " | O(T^{t})")?;
        }
        Ok(())
    }
}

impl Add for &NovikovSeries {
    type Output = NovikovSeries;
    fn add(self, rhs: &NovikovSeries) -> NovikovSeries {
        self.checked_add(rhs).expect("series over different fields")
    }
}

impl Sub for &NovikovSeries {
    type Output = NovikovSeries;
    fn sub(self, rhs: &NovikovSeries) -> NovikovSeries {
        self.checked_sub(rhs).expect("series over different fields")
    }
}

impl Mul for &NovikovSeries {
    type Output = NovikovSeries;
    fn mul(self, rhs: &NovikovSeries) -> NovikovSeries {
        self.checked_mul(rhs).expect("series over different fields")
    }
}

impl Neg for &NovikovSeries {
    type Output = NovikovSeries;
    fn neg(self) -> NovikovSeries {
        self.neg_ref()
    }
}

impl Neg for NovikovSeries {
    type Output = NovikovSeries;
    fn neg(self) -> NovikovSeries {
        self.neg_ref()
    }
}

/// Convenience for `a/b` as a rational.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Builds a series from `(coeff_num, coeff_den, exp_num, exp_den)` tuples.
/// Meant for tests and examples; panics on malformed input.
pub fn series_q(field: CoefficientField, terms: &[(i64, i64, i64, i64)]) -> NovikovSeries {
    let terms = terms.iter().map(|&(a, b, e, f)| {
        let c = field
            .from_rational(&q(a, b))
            .expect("coefficient not representable");
        (q(e, f), c)
    });
    NovikovSeries::new(field, terms, None).expect("valid series")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const QF: CoefficientField = CoefficientField::Rationals;
    const ZF: CoefficientField = CoefficientField::Integers;

    fn s(terms: &[(i64, i64)]) -> NovikovSeries {
        series_q(QF, &terms.iter().map(|&(c, e)| (c, 1, e, 1)).collect::<Vec<_>>())
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(NovikovSeries::zero(QF).valuation(), Valuation::Infinity);
        let a = series_q(QF, &[(3, 1, 1, 2), (5, 1, 2, 1)]);
        assert_eq!(a.valuation(), Valuation::Finite(q(1, 2)));
        let b = &NovikovSeries::t_power(qi(-2), QF) * &s(&[(1, 0), (1, 1)]);
        assert_eq!(b.valuation(), Valuation::Finite(qi(-2)));
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&s(&[(1, 0), (1, 1)]) * &s(&[(1, 0), (-1, 1)]), s(&[(1, 0), (-1, 2)]));
        let a = s(&[(3, 0), (-2, 5)]);
        assert!((&a + &(-&a)).is_exact_zero());
        let f3 = CoefficientField::PrimeField(3);
        let x = series_q(f3, &[(2, 1, 0, 1), (1, 1, 1, 1)]);
        let y = series_q(f3, &[(2, 1, 0, 1), (2, 1, 1, 1)]);
        assert_eq!(&x * &y, series_q(f3, &[(1, 1, 0, 1), (2, 1, 2, 1)]));
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = NovikovSeries::one(QF);
        let b = NovikovSeries::one(CoefficientField::PrimeField(5));
        assert_eq!(a.checked_add(&b).unwrap_err().code(), "FIELD_MISMATCH");
    }

    #[test]
    fn truncation_propagates() {
        let a = s(&[(1, 0), (1, 1)]).with_truncation(Some(qi(2)));
        let b = s(&[(1, 1)]);
        let p = &a * &b;
        assert_eq!(p.truncation(), Some(&qi(3)));
        let sum = &a + &s(&[(1, 5)]);
        assert_eq!(sum.truncation(), Some(&qi(2)));
        assert_eq!(sum.terms().len(), 2);
        assert!((&a * &NovikovSeries::zero(QF)).is_exact_zero());
    }

    #[test]
    fn geometric_series() {
        let d = NovikovSeries::divide(&NovikovSeries::one(ZF), &s(&[(1, 0), (-1, 1)]).retag(ZF), &qi(3))
            .unwrap();
        assert_eq!(d.quotient.terms(), s(&[(1, 0), (1, 1), (1, 2)]).terms());
        assert_eq!(d.quotient.truncation(), Some(&qi(3)));
        assert!(d.prime_support.is_empty());
    }

    #[test]
    fn inverse_of_two_plus_t() {
        let d = NovikovSeries::divide(&NovikovSeries::one(ZF), &s(&[(2, 0), (1, 1)]).retag(ZF), &qi(3))
            .unwrap();
        let expect = series_q(QF, &[(1, 2, 0, 1), (-1, 4, 1, 1), (1, 8, 2, 1)]);
        assert_eq!(d.quotient.terms(), expect.terms());
        assert_eq!(d.prime_support.into_iter().collect::<Vec<_>>(), [BigInt::from(2)]);
        assert_eq!(
            NovikovSeries::divide_integral(&NovikovSeries::one(ZF), &s(&[(2, 0), (1, 1)]).retag(ZF), &qi(3))
                .unwrap_err()
                .code(),
            "NONUNIT_LEADING_COEFF"
        );
    }

    #[test]
    fn self_division_is_exact() {
        let t = NovikovSeries::t_power(q(1, 2), QF);
        let d = NovikovSeries::divide(&t, &t, &qi(1)).unwrap();
        assert_eq!(d.quotient, NovikovSeries::one(QF));
        assert_eq!(
            NovikovSeries::divide(&t, &NovikovSeries::zero(QF), &qi(1)).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn reduction_examples() {
        let a = series_q(QF, &[(1, 2, 0, 1), (-1, 4, 1, 1)]);
        let f3 = CoefficientField::PrimeField(3);
        assert_eq!(a.reduce_mod_p(3).unwrap(), series_q(f3, &[(2, 1, 0, 1), (2, 1, 1, 1)]));
        let err = series_q(QF, &[(1, 2, 0, 1)]).reduce_mod_p(2).unwrap_err();
        assert_eq!(err.code(), "DENOMINATOR_DIVISIBLE_BY_P");
        assert!(format!("{err}").contains("exponent 0"));
    }

    #[test]
    fn rescale_examples() {
        let t3 = NovikovSeries::t_power(qi(3), QF);
        assert_eq!(t3.rescale_exponents(&qi(2)).unwrap(), NovikovSeries::t_power(qi(6), QF));
        let x = series_q(QF, &[(1, 1, 0, 1), (1, 1, 1, 2)]);
        assert_eq!(x.rescale_exponents(&qi(1)).unwrap(), x);
        assert_eq!(x.rescale_exponents(&qi(4)).unwrap(), s(&[(1, 0), (1, 2)]));
        assert_eq!(x.rescale_exponents(&qi(0)).unwrap_err().code(), "NONPOSITIVE_FACTOR");
    }

    #[test]
    fn display_format() {
        let a = series_q(QF, &[(1, 2, 0, 1), (-1, 4, 1, 1)]).with_truncation(Some(qi(3)));
        assert_eq!(format!("{a}"), "1/2*T^0 + -1/4*T^1 | O(T^3)");
        assert_eq!(format!("{}", NovikovSeries::zero(QF)), "0");
    }

    fn arb_series(field: CoefficientField) -> impl Strategy<Value = NovikovSeries> {
        proptest::collection::vec((-6i64..7, 1i64..4, -4i64..9, 1i64..3), 0..5).prop_map(move |v| {
            let terms: Vec<_> = v
                .into_iter()
                .map(|(c, d, e, f)| match field {
                    CoefficientField::Integers => (c, 1, e, f),
                    _ => (c, d, e, f),
                })
                .collect();
            series_q(field, &terms)
        })
    }

    proptest! {
        #[test]
        fn ultrametric(a in arb_series(QF), b in arb_series(QF)) {
            let (va, vb) = (a.valuation(), b.valuation());
            let vs = (&a + &b).valuation();
            let m = va.clone().min(vb.clone());
            prop_assert!(vs >= m);
            if va != vb {
                prop_assert_eq!(vs, m);
            }
        }

        #[test]
        fn multiplicative(a in arb_series(QF), b in arb_series(QF)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let v = (&a * &b).valuation();
            let sum = a.valuation().finite().unwrap() + b.valuation().finite().unwrap();
            prop_assert_eq!(v, Valuation::Finite(sum));
        }

        #[test]
        fn division_sound(a in arb_series(ZF), b in arb_series(ZF), n in 0i64..6) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let order = qi(n);
            let d = NovikovSeries::divide(&a, &b, &order).unwrap();
            let r = &a.clone().retag(QF) - &(&d.quotient * &b.clone().retag(QF));
            let bound = a.valuation().finite().unwrap() - b.valuation().finite().unwrap() + &order;
            prop_assert!(r.valuation() >= Valuation::Finite(bound));
        }

        #[test]
        fn reduction_is_a_ring_map(a in arb_series(QF), b in arb_series(QF), pi in 0usize..3) {
            let p = [3u64, 5, 7][pi];
            let (ra, rb) = (a.reduce_mod_p(p), b.reduce_mod_p(p));
            if let (Ok(ra), Ok(rb)) = (ra, rb) {
                prop_assert_eq!((&a * &b).reduce_mod_p(p).unwrap(), &ra * &rb);
                prop_assert_eq!((&a + &b).reduce_mod_p(p).unwrap(), &ra + &rb);
            }
        }

        #[test]
        fn rescale_is_a_ring_map(a in arb_series(QF), b in arb_series(QF), c in 1i64..5, d in 1i64..4) {
            let c = q(c, d);
            let r = |s: &NovikovSeries| s.rescale_exponents(&c).unwrap();
            prop_assert_eq!(r(&(&a * &b)), &r(&a) * &r(&b));
            prop_assert_eq!(r(&(&a + &b)), &r(&a) + &r(&b));
            if let Valuation::Finite(v) = a.valuation() {
                prop_assert_eq!(r(&a).valuation(), Valuation::Finite(v * &c));
            }
        }
    }
}
