//! Exact elements `t^s · n(t)/d(t)` of the Laurent field `k(t)`, used as the
//! working field for linear algebra over Novikov series whose exponents lie
//! in `(1/L)·Z` (with `t = T^{1/L}`).
//!
//! Normal form: `n(0) ≠ 0`, `d(0) = 1`, `gcd(n, d) = 1`. The `t`-adic
//! valuation is then `s`, and the residue (leading coefficient) is `n(0)`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::kpoly::KPoly;
use crate::scalar::{CoefficientField, Scalar};
use crate::series::NovikovSeries;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    shift: i64,
    num: KPoly,
    den: KPoly,
}

impl RatFunc {
    pub fn zero(field: CoefficientField) -> Self {
        RatFunc {
            shift: 0,
            num: KPoly::zero(field),
            den: KPoly::one(field),
        }
    }

    pub fn one(field: CoefficientField) -> Self {
        Self::monomial(field.one(), 0, field)
    }

    pub fn monomial(c: Scalar, e: i64, field: CoefficientField) -> Self {
        Self::from_parts(e, KPoly::constant(c, field), KPoly::one(field))
    }

    pub fn constant(c: Scalar, field: CoefficientField) -> Self {
        Self::monomial(c, 0, field)
    }

    /// `t^shift · num / den`, normalized.
    pub fn from_parts(shift: i64, num: KPoly, den: KPoly) -> Self {
        let field = num.field();
        if num.is_zero() {
            return Self::zero(field);
        }
        assert!(!den.is_zero(), "zero denominator");
        let (ln, ld) = (num.low_order(), den.low_order());
        let mut num = num.unshift(ln);
        let mut den = den.unshift(ld);
        let shift = shift + ln as i64 - ld as i64;
        let g = num.gcd(&den);
        if g.degree().unwrap_or(0) > 0 {
            num = num.divrem(&g).0;
            den = den.divrem(&g).0;
        }
        let d0 = den.coeff(0).inv().expect("den(0) nonzero");
        RatFunc {
            shift,
            num: num.scale(&d0),
            den: den.scale(&d0),
        }
    }

    /// Embeds an exact Laurent polynomial in `T` whose exponents are all
    /// multiples of `1/l`. Panics if an exponent is not.
    pub fn from_series(s: &NovikovSeries, l: &BigInt) -> Self {
        let field = s.field().fraction_field();
        let Some((e0, _)) = s.leading_term() else {
            return Self::zero(field);
        };
        let scaled = |e: &BigRational| -> i64 {
            let v = e * BigRational::from_integer(l.clone());
            assert!(v.is_integer(), "exponent {e} not a multiple of 1/{l}");
            v.to_integer().to_i64().expect("exponent range")
        };
        let base = scaled(e0);
        let mut coeffs: Vec<Scalar> = Vec::new();
        for (e, c) in s.terms() {
            let i = (scaled(e) - base) as usize;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, field.zero());
            }
            coeffs[i] = c.clone();
        }
        Self::from_parts(base, KPoly::new(field, coeffs), KPoly::one(field))
    }

    pub fn field(&self) -> CoefficientField {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `t`-adic valuation; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.shift)
    }

    /// Leading coefficient `n(0)`.
    pub fn residue(&self) -> Scalar {
        self.num.coeff(0)
    }

    pub fn num(&self) -> &KPoly {
        &self.num
    }

    pub fn den(&self) -> &KPoly {
        &self.den
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_laurent(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let m = self.shift.min(o.shift);
        let a = self.num.shift((self.shift - m) as usize);
        let b = o.num.shift((o.shift - m) as usize);
        if self.den == o.den {
            return Self::from_parts(m, a.add(&b), self.den.clone());
        }
        let num = a.mul(&o.den).add(&b.mul(&self.den));
        Self::from_parts(m, num, self.den.mul(&o.den))
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            shift: self.shift,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field());
        }
        if self.is_laurent() && o.is_laurent() {
            let num = self.num.mul(&o.num);
            return RatFunc {
                shift: self.shift + o.shift,
                num,
                den: self.den.clone(),
            };
        }
        Self::from_parts(self.shift + o.shift, self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::from_parts(-self.shift, self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.field());
        }
        RatFunc {
            shift: self.shift,
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Multiplies by `t^e`.
    pub fn shift_by(&self, e: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        RatFunc {
            shift: self.shift + e,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    /// The `t`-adic expansion as a Novikov series in `T = t^L`, exact when
    /// the denominator is trivial and otherwise truncated at `t`-exponent
    /// `precision`.
    pub fn to_series(&self, l: &BigInt, precision: i64, field: CoefficientField) -> NovikovSeries {
        let lq = BigRational::from_integer(l.clone());
        let exp = |i: i64| BigRational::from_integer(BigInt::from(i)) / &lq;
        if self.is_zero() {
            return NovikovSeries::zero(field);
        }
        let terms: Vec<(BigRational, Scalar)>;
        let truncation;
        if self.is_laurent() {
            terms = self
                .num
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (exp(self.shift + i as i64), c.clone()))
                .collect();
            truncation = None;
        } else {
            let n = (precision - self.shift).max(0) as usize;
            let mut out = Vec::with_capacity(n);
            // Power series division; den(0) = 1.
            let mut rem: Vec<Scalar> = (0..n).map(|i| self.num.coeff(i)).collect();
            for i in 0..n {
                let c = rem[i].clone();
                if !c.is_zero() {
                    for j in 1..=self.den.degree().unwrap_or(0) {
                        if i + j < n {
                            rem[i + j] = &rem[i + j] - &(&c * &self.den.coeff(j));
                        }
                    }
                }
                out.push((exp(self.shift + i as i64), c));
            }
            terms = out;
            truncation = Some(exp(precision.max(self.shift)));
        }
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero());
        NovikovSeries::new(field, terms, truncation).expect("field consistent")
    }
}

/// Multiplies a vector by the lcm of its denominators, a unit with residue 1,
/// so every entry becomes a Laurent polynomial with unchanged valuation.
/// Returns the new vector and the multiplier.
pub fn clear_denominators(v: &[RatFunc], field: CoefficientField) -> (Vec<RatFunc>, KPoly) {
    let mut l = KPoly::one(field);
    for x in v {
        if !x.is_zero() && !x.is_laurent() {
            let g = l.gcd(x.den());
            l = l.mul(&x.den().divrem(&g).0);
        }
    }
    if l.degree() == Some(0) {
        return (v.to_vec(), l);
    }
    let l0 = l.coeff(0).inv().expect("unit constant");
    let l = l.scale(&l0);
    let m = RatFunc::from_parts(0, l.clone(), KPoly::one(field));
    (v.iter().map(|x| x.mul(&m)).collect(), l)
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero(CoefficientField::Rationals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{q, series_q};

    const QF: CoefficientField = CoefficientField::Rationals;

    #[test]
    fn normal_form_and_arithmetic() {
        let l = BigInt::from(2);
        let a = RatFunc::from_series(&series_q(QF, &[(1, 1, 1, 2), (1, 1, 1, 1)]), &l);
        assert_eq!(a.valuation(), Some(1));
        let b = RatFunc::from_series(&series_q(QF, &[(1, 1, 0, 1), (1, 1, 1, 2)]), &l);
        let c = a.div(&b).unwrap();
        // (t + t^2) / (1 + t) = t
        assert_eq!(c, RatFunc::monomial(QF.one(), 1, QF));
        let one = RatFunc::one(QF);
        let d = one.div(&b).unwrap();
        assert!(!d.is_laurent());
        assert_eq!(d.mul(&b), one);
        let s = d.to_series(&l, 4, QF);
        assert_eq!(
            s,
            series_q(QF, &[(1, 1, 0, 1), (-1, 1, 1, 2), (1, 1, 1, 1), (-1, 1, 3, 2)])
                .with_truncation(Some(q(2, 1)))
        );
    }

    #[test]
    fn clearing_denominators_keeps_valuation() {
        let l = BigInt::from(1);
        let b = RatFunc::from_series(&series_q(QF, &[(1, 1, 0, 1), (1, 1, 1, 1)]), &l);
        let v = [RatFunc::one(QF).div(&b).unwrap(), RatFunc::monomial(QF.one(), 2, QF)];
        let (w, m) = clear_denominators(&v, QF);
        assert!(w.iter().all(RatFunc::is_laurent));
        assert_eq!(w[0].valuation(), Some(0));
        assert_eq!(w[1].valuation(), Some(2));
        assert!(m.coeff(0).is_one());
    }
}
