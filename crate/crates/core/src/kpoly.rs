//! Dense univariate polynomials over a coefficient field `k` (`Q` or `F_p`).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::{CoefficientField, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KPoly {
    field: CoefficientField,
    /// Constant term first, no trailing zeros.
    coeffs: Vec<Scalar>,
}

impl KPoly {
    pub fn new(field: CoefficientField, mut coeffs: Vec<Scalar>) -> Self {
        let field = field.fraction_field();
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        KPoly { field, coeffs }
    }

    pub fn zero(field: CoefficientField) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: CoefficientField) -> Self {
        Self::constant(field.one(), field)
    }

    pub fn constant(c: Scalar, field: CoefficientField) -> Self {
        Self::new(field, vec![c])
    }

    /// `c·x^n`.
    pub fn monomial(c: Scalar, n: usize, field: CoefficientField) -> Self {
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[n] = c;
        Self::new(field, coeffs)
    }

    pub fn x(field: CoefficientField) -> Self {
        Self::monomial(field.one(), 1, field)
    }

    pub fn from_i64s(field: CoefficientField, cs: &[i64]) -> Self {
        Self::new(field, cs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Multiplicity of the root `0`.
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect();
        Self::new(self.field, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::new(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Self::new(self.field, c)
    }

    /// Multiplies by `x^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.field.zero(); n];
        c.extend(self.coeffs.iter().cloned());
        Self::new(self.field, c)
    }

    /// Drops the factor `x^n` (the caller guarantees divisibility).
    pub fn unshift(&self, n: usize) -> Self {
        Self::new(self.field, self.coeffs.iter().skip(n).cloned().collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("polynomial division by zero");
        let inv = d.lc().inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&c * dc);
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(self.field, q), Self::new(self.field, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        match self.lc().inv() {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = core::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = core::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = core::mem::replace(&mut t1, t);
        }
        match r0.lc().inv() {
            Some(inv) => (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)),
            None => (r0, s0, t0),
        }
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.from_i64(i as i64))
            .collect();
        Self::new(self.field, c)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.field);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self^e mod m` by square-and-multiply; `e` as big-endian bits.
    pub fn pow_mod(&self, e: &num_bigint::BigUint, m: &Self) -> Self {
        let mut acc = Self::one(self.field).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    /// `f(x) ↦ f(c·x)`.
    pub fn scale_variable(&self, c: &Scalar) -> Self {
        let mut pw = self.field.one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw = &pw * c;
        }
        Self::new(self.field, out)
    }
}

impl fmt::Display for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_and_gcd() {
        let q = CoefficientField::Rationals;
        let f = KPoly::from_i64s(q, &[-1, 0, 1]);
        let g = KPoly::from_i64s(q, &[-1, 1]);
        let (quo, r) = f.divrem(&g);
        assert!(r.is_zero());
        assert_eq!(quo, KPoly::from_i64s(q, &[1, 1]));
        assert_eq!(f.gcd(&g.mul(&g)), g);
        let (d, s, t) = f.ext_gcd(&KPoly::from_i64s(q, &[2, 1]));
        assert!(d.is_one());
        assert!(s.mul(&f).add(&t.mul(&KPoly::from_i64s(q, &[2, 1]))).is_one());
    }

    #[test]
    fn char_two_derivative_vanishes() {
        let f2 = CoefficientField::PrimeField(2);
        assert!(KPoly::from_i64s(f2, &[1, 0, 1]).derivative().is_zero());
    }

    #[test]
    fn pow_mod_matches_naive() {
        let f3 = CoefficientField::PrimeField(3);
        let m = KPoly::from_i64s(f3, &[1, 2, 0, 1]);
        let x = KPoly::x(f3);
        let naive = x.pow(9).rem(&m);
        assert_eq!(x.pow_mod(&9u32.into(), &m), naive);
    }
}
