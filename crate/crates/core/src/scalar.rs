//! Coefficient fields and their elements.
//!
//! Elements of `F_p` carry their modulus so that arithmetic needs no
//! external context; mixing moduli (or mixing `F_p` with `Q`) is a caller
//! bug and panics. Public entry points check field compatibility first and
//! report [`Error::FieldMismatch`] instead.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient ring `R` of a universal Novikov ring `Λ_{R,univ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoefficientField {
    Rationals,
    /// A ring, not a field: series over it only divide by unit leading terms.
    Integers,
    PrimeField(u64),
}

impl CoefficientField {
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(CoefficientField::PrimeField(p))
        } else {
            Err(Error::NotPrime { value: p })
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientField::PrimeField(p) => *p,
            _ => 0,
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, CoefficientField::Integers)
    }

    /// Field used for linear algebra over this ring (`Z` computes inside `Q`).
    pub fn fraction_field(&self) -> CoefficientField {
        match self {
            CoefficientField::Integers => CoefficientField::Rationals,
            f => *f,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            CoefficientField::PrimeField(p) => Scalar::modular(n.rem_euclid(*p as i64) as u64, *p),
            _ => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
        }
    }

    /// Maps a rational into this field. Fails over `F_p` when `p` divides the
    /// denominator and over `Z` when the value is not integral.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            CoefficientField::Rationals => Ok(Scalar::Rational(q.clone())),
            CoefficientField::Integers => {
                if q.is_integer() {
                    Ok(Scalar::Rational(q.clone()))
                } else {
                    Err(Error::FieldMismatch {
                        left: "Z".into(),
                        right: q.to_string(),
                    })
                }
            }
            CoefficientField::PrimeField(p) => reduce_rational(q, *p).ok_or_else(|| {
                Error::DenominatorDivisibleByP {
                    p: *p,
                    location: format!("coefficient {q}"),
                }
            }),
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (CoefficientField::Rationals, Scalar::Rational(_)) => true,
            (CoefficientField::Integers, Scalar::Rational(q)) => q.is_integer(),
            (CoefficientField::PrimeField(p), Scalar::Modular { p: q, .. }) => p == q,
            _ => false,
        }
    }

    pub fn tag(&self) -> String {
        match self {
            CoefficientField::Rationals => "Q".into(),
            CoefficientField::Integers => "Z".into(),
            CoefficientField::PrimeField(p) => format!("Fp:{p}"),
        }
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// An element of `Q` (also used for `Z`) or of `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, p: u64 },
}

impl Scalar {
    pub fn modular(value: u64, p: u64) -> Scalar {
        Scalar::Modular { value: value % p, p }
    }

    pub fn rational(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    pub fn zero_like(&self) -> Scalar {
        match self {
            Scalar::Rational(_) => Scalar::Rational(BigRational::zero()),
            Scalar::Modular { p, .. } => Scalar::Modular { value: 0, p: *p },
        }
    }

    pub fn one_like(&self) -> Scalar {
        match self {
            Scalar::Rational(_) => Scalar::Rational(BigRational::one()),
            Scalar::Modular { p, .. } => Scalar::Modular { value: 1, p: *p },
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) if !q.is_zero() => Some(Scalar::Rational(q.recip())),
            Scalar::Modular { value, p } if *value != 0 => Some(Scalar::Modular {
                value: mod_inverse(*value, *p),
                p: *p,
            }),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Modular { .. } => None,
        }
    }

    pub fn field(&self) -> CoefficientField {
        match self {
            Scalar::Rational(_) => CoefficientField::Rationals,
            Scalar::Modular { p, .. } => CoefficientField::PrimeField(*p),
        }
    }

    /// `[a/b]_p`; `None` when `p | b`.
    pub fn reduce_mod_p(&self, p: u64) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => reduce_rational(q, p),
            Scalar::Modular { value, p: q } if *q == p => Some(Scalar::modular(*value, p)),
            Scalar::Modular { .. } => None,
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {:?} vs {:?}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { value: a, p }, Scalar::Modular { value: b, p: q }) if p == q => {
                Scalar::Modular {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { value: a, p }, Scalar::Modular { value: b, p: q }) if p == q => {
                Scalar::Modular {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { value, p } => Scalar::Modular {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn reduce_rational(q: &BigRational, p: u64) -> Option<Scalar> {
    let pb = BigInt::from(p);
    let den = q.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    let num = q.numer().mod_floor(&pb).to_u64()?;
    let value = ((num as u128 * mod_inverse(den, p) as u128) % p as u128) as u64;
    Some(Scalar::Modular { value, p })
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "{a} not invertible mod {p}");
    old_s.rem_euclid(p as i128) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime divisors of a nonzero integer, by trial division.
pub fn prime_divisors(n: &BigInt) -> BTreeSet<BigInt> {
    let mut out = BTreeSet::new();
    let mut m = n.abs();
    if m.is_zero() {
        return out;
    }
    let mut d = BigInt::from(2u32);
    while &d * &d <= m {
        if (&m % &d).is_zero() {
            out.insert(d.clone());
            while (&m % &d).is_zero() {
                m /= &d;
            }
        }
        d += 1u32;
    }
    if m > BigInt::one() {
        out.insert(m);
    }
    out
}

/// Positive divisors of a nonzero integer.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let m = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = m.clone();
    for p in prime_divisors(&m) {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        factors.push((p, e));
    }
    let mut out = alloc::vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out
}
