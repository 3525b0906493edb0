//! Polynomials over Novikov fields: Bezout certificates, squarefreeness
//! modulo `p`, finite extensions with their extended valuation, Newton
//! polygons and Hensel factorization.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kpoly::KPoly;
use crate::residue;
use crate::scalar::{CoefficientField, Scalar};
use crate::series::{NovikovSeries, Valuation};

/// Extra precision used when a monic normalization needs a series division.
const NORMALIZE_ORDER: i64 = 16;

/// `Σ a_i x^i` with Novikov-series coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovPoly {
    field: CoefficientField,
    coeffs: Vec<NovikovSeries>,
}

impl NovikovPoly {
    pub fn new(field: CoefficientField, coeffs: Vec<NovikovSeries>) -> Result<Self> {
        for c in &coeffs {
            if c.field().fraction_field() != field.fraction_field() {
                return Err(Error::FieldMismatch {
                    left: field.tag(),
                    right: c.field().tag(),
                });
            }
        }
        Ok(Self::from_coeffs(field, coeffs))
    }

    fn from_coeffs(field: CoefficientField, mut coeffs: Vec<NovikovSeries>) -> Self {
        while coeffs.last().is_some_and(NovikovSeries::is_zero) {
            coeffs.pop();
        }
        NovikovPoly { field, coeffs }
    }

    pub fn zero(field: CoefficientField) -> Self {
        NovikovPoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: CoefficientField) -> Self {
        Self::constant(NovikovSeries::one(field))
    }

    pub fn constant(c: NovikovSeries) -> Self {
        Self::from_coeffs(c.field(), vec![c])
    }

    /// `c·x^n`.
    pub fn monomial(c: NovikovSeries, n: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![NovikovSeries::zero(field); n];
        coeffs.push(c);
        Self::from_coeffs(field, coeffs)
    }

    pub fn x(field: CoefficientField) -> Self {
        Self::monomial(NovikovSeries::one(field), 1)
    }

    /// Constant-coefficient lift of a residue polynomial.
    pub fn from_kpoly(p: &KPoly, field: CoefficientField) -> Self {
        let coeffs = p
            .coeffs()
            .iter()
            .map(|c| NovikovSeries::constant(c.clone(), field))
            .collect();
        Self::from_coeffs(field, coeffs)
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn coeffs(&self) -> &[NovikovSeries] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> NovikovSeries {
        self.coeffs.get(i).cloned().unwrap_or_else(|| NovikovSeries::zero(self.field))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lc(&self) -> NovikovSeries {
        self.coeffs.last().cloned().unwrap_or_else(|| NovikovSeries::zero(self.field))
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(NovikovSeries::is_exact)
    }

    fn joint(&self, o: &Self) -> CoefficientField {
        if self.field == o.field {
            self.field
        } else {
            self.field.fraction_field()
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect();
        Self::from_coeffs(self.joint(o), c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let field = self.joint(o);
        if self.is_zero() || o.is_zero() {
            return Self::zero(field);
        }
        let mut c = vec![NovikovSeries::zero(field); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Self::from_coeffs(field, c)
    }

    pub fn scale(&self, s: &NovikovSeries) -> Self {
        Self::from_coeffs(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.field), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&self.field.from_i64(i as i64)))
            .collect();
        Self::from_coeffs(self.field, c)
    }

    /// `f(x) ↦ f(x + c)`.
    pub fn translate(&self, c: &NovikovSeries) -> Self {
        let lin = Self::from_coeffs(self.field, vec![c.clone(), NovikovSeries::one(self.field)]);
        let mut acc = Self::zero(self.field);
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(a.clone()));
        }
        acc
    }

    /// `f(x) ↦ f(T^m x)`.
    pub fn rescale_variable(&self, m: &BigRational) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a.shift(&(m * BigRational::from_integer(BigInt::from(i)))))
            .collect();
        Self::from_coeffs(self.field, c)
    }

    /// Multiplies every coefficient by `T^s`.
    pub fn shift_coeffs(&self, s: &BigRational) -> Self {
        Self::from_coeffs(self.field, self.coeffs.iter().map(|a| a.shift(s)).collect())
    }

    /// Caps every coefficient at precision `order` (exact coefficients with
    /// no term at or above `order` stay exact).
    pub fn cap(&self, order: &BigRational) -> Self {
        let c = self
            .coeffs
            .iter()
            .map(|a| {
                if a.is_exact() && a.terms().last().is_none_or(|(e, _)| e < order) {
                    a.clone()
                } else {
                    a.clone().with_truncation(Some(order.clone()))
                }
            })
            .collect();
        Self::from_coeffs(self.field, c)
    }

    /// Division by a polynomial with leading coefficient exactly `1`.
    pub fn divrem_monic(&self, d: &Self) -> (Self, Self) {
        let field = self.joint(d);
        let m = d.degree().expect("nonzero divisor");
        let mut r = self.coeffs.clone();
        let n = r.len();
        if n <= m {
            return (Self::zero(field), self.clone());
        }
        let mut q = vec![NovikovSeries::zero(field); n - m];
        for k in (m..n).rev() {
            let c = r[k].clone();
            if c.is_exact_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate().take(m) {
                r[k - m + j] = &r[k - m + j] - &(&c * dj);
            }
            r[k] = NovikovSeries::zero(field);
            q[k - m] = c;
        }
        r.truncate(m);
        (Self::from_coeffs(field, q), Self::from_coeffs(field, r))
    }

    /// `(q, r, β)` with `β·self = q·d + r`, `β = lc(d)^{deg self − deg d + 1}`.
    pub fn pseudo_divrem(&self, d: &Self) -> (Self, Self, NovikovSeries) {
        let field = self.joint(d);
        let m = d.degree().expect("nonzero divisor");
        let one = NovikovSeries::one(field);
        let Some(n) = self.degree().filter(|&n| n >= m) else {
            return (Self::zero(field), self.clone(), one);
        };
        let lcd = d.lc();
        let mut q = Self::zero(field);
        let mut r = self.clone();
        let mut e = n - m + 1;
        while let Some(dr) = r.degree().filter(|&dr| dr >= m) {
            let s = Self::monomial(r.lc(), dr - m);
            q = q.scale(&lcd).add(&s);
            let mut next = r.scale(&lcd).sub(&s.mul(d));
            // the leading coefficients cancel exactly
            next.coeffs.truncate(dr);
            r = Self::from_coeffs(field, next.coeffs);
            e -= 1;
        }
        let pw = lcd.pow(e as u32);
        let beta = lcd.pow((n - m + 1) as u32);
        (q.scale(&pw), r.scale(&pw), beta)
    }

    /// Coefficientwise `[f]_p`.
    pub fn reduce_mod_p(&self, p: u64) -> Result<Self> {
        let mut c = Vec::with_capacity(self.coeffs.len());
        for (i, a) in self.coeffs.iter().enumerate() {
            c.push(a.reduce_mod_p(p).map_err(|e| match e {
                Error::DenominatorDivisibleByP { p, location } => Error::DenominatorDivisibleByP {
                    p,
                    location: format!("degree {i}, {location}"),
                },
                e => e,
            })?);
        }
        Ok(Self::from_coeffs(CoefficientField::PrimeField(p), c))
    }

    pub fn retag(&self, field: CoefficientField) -> Self {
        Self::from_coeffs(field, self.coeffs.iter().map(|c| c.clone().retag(field)).collect())
    }

    /// Residue polynomial over `k`; needs every coefficient in `Λ^0`.
    pub fn residue(&self) -> Result<KPoly> {
        let k = self.field.fraction_field();
        let zero = BigRational::zero();
        let mut c = Vec::with_capacity(self.coeffs.len());
        for (i, a) in self.coeffs.iter().enumerate() {
            match a.valuation_lower_bound() {
                Valuation::Finite(v) if v < zero => {
                    return Err(Error::InsufficientPrecision {
                        reason: format!("coefficient of degree {i} has negative valuation"),
                    })
                }
                _ => {}
            }
            if a.truncation().is_some_and(|t| t <= &zero) {
                return Err(Error::InsufficientPrecision {
                    reason: format!("coefficient of degree {i} unknown at T^0"),
                });
            }
            c.push(a.coefficient(&zero));
        }
        Ok(KPoly::new(k, c))
    }

    /// True when every coefficient agrees with `o` below `order`.
    pub fn agrees_below(&self, o: &Self, order: &BigRational) -> bool {
        let n = self.coeffs.len().max(o.coeffs.len());
        (0..n).all(|i| self.coeff(i).agrees_below(&o.coeff(i), order))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, order: &BigRational) -> Result<Self> {
        let lc = self.lc();
        if lc.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = self.field.fraction_field();
        if lc.is_exact() && lc.terms().len() == 1 {
            let (e, c) = &lc.terms()[0];
            let inv = NovikovSeries::monomial(c.inv().ok_or(Error::DivisionByZero)?, -e.clone(), field);
            let mut out = self.retag(field).scale(&inv);
            *out.coeffs.last_mut().expect("nonzero") = NovikovSeries::one(field);
            return Ok(out);
        }
        let mut c = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs[..self.coeffs.len() - 1] {
            c.push(NovikovSeries::divide(a, &lc, order)?.quotient);
        }
        c.push(NovikovSeries::one(field));
        Ok(Self::from_coeffs(field, c))
    }
}

/// `poly x: [c0; c1; …]`.
impl fmt::Display for NovikovPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("poly x: [")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

// ---------------------------------------------------------------- gcd

/// `r̃·f + q̃·g = Θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bezout {
    pub r: NovikovPoly,
    pub q: NovikovPoly,
    pub theta: NovikovSeries,
}

impl Bezout {
    /// `r̃·f + q̃·g − Θ`.
    pub fn residual(&self, f: &NovikovPoly, g: &NovikovPoly) -> NovikovPoly {
        self.r
            .mul(f)
            .add(&self.q.mul(g))
            .sub(&NovikovPoly::constant(self.theta.clone()))
    }

    pub fn reduce_mod_p(&self, p: u64) -> Result<Bezout> {
        Ok(Bezout {
            r: self.r.reduce_mod_p(p)?,
            q: self.q.reduce_mod_p(p)?,
            theta: self.theta.reduce_mod_p(p)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcdResult {
    /// Monic gcd over the fraction field.
    pub gcd: NovikovPoly,
    /// Present exactly when the gcd is `1`.
    pub certificate: Option<Bezout>,
}

fn all_rationals<'a>(polys: &'a [&NovikovPoly], extra: &'a [&NovikovSeries]) -> impl Iterator<Item = &'a BigRational> {
    polys
        .iter()
        .flat_map(|p| p.coeffs.iter())
        .chain(extra.iter().copied())
        .flat_map(|s| s.terms().iter())
        .filter_map(|(_, c)| c.as_rational())
}

/// `lcm(denominators) / gcd(numerators)`, or `None` over `F_p` or for zero.
fn normalizer(polys: &[&NovikovPoly], extra: &[&NovikovSeries]) -> Option<BigRational> {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for q in all_rationals(polys, extra) {
        g = g.gcd(q.numer());
        l = l.lcm(q.denom());
    }
    (!g.is_zero()).then(|| BigRational::new(l, g))
}

/// Extended gcd by a fraction-free pseudo-remainder sequence, so exact
/// inputs give an exact certificate. Over `Z`/`Q` the certificate is scaled
/// to integer primitive form with `Θ` having positive leading coefficient;
/// over `F_p`, `Θ` has leading coefficient `1`.
pub fn gcd_bezout(f: &NovikovPoly, g: &NovikovPoly) -> Result<GcdResult> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroInputs);
    }
    if f.field.fraction_field() != g.field.fraction_field() {
        return Err(Error::FieldMismatch {
            left: f.field.tag(),
            right: g.field.tag(),
        });
    }
    let base = f.joint(g);
    let k = base.fraction_field();
    let one = NovikovPoly::one(k);
    let zero = NovikovPoly::zero(k);
    let (mut r0, mut r1) = (f.retag(k), g.retag(k));
    let (mut s0, mut s1) = (one.clone(), zero.clone());
    let (mut t0, mut t1) = (zero, one);
    if r0.is_zero() {
        core::mem::swap(&mut r0, &mut r1);
        core::mem::swap(&mut s0, &mut s1);
        core::mem::swap(&mut t0, &mut t1);
    }
    while !r1.is_zero() {
        let (q, rem, beta) = r0.pseudo_divrem(&r1);
        let mut r2 = rem;
        let mut s2 = s0.scale(&beta).sub(&q.mul(&s1));
        let mut t2 = t0.scale(&beta).sub(&q.mul(&t1));
        if let Some(c) = normalizer(&[&r2, &s2, &t2], &[]) {
            let c = NovikovSeries::constant(Scalar::Rational(c), k);
            r2 = r2.scale(&c);
            s2 = s2.scale(&c);
            t2 = t2.scale(&c);
        }
        r0 = core::mem::replace(&mut r1, r2);
        s0 = core::mem::replace(&mut s1, s2);
        t0 = core::mem::replace(&mut t1, t2);
    }
    if r0.degree() != Some(0) {
        let order = r0.lc().valuation().finite().cloned().unwrap_or_default()
            + BigRational::from_integer(BigInt::from(NORMALIZE_ORDER));
        return Ok(GcdResult {
            gcd: r0.monic(&order)?,
            certificate: None,
        });
    }
    let mut theta = r0.coeffs[0].clone();
    let (mut r, mut q) = (s0, t0);
    let lead = match theta.leading_term() {
        Some((_, c)) => c.clone(),
        None => return Err(Error::InsufficientPrecision { reason: "Bezout constant vanishes to the working precision".into() }),
    };
    let scale = match k {
        CoefficientField::PrimeField(_) => lead.inv().expect("nonzero"),
        _ => {
            let mut c = normalizer(&[&r, &q], &[&theta]).expect("nonzero theta");
            if lead.as_rational().is_some_and(|x| x.is_negative()) {
                c = -c;
            }
            Scalar::Rational(c)
        }
    };
    let sc = NovikovSeries::constant(scale, k);
    theta = &theta * &sc;
    r = r.scale(&sc);
    q = q.scale(&sc);
    if base == CoefficientField::Integers {
        r = r.retag(base);
        q = q.retag(base);
        theta = theta.retag(base);
    }
    Ok(GcdResult {
        gcd: NovikovPoly::one(k),
        certificate: Some(Bezout { r, q, theta }),
    })
}

/// Outcome of [`squarefree_mod_p`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquarefreeWitness {
    /// `[r̃]_p[f]_p + [q̃]_p[f′]_p = [Θ]_p` with `[Θ]_p ≠ 0`.
    Bezout(Bezout),
    /// Monic common factor of `[f]_p` and `[f′]_p`.
    CommonFactor(NovikovPoly),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeReport {
    pub squarefree: bool,
    pub witness: SquarefreeWitness,
    /// True when the witness is the reduction of the characteristic-zero
    /// certificate rather than a direct computation over `F_p`.
    pub from_lift: bool,
}

fn reduction_failure(p: u64, e: Error) -> Error {
    Error::ReductionFailure {
        p,
        reason: e.to_string(),
    }
}

/// Whether `gcd([f]_p, [f′]_p) = 1` over `Λ_{F_p}[x]`.
pub fn squarefree_mod_p(f: &NovikovPoly, p: u64) -> Result<SquarefreeReport> {
    CoefficientField::prime_field(p)?;
    let fp = f.reduce_mod_p(p).map_err(|e| reduction_failure(p, e))?;
    if fp.is_zero() {
        return Err(Error::ReductionFailure {
            p,
            reason: "polynomial vanishes mod p".into(),
        });
    }
    if f.field.characteristic() == 0 {
        if let Some(cert) = gcd_bezout(f, &f.derivative())?.certificate {
            let reduced = cert.reduce_mod_p(p).map_err(|e| reduction_failure(p, e))?;
            if !reduced.theta.is_zero() {
                return Ok(SquarefreeReport {
                    squarefree: true,
                    witness: SquarefreeWitness::Bezout(reduced),
                    from_lift: true,
                });
            }
        }
    }
    let direct = gcd_bezout(&fp, &fp.derivative())?;
    Ok(match direct.certificate {
        Some(cert) => SquarefreeReport {
            squarefree: true,
            witness: SquarefreeWitness::Bezout(cert),
            from_lift: false,
        },
        None => SquarefreeReport {
            squarefree: false,
            witness: SquarefreeWitness::CommonFactor(direct.gcd),
            from_lift: false,
        },
    })
}

// ---------------------------------------------------------------- extensions

/// `K[x]/(m)` for a monic modulus `m` over a Novikov field `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionField {
    modulus: NovikovPoly,
    verified: bool,
}

impl ExtensionField {
    /// Uses `modulus` as given; `verified` records whether it is known to be
    /// irreducible.
    pub fn new(modulus: &NovikovPoly, verified: bool) -> Result<Self> {
        match modulus.degree() {
            Some(d) if d >= 1 => {}
            _ => {
                return Err(Error::InvalidAlgebra {
                    reason: "extension modulus must have positive degree".into(),
                })
            }
        }
        let order = BigRational::from_integer(BigInt::from(NORMALIZE_ORDER));
        Ok(ExtensionField {
            modulus: modulus.monic(&order)?,
            verified,
        })
    }

    /// Runs the factorization pipeline on `modulus` and marks the extension
    /// verified when it comes back as a single certified-irreducible factor.
    pub fn certify(modulus: &NovikovPoly, order: &BigRational) -> Result<Self> {
        let fac = factor(modulus, order)?;
        let verified = fac.factors.len() == 1 && fac.factors[0].irreducible;
        Self::new(modulus, verified)
    }

    pub fn modulus(&self) -> &NovikovPoly {
        &self.modulus
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("positive degree")
    }

    pub fn field(&self) -> CoefficientField {
        self.modulus.field
    }

    /// Reduces a polynomial to its canonical representative.
    pub fn element(&self, a: &NovikovPoly) -> NovikovPoly {
        a.retag(self.field()).divrem_monic(&self.modulus).1
    }

    /// The class of `x`.
    pub fn generator(&self) -> NovikovPoly {
        self.element(&NovikovPoly::x(self.field()))
    }

    pub fn mul(&self, a: &NovikovPoly, b: &NovikovPoly) -> NovikovPoly {
        self.element(&a.mul(b))
    }

    /// Column `j` holds the coordinates of `A·x̄^j`.
    pub fn multiplication_matrix(&self, a: &NovikovPoly) -> Vec<Vec<NovikovSeries>> {
        let n = self.degree();
        let mut m = vec![vec![NovikovSeries::zero(self.field()); n]; n];
        let mut col = self.element(a);
        for j in 0..n {
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = col.coeff(i);
            }
            col = self.mul(&col, &NovikovPoly::x(self.field()));
        }
        m
    }

    /// `N(A) = det(multiplication by A)`.
    pub fn norm(&self, a: &NovikovPoly) -> NovikovSeries {
        determinant(&self.multiplication_matrix(a), self.field())
    }

    /// The unique extension of the valuation: `ν(N(A))/n`.
    pub fn extend_valuation(&self, a: &NovikovPoly) -> Result<Valuation> {
        if !self.verified {
            return Err(Error::UnverifiedModulus);
        }
        Ok(match self.norm(a).valuation() {
            Valuation::Finite(v) => Valuation::Finite(v / BigRational::from_integer(BigInt::from(self.degree()))),
            Valuation::Infinity => Valuation::Infinity,
        })
    }
}

/// Leibniz expansion; meant for the small matrices of field extensions.
pub fn determinant(m: &[Vec<NovikovSeries>], field: CoefficientField) -> NovikovSeries {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = NovikovSeries::zero(field);
    let mut sign = true;
    let mut c = vec![0usize; n];
    let term = |perm: &[usize], sign: bool| -> NovikovSeries {
        let mut t = NovikovSeries::one(field);
        for (j, &i) in perm.iter().enumerate() {
            t = &t * &m[i][j];
            if t.is_exact_zero() {
                return t;
            }
        }
        if sign {
            t
        } else {
            -t
        }
    };
    acc = &acc + &term(&perm, sign);
    // Heap's algorithm; every swap flips the sign
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = !sign;
            acc = &acc + &term(&perm, sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    acc
}

// ---------------------------------------------------------------- Newton polygon

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Order of vanishing at `x = 0`.
    pub start: usize,
    /// `(slope, length)`, slopes strictly increasing. A segment of slope
    /// `−m` and length `ℓ` accounts for `ℓ` roots of valuation `m`.
    pub segments: Vec<(BigRational, usize)>,
}

impl NewtonPolygon {
    pub fn root_valuations(&self) -> Vec<(BigRational, usize)> {
        self.segments.iter().map(|(s, l)| (-s.clone(), *l)).collect()
    }
}

/// Lower convex hull of `(i, ν(a_i))`.
pub fn newton_polygon(f: &NovikovPoly) -> NewtonPolygon {
    let pts: Vec<(usize, BigRational)> = f
        .coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, a)| a.valuation().finite().map(|v| (i, v.clone())))
        .collect();
    let start = pts.first().map_or(0, |(i, _)| *i);
    let mut hull: Vec<(usize, BigRational)> = Vec::new();
    let slope = |a: &(usize, BigRational), b: &(usize, BigRational)| -> BigRational {
        (&b.1 - &a.1) / BigRational::from_integer(BigInt::from(b.0 as i64 - a.0 as i64))
    };
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            if slope(a, &p) <= slope(a, b) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let segments = hull.windows(2).map(|w| (slope(&w[0], &w[1]), w[1].0 - w[0].0)).collect();
    NewtonPolygon { start, segments }
}

// ---------------------------------------------------------------- factorization

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    /// Monic factor.
    pub poly: NovikovPoly,
    /// Certified irreducible over the Novikov field; otherwise UNVERIFIED.
    pub irreducible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Leading coefficient of the input.
    pub unit: NovikovSeries,
    pub factors: Vec<Factor>,
}

impl Factorization {
    pub fn product(&self) -> NovikovPoly {
        self.factors
            .iter()
            .fold(NovikovPoly::constant(self.unit.clone()), |acc, f| acc.mul(&f.poly))
    }
}

const MAX_HENSEL_STEPS: usize = 64;
const MAX_SHIFT_DEPTH: usize = 32;

/// Monic `A` with `A ≡ ā`, `g = A·B` to precision `prec`, given that the
/// residue of `g` is `ā·b̄` with `ā` monic and coprime to `b̄`.
fn hensel(g: &NovikovPoly, a_bar: &KPoly, b_bar: &KPoly, prec: &BigRational) -> Result<NovikovPoly> {
    let field = g.field;
    let (_, s_bar, t_bar) = b_bar.ext_gcd(a_bar);
    let lift = |p: &KPoly| NovikovPoly::from_kpoly(p, field);
    let (mut h, mut b, mut s, mut t) = (lift(a_bar), lift(b_bar), lift(&s_bar), lift(&t_bar));
    let one = NovikovPoly::one(field);
    for _ in 0..MAX_HENSEL_STEPS {
        let e = g.sub(&b.mul(&h)).cap(prec);
        if e.is_zero() {
            return Ok(h);
        }
        let (q, r) = s.mul(&e).divrem_monic(&h);
        let b2 = b.add(&t.mul(&e)).add(&q.mul(&b)).cap(prec);
        let h2 = h.add(&r).cap(prec);
        let beta = s.mul(&b2).add(&t.mul(&h2)).sub(&one);
        let (c, d) = s.mul(&beta).divrem_monic(&h2);
        s = s.sub(&d).cap(prec);
        t = t.sub(&t.mul(&beta)).sub(&c.mul(&b2)).cap(prec);
        b = b2;
        h = h2;
    }
    Err(Error::InsufficientPrecision {
        reason: "Hensel lifting did not converge".into(),
    })
}

fn split(f: &NovikovPoly, prec: &BigRational, depth: usize) -> Result<Vec<Factor>> {
    let field = f.field;
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![Factor { poly: f.clone(), irreducible: true }]);
    }
    if depth > MAX_SHIFT_DEPTH {
        return Err(Error::InsufficientPrecision {
            reason: "root separation needs more precision".into(),
        });
    }
    let a0 = f.coeff(0);
    if a0.is_zero() {
        // A root at 0, or one too close to 0 to see at this precision.
        let root_tail = match (a0.truncation(), f.coeff(1).valuation()) {
            (Some(t), Valuation::Finite(v)) => NovikovSeries::zero(field).with_truncation(Some(t - v)),
            (Some(_), Valuation::Infinity) => {
                return Err(Error::InsufficientPrecision {
                    reason: "constant and linear coefficients both unknown".into(),
                })
            }
            (None, _) => NovikovSeries::zero(field),
        };
        let rest = NovikovPoly::from_coeffs(field, f.coeffs[1..].to_vec());
        let lin = NovikovPoly::from_coeffs(field, vec![root_tail, NovikovSeries::one(field)]);
        let mut out = vec![Factor { poly: lin, irreducible: true }];
        out.extend(split(&rest, prec, depth)?);
        return Ok(out);
    }
    let np = newton_polygon(f);
    let single = np.segments.len() == 1;
    let mut out = Vec::new();
    let mut consumed = 0;
    for (slope, len) in &np.segments {
        let m = -slope.clone();
        // y-coordinates: g(y) = T^{-c} f(T^m y), residue y^{i0}·h̄(y)
        let scaled = f.rescale_variable(&m);
        let c = scaled
            .coeffs
            .iter()
            .filter_map(|a| a.valuation().finite().cloned())
            .min()
            .expect("nonzero polynomial");
        let g = scaled.shift_coeffs(&-c.clone());
        let g_bar = g.residue()?;
        let i0 = g_bar.low_order();
        let h_bar = g_bar.unshift(i0);
        debug_assert_eq!(h_bar.degree(), Some(*len));
        let blocks = residue::factor(&h_bar)?;
        if single && blocks.len() == 1 && blocks[0].1 == 1 {
            return Ok(vec![Factor { poly: f.clone(), irreducible: true }]);
        }
        let neg = if m.is_negative() { -m.clone() } else { BigRational::zero() };
        for (phi, e) in blocks {
            let a_bar = phi.pow(e as u32);
            let d = a_bar.degree().expect("positive degree");
            let b_bar = g_bar.divrem(&a_bar).0;
            let prec_y = prec + &neg * BigRational::from_integer(BigInt::from(d));
            let a = hensel(&g.cap(&(&prec_y + &c.abs())), &a_bar, &b_bar, &prec_y)?;
            // back to x: T^{md} A(x/T^m)
            let dm = &m * BigRational::from_integer(BigInt::from(d));
            let ax = a.rescale_variable(&-m.clone()).shift_coeffs(&dm);
            consumed += d;
            if e == 1 {
                out.push(Factor { poly: ax, irreducible: true });
            } else if phi.degree() == Some(1) {
                let root = NovikovSeries::monomial(-phi.coeff(0), m.clone(), field);
                let shifted = ax.translate(&root);
                for fac in split(&shifted, prec, depth + 1)? {
                    out.push(Factor {
                        poly: fac.poly.translate(&-&root),
                        irreducible: fac.irreducible,
                    });
                }
            } else {
                out.push(Factor { poly: ax, irreducible: false });
            }
        }
    }
    debug_assert_eq!(consumed + np.start, n);
    Ok(out)
}

/// The truncated factor read as exact, when that divides `f` exactly.
fn snap_exact(f: &NovikovPoly, fac: &NovikovPoly) -> Option<NovikovPoly> {
    if fac.is_exact() {
        return None;
    }
    let coeffs = fac
        .coeffs
        .iter()
        .map(|c| NovikovSeries::new(c.field(), c.terms().to_vec(), None))
        .collect::<Result<Vec<_>>>()
        .ok()?;
    let exact = NovikovPoly::from_coeffs(fac.field, coeffs);
    let (_, r) = f.divrem_monic(&exact);
    (r.is_zero() && exact.lc() == NovikovSeries::one(fac.field)).then_some(exact)
}

/// Factors a squarefree `f` into monic factors along Newton-polygon
/// segments, Hensel-lifting residue factorizations to precision `order`.
pub fn factor(f: &NovikovPoly, order: &BigRational) -> Result<Factorization> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::ZeroInputs),
    };
    if gcd_bezout(f, &f.derivative())?.certificate.is_none() {
        return Err(Error::NotSquarefree);
    }
    let k = f.field.fraction_field();
    let f = f.retag(k);
    let unit = f.lc();
    // Roots of negative valuation amplify coefficient errors in products.
    let np = newton_polygon(&f);
    let spread = np
        .root_valuations()
        .iter()
        .map(|(m, _)| if m.is_negative() { -m.clone() } else { BigRational::zero() })
        .max()
        .unwrap_or_default()
        * BigRational::from_integer(BigInt::from(n));
    let unit_val = unit.valuation().finite().cloned().unwrap_or_default().abs();
    let prec = order + &spread + &unit_val;
    let monic = f.monic(&(&prec + &unit_val))?;
    let mut factors = split(&monic, &prec, 0)?;
    if monic.is_exact() {
        for fac in &mut factors {
            if let Some(exact) = snap_exact(&monic, &fac.poly) {
                fac.poly = exact;
            }
        }
    }
    factors.sort_by_key(|f| f.poly.degree());
    Ok(Factorization { unit, factors })
}

#[cfg(test)]
mod tests;
