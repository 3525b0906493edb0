//! Commutative algebras given by structure constants over a Novikov field:
//! products, the quantum filtration `l`, idempotent splitting along a
//! primitive element, reduction of idempotents mod `p`, the `δ` bound, and
//! spectral `γ` invariants on labeled complexes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::filtered::{dual_pairing, spectral_invariant, svd, FilteredComplex, Generator, Grading};
use crate::linalg::solve_in_span;
use crate::polyext::{factor, gcd_bezout, Factor, NovikovPoly};
use crate::ratfunc::RatFunc;
use crate::scalar::CoefficientField;
use crate::series::{NovikovSeries, Valuation};

/// Precision used for factoring minimal polynomials unless the caller asks
/// for another.
pub const DEFAULT_ORDER: i64 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    field: CoefficientField,
    basis: Vec<(String, i64)>,
    unit: usize,
    /// `table[i][j]` = coordinates of `b_i * b_j`.
    table: Vec<Vec<Vec<NovikovSeries>>>,
}

impl GradedAlgebra {
    /// Builds and validates an algebra. Products missing from `entries` are
    /// zero, and `(i, j)` supplies `(j, i)` when the latter is absent.
    pub fn new(
        field: CoefficientField,
        basis: Vec<(String, i64)>,
        unit: usize,
        entries: Vec<(usize, usize, Vec<NovikovSeries>)>,
    ) -> Result<Self> {
        let n = basis.len();
        let invalid = |reason: String| Error::InvalidAlgebra { reason };
        if unit >= n {
            return Err(invalid(format!("unit index {unit} out of range")));
        }
        if let Some((name, d)) = basis.iter().find(|(_, d)| d % 2 != 0) {
            return Err(invalid(format!("basis element {name} has odd degree {d}")));
        }
        let zero = vec![NovikovSeries::zero(field); n];
        let mut given: Vec<Vec<Option<Vec<NovikovSeries>>>> = vec![vec![None; n]; n];
        for (i, j, v) in entries {
            if i >= n || j >= n || v.len() != n {
                return Err(invalid(format!("table entry ({i}, {j}) has the wrong shape")));
            }
            if v.iter().any(|s| s.field().fraction_field() != field.fraction_field()) {
                return Err(Error::FieldMismatch {
                    left: field.tag(),
                    right: v.iter().find(|s| s.field().fraction_field() != field.fraction_field()).expect("found").field().tag(),
                });
            }
            if given[i][j].is_some() {
                return Err(invalid(format!("duplicate table entry ({i}, {j})")));
            }
            given[i][j] = Some(v);
        }
        let mut table = vec![vec![zero.clone(); n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = given[i][j]
                    .clone()
                    .or_else(|| given[j][i].clone())
                    .unwrap_or_else(|| zero.clone());
            }
        }
        let a = GradedAlgebra { field, basis, unit, table };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        let n = self.rank();
        let name = |i: usize| self.basis[i].0.clone();
        for i in 0..n {
            for j in 0..n {
                if self.table[i][j] != self.table[j][i] {
                    return Err(Error::InvalidAlgebra {
                        reason: format!("{}*{} != {}*{}", name(i), name(j), name(j), name(i)),
                    });
                }
            }
            if self.table[self.unit][i] != self.basis_vector(i) {
                return Err(Error::InvalidAlgebra {
                    reason: format!("unit law fails on {}", name(i)),
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.multiply_unchecked(&self.table[i][j], &self.basis_vector(k));
                    let right = self.multiply_unchecked(&self.basis_vector(i), &self.table[j][k]);
                    if left != right {
                        return Err(Error::InvalidAlgebra {
                            reason: format!("associativity fails on ({}, {}, {})", name(i), name(j), name(k)),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(String, i64)] {
        &self.basis
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn table(&self) -> &[Vec<Vec<NovikovSeries>>] {
        &self.table
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|(n, _)| n == name)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<NovikovSeries> {
        let mut v = vec![NovikovSeries::zero(self.field); self.rank()];
        v[i] = NovikovSeries::one(self.field);
        v
    }

    pub fn unit(&self) -> Vec<NovikovSeries> {
        self.basis_vector(self.unit)
    }

    pub fn zero(&self) -> Vec<NovikovSeries> {
        vec![NovikovSeries::zero(self.field); self.rank()]
    }

    fn multiply_unchecked(&self, a: &[NovikovSeries], b: &[NovikovSeries]) -> Vec<NovikovSeries> {
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_exact_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_exact_zero() {
                    continue;
                }
                let c = ai * bj;
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_exact_zero() {
                        out[k] = &out[k] + &(&c * t);
                    }
                }
            }
        }
        out
    }

    fn check_vector(&self, a: &[NovikovSeries]) -> Result<()> {
        if a.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: a.len(),
            });
        }
        if let Some(s) = a.iter().find(|s| s.field().fraction_field() != self.field.fraction_field()) {
            return Err(Error::FieldMismatch {
                left: self.field.tag(),
                right: s.field().tag(),
            });
        }
        Ok(())
    }

    /// Bilinear extension of the structure table.
    pub fn multiply(&self, a: &[NovikovSeries], b: &[NovikovSeries]) -> Result<Vec<NovikovSeries>> {
        self.check_vector(a)?;
        self.check_vector(b)?;
        Ok(self.multiply_unchecked(a, b))
    }

    pub fn power(&self, a: &[NovikovSeries], n: u32) -> Result<Vec<NovikovSeries>> {
        let mut acc = self.unit();
        for _ in 0..n {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    /// `p(a)` by Horner's rule.
    pub fn evaluate(&self, p: &NovikovPoly, a: &[NovikovSeries]) -> Result<Vec<NovikovSeries>> {
        let mut acc = self.zero();
        let unit = self.unit();
        for c in p.coeffs().iter().rev() {
            acc = self.multiply(&acc, a)?;
            for (x, u) in acc.iter_mut().zip(&unit) {
                *x = &*x + &(u * c);
            }
        }
        Ok(acc)
    }

    /// `max −ν(c)` over all structure constants: the most a product can
    /// raise `l` beyond `l(a) + l(b)`.
    pub fn filtration_gain(&self) -> Option<BigRational> {
        self.table
            .iter()
            .flatten()
            .flatten()
            .filter_map(|c| c.valuation().finite().map(|v| -v.clone()))
            .max()
    }

    /// Entrywise reduction of the structure table.
    pub fn reduce_mod_p(&self, p: u64) -> Result<GradedAlgebra> {
        let mut entries = Vec::new();
        for (i, row) in self.table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let r = v
                    .iter()
                    .enumerate()
                    .map(|(k, s)| {
                        s.reduce_mod_p(p).map_err(|e| relocate(e, &format!("{}*{} coefficient of {}", self.basis[i].0, self.basis[j].0, self.basis[k].0)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                entries.push((i, j, r));
            }
        }
        GradedAlgebra::new(CoefficientField::PrimeField(p), self.basis.clone(), self.unit, entries)
    }
}

fn relocate(e: Error, what: &str) -> Error {
    match e {
        Error::DenominatorDivisibleByP { p, location } => Error::DenominatorDivisibleByP {
            p,
            location: format!("{what}, {location}"),
        },
        e => e,
    }
}

/// `l(Σ f_i α_i) = max −ν(f_i)`; `None` for the zero vector.
pub fn quantum_filtration(a: &[NovikovSeries]) -> Option<BigRational> {
    a.iter().filter_map(|s| s.valuation().finite().map(|v| -v.clone())).max()
}

// ---------------------------------------------------------------- idempotents

/// Data from which the idempotents were built: `e_l = E_l(g)` with
/// `E_l(x) = Σ_s b_ls x^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentCertificate {
    pub generator: Vec<NovikovSeries>,
    pub minimal_polynomial: NovikovPoly,
    pub factors: Vec<Factor>,
    pub expansions: Vec<NovikovPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentSet {
    pub elements: Vec<Vec<NovikovSeries>>,
    /// Some factor of the minimal polynomial is not certified irreducible;
    /// its idempotent may split further.
    pub partial: bool,
    /// The uncertified factors.
    pub unfactored: Vec<NovikovPoly>,
    pub certificate: Option<IdempotentCertificate>,
}

fn exponent_lcm(vs: &[Vec<NovikovSeries>]) -> BigInt {
    vs.iter()
        .flatten()
        .fold(BigInt::one(), |l, s| l.lcm(&s.exponent_denominator_lcm()))
}

/// Minimal polynomial of `g` from the first linear dependence among its
/// powers.
pub fn minimal_polynomial(a: &GradedAlgebra, g: &[NovikovSeries]) -> Result<NovikovPoly> {
    a.check_vector(g)?;
    if !g.iter().all(NovikovSeries::is_exact) {
        return Err(Error::TruncationTooCoarse {
            reason: "minimal polynomials need an exact generator".into(),
        });
    }
    let k = a.field.fraction_field();
    let n = a.rank();
    let mut powers = vec![a.unit()];
    for _ in 0..n {
        let next = a.multiply(powers.last().expect("nonempty"), g)?;
        powers.push(next);
    }
    let l = exponent_lcm(&powers);
    let rf: Vec<Vec<RatFunc>> = powers
        .iter()
        .map(|v| v.iter().map(|s| RatFunc::from_series(&s.clone().retag(k), &l)).collect())
        .collect();
    for d in 1..=n {
        if let Some(c) = solve_in_span(&rf[..d], &rf[d]) {
            let mut coeffs: Vec<NovikovSeries> = c
                .iter()
                .map(|x| -x.to_series(&l, 64 * l.to_i64().unwrap_or(1 << 20), k))
                .collect();
            coeffs.push(NovikovSeries::one(k));
            return NovikovPoly::new(k, coeffs);
        }
    }
    unreachable!("n + 1 vectors in rank n are dependent")
}

/// `numerator(g)/Θ` computed over rational functions in `T`, so that
/// Laurent-polynomial results come back exact. `None` for inexact input.
fn exact_evaluation(
    a: &GradedAlgebra,
    numerator: &NovikovPoly,
    theta: &NovikovSeries,
    g: &[NovikovSeries],
    order: &BigRational,
) -> Result<Option<Vec<NovikovSeries>>> {
    if !numerator.is_exact() || !theta.is_exact() {
        return Ok(None);
    }
    let k = a.field.fraction_field();
    let mut powers = vec![a.unit()];
    for _ in 1..numerator.coeffs().len() {
        let next = a.multiply(powers.last().expect("nonempty"), g)?;
        powers.push(next);
    }
    let l = exponent_lcm(&powers)
        .lcm(&exponent_lcm(&[numerator.coeffs().to_vec(), vec![theta.clone()]]));
    let rf = |s: &NovikovSeries| RatFunc::from_series(&s.clone().retag(k), &l);
    let inv = rf(theta).inv().ok_or(Error::DivisionByZero)?;
    let mut out = vec![RatFunc::zero(k); a.rank()];
    for (c, pw) in numerator.coeffs().iter().zip(&powers) {
        let c = rf(c).mul(&inv);
        for (o, x) in out.iter_mut().zip(pw) {
            *o = o.add(&c.mul(&rf(x)));
        }
    }
    let precision = (order * BigRational::from_integer(l.clone())).ceil().to_integer().to_i64().unwrap_or(i64::MAX / 4);
    Ok(Some(out.iter().map(|x| x.to_series(&l, precision, k)).collect()))
}

/// Splits `A` along the primitive element `g`: minimal polynomial, its
/// factorization, then CRT idempotents `e_l = r̃_l(g)·(f/g_l)(g)/Θ_l`.
pub fn find_idempotents(a: &GradedAlgebra, g: &[NovikovSeries], order: &BigRational) -> Result<IdempotentSet> {
    let f = minimal_polynomial(a, g)?;
    let d = f.degree().expect("monic");
    if d < a.rank() {
        return Err(Error::NotPrimitive { degree: d, rank: a.rank() });
    }
    let fac = factor(&f, order)?;
    let k = f.field();
    let mut elements = Vec::new();
    let mut expansions = Vec::new();
    for fl in &fac.factors {
        let (cof, rem) = f.divrem_monic(&fl.poly);
        debug_assert!(rem.coeffs().iter().all(|c| c.is_zero()));
        let cert = gcd_bezout(&cof, &fl.poly)?
            .certificate
            .ok_or(Error::NotSquarefree)?;
        let theta = &cert.theta;
        let inv = match theta.terms() {
            [(e, c)] if theta.is_exact() => NovikovSeries::monomial(c.inv().expect("nonzero"), -e.clone(), k),
            _ => {
                let v = theta.valuation().finite().cloned().unwrap_or_default();
                NovikovSeries::divide(&NovikovSeries::one(k), theta, &(order + v.abs()))?.quotient
            }
        };
        let numerator = cert.r.retag(k).mul(&cof).divrem_monic(&f).1;
        let e_poly = numerator.scale(&inv);
        let element = match exact_evaluation(a, &numerator, &cert.theta.clone().retag(k), g, order)? {
            Some(v) => v,
            None => a.evaluate(&e_poly, g)?,
        };
        elements.push(element);
        expansions.push(e_poly);
    }
    let unfactored: Vec<NovikovPoly> = fac
        .factors
        .iter()
        .filter(|f| !f.irreducible)
        .map(|f| f.poly.clone())
        .collect();
    Ok(IdempotentSet {
        elements,
        partial: !unfactored.is_empty(),
        unfactored,
        certificate: Some(IdempotentCertificate {
            generator: g.to_vec(),
            minimal_polynomial: f,
            factors: fac.factors,
            expansions,
        }),
    })
}

/// Which of `e_i² = e_i`, `e_i e_j = 0 (i ≠ j)`, `Σ e_i = 1` hold, up to
/// the precision of the elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentChecks {
    pub squares: bool,
    pub orthogonal: bool,
    pub sum_to_unit: bool,
    /// All elements exact, so the checks above are exact.
    pub exact: bool,
}

impl IdempotentChecks {
    pub fn all(&self) -> bool {
        self.squares && self.orthogonal && self.sum_to_unit
    }
}

fn vanishes(v: &[NovikovSeries]) -> bool {
    v.iter().all(NovikovSeries::is_zero)
}

fn diff(a: &[NovikovSeries], b: &[NovikovSeries]) -> Vec<NovikovSeries> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn check_idempotents(a: &GradedAlgebra, es: &[Vec<NovikovSeries>]) -> Result<IdempotentChecks> {
    let mut squares = true;
    let mut orthogonal = true;
    for (i, ei) in es.iter().enumerate() {
        squares &= vanishes(&diff(&a.multiply(ei, ei)?, ei));
        for ej in &es[i + 1..] {
            orthogonal &= vanishes(&a.multiply(ei, ej)?);
        }
    }
    let mut sum = a.zero();
    for e in es {
        sum = sum.iter().zip(e).map(|(x, y)| x + y).collect();
    }
    Ok(IdempotentChecks {
        squares,
        orthogonal,
        sum_to_unit: vanishes(&diff(&sum, &a.unit())),
        exact: es.iter().flatten().all(NovikovSeries::is_exact),
    })
}

/// Reduced idempotents over the reduced algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedIdempotents {
    pub p: u64,
    pub algebra: GradedAlgebra,
    pub elements: Vec<Vec<NovikovSeries>>,
    pub checks: IdempotentChecks,
    /// `l([e_i]_p)`.
    pub filtrations: Vec<Option<BigRational>>,
}

pub fn reduce_idempotents_mod_p(a: &GradedAlgebra, e: &IdempotentSet, p: u64) -> Result<ReducedIdempotents> {
    CoefficientField::prime_field(p)?;
    let reduced_algebra = a.reduce_mod_p(p)?;
    let mut elements = Vec::with_capacity(e.elements.len());
    for (i, v) in e.elements.iter().enumerate() {
        let r = v
            .iter()
            .enumerate()
            .map(|(j, s)| {
                s.reduce_mod_p(p).map_err(|err| relocate(err, &format!("k_{i}{j} (coefficient of {} in e_{i}) = {s}", a.basis[j].0)))
            })
            .collect::<Result<Vec<_>>>()?;
        elements.push(r);
    }
    let checks = check_idempotents(&reduced_algebra, &elements)?;
    let filtrations = elements.iter().map(|v| quantum_filtration(v)).collect();
    Ok(ReducedIdempotents {
        p,
        algebra: reduced_algebra,
        elements,
        checks,
        filtrations,
    })
}

/// `δ` from the certificate, `max_{l,s} (−ν(b_ls) + l(g^s))`, and the
/// direct value `max_l l(e_l)`, which it bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaBound {
    pub certificate: BigRational,
    pub direct: BigRational,
}

impl DeltaBound {
    pub fn value(&self) -> &BigRational {
        &self.certificate
    }
}

pub fn idempotent_filtration_bound(a: &GradedAlgebra, e: &IdempotentSet) -> Result<DeltaBound> {
    let cert = e.certificate.as_ref().ok_or(Error::MissingCertificate)?;
    let zero = BigRational::zero();
    let mut certificate = zero.clone();
    let mut pw = a.unit();
    let deg = cert.expansions.iter().filter_map(NovikovPoly::degree).max().unwrap_or(0);
    let mut levels = Vec::with_capacity(deg + 1);
    for _ in 0..=deg {
        levels.push(quantum_filtration(&pw));
        pw = a.multiply(&pw, &cert.generator)?;
    }
    for ex in &cert.expansions {
        for (s, b) in ex.coeffs().iter().enumerate() {
            if let (Valuation::Finite(v), Some(l)) = (b.valuation(), &levels[s]) {
                certificate = certificate.max(l - v);
            }
        }
    }
    let direct = e
        .elements
        .iter()
        .filter_map(|v| quantum_filtration(v))
        .max()
        .unwrap_or(zero)
        .max(BigRational::zero());
    Ok(DeltaBound { certificate, direct })
}

// ---------------------------------------------------------------- labeled complexes

/// A filtered complex with chain representatives for algebra basis classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledComplex {
    pub complex: FilteredComplex,
    pub labels: BTreeMap<String, Vec<NovikovSeries>>,
    /// Name of the unit class.
    pub unit: String,
}

impl LabeledComplex {
    pub fn new(complex: FilteredComplex, labels: BTreeMap<String, Vec<NovikovSeries>>, unit: &str) -> Result<Self> {
        for (name, chain) in &labels {
            let d = complex.apply(chain)?;
            if d.iter().any(|s| !s.is_zero()) {
                return Err(Error::InvalidComplex(vec![format!("label {name} is not a cycle")]));
            }
        }
        let chain = labels.get(unit).ok_or_else(|| Error::UnlabeledClass { name: unit.to_string() })?;
        match spectral_invariant(&complex, chain) {
            Err(Error::NullClass) => {
                return Err(Error::InvalidComplex(vec![format!("unit label {unit} is zero in homology")]))
            }
            Err(e) => return Err(e),
            Ok(_) => {}
        }
        Ok(LabeledComplex {
            complex,
            labels,
            unit: unit.to_string(),
        })
    }

    /// One generator per basis element at action 0, zero differential,
    /// labels the basis vectors.
    pub fn identity_model(a: &GradedAlgebra) -> Result<Self> {
        let field = a.field();
        let gens = a
            .basis()
            .iter()
            .map(|(n, d)| Generator::new(n.clone(), *d, BigRational::zero()))
            .collect();
        let complex = FilteredComplex::new(field, Grading::Z, gens, Vec::new())?;
        let labels = (0..a.rank()).map(|i| (a.basis()[i].0.clone(), a.basis_vector(i))).collect();
        Self::new(complex, labels, &a.basis()[a.unit_index()].0)
    }

    /// Chain for `Σ a_i b_i`, extending the labels linearly.
    pub fn chain_of(&self, algebra: &GradedAlgebra, class: &[NovikovSeries]) -> Result<Vec<NovikovSeries>> {
        let mut chain = self.complex.zero_chain();
        for (i, c) in class.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            let name = &algebra.basis()[i].0;
            let label = self.labels.get(name).ok_or_else(|| Error::UnlabeledClass { name: name.clone() })?;
            for (x, l) in chain.iter_mut().zip(label) {
                *x = &*x + &(c * l);
            }
        }
        Ok(chain)
    }
}

/// `γ_e = c(label(e)) + c*(label*(e))`, the dual label having the same
/// coordinates in the dual basis.
pub fn gamma_invariant(l: &LabeledComplex, algebra: &GradedAlgebra, e: &[NovikovSeries]) -> Result<BigRational> {
    let chain = l.chain_of(algebra, e)?;
    let c = spectral_invariant(&l.complex, &chain)?;
    let dual = dual_pairing(&l.complex);
    let cd = spectral_invariant(&dual, &chain)?;
    Ok(c + cd)
}

/// `γ_E = max_l γ_{e_l}`.
pub fn gamma_e(l: &LabeledComplex, algebra: &GradedAlgebra, e: &[Vec<NovikovSeries>]) -> Result<BigRational> {
    let mut best: Option<BigRational> = None;
    for x in e {
        let g = gamma_invariant(l, algebra, x)?;
        best = Some(best.map_or(g.clone(), |b| b.max(g)));
    }
    best.ok_or(Error::MissingCertificate)
}

/// Bar-length comparison of two labeled complexes over the same algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    /// Finite bar lengths, longest first.
    pub bars1: Vec<BigRational>,
    pub bars2: Vec<BigRational>,
    /// `|β_j(L1) − β_j(L2)|`, shorter list padded with zeros.
    pub gaps: Vec<BigRational>,
    pub max_gap: BigRational,
    pub gamma1: BigRational,
    pub gamma2: BigRational,
    /// `γ_E(L1) + γ_E(L2) + δ`.
    pub gamma_bound: BigRational,
    pub within_gamma_bound: bool,
    /// `max_i |A_1(x_i) − A_2(x_i)|`.
    pub action_shift: BigRational,
    /// Every gap is at most twice the action shift.
    pub within_shift_bound: bool,
    /// Boundary depth of each side against the configured uniform bound.
    pub uniform_bound: Option<BigRational>,
    pub within_uniform_bound: Option<bool>,
}

fn sorted_bars(c: &FilteredComplex) -> Result<Vec<BigRational>> {
    let mut b = svd(c)?.bar_lengths;
    b.sort_by(|x, y| y.cmp(x));
    Ok(b)
}

pub fn bar_stability_check(
    l1: &LabeledComplex,
    l2: &LabeledComplex,
    algebra: &GradedAlgebra,
    e: &[Vec<NovikovSeries>],
    delta: &BigRational,
    uniform_bound: Option<&BigRational>,
) -> Result<StabilityReport> {
    let (c1, c2) = (&l1.complex, &l2.complex);
    let shape = |reason: String| Error::ShapeMismatch { reason };
    if c1.rank() != c2.rank() {
        return Err(shape(format!("ranks {} and {}", c1.rank(), c2.rank())));
    }
    for (g1, g2) in c1.generators().iter().zip(c2.generators()) {
        if g1.name != g2.name || g1.degree != g2.degree {
            return Err(shape(format!("generator {} differs from {}", g1.name, g2.name)));
        }
    }
    if l1.labels.keys().ne(l2.labels.keys()) {
        return Err(shape("label sets differ".into()));
    }
    let bars1 = sorted_bars(c1)?;
    let bars2 = sorted_bars(c2)?;
    let n = bars1.len().max(bars2.len());
    let zero = BigRational::zero();
    let gaps: Vec<BigRational> = (0..n)
        .map(|j| (bars1.get(j).unwrap_or(&zero) - bars2.get(j).unwrap_or(&zero)).abs())
        .collect();
    let max_gap = gaps.iter().max().cloned().unwrap_or_default();
    let gamma1 = gamma_e(l1, algebra, e)?;
    let gamma2 = gamma_e(l2, algebra, e)?;
    let gamma_bound = &gamma1 + &gamma2 + delta;
    let action_shift = c1
        .generators()
        .iter()
        .zip(c2.generators())
        .map(|(a, b)| (&a.action - &b.action).abs())
        .max()
        .unwrap_or_default();
    let two = BigRational::from_integer(BigInt::from(2));
    let depth = |b: &[BigRational]| b.first().cloned().unwrap_or_default();
    let within_uniform_bound = uniform_bound.map(|c| &depth(&bars1) <= c && &depth(&bars2) <= c);
    Ok(StabilityReport {
        within_gamma_bound: max_gap <= gamma_bound,
        within_shift_bound: max_gap <= &two * &action_shift,
        bars1,
        bars2,
        gaps,
        max_gap,
        gamma1,
        gamma2,
        gamma_bound,
        action_shift,
        uniform_bound: uniform_bound.cloned(),
        within_uniform_bound,
    })
}
