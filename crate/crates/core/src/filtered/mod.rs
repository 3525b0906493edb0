//! Finite filtered free complexes over a Novikov field.
//!
//! A generator `x` with action `A(x)` has filtration level
//! `A(Σ λ_i x_i) = max(A(x_i) − ν(λ_i))`. The differential is stored by
//! columns: column `j` lists `d x_j = Σ_i d_ij x_i`.

mod spectral;
mod svd;

pub use spectral::{dual_pairing, duality_check, pairing, pairing_positivity, spectral_invariant, DualityReport};
pub use svd::{barcode_of, svd, torsion_decomposition, BarcodeReport, SvdBasis};

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::CoefficientField;
use crate::series::{NovikovSeries, Valuation};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Grading {
    #[default]
    Z,
    Z2,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub action: BigRational,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64, action: BigRational) -> Self {
        Generator {
            name: name.into(),
            degree,
            action,
        }
    }
}

/// One violated invariant found by [`FilteredComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: &'static str,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    field: CoefficientField,
    grading: Grading,
    generators: Vec<Generator>,
    /// `cols[j]` = nonzero entries `(i, d_ij)` sorted by `i`.
    cols: Vec<Vec<(usize, NovikovSeries)>>,
}

/// How strictly the differential must lower the filtration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strictness {
    /// `A(y) − ν(d_yx) < A(x)` for every entry.
    Strict,
    /// `A(y) − ν(d_yx) ≤ A(x)`; used by Tate complexes, whose `(1 − τ)`
    /// term preserves the level.
    Weak,
}

impl FilteredComplex {
    /// Assembles a complex without checking invariants. Entries with the
    /// same `(from, to)` are summed.
    pub fn unchecked(
        field: CoefficientField,
        grading: Grading,
        generators: Vec<Generator>,
        entries: impl IntoIterator<Item = (usize, usize, NovikovSeries)>,
    ) -> Self {
        let n = generators.len();
        let mut cols: Vec<Vec<(usize, NovikovSeries)>> = vec![Vec::new(); n];
        for (from, to, coeff) in entries {
            let col = &mut cols[from];
            match col.binary_search_by(|(i, _)| i.cmp(&to)) {
                Ok(k) => col[k].1 = &col[k].1 + &coeff,
                Err(k) => col.insert(k, (to, coeff)),
            }
        }
        for col in &mut cols {
            col.retain(|(_, c)| !c.is_exact_zero());
        }
        FilteredComplex {
            field,
            grading,
            generators,
            cols,
        }
    }

    /// Assembles and validates a strict complex.
    pub fn new(
        field: CoefficientField,
        grading: Grading,
        generators: Vec<Generator>,
        entries: impl IntoIterator<Item = (usize, usize, NovikovSeries)>,
    ) -> Result<Self> {
        Self::checked(field, grading, generators, entries, Strictness::Strict)
    }

    pub fn checked(
        field: CoefficientField,
        grading: Grading,
        generators: Vec<Generator>,
        entries: impl IntoIterator<Item = (usize, usize, NovikovSeries)>,
        strictness: Strictness,
    ) -> Result<Self> {
        let n = generators.len();
        let entries: Vec<_> = entries.into_iter().collect();
        if let Some((f, t, _)) = entries.iter().find(|(f, t, _)| *f >= n || *t >= n) {
            return Err(Error::InvalidComplex(vec![format!(
                "INDEX_OUT_OF_RANGE: entry {f} -> {t} with {n} generators"
            )]));
        }
        let c = Self::unchecked(field, grading, generators, entries);
        let diags = c.validate_with(strictness);
        if diags.is_empty() {
            Ok(c)
        } else {
            Err(Error::InvalidComplex(diags.iter().map(ToString::to_string).collect()))
        }
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn actions(&self) -> Vec<BigRational> {
        self.generators.iter().map(|g| g.action.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn column(&self, j: usize) -> &[(usize, NovikovSeries)] {
        &self.cols[j]
    }

    /// All nonzero entries as `(from, to, coeff)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &NovikovSeries)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, c)| (j, *i, c)))
    }

    pub fn entry(&self, to: usize, from: usize) -> NovikovSeries {
        self.cols[from]
            .binary_search_by(|(i, _)| i.cmp(&to))
            .map(|k| self.cols[from][k].1.clone())
            .unwrap_or_else(|_| NovikovSeries::zero(self.field))
    }

    pub fn is_exact(&self) -> bool {
        self.entries().all(|(_, _, c)| c.is_exact())
    }

    fn degree_matches(&self, from: usize, to: usize) -> bool {
        let d = self.generators[from].degree - 1 - self.generators[to].degree;
        match self.grading {
            Grading::Z => d == 0,
            Grading::Z2 => d.rem_euclid(2) == 0,
        }
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        self.validate_with(Strictness::Strict)
    }

    pub fn validate_with(&self, strictness: Strictness) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for g in &self.generators {
            if !seen.insert(g.name.as_str()) {
                out.push(Diagnostic {
                    code: "DUPLICATE_GENERATOR",
                    message: format!("generator name {} used twice", g.name),
                });
            }
        }
        for (from, to, c) in self.entries() {
            let (x, y) = (&self.generators[from], &self.generators[to]);
            if c.field().fraction_field() != self.field.fraction_field() {
                out.push(Diagnostic {
                    code: "FIELD_MISMATCH",
                    message: format!("entry {} -> {} over {}", x.name, y.name, c.field()),
                });
                continue;
            }
            if !self.degree_matches(from, to) {
                out.push(Diagnostic {
                    code: "DEGREE_MISMATCH",
                    message: format!(
                        "d({}) has degree {} but hits {} of degree {}",
                        x.name, x.degree, y.name, y.degree
                    ),
                });
            }
            if let Valuation::Finite(v) = c.valuation_lower_bound() {
                let level = &y.action - &v;
                let bad = match strictness {
                    Strictness::Strict => level >= x.action,
                    Strictness::Weak => level > x.action,
                };
                if bad {
                    out.push(Diagnostic {
                        code: "STRICTNESS_VIOLATION",
                        message: format!(
                            "entry {} -> {} ({c}) reaches level {level} >= A({}) = {}",
                            x.name, y.name, x.name, x.action
                        ),
                    });
                }
            }
        }
        if out.iter().all(|d| d.code != "FIELD_MISMATCH") {
            for j in 0..self.rank() {
                let dd = self.apply_unchecked(&self.basis_vector(j));
                let dd = self.apply_unchecked(&dd);
                if let Some((i, s)) = dd.iter().enumerate().find(|(_, s)| !s.is_zero()) {
                    out.push(Diagnostic {
                        code: "D_SQUARED_NONZERO",
                        message: format!(
                            "d(d({})) has coefficient {s} on {}",
                            self.generators[j].name, self.generators[i].name
                        ),
                    });
                }
            }
        }
        out
    }

    /// True when every entry lowers the filtration strictly.
    pub fn is_strict(&self) -> bool {
        self.entries().all(|(from, to, c)| match c.valuation_lower_bound() {
            Valuation::Finite(v) => &self.generators[to].action - v < self.generators[from].action,
            Valuation::Infinity => true,
        })
    }

    pub fn basis_vector(&self, j: usize) -> Vec<NovikovSeries> {
        let mut v = vec![NovikovSeries::zero(self.field); self.rank()];
        v[j] = NovikovSeries::one(self.field);
        v
    }

    pub fn zero_chain(&self) -> Vec<NovikovSeries> {
        vec![NovikovSeries::zero(self.field); self.rank()]
    }

    fn apply_unchecked(&self, v: &[NovikovSeries]) -> Vec<NovikovSeries> {
        let mut out = self.zero_chain();
        for (j, vj) in v.iter().enumerate() {
            if vj.is_exact_zero() {
                continue;
            }
            for (i, d) in &self.cols[j] {
                out[*i] = &out[*i] + &(d * vj);
            }
        }
        out
    }

    /// `d(v)`.
    pub fn apply(&self, v: &[NovikovSeries]) -> Result<Vec<NovikovSeries>> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: v.len(),
            });
        }
        for s in v {
            if s.field().fraction_field() != self.field.fraction_field() {
                return Err(Error::FieldMismatch {
                    left: self.field.tag(),
                    right: s.field().tag(),
                });
            }
        }
        Ok(self.apply_unchecked(v))
    }

    /// `A(chain)`, or `None` for the zero chain (level `−∞`).
    pub fn filtration_level(&self, chain: &[NovikovSeries]) -> Result<Option<BigRational>> {
        if chain.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: chain.len(),
            });
        }
        let mut best: Option<BigRational> = None;
        let mut unknown: Option<BigRational> = None;
        for (g, s) in self.generators.iter().zip(chain) {
            match (s.valuation(), s.truncation()) {
                (Valuation::Finite(v), _) => {
                    let l = &g.action - v;
                    if best.as_ref().is_none_or(|b| &l > b) {
                        best = Some(l);
                    }
                }
                (Valuation::Infinity, Some(t)) => {
                    let l = &g.action - t;
                    if unknown.as_ref().is_none_or(|u| &l > u) {
                        unknown = Some(l);
                    }
                }
                (Valuation::Infinity, None) => {}
            }
        }
        if let Some(u) = unknown {
            if best.as_ref().is_none_or(|b| &u > b) {
                return Err(Error::TruncationTooCoarse {
                    reason: format!("a coefficient known only to vanish below its truncation could reach level {u}"),
                });
            }
        }
        Ok(best)
    }

    /// Entrywise reduction mod `p`, listing every entry that fails.
    pub fn reduce_mod_p(&self, p: u64) -> Result<FilteredComplex> {
        let field = CoefficientField::prime_field(p)?;
        let mut bad = Vec::new();
        let mut entries = Vec::new();
        for (from, to, c) in self.entries() {
            match c.reduce_mod_p(p) {
                Ok(r) => entries.push((from, to, r)),
                Err(Error::DenominatorDivisibleByP { location, .. }) => bad.push(format!(
                    "{} -> {} ({location})",
                    self.generators[from].name, self.generators[to].name
                )),
                Err(e) => return Err(e),
            }
        }
        if !bad.is_empty() {
            return Err(Error::DenominatorDivisibleByP {
                p,
                location: format!("entries {}", bad.join(", ")),
            });
        }
        Ok(Self::unchecked(field, self.grading, self.generators.clone(), entries))
    }

    /// `T ↦ T^c`: actions and every exponent multiplied by `c > 0`.
    pub fn rescale_exponents(&self, c: &BigRational) -> Result<FilteredComplex> {
        let mut entries = Vec::new();
        for (from, to, s) in self.entries() {
            entries.push((from, to, s.rescale_exponents(c)?));
        }
        let generators = self
            .generators
            .iter()
            .map(|g| Generator::new(g.name.clone(), g.degree, &g.action * c))
            .collect();
        Ok(Self::unchecked(self.field, self.grading, generators, entries))
    }

    /// Same entries, new generator actions. The result may violate
    /// strictness; callers validate.
    pub fn with_actions_raw(&self, actions: &[BigRational]) -> FilteredComplex {
        let generators = self
            .generators
            .iter()
            .zip(actions)
            .map(|(g, a)| Generator::new(g.name.clone(), g.degree, a.clone()))
            .collect();
        FilteredComplex {
            field: self.field,
            grading: self.grading,
            generators,
            cols: self.cols.clone(),
        }
    }

    /// Replaces the basis by the columns of `p` (coordinates in the old
    /// basis). `p` must be upper triangular with nonzero constant diagonal
    /// and must not raise filtration levels, so that its inverse is
    /// computed exactly and the new basis is orthogonal with the same actions.
    pub fn change_basis(&self, p: &[Vec<NovikovSeries>]) -> Result<FilteredComplex> {
        let n = self.rank();
        if p.len() != n || p.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        for (j, col) in p.iter().enumerate() {
            let diag = &col[j];
            let ok_diag = diag.terms().len() == 1 && diag.terms()[0].0.is_zero() && diag.is_exact();
            if !ok_diag || col[j + 1..].iter().any(|s| !s.is_exact_zero()) {
                return Err(Error::InvalidComplex(vec![format!(
                    "BASIS_CHANGE: column {j} is not unit upper triangular"
                )]));
            }
            for (i, s) in col.iter().enumerate().take(j) {
                if let Valuation::Finite(v) = s.valuation() {
                    if &self.generators[i].action - v > self.generators[j].action
                        || self.generators[i].degree != self.generators[j].degree
                    {
                        return Err(Error::InvalidComplex(vec![format!(
                            "BASIS_CHANGE: entry ({i}, {j}) raises filtration or mixes degrees"
                        )]));
                    }
                }
            }
        }
        let inv = upper_triangular_inverse(p, self.field);
        // D' = P^{-1} D P, column by column.
        let mut entries = Vec::new();
        for (j, pj) in p.iter().enumerate() {
            let dp = self.apply_unchecked(pj);
            let col = mat_vec(&inv, &dp, self.field);
            for (i, s) in col.into_iter().enumerate() {
                if !s.is_exact_zero() {
                    entries.push((j, i, s));
                }
            }
        }
        Self::checked(
            self.field,
            self.grading,
            self.generators.clone(),
            entries,
            if self.is_strict() { Strictness::Strict } else { Strictness::Weak },
        )
    }

    /// Least common multiple of all denominators of actions and exponents.
    pub(crate) fn exponent_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for g in &self.generators {
            l = l.lcm(g.action.denom());
        }
        for (_, _, c) in self.entries() {
            l = l.lcm(&c.exponent_denominator_lcm());
        }
        l
    }
}

fn mat_vec(m: &[Vec<NovikovSeries>], v: &[NovikovSeries], field: CoefficientField) -> Vec<NovikovSeries> {
    let n = v.len();
    let mut out = vec![NovikovSeries::zero(field); n];
    for (j, col) in m.iter().enumerate() {
        if v[j].is_exact_zero() {
            continue;
        }
        for (i, s) in col.iter().enumerate() {
            if !s.is_exact_zero() {
                out[i] = &out[i] + &(s * &v[j]);
            }
        }
    }
    out
}

/// Inverse of an upper triangular matrix (given by columns) with constant
/// diagonal, by back substitution. Exact because the strictly upper part is
/// nilpotent.
fn upper_triangular_inverse(p: &[Vec<NovikovSeries>], field: CoefficientField) -> Vec<Vec<NovikovSeries>> {
    let n = p.len();
    let mut inv: Vec<Vec<NovikovSeries>> = vec![vec![NovikovSeries::zero(field); n]; n];
    for j in 0..n {
        // Solve P x = e_j from the bottom up.
        let mut x = vec![NovikovSeries::zero(field); n];
        for i in (0..=j).rev() {
            let mut rhs = if i == j {
                NovikovSeries::one(field)
            } else {
                NovikovSeries::zero(field)
            };
            for (k, xk) in x.iter().enumerate().take(j + 1).skip(i + 1) {
                if !xk.is_exact_zero() && !p[k][i].is_exact_zero() {
                    rhs = &rhs - &(&p[k][i] * xk);
                }
            }
            let d = p[i][i].terms()[0].1.inv().expect("nonzero diagonal");
            x[i] = rhs.scale(&d);
        }
        inv[j] = x;
    }
    inv
}

#[cfg(test)]
mod tests;
