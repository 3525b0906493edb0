//! Spectral invariants of homology classes and the duality pairing.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{svd, FilteredComplex, Generator};
use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::ratfunc::RatFunc;
use crate::series::{NovikovSeries, Valuation};

fn lcm_of(vectors: &[&Vec<NovikovSeries>], extra: &[NovikovSeries]) -> BigInt {
    let mut l = BigInt::one();
    for v in vectors {
        for s in v.iter() {
            l = l.lcm(&s.exponent_denominator_lcm());
        }
    }
    for s in extra {
        l = l.lcm(&s.exponent_denominator_lcm());
    }
    l
}

fn require_exact(chain: &[NovikovSeries]) -> Result<()> {
    if chain.iter().all(NovikovSeries::is_exact) {
        Ok(())
    } else {
        Err(Error::TruncationTooCoarse {
            reason: "spectral invariants need exact chains".into(),
        })
    }
}

/// Coordinates of `chain` in the SVD basis, split by kind.
struct Coordinates {
    /// `(A(ξ_k), coefficient valuation)` for the nonzero `ξ`-coefficients.
    xi: Vec<(BigRational, BigRational)>,
}

fn coordinates(c: &FilteredComplex, chain: &[NovikovSeries]) -> Result<Coordinates> {
    let basis = svd(c)?;
    let vectors = basis.vectors();
    let l = lcm_of(&vectors, chain);
    let field = c.field().fraction_field();
    let to_rf = |v: &Vec<NovikovSeries>| -> Vec<RatFunc> {
        v.iter()
            .map(|s| RatFunc::from_series(&s.clone().retag(field), &l))
            .collect()
    };
    let cols: Vec<Vec<RatFunc>> = vectors.iter().map(|v| to_rf(v)).collect();
    let rhs = to_rf(&chain.to_vec());
    let x = solve(&cols, &rhs).ok_or_else(|| Error::InvalidComplex(alloc::vec![String::from("SVD basis is singular")]))?;
    let mut xi = Vec::new();
    for (k, a) in x.iter().enumerate().take(basis.b()) {
        if let Some(v) = a.valuation() {
            xi.push((basis.xi_levels[k].clone(), BigRational::new(BigInt::from(v), l.clone())));
        }
    }
    Ok(Coordinates { xi })
}

/// `c(α) = min` of the filtration level over all representatives of the
/// class of the cycle `chain`.
pub fn spectral_invariant(c: &FilteredComplex, chain: &[NovikovSeries]) -> Result<BigRational> {
    require_exact(chain)?;
    let d = c.apply(chain)?;
    if d.iter().any(|s| !s.is_zero()) {
        return Err(Error::NotACycle);
    }
    let coords = coordinates(c, chain)?;
    coords
        .xi
        .iter()
        .map(|(level, v)| level - v)
        .max()
        .ok_or(Error::NullClass)
}

/// The dual complex: generators `x'_i` with action `−A(x_i)`, degree
/// `−deg(x_i)`, and `d*(x'_i) = Σ_j d_ij x'_j`, so that
/// `Δ(d a, b) = Δ(a, d* b)`.
pub fn dual_pairing(c: &FilteredComplex) -> FilteredComplex {
    let generators = c
        .generators()
        .iter()
        .map(|g| Generator::new(format!("{}'", g.name), -g.degree, -g.action.clone()))
        .collect();
    let entries: Vec<_> = c.entries().map(|(from, to, s)| (to, from, s.clone())).collect();
    FilteredComplex::unchecked(c.field(), c.grading(), generators, entries)
}

/// `Δ(a, b) = Σ a_i b_i`.
pub fn pairing(a: &[NovikovSeries], b: &[NovikovSeries]) -> Result<NovikovSeries> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let field = a.first().map(|s| s.field()).unwrap_or(crate::CoefficientField::Rationals);
    let mut acc = NovikovSeries::zero(field);
    for (x, y) in a.iter().zip(b) {
        acc = acc.checked_add(&x.checked_mul(y)?)?;
    }
    Ok(acc)
}

/// Positivity of `ν∘Δ` on chains below level `α` paired with cochains
/// below `−α`. Returns `None` when no such `α` exists for this pair
/// (`A(a) + A*(b) ≥ 0` or one side is zero), else whether `ν(Δ(a, b)) > 0`.
pub fn pairing_positivity(
    c: &FilteredComplex,
    dual: &FilteredComplex,
    a: &[NovikovSeries],
    b: &[NovikovSeries],
) -> Result<Option<bool>> {
    let (Some(la), Some(lb)) = (c.filtration_level(a)?, dual.filtration_level(b)?) else {
        return Ok(None);
    };
    if !(la + lb < BigRational::zero()) {
        return Ok(None);
    }
    let delta = pairing(a, b)?;
    Ok(Some(match delta.valuation() {
        Valuation::Finite(v) => v > BigRational::zero(),
        Valuation::Infinity => true,
    }))
}

/// Both sides of `c(a) = −inf{ c*(b) : Δ(a, b) ≠ 0 }`, where `b` ranges over
/// the dual SVD cycles rescaled so that `ν(Δ(a, b)) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub equal: bool,
    /// `A*(ξ'_k) + ν(Δ(a, ξ'_k))` for every dual cycle with nonzero pairing.
    pub candidates: Vec<BigRational>,
}

pub fn duality_check(c: &FilteredComplex, chain: &[NovikovSeries]) -> Result<DualityReport> {
    let lhs = spectral_invariant(c, chain)?;
    let dual = dual_pairing(c);
    let basis = svd(&dual)?;
    let mut candidates = Vec::new();
    for (xi, level) in basis.xi.iter().zip(&basis.xi_levels) {
        let delta = pairing(chain, xi)?;
        if let Valuation::Finite(v) = delta.valuation() {
            candidates.push(level + v);
        }
    }
    let rhs = -candidates.iter().min().cloned().ok_or(Error::NullClass)?;
    Ok(DualityReport {
        equal: lhs == rhs,
        lhs,
        rhs,
        candidates,
    })
}
