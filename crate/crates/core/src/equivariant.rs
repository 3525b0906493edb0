//! Cyclic group actions on filtered complexes, tensor powers, the truncated
//! Tate complex, and the Smith-inequality harness.
//!
//! The Tate complex of `(C, τ)` with `u`-truncation `K` has generators
//! `g⊗u^k` and `g⊗θu^k` (`0 ≤ k ≤ K`), where `θ` has degree `−1`, `u` has
//! degree `−2`, both at filtration level `0`, and
//!
//! ```text
//! d(g⊗u^k)  =  d'g⊗u^k + (1 − τ)g⊗θu^k
//! d(g⊗θu^k) = −d'g⊗θu^k + (1 + τ + … + τ^{p−1})g⊗u^{k+1}
//! ```
//!
//! with `d' = τ^{-1} d τ` and the last term dropped when `k = K`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::filtered::{svd, FilteredComplex, Generator, Strictness};
use crate::scalar::CoefficientField;
use crate::series::{qi, NovikovSeries, Valuation};

/// Default cap on the number of generators of a tensor power.
pub const DEFAULT_RANK_CAP: usize = 4096;

/// `τ(x_i) = scale_i · x_{σ(i)}` with monomial scalings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicAction {
    order: u64,
    images: Vec<(usize, NovikovSeries)>,
}

impl CyclicAction {
    pub fn new(order: u64, images: Vec<(usize, NovikovSeries)>) -> Result<Self> {
        let n = images.len();
        let mut hit = vec![false; n];
        for (i, (t, s)) in images.iter().enumerate() {
            if *t >= n || hit[*t] {
                return Err(Error::InvalidAction {
                    reason: format!("image of generator {i} is not a permutation"),
                });
            }
            hit[*t] = true;
            if s.terms().len() != 1 || !s.is_exact() {
                return Err(Error::InvalidAction {
                    reason: format!("scaling of generator {i} is not an exact monomial"),
                });
            }
        }
        let act = CyclicAction { order, images };
        for i in 0..n {
            let (mut j, mut s) = (i, NovikovSeries::one(act.images[i].1.field()));
            for _ in 0..order {
                s = &s * &act.images[j].1;
                j = act.images[j].0;
            }
            if j != i || s != NovikovSeries::one(s.field()) {
                return Err(Error::InvalidAction {
                    reason: format!("tau^{order} is not the identity on generator {i}"),
                });
            }
        }
        Ok(act)
    }

    pub fn identity(order: u64, rank: usize, field: CoefficientField) -> Self {
        CyclicAction {
            order,
            images: (0..rank).map(|i| (i, NovikovSeries::one(field))).collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[(usize, NovikovSeries)] {
        &self.images
    }

    pub fn apply(&self, v: &[NovikovSeries]) -> Vec<NovikovSeries> {
        let field = v.first().map_or(CoefficientField::Rationals, |s| s.field());
        let mut out = vec![NovikovSeries::zero(field); v.len()];
        for (i, (t, s)) in self.images.iter().enumerate() {
            if !v[i].is_exact_zero() {
                out[*t] = &out[*t] + &(&v[i] * s);
            }
        }
        out
    }

    pub fn apply_inverse(&self, v: &[NovikovSeries]) -> Vec<NovikovSeries> {
        let field = v.first().map_or(CoefficientField::Rationals, |s| s.field());
        let mut out = vec![NovikovSeries::zero(field); v.len()];
        for (i, (t, s)) in self.images.iter().enumerate() {
            if !v[*t].is_exact_zero() {
                let (e, c) = &s.terms()[0];
                let inv = NovikovSeries::monomial(c.inv().expect("nonzero"), -e.clone(), s.field());
                out[i] = &out[i] + &(&v[*t] * &inv);
            }
        }
        out
    }

    /// True when `τ` never raises filtration levels of `c`.
    pub fn preserves_filtration(&self, c: &FilteredComplex) -> bool {
        self.images.iter().enumerate().all(|(i, (t, s))| match s.valuation() {
            Valuation::Finite(v) => &c.generators()[*t].action - v <= c.generators()[i].action,
            Valuation::Infinity => true,
        })
    }
}

fn parity_sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `C^{⊗p}` with the cyclic permutation of factors
/// `τ(x_1⊗…⊗x_p) = (−1)^{|x_p|(|x_1|+…+|x_{p−1}|)} x_p⊗x_1⊗…⊗x_{p−1}`.
/// Generators are tuples in lexicographic order; actions and degrees add and
/// the differential follows the Leibniz rule with Koszul signs.
pub fn tensor_power(c: &FilteredComplex, p: u32, rank_cap: usize) -> Result<(FilteredComplex, CyclicAction)> {
    let n = c.rank();
    let total = (n as u128).checked_pow(p).unwrap_or(u128::MAX);
    if total > rank_cap as u128 {
        return Err(Error::RankOverflow { rank: total, cap: rank_cap });
    }
    let total = total as usize;
    let p = p as usize;
    let field = c.field();
    let gens = c.generators();
    let digits = |mut idx: usize| -> Vec<usize> {
        let mut d = vec![0; p];
        for k in (0..p).rev() {
            d[k] = idx % n;
            idx /= n;
        }
        d
    };
    let index = |d: &[usize]| d.iter().fold(0usize, |acc, &x| acc * n + x);
    let mut generators = Vec::with_capacity(total);
    let mut entries = Vec::new();
    let mut images = Vec::with_capacity(total);
    for idx in 0..total {
        let d = digits(idx);
        let name = d.iter().map(|&i| gens[i].name.as_str()).collect::<Vec<_>>().join("⊗");
        let degree: i64 = d.iter().map(|&i| gens[i].degree).sum();
        let action = d.iter().fold(BigRational::zero(), |a, &i| a + &gens[i].action);
        generators.push(Generator::new(name, degree, action));
        let mut prefix = 0i64;
        for k in 0..p {
            let sign = field.from_i64(parity_sign(prefix));
            for (t, s) in c.column(d[k]) {
                let mut e = d.clone();
                e[k] = *t;
                entries.push((idx, index(&e), s.scale(&sign)));
            }
            prefix += gens[d[k]].degree;
        }
        let last = gens[d[p - 1]].degree;
        let rest: i64 = d[..p - 1].iter().map(|&i| gens[i].degree).sum();
        let mut rotated = vec![d[p - 1]];
        rotated.extend_from_slice(&d[..p - 1]);
        let sign = field.from_i64(parity_sign(last * rest));
        images.push((index(&rotated), NovikovSeries::constant(sign, field)));
    }
    let complex = FilteredComplex::unchecked(field, c.grading(), generators, entries);
    let action = CyclicAction {
        order: p as u64,
        images,
    };
    Ok((complex, action))
}

fn check_char(c: &FilteredComplex, act: &CyclicAction) -> Result<u64> {
    match c.field() {
        CoefficientField::PrimeField(q) if q == act.order => Ok(q),
        f => Err(Error::CharMismatch {
            expected: act.order,
            found: f.characteristic(),
        }),
    }
}

/// The `u`-truncated Tate complex of `(C, τ)`; see the module docs.
/// Generator order: for each base generator `g`, `g⊗u^0, g⊗θu^0, g⊗u^1, …`.
pub fn tate_complex(c: &FilteredComplex, act: &CyclicAction, k_max: usize) -> Result<FilteredComplex> {
    let p = check_char(c, act)?;
    if act.rank() != c.rank() {
        return Err(Error::DimensionMismatch {
            expected: c.rank(),
            found: act.rank(),
        });
    }
    let field = c.field();
    let n = c.rank();
    let width = 2 * (k_max + 1);
    let plain = |g: usize, k: usize| g * width + 2 * k;
    let theta = |g: usize, k: usize| g * width + 2 * k + 1;
    let mut generators = Vec::with_capacity(n * width);
    for g in c.generators() {
        for k in 0..=k_max {
            let k2 = 2 * k as i64;
            generators.push(Generator::new(format!("{}⊗u^{k}", g.name), g.degree - k2, g.action.clone()));
            generators.push(Generator::new(format!("{}⊗θu^{k}", g.name), g.degree - 1 - k2, g.action.clone()));
        }
    }
    let mut entries = Vec::new();
    for j in 0..n {
        let ej = c.basis_vector(j);
        // d'(x_j) = τ^{-1} d τ x_j
        let dprime = act.apply_inverse(&c.apply(&act.apply(&ej))?);
        let tau = act.apply(&ej);
        let one_minus_tau: Vec<NovikovSeries> = ej.iter().zip(&tau).map(|(a, b)| a - b).collect();
        let mut norm = ej.clone();
        let mut pw = ej.clone();
        for _ in 1..p {
            pw = act.apply(&pw);
            norm = norm.iter().zip(&pw).map(|(a, b)| a + b).collect();
        }
        for k in 0..=k_max {
            for (i, s) in dprime.iter().enumerate() {
                if !s.is_zero() {
                    entries.push((plain(j, k), plain(i, k), s.clone()));
                    entries.push((theta(j, k), theta(i, k), -s));
                }
            }
            for (i, s) in one_minus_tau.iter().enumerate() {
                if !s.is_zero() {
                    entries.push((plain(j, k), theta(i, k), s.clone()));
                }
            }
            if k < k_max {
                for (i, s) in norm.iter().enumerate() {
                    if !s.is_zero() {
                        entries.push((theta(j, k), plain(i, k + 1), s.clone()));
                    }
                }
            }
        }
    }
    FilteredComplex::checked(field, c.grading(), generators, entries, Strictness::Weak)
}

/// Multiset of rationals as value → multiplicity.
pub type Multiset = BTreeMap<BigRational, usize>;

pub fn multiset(values: &[BigRational]) -> Multiset {
    let mut m = Multiset::new();
    for v in values {
        *m.entry(v.clone()).or_insert(0) += 1;
    }
    m
}

pub fn multiset_values(m: &Multiset) -> Vec<BigRational> {
    m.iter()
        .flat_map(|(v, &k)| core::iter::repeat_n(v.clone(), k))
        .collect()
}

/// `a ⊖ b`; `None` when `b` is not contained in `a`.
pub fn multiset_difference(a: &Multiset, b: &Multiset) -> Option<Multiset> {
    let mut out = a.clone();
    for (v, &k) in b {
        let e = out.get_mut(v)?;
        if *e < k {
            return None;
        }
        *e -= k;
        if *e == 0 {
            out.remove(v);
        }
    }
    Some(out)
}

fn sum(values: &[BigRational]) -> BigRational {
    values.iter().fold(BigRational::zero(), |a, b| a + b)
}

/// Bar lengths of one `u`-power of the Tate complex: the spectrum at
/// truncation `K + 1` minus the spectrum at `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateSpectrum {
    pub k: usize,
    pub full_k: Vec<BigRational>,
    pub full_k1: Vec<BigRational>,
    /// `None` when the spectrum at `K` does not embed in the one at `K + 1`.
    pub per_u_degree: Option<Vec<BigRational>>,
    /// Per-`u` spectrum recomputed one step later, when requested.
    pub stabilized: Option<bool>,
}

fn bar_lengths(c: &FilteredComplex) -> Result<Vec<BigRational>> {
    Ok(svd(c)?.bar_lengths)
}

pub fn tate_spectrum(c: &FilteredComplex, act: &CyclicAction, k: usize, check_stable: bool) -> Result<TateSpectrum> {
    let full_k = bar_lengths(&tate_complex(c, act, k)?)?;
    let full_k1 = bar_lengths(&tate_complex(c, act, k + 1)?)?;
    let diff = |a: &[BigRational], b: &[BigRational]| {
        multiset_difference(&multiset(a), &multiset(b)).map(|m| multiset_values(&m))
    };
    let per_u_degree = diff(&full_k1, &full_k);
    let stabilized = if check_stable {
        let full_k2 = bar_lengths(&tate_complex(c, act, k + 2)?)?;
        Some(per_u_degree.is_some() && diff(&full_k2, &full_k1) == per_u_degree)
    } else {
        None
    };
    Ok(TateSpectrum {
        k,
        full_k,
        full_k1,
        per_u_degree,
        stabilized,
    })
}

/// Comparison of the `p`-rescaled doubled spectrum of `C` with the cyclic
/// Tate spectrum of `C^{⊗p}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiFrobeniusReport {
    pub p: u64,
    pub k: usize,
    /// Per-`u` Tate spectrum of `C` with the trivial action.
    pub doubled: Vec<BigRational>,
    /// `doubled` with every length multiplied by `p`.
    pub rescaled: Vec<BigRational>,
    /// Per-`u` Tate spectrum of `C^{⊗p}` with the cyclic action.
    pub cyclic: Vec<BigRational>,
    pub equal: bool,
}

pub fn quasi_frobenius(c: &FilteredComplex, p: u64, k: usize, rank_cap: usize) -> Result<QuasiFrobeniusReport> {
    let trivial = CyclicAction::identity(p, c.rank(), c.field());
    check_char(c, &trivial)?;
    let doubled = tate_spectrum(c, &trivial, k, false)?
        .per_u_degree
        .ok_or_else(|| Error::InsufficientPrecision {
            reason: "trivial-action spectrum did not grow with K".into(),
        })?;
    let pq = qi(p as i64);
    let rescaled: Vec<BigRational> = doubled.iter().map(|x| x * &pq).collect();
    let (power, act) = tensor_power(c, p as u32, rank_cap)?;
    let cyclic = tate_spectrum(&power, &act, k, false)?.per_u_degree.unwrap_or_default();
    Ok(QuasiFrobeniusReport {
        p,
        k,
        equal: rescaled == cyclic,
        doubled,
        rescaled,
        cyclic,
    })
}

/// Chain-level Smith inequality `p·β_tot(C) ≤ β_tot(C^{⊗p})` with the
/// intermediate spectra of the equivariant argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithReport {
    pub p: u64,
    pub k: usize,
    pub spectrum: Vec<BigRational>,
    pub beta_total: BigRational,
    pub lhs: BigRational,
    /// Bar lengths of the target `C^{⊗p}`.
    pub target_spectrum: Vec<BigRational>,
    pub rhs: BigRational,
    pub pass: bool,
    pub doubled: Vec<BigRational>,
    pub rescaled: Vec<BigRational>,
    /// Per-`u` Tate spectrum of the target with the cyclic action.
    pub cyclic_tate: Option<Vec<BigRational>>,
    pub cyclic_tate_total: Option<BigRational>,
    /// `2p·β_tot(C) ≤ Σ β̂`.
    pub doubled_bound: Option<bool>,
    /// `Σ β̂ ≤ 2·β_tot(C^{⊗p})`.
    pub target_bound: Option<bool>,
    pub notes: Vec<String>,
}

pub fn smith_check(c: &FilteredComplex, p: u64, k: usize, rank_cap: usize) -> Result<SmithReport> {
    let trivial = CyclicAction::identity(p, c.rank(), c.field());
    check_char(c, &trivial)?;
    let spectrum = bar_lengths(c)?;
    let beta_total = sum(&spectrum);
    let pq = qi(p as i64);
    let lhs = &beta_total * &pq;
    let (power, act) = tensor_power(c, p as u32, rank_cap)?;
    let target_spectrum = bar_lengths(&power)?;
    let rhs = sum(&target_spectrum);
    let mut notes = Vec::new();
    let doubled = match tate_spectrum(c, &trivial, k, false)?.per_u_degree {
        Some(d) => d,
        None => {
            notes.push("trivial-action spectrum at K is not contained in K+1".into());
            Vec::new()
        }
    };
    let rescaled: Vec<BigRational> = doubled.iter().map(|x| x * &pq).collect();
    let cyclic_tate = tate_spectrum(&power, &act, k, false)?.per_u_degree;
    if cyclic_tate.is_none() {
        notes.push("cyclic Tate spectrum at K is not contained in K+1".into());
    }
    let cyclic_tate_total = cyclic_tate.as_ref().map(|v| sum(v));
    let two = qi(2);
    let doubled_bound = cyclic_tate_total.as_ref().map(|t| &(&two * &lhs) <= t);
    let target_bound = cyclic_tate_total.as_ref().map(|t| t <= &(&two * &rhs));
    Ok(SmithReport {
        p,
        k,
        pass: lhs <= rhs,
        spectrum,
        beta_total,
        lhs,
        target_spectrum,
        rhs,
        doubled,
        rescaled,
        cyclic_tate,
        cyclic_tate_total,
        doubled_bound,
        target_bound,
        notes,
    })
}
