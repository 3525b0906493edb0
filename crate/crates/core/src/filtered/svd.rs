//! Non-Archimedean singular value decomposition and torsion exponents.
//!
//! Both work in the orthonormal gauge `g_i = T^{A(x_i)} x_i`, where the
//! differential has entries `T^{A_j − A_i} d_ij` of nonnegative valuation and
//! every basis change over the valuation ring is filtration-preserving.
//! Exponents are scaled by the common denominator `L` so the working field
//! is `k(t)` with `t = T^{1/L}`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::FilteredComplex;
use crate::barcode::{Barcode, SpectrumStats};
use crate::error::{Error, Result};
use crate::linalg::{rank, SparseMatrix};
use crate::ratfunc::{clear_denominators, RatFunc};
use crate::scalar::CoefficientField;
use crate::series::{NovikovSeries, Valuation};

struct Gauge {
    l: BigInt,
    /// `A_i · L`.
    a: Vec<i64>,
    m: SparseMatrix,
    /// Smallest gauge truncation over all entries, in `t`-units.
    precision: Option<i64>,
    field: CoefficientField,
}

fn to_i64(q: &BigRational) -> i64 {
    assert!(q.is_integer());
    q.to_integer().to_i64().expect("exponent out of range")
}

fn gauge(c: &FilteredComplex) -> Gauge {
    let l = c.exponent_lcm();
    let lq = BigRational::from_integer(l.clone());
    let field = c.field().fraction_field();
    let a: Vec<i64> = c.generators().iter().map(|g| to_i64(&(&g.action * &lq))).collect();
    let mut m = SparseMatrix::new(c.rank(), field);
    let mut precision: Option<i64> = None;
    for (j, i, s) in c.entries() {
        let shift = a[j] - a[i];
        if let Some(t) = s.truncation() {
            let p = to_i64(&(t * &lq)) + shift;
            precision = Some(precision.map_or(p, |q| q.min(p)));
        }
        let known = NovikovSeries::new(field, s.terms().iter().cloned(), None).expect("same field");
        let v = RatFunc::from_series(&known, &l).shift_by(shift);
        m.set(i, j, v);
    }
    Gauge {
        l,
        a,
        m,
        precision,
        field,
    }
}

fn min_entry(m: &SparseMatrix) -> Option<(i64, usize, usize)> {
    m.entries()
        .map(|(i, j, v)| (v.valuation().expect("stored entries are nonzero"), i, j))
        .min()
}

fn too_coarse(val: i64, p: i64, l: &BigInt) -> Error {
    let q = |x: i64| BigRational::new(BigInt::from(x), l.clone());
    Error::TruncationTooCoarse {
        reason: format!("pivot of gauge valuation {} not below the precision {}", q(val), q(p)),
    }
}

/// The orthogonal basis `ξ ∪ η ∪ ζ` with `dξ = 0`, `dζ_j = η_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvdBasis {
    pub xi: Vec<Vec<NovikovSeries>>,
    pub xi_levels: Vec<BigRational>,
    pub eta: Vec<Vec<NovikovSeries>>,
    pub zeta: Vec<Vec<NovikovSeries>>,
    pub zeta_levels: Vec<BigRational>,
    /// `A(ζ_j) − A(η_j)`, ascending.
    pub bar_lengths: Vec<BigRational>,
    /// Pairs with `A(η) = A(ζ)`, possible only in weakly filtered complexes;
    /// they carry no bar.
    pub null_eta: Vec<Vec<NovikovSeries>>,
    pub null_zeta: Vec<Vec<NovikovSeries>>,
    /// For truncated input: results are certified for bars shorter than this.
    pub certified_below: Option<BigRational>,
}

impl SvdBasis {
    pub fn b(&self) -> usize {
        self.xi.len()
    }

    pub fn k(&self) -> usize {
        self.zeta.len()
    }

    pub fn barcode(&self) -> Barcode {
        let mut bc = Barcode::new();
        for (l, len) in self.zeta_levels.iter().zip(&self.bar_lengths) {
            bc.add_finite(l - len, l.clone(), 1);
        }
        for l in &self.xi_levels {
            bc.add_infinite(l.clone(), 1);
        }
        bc
    }

    /// All basis vectors: `ξ`, then `η`, `ζ`, then the null pairs.
    pub fn vectors(&self) -> Vec<&Vec<NovikovSeries>> {
        self.xi
            .iter()
            .chain(&self.eta)
            .chain(&self.zeta)
            .chain(&self.null_eta)
            .chain(&self.null_zeta)
            .collect()
    }

    /// Re-checks `dξ = 0`, `dζ = η`, orthogonality, the bar lengths and the
    /// count `N = B + 2K (+ 2·null pairs)` against the complex.
    pub fn verify(&self, c: &FilteredComplex) -> core::result::Result<(), String> {
        let n = c.rank();
        let count = self.b() + 2 * self.k() + 2 * self.null_zeta.len();
        if count != n {
            return Err(format!("N = {n} but B + 2K = {count}"));
        }
        for (k, x) in self.xi.iter().enumerate() {
            let dx = c.apply(x).map_err(|e| format!("{e}"))?;
            if dx.iter().any(|s| !s.is_zero()) {
                return Err(format!("d(xi_{k}) != 0"));
            }
        }
        let pairs = self
            .zeta
            .iter()
            .zip(&self.eta)
            .chain(self.null_zeta.iter().zip(&self.null_eta));
        for (k, (z, e)) in pairs.enumerate() {
            let dz = c.apply(z).map_err(|e| format!("{e}"))?;
            if dz.iter().zip(e).any(|(a, b)| !(a - b).is_zero()) {
                return Err(format!("d(zeta_{k}) != eta_{k}"));
            }
        }
        for (k, ((z, e), len)) in self.zeta.iter().zip(&self.eta).zip(&self.bar_lengths).enumerate() {
            let lz = c.filtration_level(z).map_err(|e| format!("{e}"))?;
            let le = c.filtration_level(e).map_err(|e| format!("{e}"))?;
            match (lz, le) {
                (Some(lz), Some(le)) if &(&lz - &le) == len && lz == self.zeta_levels[k] => {}
                _ => return Err(format!("bar {k} does not match A(zeta) - A(eta)")),
            }
        }
        if !is_orthogonal(c, &self.vectors()) {
            return Err(String::from("basis is not orthogonal"));
        }
        Ok(())
    }
}

/// A family is orthogonal iff the residues of its level-normalized gauge
/// coordinates are linearly independent over the residue field.
pub(crate) fn is_orthogonal(c: &FilteredComplex, vectors: &[&Vec<NovikovSeries>]) -> bool {
    let field = c.field().fraction_field();
    let mut residues = Vec::with_capacity(vectors.len());
    for v in vectors {
        let Ok(Some(level)) = c.filtration_level(v) else {
            return false;
        };
        // Coefficient of T^0 in T^{level − A_i} v_i.
        let row = c
            .generators()
            .iter()
            .zip(v.iter())
            .map(|(g, s)| s.coefficient(&(&g.action - &level)).clone())
            .map(|x| if x.is_zero() { field.zero() } else { x })
            .collect::<Vec<_>>();
        residues.push(row);
    }
    rank(&residues) == vectors.len()
}

/// Maps gauge coordinates to a normalized vector in the original basis: the
/// first generator attaining the level gets coefficient exactly `1·T^0`.
fn to_original(v: &[RatFunc], g: &Gauge) -> (Vec<NovikovSeries>, BigRational) {
    let (v, _) = clear_denominators(v, g.field);
    let w: Vec<RatFunc> = v.iter().zip(&g.a).map(|(x, a)| x.shift_by(*a)).collect();
    let (i0, _) = v
        .iter()
        .enumerate()
        .filter_map(|(i, x)| x.valuation().map(|val| (i, -val)))
        .fold(None, |best: Option<(usize, i64)>, (i, lv)| match best {
            Some((_, b)) if b >= lv => best,
            _ => Some((i, lv)),
        })
        .expect("nonzero vector");
    let lead = &w[i0];
    let scale = lead.residue().inv().expect("nonzero residue");
    let shift = -lead.valuation().expect("nonzero");
    let out = w
        .iter()
        .map(|x| x.scale(&scale).shift_by(shift).to_series(&g.l, 0, g.field))
        .collect();
    let level = BigRational::new(BigInt::from(g.a[i0]), g.l.clone());
    (out, level)
}

struct Pivot {
    row: usize,
    col: usize,
    val: i64,
}

/// Conjugation elimination: returns the pivots and the accumulated basis
/// change `U` (columns = new basis in gauge coordinates).
fn eliminate(g: &Gauge) -> Result<(Vec<Pivot>, SparseMatrix)> {
    let mut m = g.m.clone();
    let n = m.dim();
    let mut u = SparseMatrix::identity(n, g.field);
    let mut pivots = Vec::new();
    while let Some((val, r, c)) = min_entry(&m) {
        if let Some(p) = g.precision {
            if val >= p {
                return Err(too_coarse(val, p, &g.l));
            }
        }
        let piv = m.get(r, c).expect("pivot").clone();
        let pinv = piv.inv().expect("nonzero pivot");
        // u_r' = u_r + Σ λ_i u_i clears column c away from row r.
        let col_c: Vec<(usize, RatFunc)> = m
            .col(c)
            .iter()
            .filter(|(&i, _)| i != r)
            .map(|(&i, x)| (i, x.mul(&pinv)))
            .collect();
        for (i, lambda) in col_c {
            m.add_col_multiple(r, i, &lambda);
            m.add_row_multiple(i, r, &lambda.neg());
            u.add_col_multiple(r, i, &lambda);
        }
        // u_j' = u_j − μ_j u_c clears row r away from column c.
        let row_r: Vec<(usize, RatFunc)> = m
            .row_support(r)
            .iter()
            .filter(|&&j| j != c)
            .map(|&j| (j, m.get(r, j).expect("support").mul(&pinv)))
            .collect();
        for (j, mu) in row_r {
            m.add_col_multiple(j, c, &mu.neg());
            m.add_row_multiple(c, j, &mu);
            u.add_col_multiple(j, c, &mu.neg());
        }
        // d² = 0 forces row c and column r to vanish now.
        let stray: Vec<(usize, usize)> = m
            .col(r)
            .keys()
            .map(|&i| (i, r))
            .chain(m.row_support(c).iter().map(|&j| (c, j)))
            .collect();
        debug_assert!(stray.is_empty(), "differential does not square to zero");
        for (i, j) in stray {
            m.set(i, j, RatFunc::zero(g.field));
        }
        m.set(r, c, RatFunc::zero(g.field));
        pivots.push(Pivot { row: r, col: c, val });
    }
    Ok((pivots, u))
}

/// Singular value decomposition of a (strictly or weakly) filtered complex.
type Bar = (BigRational, String, Vec<NovikovSeries>, Vec<NovikovSeries>, BigRational);

pub fn svd(c: &FilteredComplex) -> Result<SvdBasis> {
    let g = gauge(c);
    let (pivots, u) = eliminate(&g)?;
    let n = c.rank();
    let mut paired = alloc::vec![false; n];
    // (length, tie-break key, zeta, eta, zeta level)
    let mut bars: Vec<Bar> = Vec::new();
    let mut null_eta = Vec::new();
    let mut null_zeta = Vec::new();
    for p in &pivots {
        paired[p.row] = true;
        paired[p.col] = true;
        let (zeta, level) = to_original(&u.dense_col(p.col), &g);
        let eta = c.apply(&zeta)?;
        if p.val == 0 {
            null_zeta.push(zeta);
            null_eta.push(eta);
            continue;
        }
        let len = BigRational::new(BigInt::from(p.val), g.l.clone());
        let lead = c
            .generators()
            .iter()
            .zip(&zeta)
            .find(|(gen, s)| s.valuation() == Valuation::Finite(&gen.action - &level))
            .map(|(gen, _)| gen.name.clone())
            .unwrap_or_default();
        bars.push((len, lead, zeta, eta, level));
    }
    bars.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let mut cycles: Vec<(BigRational, String, Vec<NovikovSeries>)> = (0..n)
        .filter(|&k| !paired[k])
        .map(|k| {
            let (xi, level) = to_original(&u.dense_col(k), &g);
            (level, c.generators()[k].name.clone(), xi)
        })
        .collect();
    cycles.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let certified_below = g.precision.map(|p| BigRational::new(BigInt::from(p), g.l.clone()));
    let mut out = SvdBasis {
        xi: Vec::new(),
        xi_levels: Vec::new(),
        eta: Vec::new(),
        zeta: Vec::new(),
        zeta_levels: Vec::new(),
        bar_lengths: Vec::new(),
        null_eta,
        null_zeta,
        certified_below,
    };
    for (level, _, xi) in cycles {
        out.xi.push(xi);
        out.xi_levels.push(level);
    }
    for (len, _, zeta, eta, level) in bars {
        out.bar_lengths.push(len);
        out.zeta.push(zeta);
        out.eta.push(eta);
        out.zeta_levels.push(level);
    }
    Ok(out)
}

/// Barcode of a complex together with its summary statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarcodeReport {
    pub barcode: Barcode,
    pub n: usize,
    pub b: usize,
    pub k: usize,
    /// Pairs of level-preserving differential entries (weak complexes only).
    pub null_pairs: usize,
    pub boundary_depth: BigRational,
    pub beta_total: BigRational,
}

impl BarcodeReport {
    pub fn stats(&self) -> SpectrumStats {
        self.barcode.stats()
    }
}

pub fn barcode_of(c: &FilteredComplex) -> Result<BarcodeReport> {
    let basis = svd(c)?;
    let barcode = basis.barcode();
    let stats = barcode.stats();
    Ok(BarcodeReport {
        n: c.rank(),
        b: basis.b(),
        k: basis.k(),
        null_pairs: basis.null_zeta.len(),
        boundary_depth: stats.boundary_depth,
        beta_total: stats.beta_total,
        barcode,
    })
}

/// Torsion exponents `β_j` of `H(C; Λ^0) ≅ free ⊕ ⊕_j Λ^0/(T^{β_j})`, via
/// Smith normal form of the gauge matrix over the valuation ring. Unit
/// pivots (exponent 0) contribute nothing and are dropped.
pub fn torsion_decomposition(c: &FilteredComplex) -> Result<Vec<BigRational>> {
    let g = gauge(c);
    let mut m = g.m.clone();
    let mut out = Vec::new();
    while let Some((val, r, col)) = min_entry(&m) {
        if let Some(p) = g.precision {
            if val >= p {
                return Err(too_coarse(val, p, &g.l));
            }
        }
        let pinv = m.get(r, col).expect("pivot").inv().expect("nonzero");
        let others: Vec<(usize, RatFunc)> = m
            .col(col)
            .iter()
            .filter(|(&i, _)| i != r)
            .map(|(&i, x)| (i, x.mul(&pinv).neg()))
            .collect();
        for (i, f) in others {
            m.add_row_multiple(i, r, &f);
        }
        let others: Vec<(usize, RatFunc)> = m
            .row_support(r)
            .iter()
            .filter(|&&j| j != col)
            .map(|&j| (j, m.get(r, j).expect("support").mul(&pinv).neg()))
            .collect();
        for (j, f) in others {
            m.add_col_multiple(j, col, &f);
        }
        m.set(r, col, RatFunc::zero(g.field));
        if val > 0 {
            out.push(BigRational::new(BigInt::from(val), g.l.clone()));
        }
    }
    out.sort();
    debug_assert!(out.iter().all(|x| !x.is_zero()));
    Ok(out)
}
