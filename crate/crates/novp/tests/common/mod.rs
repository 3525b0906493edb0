//! Reference computations written independently of the library algorithms.
//! They only use series arithmetic from the core crate.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use novp::novp_core::barcode::Barcode;
use novp::novp_core::filtered::FilteredComplex;
use novp::novp_core::{CoefficientField, NovikovSeries, Scalar, Valuation};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn sorted(mut v: Vec<BigRational>) -> Vec<BigRational> {
    v.sort();
    v
}

// ------------------------------------------------------------ elementary divisors

/// Finite bar lengths as valuations of the elementary divisors of the
/// rescaled differential `M_ij = T^{A(x_j) − A(x_i)} d_ij`, obtained from
/// determinantal divisors: `β_1 + … + β_m = min ν(m×m minor)`.
///
/// Works block by block (degree `k` columns against degree `k − 1` rows)
/// when the differential respects the grading, else on the whole matrix.
pub fn elementary_divisor_lengths(c: &FilteredComplex) -> Vec<BigRational> {
    let g = c.generators();
    let entries: Vec<(usize, usize, NovikovSeries)> = c
        .entries()
        .map(|(from, to, s)| (from, to, s.shift(&(&g[from].action - &g[to].action))))
        .collect();
    let graded = entries.iter().all(|(f, t, _)| g[*t].degree == g[*f].degree - 1);
    let mut blocks: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    if graded {
        let mut degrees: Vec<i64> = g.iter().map(|x| x.degree).collect();
        degrees.sort();
        degrees.dedup();
        for d in degrees {
            let cols: Vec<usize> = (0..g.len()).filter(|&j| g[j].degree == d).collect();
            let rows: Vec<usize> = (0..g.len()).filter(|&i| g[i].degree == d - 1).collect();
            blocks.push((rows, cols));
        }
    } else {
        blocks.push(((0..g.len()).collect(), (0..g.len()).collect()));
    }
    let mut out = Vec::new();
    for (rows, cols) in blocks {
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let field = c.field();
        let mut m = vec![vec![NovikovSeries::zero(field); cols.len()]; rows.len()];
        for (from, to, s) in &entries {
            if let (Some(i), Some(j)) = (rows.iter().position(|r| r == to), cols.iter().position(|x| x == from)) {
                m[i][j] = s.clone();
            }
        }
        out.extend(block_divisors(&m, field));
    }
    out
}

fn block_divisors(m: &[Vec<NovikovSeries>], field: CoefficientField) -> Vec<BigRational> {
    let (r, s) = (m.len(), m[0].len());
    assert!(r <= 20 && s <= 20, "block too large for the minor oracle");
    let mut minors = Minors { m, memo: HashMap::new(), field };
    let mut prev = BigRational::zero();
    let mut out = Vec::new();
    for size in 1..=r.min(s) {
        let mut best: Option<BigRational> = None;
        for rs in subsets(r, size) {
            for cs in subsets(s, size) {
                if let Valuation::Finite(v) = minors.det(rs, cs).valuation() {
                    best = Some(best.map_or(v.clone(), |b: BigRational| b.min(v)));
                }
            }
        }
        let Some(d) = best else { break };
        out.push(&d - &prev);
        prev = d;
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<u32> {
    (0u32..(1 << n)).filter(|m| m.count_ones() as usize == k).collect()
}

struct Minors<'a> {
    m: &'a [Vec<NovikovSeries>],
    memo: HashMap<(u32, u32), NovikovSeries>,
    field: CoefficientField,
}

impl Minors<'_> {
    /// Laplace expansion along the first row in `rs`.
    fn det(&mut self, rs: u32, cs: u32) -> NovikovSeries {
        if rs == 0 {
            return NovikovSeries::one(self.field);
        }
        if let Some(d) = self.memo.get(&(rs, cs)) {
            return d.clone();
        }
        let r0 = rs.trailing_zeros() as usize;
        let mut acc = NovikovSeries::zero(self.field);
        let mut sign = true;
        for j in 0..32 {
            if cs & (1 << j) == 0 {
                continue;
            }
            let a = &self.m[r0][j];
            if !a.is_exact_zero() {
                let sub = self.det(rs & !(1 << r0), cs & !(1 << j));
                let term = a * &sub;
                acc = if sign { &acc + &term } else { &acc - &term };
            }
            sign = !sign;
        }
        self.memo.insert((rs, cs), acc.clone());
        acc
    }
}

// ------------------------------------------------------------ chains

/// `d v`, straight from the stored entries.
pub fn apply(c: &FilteredComplex, v: &[NovikovSeries]) -> Vec<NovikovSeries> {
    let mut out = vec![NovikovSeries::zero(c.field()); c.rank()];
    for (from, to, s) in c.entries() {
        if !v[from].is_exact_zero() {
            out[to] = &out[to] + &(s * &v[from]);
        }
    }
    out
}

/// `max_i (A(x_i) − ν(v_i))`, `None` for the zero chain. Panics if a
/// coordinate is known only up to a truncation.
pub fn level(c: &FilteredComplex, v: &[NovikovSeries]) -> Option<BigRational> {
    let mut best: Option<BigRational> = None;
    for (g, s) in c.generators().iter().zip(v) {
        match s.valuation() {
            Valuation::Finite(nu) => {
                let l = &g.action - nu;
                best = Some(best.map_or(l.clone(), |b| b.max(l)));
            }
            Valuation::Infinity => assert!(s.is_exact(), "coordinate {s} has unknown valuation"),
        }
    }
    best
}

/// Orthogonality of `vs` in the standard filtration: after scaling each
/// vector to level 0 in the basis `T^{A(x_i)} x_i`, the constant terms of
/// the coordinates must be linearly independent over the residue field.
pub fn orthogonal(c: &FilteredComplex, vs: &[&Vec<NovikovSeries>]) -> Result<bool, String> {
    let g = c.generators();
    let mut rows = Vec::new();
    for v in vs {
        let lv = level(c, v).ok_or("zero vector")?;
        let mut row = Vec::new();
        for (x, s) in g.iter().zip(v.iter()) {
            // coefficient of y_i = T^{A(x_i)} x_i in T^{A(v)} v
            let shift = &lv - &x.action;
            let u = s.shift(&shift);
            if let Some(t) = u.truncation() {
                if !t.is_positive() {
                    return Err(format!("coordinate {s} too coarse for a residue"));
                }
            }
            row.push(u.coefficient(&BigRational::zero()));
        }
        rows.push(row);
    }
    Ok(residue_rank(rows) == vs.len())
}

fn residue_rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, Vec::len);
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] * &inv;
                for k in 0..width {
                    let sub = &f * &rows[rank][k];
                    rows[r][k] = &rows[r][k] - &sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

// ------------------------------------------------------------ bottleneck

/// Bars with multiplicity expanded.
fn expand(b: &Barcode) -> (Vec<(BigRational, BigRational)>, Vec<BigRational>) {
    let mut f = Vec::new();
    for ((a, e), m) in b.finite() {
        f.extend(std::iter::repeat_n((a.clone(), e.clone()), *m));
    }
    let mut i = Vec::new();
    for (a, m) in b.infinite() {
        i.extend(std::iter::repeat_n(a.clone(), *m));
    }
    (f, i)
}

/// Bottleneck distance by enumerating every partial matching of finite bars
/// and every bijection of infinite bars. Matched bars cost the larger
/// endpoint difference; unmatched finite bars cost half their length.
pub fn bottleneck_exhaustive(x: &Barcode, y: &Barcode) -> Option<BigRational> {
    let (fx, ix) = expand(x);
    let (fy, iy) = expand(y);
    if ix.len() != iy.len() {
        return None;
    }
    let mut best_inf: Option<BigRational> = None;
    permutations(iy.len(), &mut |perm| {
        let cost = ix
            .iter()
            .zip(perm)
            .map(|(a, &k)| (a - &iy[k]).abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        if best_inf.as_ref().is_none_or(|b| &cost < b) {
            best_inf = Some(cost);
        }
    });
    let half = rat(1, 2);
    let unmatched = |(a, e): &(BigRational, BigRational)| (e - a) * &half;
    let pair = |(a, e): &(BigRational, BigRational), (b, f): &(BigRational, BigRational)| (a - b).abs().max((e - f).abs());
    let mut best: Option<BigRational> = None;
    let mut used = vec![false; fy.len()];
    let mut assign: Vec<Option<usize>> = Vec::new();
    partial_matchings(fx.len(), &mut used, &mut assign, &mut |assign| {
        let mut cost = BigRational::zero();
        let mut matched = vec![false; fy.len()];
        for (i, a) in assign.iter().enumerate() {
            let c = match a {
                Some(j) => {
                    matched[*j] = true;
                    pair(&fx[i], &fy[*j])
                }
                None => unmatched(&fx[i]),
            };
            cost = cost.max(c);
        }
        for (j, m) in matched.iter().enumerate() {
            if !m {
                cost = cost.clone().max(unmatched(&fy[j]));
            }
        }
        if best.as_ref().is_none_or(|b| &cost < b) {
            best = Some(cost);
        }
    });
    Some(best.unwrap_or_else(BigRational::zero).max(best_inf.unwrap_or_else(BigRational::zero)))
}

fn permutations(n: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(k: usize, p: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(k + 1, p, f);
            p.swap(k, i);
        }
    }
    go(0, &mut (0..n).collect(), f);
}

fn partial_matchings(
    n: usize,
    used: &mut Vec<bool>,
    assign: &mut Vec<Option<usize>>,
    f: &mut dyn FnMut(&[Option<usize>]),
) {
    if assign.len() == n {
        f(assign);
        return;
    }
    assign.push(None);
    partial_matchings(n, used, assign, f);
    assign.pop();
    for j in 0..used.len() {
        if !used[j] {
            used[j] = true;
            assign.push(Some(j));
            partial_matchings(n, used, assign, f);
            assign.pop();
            used[j] = false;
        }
    }
}
