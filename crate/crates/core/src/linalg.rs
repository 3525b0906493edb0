//! Exact linear algebra: a sparse matrix over [`RatFunc`] for elimination,
//! dense solving over `RatFunc`, and rank over the residue field.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::ratfunc::RatFunc;
use crate::scalar::{CoefficientField, Scalar};

/// Square sparse matrix with column storage and a row index.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    field: CoefficientField,
    cols: Vec<BTreeMap<usize, RatFunc>>,
    rows: Vec<BTreeSet<usize>>,
}

impl SparseMatrix {
    pub fn new(n: usize, field: CoefficientField) -> Self {
        SparseMatrix {
            field,
            cols: vec![BTreeMap::new(); n],
            rows: vec![BTreeSet::new(); n],
        }
    }

    pub fn identity(n: usize, field: CoefficientField) -> Self {
        let mut m = Self::new(n, field);
        for i in 0..n {
            m.set(i, i, RatFunc::one(field));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&RatFunc> {
        self.cols[j].get(&i)
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        if v.is_zero() {
            self.cols[j].remove(&i);
            self.rows[i].remove(&j);
        } else {
            self.cols[j].insert(i, v);
            self.rows[i].insert(j);
        }
    }

    pub fn col(&self, j: usize) -> &BTreeMap<usize, RatFunc> {
        &self.cols[j]
    }

    pub fn row_support(&self, i: usize) -> &BTreeSet<usize> {
        &self.rows[i]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RatFunc)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(&i, v)| (i, j, v)))
    }

    /// `row dst += λ · row src`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, lambda: &RatFunc) {
        let js: Vec<usize> = self.rows[src].iter().copied().collect();
        for j in js {
            let add = self.cols[j][&src].mul(lambda);
            let v = match self.cols[j].get(&dst) {
                Some(x) => x.add(&add),
                None => add,
            };
            self.set(dst, j, v);
        }
    }

    /// `col dst += λ · col src`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, lambda: &RatFunc) {
        let src_col: Vec<(usize, RatFunc)> =
            self.cols[src].iter().map(|(&i, v)| (i, v.mul(lambda))).collect();
        for (i, add) in src_col {
            let v = match self.cols[dst].get(&i) {
                Some(x) => x.add(&add),
                None => add,
            };
            self.set(i, dst, v);
        }
    }

    /// Dense copy of column `j`.
    pub fn dense_col(&self, j: usize) -> Vec<RatFunc> {
        let mut v = vec![RatFunc::zero(self.field); self.dim()];
        for (&i, x) in &self.cols[j] {
            v[i] = x.clone();
        }
        v
    }
}

/// Solves `Σ_k x_k · basis[k] = rhs` for a square invertible system.
/// Returns `None` if the basis is singular.
pub fn solve(basis: &[Vec<RatFunc>], rhs: &[RatFunc]) -> Option<Vec<RatFunc>> {
    let n = rhs.len();
    if basis.len() != n {
        return None;
    }
    // Augmented row-major matrix [B | rhs], with B's columns = basis vectors.
    let mut m: Vec<Vec<RatFunc>> = (0..n)
        .map(|i| {
            let mut row: Vec<RatFunc> = basis.iter().map(|v| v[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n)
            .filter(|&r| !m[r][c].is_zero())
            .min_by_key(|&r| m[r][c].num().degree().unwrap_or(0) + m[r][c].den().degree().unwrap_or(0))?;
        m.swap(c, piv);
        let inv = m[c][c].inv()?;
        for x in m[c].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..n {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            for k in c..=n {
                if m[c][k].is_zero() {
                    continue;
                }
                let t = m[c][k].mul(&f);
                m[r][k] = m[r][k].sub(&t);
            }
        }
    }
    Some(m.into_iter().map(|mut row| row.pop().expect("augmented")).collect())
}

/// Solves `Σ_k x_k · cols[k] = rhs` for linearly independent `cols`;
/// `None` if `rhs` is not in their span.
pub fn solve_in_span(cols: &[Vec<RatFunc>], rhs: &[RatFunc]) -> Option<Vec<RatFunc>> {
    let n = rhs.len();
    let k = cols.len();
    let mut m: Vec<Vec<RatFunc>> = (0..n)
        .map(|i| {
            let mut row: Vec<RatFunc> = cols.iter().map(|v| v[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(k);
    let mut r = 0;
    for c in 0..k {
        let p = (r..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..n {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=k {
                if !m[r][j].is_zero() {
                    let t = m[r][j].mul(&f);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if (r..n).any(|i| !m[i][k].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&i| m[i][k].clone()).collect())
}

/// Rank of a list of vectors over the field `k`.
pub fn rank(vectors: &[Vec<Scalar>]) -> usize {
    let mut rows: Vec<Vec<Scalar>> = vectors.to_vec();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] * &inv;
            for k in c..ncols {
                let t = &rows[r][k] * &f;
                rows[i][k] = &rows[i][k] - &t;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_small_system() {
        let f = CoefficientField::Rationals;
        let t = RatFunc::monomial(f.one(), 1, f);
        let one = RatFunc::one(f);
        let zero = RatFunc::zero(f);
        // basis (1, t), (0, 1); rhs (2, 2t + 3)
        let b = vec![vec![one.clone(), t.clone()], vec![zero, one.clone()]];
        let two = RatFunc::constant(f.from_i64(2), f);
        let rhs = vec![two.clone(), t.mul(&two).add(&RatFunc::constant(f.from_i64(3), f))];
        let x = solve(&b, &rhs).unwrap();
        assert_eq!(x[0], two);
        assert_eq!(x[1], RatFunc::constant(f.from_i64(3), f));
    }

    #[test]
    fn rank_over_f2() {
        let f = CoefficientField::PrimeField(2);
        let v = |a: i64, b: i64| vec![f.from_i64(a), f.from_i64(b)];
        assert_eq!(rank(&[v(1, 1), v(1, 1)]), 1);
        assert_eq!(rank(&[v(1, 1), v(0, 1)]), 2);
        assert_eq!(rank(&[v(0, 0)]), 0);
    }

    #[test]
    fn sparse_row_and_column_ops() {
        let f = CoefficientField::Rationals;
        let mut m = SparseMatrix::identity(2, f);
        m.add_row_multiple(1, 0, &RatFunc::one(f));
        assert_eq!(m.get(1, 0), Some(&RatFunc::one(f)));
        m.add_col_multiple(0, 1, &RatFunc::one(f).neg());
        assert!(m.get(1, 0).is_none());
        assert_eq!(m.get(0, 0), Some(&RatFunc::one(f)));
    }
}
