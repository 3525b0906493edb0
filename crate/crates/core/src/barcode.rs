//! Barcodes: multisets of half-open intervals `(a, b]` and rays `(a, ∞)`,
//! with exact bottleneck distances.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Barcode {
    finite: BTreeMap<(BigRational, BigRational), usize>,
    infinite: BTreeMap<BigRational, usize>,
}

/// Summary statistics of the finite part of a barcode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumStats {
    /// Finite bar lengths, ascending, repeated by multiplicity.
    pub lengths: Vec<BigRational>,
    pub beta_total: BigRational,
    /// Longest finite bar, `0` when there is none.
    pub boundary_depth: BigRational,
    /// Number of infinite bars.
    pub b: usize,
    /// Number of finite bars.
    pub k: usize,
}

impl Barcode {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `(a, b]`; panics unless `a < b`.
    pub fn add_finite(&mut self, a: BigRational, b: BigRational, mult: usize) {
        assert!(a < b, "empty bar ({a}, {b}]");
        if mult > 0 {
            *self.finite.entry((a, b)).or_insert(0) += mult;
        }
    }

    pub fn add_infinite(&mut self, a: BigRational, mult: usize) {
        if mult > 0 {
            *self.infinite.entry(a).or_insert(0) += mult;
        }
    }

    pub fn finite(&self) -> &BTreeMap<(BigRational, BigRational), usize> {
        &self.finite
    }

    pub fn infinite(&self) -> &BTreeMap<BigRational, usize> {
        &self.infinite
    }

    pub fn finite_count(&self) -> usize {
        self.finite.values().sum()
    }

    pub fn infinite_count(&self) -> usize {
        self.infinite.values().sum()
    }

    /// Finite bars expanded by multiplicity.
    pub fn finite_list(&self) -> Vec<(BigRational, BigRational)> {
        self.finite
            .iter()
            .flat_map(|(bar, &m)| core::iter::repeat_n(bar.clone(), m))
            .collect()
    }

    pub fn infinite_list(&self) -> Vec<BigRational> {
        self.infinite
            .iter()
            .flat_map(|(a, &m)| core::iter::repeat_n(a.clone(), m))
            .collect()
    }

    pub fn lengths(&self) -> Vec<BigRational> {
        let mut out: Vec<_> = self.finite_list().into_iter().map(|(a, b)| b - a).collect();
        out.sort();
        out
    }

    pub fn stats(&self) -> SpectrumStats {
        let lengths = self.lengths();
        let beta_total = lengths.iter().fold(BigRational::zero(), |s, l| s + l);
        let boundary_depth = lengths.last().cloned().unwrap_or_else(BigRational::zero);
        SpectrumStats {
            k: lengths.len(),
            b: self.infinite_count(),
            lengths,
            beta_total,
            boundary_depth,
        }
    }

    /// Every endpoint moved by `c`.
    pub fn shift(&self, c: &BigRational) -> Barcode {
        let mut out = Barcode::new();
        for ((a, b), &m) in &self.finite {
            out.add_finite(a + c, b + c, m);
        }
        for (a, &m) in &self.infinite {
            out.add_infinite(a + c, m);
        }
        out
    }

    /// Every endpoint multiplied by a positive `c`.
    pub fn scale(&self, c: &BigRational) -> Barcode {
        assert!(c.is_positive());
        let mut out = Barcode::new();
        for ((a, b), &m) in &self.finite {
            out.add_finite(a * c, b * c, m);
        }
        for (a, &m) in &self.infinite {
            out.add_infinite(a * c, m);
        }
        out
    }
}

fn abs_diff(a: &BigRational, b: &BigRational) -> BigRational {
    (a - b).abs()
}

fn pair_cost(x: &(BigRational, BigRational), y: &(BigRational, BigRational)) -> BigRational {
    abs_diff(&x.0, &y.0).max(abs_diff(&x.1, &y.1))
}

fn half_length(x: &(BigRational, BigRational)) -> BigRational {
    (&x.1 - &x.0) / BigRational::from_integer(2.into())
}

/// Kuhn's augmenting-path matching; true when every left vertex is matched.
fn has_perfect_matching(adj: &[Vec<usize>], n_right: usize) -> bool {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    if adj.len() != n_right {
        return false;
    }
    let mut owner = vec![None; n_right];
    for u in 0..adj.len() {
        let mut seen = vec![false; n_right];
        if !augment(u, adj, &mut seen, &mut owner) {
            return false;
        }
    }
    true
}

struct MatchingProblem {
    bf: Vec<(BigRational, BigRational)>,
    cf: Vec<(BigRational, BigRational)>,
    bi: Vec<BigRational>,
    ci: Vec<BigRational>,
}

impl MatchingProblem {
    fn new(b: &Barcode, c: &Barcode) -> Self {
        MatchingProblem {
            bf: b.finite_list(),
            cf: c.finite_list(),
            bi: b.infinite_list(),
            ci: c.infinite_list(),
        }
    }

    fn candidates(&self) -> Vec<BigRational> {
        let mut set = BTreeSet::new();
        set.insert(BigRational::zero());
        for x in &self.bf {
            set.insert(half_length(x));
            for y in &self.cf {
                set.insert(pair_cost(x, y));
            }
        }
        for y in &self.cf {
            set.insert(half_length(y));
        }
        for a in &self.bi {
            for c in &self.ci {
                set.insert(abs_diff(a, c));
            }
        }
        set.into_iter().collect()
    }

    /// Left: B's bars then one diagonal slot per finite bar of C.
    /// Right: C's bars then one diagonal slot per finite bar of B.
    fn feasible(&self, delta: &BigRational) -> bool {
        let (nbf, ncf, nbi, nci) = (self.bf.len(), self.cf.len(), self.bi.len(), self.ci.len());
        let n_left = nbf + nbi + ncf;
        let n_right = ncf + nci + nbf;
        let mut adj = vec![Vec::new(); n_left];
        for (i, x) in self.bf.iter().enumerate() {
            for (j, y) in self.cf.iter().enumerate() {
                if &pair_cost(x, y) <= delta {
                    adj[i].push(j);
                }
            }
            if &half_length(x) <= delta {
                adj[i].push(ncf + nci + i);
            }
        }
        for (i, a) in self.bi.iter().enumerate() {
            for (j, c) in self.ci.iter().enumerate() {
                if &abs_diff(a, c) <= delta {
                    adj[nbf + i].push(ncf + j);
                }
            }
        }
        for (j, y) in self.cf.iter().enumerate() {
            let u = nbf + nbi + j;
            if &half_length(y) <= delta {
                adj[u].push(j);
            }
            for k in 0..nbf {
                adj[u].push(ncf + nci + k);
            }
        }
        has_perfect_matching(&adj, n_right)
    }
}

/// Least `δ` admitting a `δ`-matching, or `None` (`+∞`) when the numbers of
/// infinite bars differ.
pub fn bottleneck(b: &Barcode, c: &Barcode) -> Option<BigRational> {
    if b.infinite_count() != c.infinite_count() {
        return None;
    }
    let problem = MatchingProblem::new(b, c);
    let cands = problem.candidates();
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if problem.feasible(&cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(cands[lo].clone())
}

/// `inf_c d(B, C[c])`, searched over the finitely many shifts where the
/// piecewise-linear objective can bend.
pub fn bottleneck_mod_shift(b: &Barcode, c: &Barcode) -> Option<BigRational> {
    if b.infinite_count() != c.infinite_count() {
        return None;
    }
    let two = BigRational::from_integer(2.into());
    let mut ends_b: Vec<BigRational> = Vec::new();
    let mut ends_c: Vec<BigRational> = Vec::new();
    let mut halves: BTreeSet<BigRational> = BTreeSet::new();
    for x in b.finite().keys() {
        ends_b.extend([x.0.clone(), x.1.clone()]);
        halves.insert(half_length(x));
    }
    for y in c.finite().keys() {
        ends_c.extend([y.0.clone(), y.1.clone()]);
        halves.insert(half_length(y));
    }
    ends_b.extend(b.infinite().keys().cloned());
    ends_c.extend(c.infinite().keys().cloned());
    let diffs: BTreeSet<BigRational> = ends_b
        .iter()
        .flat_map(|x| ends_c.iter().map(move |y| x - y))
        .collect();
    let mut shifts: BTreeSet<BigRational> = BTreeSet::new();
    shifts.insert(BigRational::zero());
    let dv: Vec<_> = diffs.iter().cloned().collect();
    for (i, d) in dv.iter().enumerate() {
        shifts.insert(d.clone());
        for h in &halves {
            shifts.insert(d + h);
            shifts.insert(d - h);
        }
        for e in &dv[i + 1..] {
            shifts.insert((d + e) / &two);
        }
    }
    shifts
        .iter()
        .filter_map(|s| bottleneck(b, &c.shift(s)))
        .min()
}
