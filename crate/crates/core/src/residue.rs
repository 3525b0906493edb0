//! Factorization of polynomials over the residue field `k` (`F_p` or `Q`).
//!
//! Over `F_p` the factorization is complete (squarefree split, distinct-degree
//! split, Cantor–Zassenhaus equal-degree split). Over `Q` only rational roots,
//! quadratics, cubics and quartics that split into quadratics are handled.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::kpoly::KPoly;
use crate::scalar::{divisors, CoefficientField, Scalar};

const SPLIT_SEED: u64 = 0x6e6f_7670;

/// Monic irreducible factors of `f` with multiplicities, sorted by degree
/// and then by coefficients. The leading coefficient of `f` is dropped.
pub fn factor(f: &KPoly) -> Result<Vec<(KPoly, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroInputs);
    }
    let mut out = match f.field() {
        CoefficientField::PrimeField(p) => factor_fp(&f.monic(), p),
        _ => factor_q(&f.monic())?,
    };
    out.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| format!("{a}").cmp(&format!("{b}")))
    });
    Ok(out)
}

/// True when the monic factorization is a single irreducible factor.
pub fn is_irreducible(f: &KPoly) -> Result<bool> {
    if f.degree().unwrap_or(0) == 0 {
        return Ok(false);
    }
    let fs = factor(f)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

fn exact_div(a: &KPoly, b: &KPoly) -> KPoly {
    let (q, r) = a.divrem(b);
    debug_assert!(r.is_zero());
    q
}

// ---------------------------------------------------------------- F_p

/// Squarefree decomposition of a monic polynomial over `F_p`.
fn squarefree_fp(f: &KPoly, p: u64) -> Vec<(KPoly, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = exact_div(f, &c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = exact_div(&w, &y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = exact_div(&c, &w);
        i += 1;
    }
    if !c.is_one() {
        // c = h(x^p); its p-th root has the same coefficients in F_p.
        let root: Vec<Scalar> = c.coeffs().iter().step_by(p as usize).cloned().collect();
        let root = KPoly::new(f.field(), root);
        for (g, m) in squarefree_fp(&root, p) {
            out.push((g, m * p as usize));
        }
    }
    out
}

/// `x^{p^i} mod f`, iterated.
fn frobenius_powers(f: &KPoly, p: u64, count: usize) -> Vec<KPoly> {
    let pe = BigUint::from(p);
    let mut h = KPoly::x(f.field()).rem(f);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        h = h.pow_mod(&pe, f);
        out.push(h.clone());
    }
    out
}

/// Distinct-degree split of a squarefree monic polynomial.
fn distinct_degree(f: &KPoly, p: u64) -> Vec<(KPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = KPoly::x(f.field());
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(&pe, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = exact_div(&rest, &g);
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(n) = rest.degree().filter(|&n| n > 0) {
        out.push((rest, n));
    }
    out
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, p: u64, field: CoefficientField) -> KPoly {
    let c = (0..n).map(|_| Scalar::modular(rng.next_u64() % p, p)).collect();
    KPoly::new(field, c)
}

/// Equal-degree split of a product of distinct irreducibles of degree `d`.
fn equal_degree(f: &KPoly, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<KPoly> {
    let n = f.degree().unwrap_or(0);
    if n <= d {
        return vec![f.clone()];
    }
    let field = f.field();
    let one = KPoly::one(field);
    loop {
        let a = random_poly(rng, n, p, field);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + … + a^{2^{d−1}}
            let mut s = a.rem(f);
            let mut t = s.clone();
            for _ in 1..d {
                s = s.mul(&s).rem(f);
                t = t.add(&s);
            }
            t
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            a.pow_mod(&e, f).sub(&one)
        };
        let g = f.gcd(&b);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&exact_div(f, &g), d, p, rng));
            return out;
        }
    }
}

fn factor_fp(f: &KPoly, p: u64) -> Vec<(KPoly, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut out = Vec::new();
    for (g, m) in squarefree_fp(f, p) {
        for (h, d) in distinct_degree(&g, p) {
            for irr in equal_degree(&h, d, p, &mut rng) {
                out.push((irr.monic(), m));
            }
        }
    }
    out
}

/// Irreducibility over `F_p` via the Rabin test on `x^{p^i}`.
pub fn is_irreducible_fp(f: &KPoly, p: u64) -> bool {
    let n = match f.degree() {
        Some(n) if n > 0 => n,
        _ => return false,
    };
    let f = f.monic();
    let pw = frobenius_powers(&f, p, n);
    let x = KPoly::x(f.field());
    if pw[n - 1] != x.rem(&f) {
        return false;
    }
    (1..n).filter(|d| n % d == 0 && is_prime_usize(n / d)).all(|d| {
        let g = f.gcd(&pw[d - 1].sub(&x));
        g.is_one()
    })
}

fn is_prime_usize(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

// ---------------------------------------------------------------- Q

/// Yun's squarefree decomposition over `Q`.
fn squarefree_q(f: &KPoly) -> Vec<(KPoly, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = exact_div(f, &a0);
    let mut d = exact_div(&df, &a0).sub(&b.derivative());
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        b = exact_div(&b, &a);
        let c = exact_div(&d, &a);
        d = c.sub(&b.derivative());
        if !a.is_one() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

fn rat(s: &Scalar) -> BigRational {
    s.as_rational().cloned().expect("rational coefficient")
}

/// Monic integer polynomial `L^n f(y/L)` and the scale `L`.
fn integral_monic(f: &KPoly) -> (Vec<BigInt>, BigInt) {
    let n = f.degree().unwrap_or(0);
    let l = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(rat(c).denom()));
    let mut g = Vec::with_capacity(n + 1);
    for (i, c) in f.coeffs().iter().enumerate() {
        let v = rat(c) * BigRational::from_integer(num_traits::pow(l.clone(), n - i));
        debug_assert!(v.is_integer());
        g.push(v.to_integer());
    }
    (g, l)
}

fn int_poly(g: &[BigInt]) -> KPoly {
    KPoly::new(
        CoefficientField::Rationals,
        g.iter().map(|c| Scalar::Rational(BigRational::from_integer(c.clone()))).collect(),
    )
}

fn eval_int(g: &[BigInt], x: &BigInt) -> BigInt {
    g.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Quadratic factors `(y²+uy+v)(y²+u'y+w)` of a monic integer quartic with
/// no integer roots.
fn split_quartic(g: &[BigInt]) -> Option<(KPoly, KPoly)> {
    let (d, c, b, a) = (&g[0], &g[1], &g[2], &g[3]);
    for v in divisors(d) {
        for v in [v.clone(), -v] {
            let w = d / &v;
            let try_u = |u: &BigInt| -> Option<(KPoly, KPoly)> {
                let u2 = a - u;
                if &(u * &u2) + &v + &w == *b && &(u * &w) + &(&u2 * &v) == *c {
                    let one = BigInt::one();
                    Some((int_poly(&[v.clone(), u.clone(), one.clone()]), int_poly(&[w.clone(), u2, one])))
                } else {
                    None
                }
            };
            if w != v {
                let num = c - a * &v;
                let den = &w - &v;
                if (&num % &den).is_zero() {
                    if let Some(r) = try_u(&(num / den)) {
                        return Some(r);
                    }
                }
            } else {
                // u + u' = a, u·u' = b − 2v
                let disc = a * a - BigInt::from(4) * (b - BigInt::from(2) * &v);
                if !disc.is_negative() {
                    let s = disc.sqrt();
                    if &s * &s == disc && ((a + &s) % 2u32).is_zero() {
                        if let Some(r) = try_u(&((a + &s) / 2u32)) {
                            return Some(r);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Irreducible factors of a squarefree monic rational polynomial.
fn factor_q_squarefree(f: &KPoly) -> Result<Vec<KPoly>> {
    let (mut g, l) = integral_monic(f);
    let mut found = Vec::new();
    // integer roots of the monic integer polynomial
    loop {
        let n = g.len() - 1;
        if n == 0 {
            break;
        }
        let root = if g[0].is_zero() {
            Some(BigInt::zero())
        } else {
            divisors(&g[0])
                .into_iter()
                .flat_map(|d| [d.clone(), -d])
                .find(|r| eval_int(&g, r).is_zero())
        };
        let Some(r) = root else { break };
        // synthetic division by (y − r)
        let mut q = vec![BigInt::zero(); n];
        let mut carry = BigInt::zero();
        for i in (0..n).rev() {
            carry = &g[i + 1] + &carry * &r;
            q[i] = carry.clone();
        }
        found.push(int_poly(&[-r, BigInt::one()]));
        g = q;
    }
    let rest_degree = g.len() - 1;
    match rest_degree {
        0 => {}
        1..=3 => found.push(int_poly(&g)),
        4 => match split_quartic(&g) {
            Some((a, b)) => {
                found.push(a);
                found.push(b);
            }
            None => found.push(int_poly(&g)),
        },
        n => {
            return Err(Error::ResidueFactorizationUnavailable {
                reason: format!("degree {n} factor over Q without rational roots"),
            })
        }
    }
    // back to x: h(y) with y = L·x
    let ls = Scalar::Rational(BigRational::from_integer(l));
    Ok(found.into_iter().map(|h| h.scale_variable(&ls).monic()).collect())
}

fn factor_q(f: &KPoly) -> Result<Vec<(KPoly, usize)>> {
    let mut out = Vec::new();
    for (g, m) in squarefree_q(f) {
        for h in factor_q_squarefree(&g)? {
            out.push((h, m));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(fs: &[(KPoly, usize)], field: CoefficientField) -> KPoly {
        fs.iter()
            .fold(KPoly::one(field), |acc, (g, m)| acc.mul(&g.pow(*m as u32)))
    }

    #[test]
    fn factor_over_f2() {
        let f2 = CoefficientField::PrimeField(2);
        let f = KPoly::from_i64s(f2, &[1, 1, 1]);
        assert!(is_irreducible(&f).unwrap());
        assert!(is_irreducible_fp(&f, 2));
        // x^2 + 1 = (x + 1)^2
        let g = KPoly::from_i64s(f2, &[1, 0, 1]);
        assert_eq!(factor(&g).unwrap(), vec![(KPoly::from_i64s(f2, &[1, 1]), 2)]);
        // x^4 + x = x (x + 1)(x^2 + x + 1)
        let h = KPoly::from_i64s(f2, &[0, 1, 0, 0, 1]);
        let fs = factor(&h).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs, f2), h);
    }

    #[test]
    fn factor_over_f5_equal_degree() {
        let f5 = CoefficientField::PrimeField(5);
        // (x^2 + 2)(x^2 + 3)(x − 1)^3
        let a = KPoly::from_i64s(f5, &[2, 0, 1]);
        let b = KPoly::from_i64s(f5, &[3, 0, 1]);
        let c = KPoly::from_i64s(f5, &[-1, 1]);
        let f = a.mul(&b).mul(&c.pow(3));
        let fs = factor(&f).unwrap();
        assert_eq!(product(&fs, f5), f);
        assert_eq!(fs.iter().map(|(_, m)| *m).sum::<usize>(), 5);
        assert!(fs.iter().all(|(g, _)| is_irreducible_fp(g, 5)));
    }

    #[test]
    fn factor_over_f5_power_of_p() {
        let f5 = CoefficientField::PrimeField(5);
        // (x + 1)^5 (x + 2)^10
        let f = KPoly::from_i64s(f5, &[1, 1]).pow(5).mul(&KPoly::from_i64s(f5, &[2, 1]).pow(10));
        let fs = factor(&f).unwrap();
        assert_eq!(fs, vec![(KPoly::from_i64s(f5, &[1, 1]), 5), (KPoly::from_i64s(f5, &[2, 1]), 10)]);
    }

    #[test]
    fn factor_over_q() {
        let q = CoefficientField::Rationals;
        // x^2 − 1
        let fs = factor(&KPoly::from_i64s(q, &[-1, 0, 1])).unwrap();
        assert_eq!(fs.len(), 2);
        // x^2 − 2 irreducible
        assert!(is_irreducible(&KPoly::from_i64s(q, &[-2, 0, 1])).unwrap());
        // 4x^2 − 1 = 4 (x − 1/2)(x + 1/2)
        let fs = factor(&KPoly::from_i64s(q, &[-1, 0, 4])).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|(g, _)| g.degree() == Some(1)));
        // x^4 + 4 = (x^2 − 2x + 2)(x^2 + 2x + 2)
        let fs = factor(&KPoly::from_i64s(q, &[4, 0, 0, 0, 1])).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(product(&fs, q), KPoly::from_i64s(q, &[4, 0, 0, 0, 1]));
        // x^4 + 1 is irreducible over Q
        assert!(is_irreducible(&KPoly::from_i64s(q, &[1, 0, 0, 0, 1])).unwrap());
        // (x − 1)^2 (x^2 + 1)
        let f = KPoly::from_i64s(q, &[-1, 1]).pow(2).mul(&KPoly::from_i64s(q, &[1, 0, 1]));
        let fs = factor(&f).unwrap();
        assert_eq!(product(&fs, q), f);
        assert_eq!(
            factor(&KPoly::from_i64s(q, &[2, 0, 0, 0, 0, 1])).unwrap_err().code(),
            "RESIDUE_FACTORIZATION_UNAVAILABLE"
        );
    }
}
