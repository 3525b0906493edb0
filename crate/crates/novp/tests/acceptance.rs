//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons
//! throughout. Runs as a plain binary so that every criterion reports even
//! when an earlier one fails; the process exits nonzero on any failure.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use novp::models;
use novp::novp_core::barcode::{bottleneck, Barcode};
use novp::novp_core::equivariant::{multiset, smith_check, tate_spectrum, CyclicAction, DEFAULT_RANK_CAP};
use novp::novp_core::filtered::{
    dual_pairing, duality_check, pairing_positivity, svd, torsion_decomposition, FilteredComplex,
};
use novp::novp_core::qalg::{
    check_idempotents, find_idempotents, idempotent_filtration_bound, quantum_filtration, reduce_idempotents_mod_p,
    DEFAULT_ORDER,
};
use novp::novp_core::scalar::prime_divisors;
use novp::novp_core::{CoefficientField, NovikovSeries, Scalar, Valuation};
use novp::random::*;

use common::*;

const SEED: u64 = 0x6e6f_7670;

const SVD_BUDGET: Duration = Duration::from_secs(30);
const SMITH_BUDGET: Duration = Duration::from_secs(300);

type Check = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Check); 12] = [
        ("SVD correctness on 1000 random complexes", ac1_svd),
        ("svd = torsion = elementary-divisor oracle", ac2_three_way),
        ("bar lengths invariant under 200 basis changes", ac3_basis),
        ("division residual and prime support", ac4_division),
        ("reduction mod p is a ring homomorphism", ac5_reduction),
        ("trivial-action Tate spectra double every bar", ac6_doubling),
        ("T -> T^p multiplies every bar by p", ac7_rescaling),
        ("Smith inequality on 100 random complexes", ac8_smith),
        ("sphere idempotents and their reductions", ac9_idempotents),
        ("pairing positivity and spectral duality", ac10_duality),
        ("bottleneck distance against exhaustive matching", ac11_bottleneck),
        ("bar lengths move at most 2 eps under eps-perturbation", ac12_stability),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("AC{:<2} PASS {title}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("AC{:<2} FAIL {title}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// The shared sample for the first two criteria.
fn sample_complex(i: u64) -> FilteredComplex {
    let mut rng = trial_rng(SEED, "complexes", i);
    let field = random_field(&mut rng, &FIELDS);
    random_complex(&mut rng, field, 12)
}

fn ac1_svd() -> Result<String, String> {
    let mut spent = Duration::ZERO;
    let (mut total_rank, mut bars) = (0, 0);
    for i in 0..1000 {
        let c = sample_complex(i);
        let t = Instant::now();
        let s = svd(&c).map_err(|e| format!("complex {i}: {e}"))?;
        spent += t.elapsed();
        let ctx = |m: String| format!("complex {i} over {}: {m}", c.field());
        total_rank += c.rank();
        bars += s.k();
        ensure(c.rank() == s.b() + 2 * s.k() && s.null_zeta.is_empty(), || {
            ctx(format!("N = {} but B = {}, K = {}", c.rank(), s.b(), s.k()))
        })?;
        for (k, xi) in s.xi.iter().enumerate() {
            ensure(apply(&c, xi).iter().all(NovikovSeries::is_exact_zero), || ctx(format!("d(xi_{k}) != 0")))?;
            ensure(level(&c, xi).as_ref() == Some(&s.xi_levels[k]), || ctx(format!("level of xi_{k}")))?;
        }
        for k in 0..s.k() {
            ensure(apply(&c, &s.zeta[k]) == s.eta[k], || ctx(format!("d(zeta_{k}) != eta_{k}")))?;
            let (lz, le) = (level(&c, &s.zeta[k]), level(&c, &s.eta[k]));
            ensure(lz.as_ref() == Some(&s.zeta_levels[k]), || ctx(format!("level of zeta_{k}")))?;
            let len = lz.zip(le).map(|(z, e)| z - e);
            ensure(len.as_ref() == Some(&s.bar_lengths[k]), || ctx(format!("bar {k} length")))?;
        }
        let all: Vec<&Vec<NovikovSeries>> = s.xi.iter().chain(&s.eta).chain(&s.zeta).collect();
        ensure(orthogonal(&c, &all).map_err(&ctx)?, || ctx("basis is not orthogonal".into()))?;
        s.verify(&c).map_err(&ctx)?;
    }
    ensure(spent < SVD_BUDGET, || format!("svd took {spent:?}, budget {SVD_BUDGET:?}"))?;
    Ok(format!(
        "1000 complexes, mean rank {:.1}, {bars} bars, svd time {:.2}s < 30s",
        total_rank as f64 / 1000.0,
        spent.as_secs_f64()
    ))
}

fn ac2_three_way() -> Result<String, String> {
    let mut bars = 0;
    for i in 0..1000 {
        let c = sample_complex(i);
        let a = sorted(svd(&c).map_err(|e| e.to_string())?.bar_lengths);
        let b = sorted(torsion_decomposition(&c).map_err(|e| e.to_string())?);
        let o = sorted(elementary_divisor_lengths(&c));
        ensure(a == b && b == o, || {
            format!("complex {i}: svd {} torsion {} oracle {}", show(&a), show(&b), show(&o))
        })?;
        bars += a.len();
    }
    Ok(format!("1000 complexes, {bars} bar lengths agree"))
}

fn ac3_basis() -> Result<String, String> {
    for i in 0..200 {
        let mut rng = trial_rng(SEED, "basis", i);
        let field = random_field(&mut rng, &FIELDS);
        let c = random_complex(&mut rng, field, 12);
        let p = random_basis_change(&mut rng, &c);
        let d = c.change_basis(&p).map_err(|e| format!("trial {i}: {e}"))?;
        let a = sorted(svd(&c).map_err(|e| e.to_string())?.bar_lengths);
        let b = sorted(svd(&d).map_err(|e| e.to_string())?.bar_lengths);
        ensure(a == b, || format!("trial {i}: {} became {}", show(&a), show(&b)))?;
    }
    Ok("200 changes of basis".into())
}

fn ac4_division() -> Result<String, String> {
    let z = CoefficientField::Integers;
    let q = CoefficientField::Rationals;
    let mut exact = 0;
    for i in 0..200 {
        let mut rng = trial_rng(SEED, "division", i);
        let (na, nb) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
        let den = random_denominator(&mut rng);
        let a = random_series(&mut rng, z, den, na, -4, 6);
        let b = random_series(&mut rng, z, den, nb, -3, 4);
        let order = rat(rng.gen_range(0..=10), 2);
        let d = NovikovSeries::divide(&a, &b, &order).map_err(|e| format!("trial {i}: {e}"))?;
        let g = NovikovSeries::new(q, d.quotient.terms().to_vec(), None).map_err(|e| e.to_string())?;
        let residual = &a.clone().retag(q) - &(&g * &b.clone().retag(q));
        ensure(residual.is_exact(), || format!("trial {i}: residual {residual} is truncated"))?;
        let (Valuation::Finite(va), Valuation::Finite(vb)) = (a.valuation(), b.valuation()) else {
            return Err(format!("trial {i}: zero operand"));
        };
        let bound = va - &vb + &order;
        match residual.valuation() {
            Valuation::Finite(v) => ensure(v >= bound, || format!("trial {i}: ν(A − gB) = {v} < {bound}, A = {a}, B = {b}"))?,
            Valuation::Infinity => exact += 1,
        }
        let Some(Scalar::Rational(b0)) = b.leading_term().map(|t| t.1.clone()) else {
            return Err(format!("trial {i}: no leading coefficient"));
        };
        let allowed = prime_divisors(b0.numer());
        ensure(d.prime_support.is_subset(&allowed), || {
            format!("trial {i}: prime support {:?} not within primes of {b0}", d.prime_support)
        })?;
    }
    let one = NovikovSeries::one(z);
    let b = &NovikovSeries::from_i64(2, z) + &NovikovSeries::t_power(rat(1, 1), z);
    let d = NovikovSeries::divide(&one, &b, &rat(3, 1)).map_err(|e| e.to_string())?;
    let want: Vec<(BigRational, Scalar)> = [(0, rat(1, 2)), (1, rat(-1, 4)), (2, rat(1, 8))]
        .into_iter()
        .map(|(e, c)| (rat(e, 1), Scalar::Rational(c)))
        .collect();
    ensure(d.quotient.terms() == want.as_slice(), || format!("1/(2+T) = {}", d.quotient))?;
    ensure(d.prime_support == BTreeSet::from([BigInt::from(2)]), || {
        format!("1/(2+T) prime support {:?}", d.prime_support)
    })?;
    Ok(format!("200 divisions ({exact} exact), 1/(2+T) = {} to order 3", d.quotient))
}

fn rational_series<R: Rng>(rng: &mut R) -> NovikovSeries {
    let terms: Vec<_> = (0..rng.gen_range(1..=4))
        .map(|_| {
            let c = rat(rng.gen_range(-12..=12), rng.gen_range(1..=14));
            (rat(rng.gen_range(-4..=6), 2), Scalar::Rational(c))
        })
        .collect();
    NovikovSeries::new(CoefficientField::Rationals, terms, None).expect("valid")
}

fn p_integral(s: &NovikovSeries, p: u64) -> bool {
    s.terms().iter().all(|(_, c)| match c {
        Scalar::Rational(q) => !(q.denom() % BigInt::from(p)).is_zero(),
        Scalar::Modular { .. } => true,
    })
}

fn ac5_reduction() -> Result<String, String> {
    let (mut homs, mut failures) = (0, 0);
    for i in 0..500 {
        let mut rng = trial_rng(SEED, "reduction", i);
        let p = [3, 5, 7][rng.gen_range(0..3)];
        let (a, b) = (rational_series(&mut rng), rational_series(&mut rng));
        for s in [&a, &b] {
            match (s.reduce_mod_p(p), p_integral(s, p)) {
                (Ok(_), true) => {}
                (Err(e), false) if e.code() == "DENOMINATOR_DIVISIBLE_BY_P" => failures += 1,
                (r, _) => return Err(format!("pair {i}: [{s}]_{p} gave {r:?}")),
            }
        }
        if !(p_integral(&a, p) && p_integral(&b, p)) {
            continue;
        }
        let red = |s: &NovikovSeries| s.reduce_mod_p(p).map_err(|e| format!("pair {i}: {e}"));
        let (ra, rb) = (red(&a)?, red(&b)?);
        ensure(red(&(&a * &b))? == &ra * &rb, || format!("pair {i}: [AB]_{p} != [A]_{p}[B]_{p}, A = {a}, B = {b}"))?;
        ensure(red(&(&a + &b))? == &ra + &rb, || format!("pair {i}: [A+B]_{p} != [A]_{p}+[B]_{p}, A = {a}, B = {b}"))?;
        homs += 1;
    }
    ensure(homs > 0 && failures > 0, || format!("degenerate sample: {homs} homomorphism checks, {failures} failures"))?;
    Ok(format!("500 pairs: {homs} homomorphism checks, {failures} failures raised as DENOMINATOR_DIVISIBLE_BY_P"))
}

/// The sample shared by the doubling and rescaling criteria.
fn small_fp_complex(i: u64) -> (u64, FilteredComplex) {
    let mut rng = trial_rng(SEED, "small", i);
    let p = [2, 3][rng.gen_range(0..2)];
    (p, random_complex(&mut rng, CoefficientField::PrimeField(p), 4))
}

fn ac6_doubling() -> Result<String, String> {
    let mut bars = 0;
    for i in 0..100 {
        let (p, c) = small_fp_complex(i);
        let k = c.rank();
        let beta = sorted(svd(&c).map_err(|e| e.to_string())?.bar_lengths);
        let act = CyclicAction::identity(p, c.rank(), c.field());
        let t = tate_spectrum(&c, &act, k, false).map_err(|e| format!("complex {i}: {e}"))?;
        let per_u = t.per_u_degree.ok_or_else(|| format!("complex {i}: spectrum at K not contained in K+1"))?;
        let doubled: Vec<BigRational> = beta.iter().flat_map(|b| [b.clone(), b.clone()]).collect();
        ensure(multiset(&per_u) == multiset(&doubled), || {
            format!("complex {i} (p = {p}, K = {k}): per-u {} vs β doubled {}", show(&sorted(per_u.clone())), show(&doubled))
        })?;
        bars += beta.len();
    }
    Ok(format!("100 complexes over F_2/F_3 at K = rank, {bars} bars doubled"))
}

fn ac7_rescaling() -> Result<String, String> {
    for i in 0..100 {
        let (p, c) = small_fp_complex(i);
        let pq = rat(p as i64, 1);
        let scaled = c.rescale_exponents(&pq).map_err(|e| e.to_string())?;
        let a = sorted(svd(&scaled).map_err(|e| e.to_string())?.bar_lengths);
        let b: Vec<BigRational> = sorted(svd(&c).map_err(|e| e.to_string())?.bar_lengths).iter().map(|x| x * &pq).collect();
        ensure(a == b, || format!("complex {i}: {} vs p·β {}", show(&a), show(&b)))?;
    }
    Ok("100 complexes".into())
}

fn ac8_smith() -> Result<String, String> {
    let start = Instant::now();
    let mut max_rank = 0;
    for i in 0..100 {
        let mut rng = trial_rng(SEED, "smith", i);
        let p = [2, 3][rng.gen_range(0..2)];
        let c = random_complex(&mut rng, CoefficientField::PrimeField(p), 4);
        max_rank = max_rank.max(c.rank().pow(p as u32));
        let r = smith_check(&c, p, 2, DEFAULT_RANK_CAP).map_err(|e| format!("complex {i}: {e}"))?;
        ensure(r.pass, || format!("complex {i} (p = {p}): p·β_tot = {} > β_tot(C^⊗p) = {}", r.lhs, r.rhs))?;
    }
    let spent = start.elapsed();
    ensure(spent < SMITH_BUDGET, || format!("took {spent:?}, budget {SMITH_BUDGET:?}"))?;
    Ok(format!("100 complexes, K = 2, largest tensor power rank {max_rank}, {:.2}s < 300s", spent.as_secs_f64()))
}

/// `(a M + b q)(c M + d q) = (ac + bd T) M + (ad + bc) q`, written out by hand.
fn sphere_product(x: &[NovikovSeries], y: &[NovikovSeries]) -> Vec<NovikovSeries> {
    let t = NovikovSeries::t_power(rat(1, 1), x[0].field());
    vec![&(&x[0] * &y[0]) + &(&(&x[1] * &y[1]) * &t), &(&x[0] * &y[1]) + &(&x[1] * &y[0])]
}

fn idempotent_equations(es: &[Vec<NovikovSeries>]) -> bool {
    let zero = |v: &[NovikovSeries]| v.iter().all(NovikovSeries::is_exact_zero);
    let sub = |a: &[NovikovSeries], b: &[NovikovSeries]| -> Vec<NovikovSeries> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let field = es[0][0].field();
    let unit = vec![NovikovSeries::one(field), NovikovSeries::zero(field)];
    let squares = es.iter().all(|e| zero(&sub(&sphere_product(e, e), e)));
    let orthogonal = zero(&sphere_product(&es[0], &es[1]));
    let sum: Vec<NovikovSeries> = es[0].iter().zip(&es[1]).map(|(x, y)| x + y).collect();
    squares && orthogonal && zero(&sub(&sum, &unit))
}

fn ac9_idempotents() -> Result<String, String> {
    let a = models::sphere();
    let e = find_idempotents(&a, &a.basis_vector(1), &rat(DEFAULT_ORDER, 1)).map_err(|e| e.to_string())?;
    ensure(e.elements.len() == 2 && !e.partial, || format!("expected two idempotents, got {:?}", e.elements))?;
    let want: Vec<Vec<NovikovSeries>> = [1, -1].into_iter().map(models::sphere_idempotent).collect();
    let same = want.iter().all(|w| e.elements.contains(w)) && e.elements.iter().all(|x| want.contains(x));
    ensure(same, || "idempotents are not ½M ± ½T^(-1/2)q".into())?;
    ensure(idempotent_equations(&e.elements), || "exact idempotent equations fail".into())?;
    let checks = check_idempotents(&a, &e.elements).map_err(|e| e.to_string())?;
    ensure(checks.all() && checks.exact, || format!("library checks {checks:?}"))?;
    let delta = idempotent_filtration_bound(&a, &e).map_err(|e| e.to_string())?;
    let half = rat(1, 2);
    for p in [3, 5, 7] {
        let r = reduce_idempotents_mod_p(&a, &e, p).map_err(|e| format!("mod {p}: {e}"))?;
        ensure(idempotent_equations(&r.elements), || format!("mod {p}: hand-checked equations fail"))?;
        ensure(r.checks.all(), || format!("mod {p}: {:?}", r.checks))?;
        for v in &r.elements {
            let l = quantum_filtration(v);
            ensure(l.as_ref() == Some(&half) && &half <= delta.value(), || {
                format!("mod {p}: l = {l:?}, δ = {}", delta.value())
            })?;
        }
    }
    match reduce_idempotents_mod_p(&a, &e, 2) {
        Err(err) if err.code() == "DENOMINATOR_DIVISIBLE_BY_P" => {}
        other => return Err(format!("mod 2 should raise DENOMINATOR_DIVISIBLE_BY_P, got {other:?}")),
    }
    Ok(format!("e± exact, p = 3, 5, 7 pass, p = 2 raises DENOMINATOR_DIVISIBLE_BY_P, l = 1/2 ≤ δ = {}", delta.value()))
}

fn ac10_duality() -> Result<String, String> {
    let mut positive = 0;
    let mut draws = 0u64;
    while positive < 500 {
        ensure(draws < 200_000, || format!("only {positive} pairs met the hypotheses"))?;
        let mut rng = trial_rng(SEED, "positivity", draws);
        draws += 1;
        let field = random_field(&mut rng, &FIELDS);
        let c = random_complex(&mut rng, field, 6);
        let dual = dual_pairing(&c);
        let (a, b) = (random_chain(&mut rng, &c), random_chain(&mut rng, &dual));
        match pairing_positivity(&c, &dual, &a, &b).map_err(|e| e.to_string())? {
            Some(true) => positive += 1,
            Some(false) => return Err(format!("draw {draws}: ν(Δ(a, b)) ≤ 0 for chains below opposite levels")),
            None => {}
        }
    }
    let (mut complexes, mut classes, mut tries) = (0, 0, 0u64);
    while complexes < 100 {
        ensure(tries < 10_000, || format!("only {complexes} complexes had exact cycle classes"))?;
        let mut rng = trial_rng(SEED, "duality", tries);
        tries += 1;
        let field = random_field(&mut rng, &FIELDS);
        let c = random_complex(&mut rng, field, 6);
        let s = svd(&c).map_err(|e| e.to_string())?;
        let exact: Vec<(usize, &Vec<NovikovSeries>)> =
            s.xi.iter().enumerate().filter(|(_, x)| x.iter().all(NovikovSeries::is_exact)).collect();
        if exact.is_empty() {
            continue;
        }
        complexes += 1;
        let mut chains: Vec<(Vec<NovikovSeries>, Option<BigRational>)> =
            exact.iter().map(|(k, x)| ((*x).clone(), Some(s.xi_levels[*k].clone()))).collect();
        // a random combination of the surviving classes
        let mut combo = c.zero_chain();
        for (_, x) in &exact {
            let coeff = NovikovSeries::monomial(random_scalar(&mut rng, field), rat(rng.gen_range(-4..=4), 2), field);
            for (dst, xi) in combo.iter_mut().zip(x.iter()) {
                *dst = &*dst + &(&coeff * xi);
            }
        }
        chains.push((combo, None));
        for (chain, level_want) in chains {
            let r = duality_check(&c, &chain).map_err(|e| format!("complex {tries}: {e}"))?;
            ensure(r.equal, || format!("complex {tries}: c = {} but −inf c* = {}", r.lhs, r.rhs))?;
            if let Some(l) = level_want {
                ensure(r.lhs == l, || format!("complex {tries}: c(ξ) = {} but A(ξ) = {l}", r.lhs))?;
            }
            classes += 1;
        }
    }
    Ok(format!("500 positive pairs from {draws} draws; duality on {classes} classes of 100 complexes"))
}

fn barcodes_equal_infinite<R: Rng>(rng: &mut R) -> [Barcode; 3] {
    let inf = rng.gen_range(0..=2);
    [(); 3].map(|_| random_barcode(rng, 6, inf))
}

fn ac11_bottleneck() -> Result<String, String> {
    let mut infinite = 0;
    for i in 0..300 {
        let mut rng = trial_rng(SEED, "bottleneck", i);
        let (a, b) = if rng.gen_bool(0.1) {
            (random_barcode(&mut rng, 6, 1), random_barcode(&mut rng, 6, 2))
        } else {
            let [a, b, _] = barcodes_equal_infinite(&mut rng);
            (a, b)
        };
        let (lib, oracle) = (bottleneck(&a, &b), bottleneck_exhaustive(&a, &b));
        ensure(lib == oracle, || format!("pair {i}: library {lib:?}, exhaustive {oracle:?} for {a:?} vs {b:?}"))?;
        infinite += usize::from(lib.is_none());
    }
    for i in 0..100 {
        let mut rng = trial_rng(SEED, "triples", i);
        let [a, b, c] = barcodes_equal_infinite(&mut rng);
        let d = |x: &Barcode, y: &Barcode| bottleneck(x, y).ok_or_else(|| format!("triple {i}: infinite distance"));
        ensure(d(&a, &a)?.is_zero(), || format!("triple {i}: d(a, a) != 0"))?;
        ensure(d(&a, &b)? == d(&b, &a)?, || format!("triple {i}: asymmetric"))?;
        ensure(!d(&a, &b)?.is_negative(), || format!("triple {i}: negative"))?;
        ensure(d(&a, &c)? <= d(&a, &b)? + d(&b, &c)?, || format!("triple {i}: triangle inequality fails"))?;
    }
    Ok(format!("300 pairs ({infinite} at infinite distance), 100 triples"))
}

fn ac12_stability() -> Result<String, String> {
    let (mut trials, mut draws) = (0, 0u64);
    let mut worst = BigRational::zero();
    while trials < 200 {
        ensure(draws < 2000, || format!("only {trials} strict perturbations found"))?;
        let mut rng = trial_rng(SEED, "stability", draws);
        draws += 1;
        let field = random_field(&mut rng, &FIELDS);
        let c = random_complex(&mut rng, field, 10);
        let eps = rat(rng.gen_range(1..=6), 6);
        let Some(moved) = perturb_actions(&mut rng, &c, &eps) else { continue };
        trials += 1;
        let mut a = svd(&c).map_err(|e| e.to_string())?.bar_lengths;
        let mut b = svd(&moved).map_err(|e| e.to_string())?.bar_lengths;
        a.sort_by(|x, y| y.cmp(x));
        b.sort_by(|x, y| y.cmp(x));
        let two_eps = &eps * rat(2, 1);
        let zero = BigRational::zero();
        for j in 0..a.len().max(b.len()) {
            let gap = (a.get(j).unwrap_or(&zero) - b.get(j).unwrap_or(&zero)).abs();
            ensure(gap <= two_eps, || format!("draw {draws}: bar {j} moved by {gap} > 2ε = {two_eps}"))?;
            worst = worst.max(&gap / &eps);
        }
    }
    Ok(format!("200 perturbations from {draws} draws, largest gap/ε = {worst}"))
}
