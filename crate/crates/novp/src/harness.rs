//! Randomized property suites and the bundled worked examples.
//!
//! Every trial draws from its own stream (see [`trial_rng`]), so a report
//! depends only on the seed and the trial counts, never on `--parallel`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use novp_core::barcode::{bottleneck, bottleneck_mod_shift, Barcode};
use novp_core::equivariant::{multiset, smith_check, tate_spectrum, CyclicAction, DEFAULT_RANK_CAP};
use novp_core::filtered::{
    barcode_of, dual_pairing, duality_check, pairing_positivity, svd, torsion_decomposition, FilteredComplex,
};
use novp_core::qalg::{
    check_idempotents, find_idempotents, gamma_e, idempotent_filtration_bound, reduce_idempotents_mod_p, LabeledComplex, DEFAULT_ORDER,
};
use novp_core::scalar::prime_divisors;
use novp_core::{CoefficientField, NovikovSeries, Scalar, Valuation};

use crate::models;
use crate::random::*;

pub const DEFAULT_SEED: u64 = 20_240_229;

type Trial = fn(&mut ChaCha8Rng) -> Result<(), String>;

pub struct Suite {
    pub name: &'static str,
    pub default_trials: u64,
    run: Trial,
}

pub const SUITES: &[Suite] = &[
    Suite { name: "examples", default_trials: 1, run: examples },
    Suite { name: "svd", default_trials: 200, run: svd_trial },
    Suite { name: "torsion", default_trials: 200, run: torsion_trial },
    Suite { name: "basis", default_trials: 100, run: basis_trial },
    Suite { name: "division", default_trials: 200, run: division_trial },
    Suite { name: "reduction", default_trials: 200, run: reduction_trial },
    Suite { name: "tate", default_trials: 30, run: tate_trial },
    Suite { name: "rescale", default_trials: 100, run: rescale_trial },
    Suite { name: "smith", default_trials: 20, run: smith_trial },
    Suite { name: "duality", default_trials: 100, run: duality_trial },
    Suite { name: "bottleneck", default_trials: 100, run: bottleneck_trial },
    Suite { name: "stability", default_trials: 100, run: stability_trial },
];

pub fn suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: u64,
    pub passed: u64,
    /// `(trial, message)` for each failing trial.
    pub failures: Vec<(u64, String)>,
}

/// Failures listed per suite in the JSON report; the count is always exact.
const LISTED_FAILURES: usize = 10;

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }

    pub fn to_json(&self) -> Value {
        let failures: Vec<Value> = self
            .failures
            .iter()
            .take(LISTED_FAILURES)
            .map(|(t, m)| json!({ "trial": t, "message": m }))
            .collect();
        json!({ "trials": self.trials, "passed": self.passed, "failures": failures })
    }
}

pub fn run_trial(s: &Suite, seed: u64, trial: u64) -> Result<(), String> {
    let mut rng = trial_rng(seed, s.name, trial);
    catch_unwind(AssertUnwindSafe(|| (s.run)(&mut rng))).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panic: {msg}"))
    })
}

/// Runs trials `0..trials` on the current rayon pool.
pub fn run_suite(s: &'static Suite, seed: u64, trials: u64) -> SuiteReport {
    let results: Vec<Result<(), String>> = (0..trials).into_par_iter().map(|t| run_trial(s, seed, t)).collect();
    let failures: Vec<(u64, String)> = results
        .into_iter()
        .enumerate()
        .filter_map(|(t, r)| r.err().map(|m| (t as u64, m)))
        .collect();
    SuiteReport {
        name: s.name,
        trials,
        passed: trials - failures.len() as u64,
        failures,
    }
}

pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(SuiteReport::ok)
    }

    pub fn to_json(&self) -> Value {
        let suites: serde_json::Map<String, Value> =
            self.suites.iter().map(|s| (s.name.to_string(), s.to_json())).collect();
        json!({ "schema": 1, "seed": self.seed, "pass": self.ok(), "suites": suites })
    }
}

/// Runs one named suite or all of them. `trials` overrides every default.
pub fn selftest(seed: u64, only: Option<&str>, trials: Option<u64>, parallel: usize) -> Result<SelftestReport, String> {
    let chosen: Vec<&'static Suite> = match only {
        Some(n) => vec![suite(n).ok_or_else(|| {
            let names: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
            format!("unknown suite {n:?}; known: {}", names.join(", "))
        })?],
        None => SUITES.iter().collect(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel.max(1))
        .build()
        .map_err(|e| e.to_string())?;
    let suites = pool.install(|| {
        chosen
            .into_iter()
            .map(|s| run_suite(s, seed, trials.unwrap_or(s.default_trials)))
            .collect()
    });
    Ok(SelftestReport { seed, suites })
}

// ---------------------------------------------------------------- helpers

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn err<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{what}: {e}")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sorted(mut v: Vec<BigRational>) -> Vec<BigRational> {
    v.sort();
    v
}

fn show(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn bars(c: &FilteredComplex) -> Result<Vec<BigRational>, String> {
    Ok(sorted(svd(c).map_err(err("svd"))?.bar_lengths))
}

/// Bars `[0, l)`, one per length.
fn length_barcode(lengths: &[BigRational]) -> Barcode {
    let mut b = Barcode::new();
    for l in lengths {
        b.add_finite(BigRational::zero(), l.clone(), 1);
    }
    b
}

fn prime_field<R: Rng>(rng: &mut R, primes: &[u64]) -> (u64, CoefficientField) {
    let p = primes[rng.gen_range(0..primes.len())];
    (p, CoefficientField::PrimeField(p))
}

// ---------------------------------------------------------------- suites

fn examples(_: &mut ChaCha8Rng) -> Result<(), String> {
    let q = CoefficientField::Rationals;
    let r = barcode_of(&models::e1(q)).map_err(err("E1 barcode"))?;
    let mut want = Barcode::new();
    want.add_finite(rat(0, 1), rat(1, 1), 1);
    ensure((r.n, r.b, r.k) == (2, 0, 1) && r.barcode == want, || format!("E1 barcode {r:?}"))?;

    let f2 = CoefficientField::PrimeField(2);
    let s = smith_check(&models::e1(f2), 2, 2, DEFAULT_RANK_CAP).map_err(err("E1 smith"))?;
    ensure(s.pass && s.lhs == rat(2, 1) && s.rescaled == vec![rat(2, 1), rat(2, 1)], || {
        format!("E1 smith {s:?}")
    })?;

    let a = models::sphere();
    let e = find_idempotents(&a, &a.basis_vector(1), &rat(DEFAULT_ORDER, 1)).map_err(err("sphere idempotents"))?;
    let got: BTreeSet<String> = e.elements.iter().map(|v| format!("{v:?}")).collect();
    let want: BTreeSet<String> = [1, -1].iter().map(|&s| format!("{:?}", models::sphere_idempotent(s))).collect();
    ensure(got == want, || "sphere idempotents differ from ½M ± ½T^(-1/2)q".into())?;
    let checks = check_idempotents(&a, &e.elements).map_err(err("checks"))?;
    ensure(checks.all() && checks.exact, || format!("sphere checks {checks:?}"))?;
    let delta = idempotent_filtration_bound(&a, &e).map_err(err("delta"))?;
    ensure(delta.value() == &rat(1, 2), || format!("delta {delta:?}"))?;
    for p in [3, 5, 7] {
        let r = reduce_idempotents_mod_p(&a, &e, p).map_err(err("reduction"))?;
        ensure(r.checks.all(), || format!("mod {p}: {:?}", r.checks))?;
        ensure(r.filtrations.iter().all(|l| l.as_ref() == Some(&rat(1, 2))), || {
            format!("mod {p}: filtrations {:?}", r.filtrations)
        })?;
    }
    match reduce_idempotents_mod_p(&a, &e, 2) {
        Err(x) if x.code() == "DENOMINATOR_DIVISIBLE_BY_P" => {}
        other => return Err(format!("mod 2 should fail, got {other:?}")),
    }
    let l = LabeledComplex::identity_model(&a).map_err(err("identity model"))?;
    let g = gamma_e(&l, &a, &e.elements).map_err(err("gamma"))?;
    ensure(g == rat(1, 1) && g <= rat(3, 1) * delta.value(), || format!("gamma {g}"))?;

    let z = CoefficientField::Integers;
    let one = NovikovSeries::one(z);
    let b = &NovikovSeries::from_i64(2, z) + &NovikovSeries::t_power(rat(1, 1), z);
    let d = NovikovSeries::divide(&one, &b, &rat(3, 1)).map_err(err("divide"))?;
    let want = [(0, rat(1, 2)), (1, rat(-1, 4)), (2, rat(1, 8))]
        .into_iter()
        .map(|(e, c)| (rat(e, 1), Scalar::Rational(c)))
        .collect::<Vec<_>>();
    ensure(d.quotient.terms() == want.as_slice(), || format!("1/(2+T) = {}", d.quotient))?;
    ensure(d.prime_support == BTreeSet::from([BigInt::from(2)]), || {
        format!("prime support {:?}", d.prime_support)
    })?;
    match NovikovSeries::divide_integral(&one, &b, &rat(3, 1)) {
        Err(x) if x.code() == "NONUNIT_LEADING_COEFF" => Ok(()),
        other => Err(format!("integral 1/(2+T) should fail, got {other:?}")),
    }
}

fn svd_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let field = random_field(rng, &FIELDS);
    let c = random_complex(rng, field, 12);
    let basis = svd(&c).map_err(err("svd"))?;
    basis.verify(&c)?;
    ensure(c.rank() == basis.b() + 2 * basis.k(), || {
        format!("N = {} but B = {}, K = {}", c.rank(), basis.b(), basis.k())
    })
}

fn torsion_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let field = random_field(rng, &FIELDS);
    let c = random_complex(rng, field, 12);
    let a = bars(&c)?;
    let b = sorted(torsion_decomposition(&c).map_err(err("torsion"))?);
    ensure(a == b, || format!("svd {} vs torsion {}", show(&a), show(&b)))
}

fn basis_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let field = random_field(rng, &FIELDS);
    let c = random_complex(rng, field, 10);
    let p = random_basis_change(rng, &c);
    let d = c.change_basis(&p).map_err(err("change of basis"))?;
    let (a, b) = (bars(&c)?, bars(&d)?);
    ensure(a == b, || format!("{} became {}", show(&a), show(&b)))
}

fn division_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let z = CoefficientField::Integers;
    let (na, nb) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
    let a = random_series(rng, z, 1, na, -3, 5);
    let b = random_series(rng, z, 1, nb, -2, 4);
    let order = rat(rng.gen_range(0..=5), 1);
    let d = NovikovSeries::divide(&a, &b, &order).map_err(err("divide"))?;
    let q = CoefficientField::Rationals;
    let g = NovikovSeries::new(q, d.quotient.terms().to_vec(), None).map_err(err("quotient"))?;
    let (aq, bq) = (a.clone().retag(q), b.clone().retag(q));
    let residual = &aq - &(&g * &bq);
    ensure(residual.is_exact(), || format!("residual {residual} is truncated"))?;
    let (Valuation::Finite(va), Valuation::Finite(vb)) = (a.valuation(), b.valuation()) else {
        return Err("operands must be nonzero".into());
    };
    let bound = va - &vb + &order;
    if let Valuation::Finite(v) = residual.valuation() {
        ensure(v >= bound, || format!("ν(A − gB) = {v} < {bound} for A = {a}, B = {b}"))?;
    }
    let b0 = b.leading_term().expect("nonzero").1.as_rational().expect("integer").clone();
    let allowed = prime_divisors(b0.numer());
    ensure(d.prime_support.is_subset(&allowed), || {
        format!("prime support {:?} not within primes of {b0}", d.prime_support)
    })
}

fn rational_series(rng: &mut ChaCha8Rng) -> NovikovSeries {
    let q = CoefficientField::Rationals;
    let terms = (0..rng.gen_range(1..=4)).map(|_| {
        let c = rat(rng.gen_range(-9..=9), rng.gen_range(1..=10));
        (rat(rng.gen_range(-4..=6), 2), Scalar::Rational(c))
    });
    NovikovSeries::new(q, terms, None).expect("valid")
}

fn p_integral(s: &NovikovSeries, p: u64) -> bool {
    s.terms()
        .iter()
        .all(|(_, c)| c.as_rational().is_none_or(|q| !(q.denom() % BigInt::from(p)).is_zero()))
}

fn reduction_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let p = [3, 5, 7][rng.gen_range(0..3)];
    let (a, b) = (rational_series(rng), rational_series(rng));
    for s in [&a, &b] {
        match (s.reduce_mod_p(p), p_integral(s, p)) {
            (Ok(_), true) => {}
            (Err(e), false) if e.code() == "DENOMINATOR_DIVISIBLE_BY_P" => {}
            (r, _) => return Err(format!("[{s}]_{p} gave {r:?}")),
        }
    }
    if !(p_integral(&a, p) && p_integral(&b, p)) {
        return Ok(());
    }
    let red = |s: &NovikovSeries| s.reduce_mod_p(p).map_err(err("reduce"));
    let (ra, rb) = (red(&a)?, red(&b)?);
    ensure(red(&(&a * &b))? == &ra * &rb, || format!("[AB]_{p} != [A]_{p}[B]_{p} for A = {a}, B = {b}"))?;
    ensure(red(&(&a + &b))? == &ra + &rb, || format!("[A+B]_{p} != [A]_{p}+[B]_{p} for A = {a}, B = {b}"))
}

fn tate_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (p, field) = prime_field(rng, &[2, 3]);
    let c = random_complex(rng, field, 4);
    let k = c.rank();
    let act = CyclicAction::identity(p, c.rank(), field);
    let t = tate_spectrum(&c, &act, k, false).map_err(err("tate"))?;
    let per_u = t.per_u_degree.ok_or("spectrum at K is not contained in K+1")?;
    let b = bars(&c)?;
    let doubled: Vec<BigRational> = b.iter().flat_map(|x| [x.clone(), x.clone()]).collect();
    ensure(multiset(&per_u) == multiset(&doubled), || {
        format!("per-u spectrum {} vs doubled {}", show(&sorted(per_u.clone())), show(&doubled))
    })
}

fn rescale_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let field = random_field(rng, &FIELDS);
    let c = random_complex(rng, field, 10);
    let p = rat([2, 3, 5][rng.gen_range(0..3)], 1);
    let scaled = bars(&c.rescale_exponents(&p).map_err(err("rescale"))?)?;
    let want: Vec<BigRational> = bars(&c)?.iter().map(|x| x * &p).collect();
    ensure(scaled == want, || format!("rescaled {} vs {}", show(&scaled), show(&want)))
}

fn smith_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (p, field) = prime_field(rng, &[2, 3]);
    let c = random_complex(rng, field, 4);
    let r = smith_check(&c, p, 2, DEFAULT_RANK_CAP).map_err(err("smith"))?;
    ensure(r.pass, || format!("p·β_tot = {} > {}", r.lhs, r.rhs))
}

fn duality_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let field = random_field(rng, &FIELDS);
    let c = random_complex(rng, field, 6);
    let dual = dual_pairing(&c);
    for _ in 0..20 {
        let (a, b) = (random_chain(rng, &c), random_chain(rng, &dual));
        match pairing_positivity(&c, &dual, &a, &b).map_err(err("positivity"))? {
            Some(false) => return Err("ν(Δ(a, b)) ≤ 0 below the level bound".into()),
            Some(true) => break,
            None => {}
        }
    }
    let basis = svd(&c).map_err(err("svd"))?;
    for (k, xi) in basis.xi.iter().enumerate() {
        if !xi.iter().all(NovikovSeries::is_exact) {
            continue;
        }
        let r = duality_check(&c, xi).map_err(err("duality"))?;
        ensure(r.equal, || format!("xi_{k}: c = {} but −inf c* = {}", r.lhs, r.rhs))?;
    }
    Ok(())
}

fn bottleneck_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let inf = rng.gen_range(0..=2);
    let [a, b, c] = [(); 3].map(|_| random_barcode(rng, 6, inf));
    let d = |x: &Barcode, y: &Barcode| bottleneck(x, y).ok_or("infinite distance with equal infinite counts");
    ensure(d(&a, &a)?.is_zero(), || "d(a, a) != 0".into())?;
    let (ab, ba) = (d(&a, &b)?, d(&b, &a)?);
    ensure(ab == ba, || format!("d(a, b) = {ab} but d(b, a) = {ba}"))?;
    let (bc, ac) = (d(&b, &c)?, d(&a, &c)?);
    ensure(ac <= &ab + &bc, || format!("triangle: {ac} > {ab} + {bc}"))?;
    let m = bottleneck_mod_shift(&a, &b).ok_or("infinite distance mod shift")?;
    ensure(m <= ab && !m.is_negative(), || format!("mod-shift distance {m} exceeds {ab}"))
}

fn stability_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let field = random_field(rng, &FIELDS);
    let c = random_complex(rng, field, 8);
    let eps = rat(rng.gen_range(1..=4), 4);
    let Some(moved) = perturb_actions(rng, &c, &eps) else {
        return Ok(());
    };
    let (mut a, mut b) = (bars(&c)?, bars(&moved)?);
    a.reverse();
    b.reverse();
    let two_eps = &eps * rat(2, 1);
    for j in 0..a.len().max(b.len()) {
        let zero = BigRational::zero();
        let gap = (a.get(j).unwrap_or(&zero) - b.get(j).unwrap_or(&zero)).abs();
        ensure(gap <= two_eps, || format!("bar {j} moved by {gap} > 2ε = {two_eps}"))?;
    }
    // Endpoints are only defined up to a shift per bar, so compare lengths.
    let (la, lb) = (length_barcode(&a), length_barcode(&b));
    let d = bottleneck(&la, &lb).ok_or("infinite bottleneck distance")?;
    ensure(d <= two_eps, || format!("bottleneck of lengths {d} > 2ε = {two_eps}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_pass() {
        assert_eq!(run_trial(suite("examples").unwrap(), DEFAULT_SEED, 0), Ok(()));
    }

    #[test]
    fn every_suite_passes_a_few_trials() {
        for s in SUITES {
            let r = run_suite(s, 11, 3);
            assert!(r.ok(), "{}: {:?}", s.name, r.failures);
        }
    }

    #[test]
    fn reports_do_not_depend_on_parallelism() {
        let one = selftest(7, Some("torsion"), Some(8), 1).unwrap().to_json();
        let four = selftest(7, Some("torsion"), Some(8), 4).unwrap().to_json();
        assert_eq!(one, four);
        assert!(selftest(7, Some("nope"), None, 1).is_err());
    }
}
