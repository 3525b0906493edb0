//! Command dispatch. [`run`] never exits the process; `main` does that with
//! the returned code.
//!
//! Exit codes: 0 success, 1 bad input (parse, usage, library errors), 2 a
//! verification check that ran and failed.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use novp_core::barcode::{bottleneck, bottleneck_mod_shift};
use novp_core::equivariant::{smith_check, tate_spectrum, tensor_power, CyclicAction, DEFAULT_RANK_CAP};
use novp_core::filtered::{barcode_of, duality_check, svd, FilteredComplex};
use novp_core::qalg::{
    bar_stability_check, check_idempotents, find_idempotents, gamma_e, gamma_invariant, idempotent_filtration_bound,
    minimal_polynomial, quantum_filtration, reduce_idempotents_mod_p, GradedAlgebra, IdempotentChecks,
    IdempotentSet, DEFAULT_ORDER,
};
use novp_core::{Error, NovikovSeries};

use crate::error::{CliError, CliResult};
use crate::harness::{self, DEFAULT_SEED};
use crate::schema::{self, barcode_to_json, chain_to_json, complex_to_json, rationals_to_json, Reducible};
use crate::text::parse_rational;

pub const RANK_CAP_ENV: &str = "NOVP_RANK_CAP";

#[derive(Parser, Debug)]
#[command(name = "novp", version, about = "Exact barcodes, Tate spectra and idempotents over Novikov fields")]
pub struct Cli {
    /// Largest rank a tensor power may reach. Overrides NOVP_RANK_CAP.
    #[arg(long, global = true)]
    pub rank_cap: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct PK {
    #[arg(long)]
    pub p: u64,
    #[arg(long = "K")]
    pub k: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Barcode, counts and spectrum statistics of a complex.
    Barcode { input: PathBuf },
    /// Singular value decomposition of a complex, re-verified.
    Svd { input: PathBuf },
    /// Bottleneck distance between two barcodes (or complexes).
    Bottleneck {
        first: PathBuf,
        second: PathBuf,
        /// Minimize over a common shift of one barcode.
        #[arg(long)]
        shift: bool,
    },
    /// p·β_tot(C) against β_tot(C^⊗p), with all intermediate spectra.
    Smith {
        #[arg(required_unless_present = "complex")]
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "input")]
        complex: Option<PathBuf>,
        #[command(flatten)]
        pk: PK,
    },
    /// Tate spectrum for the trivial action, or the cyclic action on C^⊗p.
    Tate {
        input: PathBuf,
        #[command(flatten)]
        pk: PK,
        #[arg(long)]
        cyclic: bool,
    },
    /// Reduction mod p of a complex, a series or a polynomial.
    Reduce {
        input: PathBuf,
        #[arg(long)]
        p: u64,
    },
    /// Idempotents of an algebra, their checks, δ, and reductions mod p.
    Idem {
        input: PathBuf,
        #[arg(long)]
        order: Option<String>,
        /// Primes to reduce at; repeatable.
        #[arg(long)]
        p: Vec<u64>,
    },
    /// c(α) = −inf c*(β) for every surviving SVD class.
    Duality { input: PathBuf },
    /// γ of each idempotent on a labeled complex; optionally bar stability
    /// against a second labeled complex.
    Gamma {
        input: PathBuf,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        compare: Option<PathBuf>,
        #[arg(long)]
        uniform_bound: Option<String>,
    },
    /// Worked examples and randomized property suites.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    value: Value,
    /// The math check that ran failed.
    failed: bool,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, failed: false }
    }
}

/// JSON with sorted keys (`serde_json`'s default map is ordered), one line.
pub fn canonical(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

pub fn run<I, T>(args: I, env_rank_cap: Option<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            return match e.kind() {
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand => Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => failure(CliError::Usage(e.to_string().trim().to_string())),
            };
        }
    };
    let output = cli.output.clone();
    match rank_cap(cli.rank_cap, env_rank_cap).and_then(|cap| dispatch(cli.command, cap)) {
        Ok(r) => {
            let text = canonical(&r.value);
            let code = if r.failed { 2 } else { 0 };
            match output {
                Some(path) => match std::fs::write(&path, &text) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => failure(CliError::Io { path: path.display().to_string(), message: e.to_string() }),
                },
                None => Outcome { code, stdout: text, stderr: String::new() },
            }
        }
        Err(e) => failure(e),
    }
}

fn failure(e: CliError) -> Outcome {
    Outcome {
        code: 1,
        stdout: canonical(&e.to_json()),
        stderr: format!("error: {e}\n"),
    }
}

fn rank_cap(flag: Option<usize>, env: Option<String>) -> CliResult<usize> {
    let cap = match (flag, env) {
        (Some(c), _) => c,
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{RANK_CAP_ENV}={v:?} is not a positive integer")))?,
        (None, None) => DEFAULT_RANK_CAP,
    };
    if cap == 0 {
        return Err(CliError::Usage("rank cap must be positive".into()));
    }
    Ok(cap)
}

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn in_file<T>(path: &PathBuf, f: impl FnOnce(&str) -> CliResult<T>) -> CliResult<T> {
    let text = read(path)?;
    f(&text).map_err(|e| e.within(&path.display().to_string()))
}

fn rational_flag(name: &str, v: &Option<String>, default: i64) -> CliResult<BigRational> {
    match v {
        Some(s) => parse_rational(s).map_err(|m| CliError::parse(format!("--{name}"), m)),
        None => Ok(BigRational::from_integer(default.into())),
    }
}

fn dispatch(cmd: Command, cap: usize) -> CliResult<Report> {
    match cmd {
        Command::Barcode { input } => barcode_cmd(&in_file(&input, schema::read_complex)?),
        Command::Svd { input } => svd_cmd(&in_file(&input, schema::read_complex)?),
        Command::Bottleneck { first, second, shift } => {
            let a = in_file(&first, schema::read_barcode_or_complex)?;
            let b = in_file(&second, schema::read_barcode_or_complex)?;
            let d = if shift { bottleneck_mod_shift(&a, &b) } else { bottleneck(&a, &b) };
            Ok(Report::ok(json!({
                "schema": 1,
                "shift": shift,
                "distance": d.map(|x| x.to_string()),
            })))
        }
        Command::Smith { input, complex, pk } => {
            let path = input.or(complex).expect("clap requires one input");
            smith_cmd(&in_file(&path, schema::read_complex)?, pk.p, pk.k, cap)
        }
        Command::Tate { input, pk, cyclic } => tate_cmd(&in_file(&input, schema::read_complex)?, pk.p, pk.k, cyclic, cap),
        Command::Reduce { input, p } => reduce_cmd(in_file(&input, schema::read_reducible)?, p),
        Command::Idem { input, order, p } => {
            let (a, g) = in_file(&input, schema::read_algebra)?;
            idem_cmd(&a, g, &rational_flag("order", &order, DEFAULT_ORDER)?, &p)
        }
        Command::Duality { input } => duality_cmd(&in_file(&input, schema::read_complex)?),
        Command::Gamma { input, algebra, order, compare, uniform_bound } => {
            let (a, g) = in_file(&algebra, schema::read_algebra)?;
            let unit = a.basis()[a.unit_index()].0.clone();
            let l1 = in_file(&input, |t| schema::read_labeled(t, &unit))?;
            let l2 = match &compare {
                Some(p) => Some(in_file(p, |t| schema::read_labeled(t, &unit))?),
                None => None,
            };
            let bound = match &uniform_bound {
                Some(_) => Some(rational_flag("uniform-bound", &uniform_bound, 0)?),
                None => None,
            };
            gamma_cmd(&a, g, &l1, l2.as_ref(), &rational_flag("order", &order, DEFAULT_ORDER)?, bound.as_ref())
        }
        Command::Selftest { seed, suite, trials, parallel } => {
            let r = harness::selftest(seed, suite.as_deref(), trials, parallel).map_err(CliError::Usage)?;
            Ok(Report { failed: !r.ok(), value: r.to_json() })
        }
    }
}

fn barcode_cmd(c: &FilteredComplex) -> CliResult<Report> {
    let r = barcode_of(c)?;
    Ok(Report::ok(json!({
        "schema": 1,
        "N": r.n,
        "B": r.b,
        "K": r.k,
        "bars": barcode_to_json(&r.barcode),
        "beta_total": r.beta_total.to_string(),
        "boundary_depth": r.boundary_depth.to_string(),
    })))
}

fn names(c: &FilteredComplex) -> Vec<String> {
    c.generators().iter().map(|g| g.name.clone()).collect()
}

fn svd_cmd(c: &FilteredComplex) -> CliResult<Report> {
    let s = svd(c)?;
    let names = names(c);
    let mut xi: Vec<(BigRational, String, Value)> = s
        .xi
        .iter()
        .zip(&s.xi_levels)
        .map(|(v, l)| {
            let chain = chain_to_json(&names, v);
            (l.clone(), chain.to_string(), json!({ "level": l.to_string(), "chain": chain }))
        })
        .collect();
    xi.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let mut pairs: Vec<(BigRational, String, Value)> = (0..s.k())
        .map(|k| {
            let zeta = chain_to_json(&names, &s.zeta[k]);
            let len = s.bar_lengths[k].clone();
            let v = json!({
                "length": len.to_string(),
                "zeta_level": s.zeta_levels[k].to_string(),
                "zeta": zeta,
                "eta": chain_to_json(&names, &s.eta[k]),
            });
            (len, zeta.to_string(), v)
        })
        .collect();
    pairs.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let verified = s.verify(c);
    let mut value = json!({
        "schema": 1,
        "N": c.rank(),
        "B": s.b(),
        "K": s.k(),
        "xi": xi.into_iter().map(|t| t.2).collect::<Vec<_>>(),
        "pairs": pairs.into_iter().map(|t| t.2).collect::<Vec<_>>(),
        "null_pairs": s.null_zeta.len(),
        "verified": verified.is_ok(),
    });
    if let Err(m) = &verified {
        value["verification_error"] = json!(m);
    }
    Ok(Report { failed: verified.is_err(), value })
}

fn smith_cmd(c: &FilteredComplex, p: u64, k: usize, cap: usize) -> CliResult<Report> {
    let r = smith_check(c, p, k, cap)?;
    let opt = |v: &Option<Vec<BigRational>>| v.as_ref().map(|x| rationals_to_json(x)).unwrap_or(Value::Null);
    Ok(Report {
        failed: !r.pass,
        value: json!({
            "schema": 1,
            "p": r.p,
            "K": r.k,
            "pass": r.pass,
            "spectrum": rationals_to_json(&r.spectrum),
            "beta_total": r.beta_total.to_string(),
            "lhs": r.lhs.to_string(),
            "target_spectrum": rationals_to_json(&r.target_spectrum),
            "rhs": r.rhs.to_string(),
            "doubled": rationals_to_json(&r.doubled),
            "rescaled": rationals_to_json(&r.rescaled),
            "cyclic_tate": opt(&r.cyclic_tate),
            "cyclic_tate_total": r.cyclic_tate_total.as_ref().map(|x| x.to_string()),
            "doubled_bound": r.doubled_bound,
            "target_bound": r.target_bound,
            "notes": r.notes,
        }),
    })
}

fn tate_cmd(c: &FilteredComplex, p: u64, k: usize, cyclic: bool, cap: usize) -> CliResult<Report> {
    let (base, act) = if cyclic {
        let p32 = u32::try_from(p).map_err(|_| CliError::Usage(format!("p = {p} is too large")))?;
        tensor_power(c, p32, cap)?
    } else {
        (c.clone(), CyclicAction::identity(p, c.rank(), c.field()))
    };
    let t = tate_spectrum(&base, &act, k, true)?;
    Ok(Report::ok(json!({
        "schema": 1,
        "p": p,
        "K": t.k,
        "action": if cyclic { "cyclic" } else { "trivial" },
        "base_rank": base.rank(),
        "spectrum_K": rationals_to_json(&t.full_k),
        "spectrum_K1": rationals_to_json(&t.full_k1),
        "per_u_degree": t.per_u_degree.as_ref().map(|v| rationals_to_json(v)),
        "stabilized": t.stabilized,
    })))
}

fn reduce_cmd(input: Reducible, p: u64) -> CliResult<Report> {
    let value = match input {
        Reducible::Complex(c) => {
            let mut v = complex_to_json(&c.reduce_mod_p(p)?);
            v["p"] = json!(p);
            v
        }
        Reducible::Series(s) => {
            let r = s.reduce_mod_p(p)?;
            json!({ "schema": 1, "p": p, "field": r.field().tag(), "series": r.to_string() })
        }
        Reducible::Poly(f) => {
            let r = f.reduce_mod_p(p)?;
            json!({ "schema": 1, "p": p, "field": r.field().tag(), "poly": r.to_string() })
        }
    };
    Ok(Report::ok(value))
}

/// The supplied generator, else the first basis element, then the first
/// small combination `Σ (i+1)^k b_i`, whose minimal polynomial has full
/// degree.
fn choose_generator(a: &GradedAlgebra, given: Option<Vec<NovikovSeries>>) -> CliResult<Vec<NovikovSeries>> {
    if let Some(g) = given {
        return Ok(g);
    }
    let field = a.field();
    let mut candidates: Vec<Vec<NovikovSeries>> =
        (0..a.rank()).filter(|&i| i != a.unit_index()).map(|i| a.basis_vector(i)).collect();
    for k in 1..=3u32 {
        candidates.push((0..a.rank()).map(|i| NovikovSeries::from_i64((i as i64 + 1).pow(k), field)).collect());
    }
    for g in candidates {
        if let Ok(f) = minimal_polynomial(a, &g) {
            if f.degree() == Some(a.rank()) {
                return Ok(g);
            }
        }
    }
    Err(Error::NotPrimitive { degree: 0, rank: a.rank() }.into())
}

fn basis_names(a: &GradedAlgebra) -> Vec<String> {
    a.basis().iter().map(|(n, _)| n.clone()).collect()
}

fn checks_json(c: &IdempotentChecks) -> Value {
    json!({
        "squares": c.squares,
        "orthogonal": c.orthogonal,
        "sum_to_unit": c.sum_to_unit,
        "exact": c.exact,
    })
}

fn filtrations_json(v: &[Vec<NovikovSeries>]) -> Value {
    Value::Array(
        v.iter()
            .map(|e| quantum_filtration(e).map(|l| Value::String(l.to_string())).unwrap_or(Value::Null))
            .collect(),
    )
}

fn elements_json(names: &[String], es: &[Vec<NovikovSeries>]) -> (Vec<Value>, Vec<usize>) {
    // canonical order: by serialized coordinates
    let mut order: Vec<usize> = (0..es.len()).collect();
    let keys: Vec<String> = es.iter().map(|e| chain_to_json(names, e).to_string()).collect();
    order.sort_by(|&i, &j| keys[i].cmp(&keys[j]));
    (order.iter().map(|&i| chain_to_json(names, &es[i])).collect(), order)
}

fn idempotents(a: &GradedAlgebra, g: Option<Vec<NovikovSeries>>, order: &BigRational) -> CliResult<IdempotentSet> {
    let g = choose_generator(a, g)?;
    Ok(find_idempotents(a, &g, order)?)
}

fn idem_cmd(a: &GradedAlgebra, g: Option<Vec<NovikovSeries>>, order: &BigRational, primes: &[u64]) -> CliResult<Report> {
    let e = idempotents(a, g, order)?;
    let names = basis_names(a);
    let checks = check_idempotents(a, &e.elements)?;
    let delta = idempotent_filtration_bound(a, &e)?;
    let (elements, perm) = elements_json(&names, &e.elements);
    let sorted: Vec<Vec<NovikovSeries>> = perm.iter().map(|&i| e.elements[i].clone()).collect();
    let cert = e.certificate.as_ref().expect("find_idempotents attaches a certificate");
    let mut failed = !checks.all();
    let mut reductions = serde_json::Map::new();
    for &p in primes {
        let r = reduce_idempotents_mod_p(a, &e, p)?;
        let reduced: Vec<Vec<NovikovSeries>> = perm.iter().map(|&i| r.elements[i].clone()).collect();
        let within = r.filtrations.iter().all(|l| l.as_ref().is_none_or(|l| l <= delta.value()));
        failed |= !r.checks.all() || !within;
        reductions.insert(
            p.to_string(),
            json!({
                "idempotents": elements_json(&names, &reduced).0,
                "checks": checks_json(&r.checks),
                "filtrations": filtrations_json(&reduced),
                "within_delta": within,
            }),
        );
    }
    let factors: Vec<Value> = cert
        .factors
        .iter()
        .map(|f| json!({ "poly": f.poly.to_string(), "irreducible": f.irreducible }))
        .collect();
    Ok(Report {
        failed,
        value: json!({
            "schema": 1,
            "generator": chain_to_json(&names, &cert.generator),
            "minimal_polynomial": cert.minimal_polynomial.to_string(),
            "factors": factors,
            "partial": e.partial,
            "idempotents": elements,
            "checks": checks_json(&checks),
            "filtrations": filtrations_json(&sorted),
            "delta": { "certificate": delta.certificate.to_string(), "direct": delta.direct.to_string() },
            "reductions": reductions,
        }),
    })
}

fn duality_cmd(c: &FilteredComplex) -> CliResult<Report> {
    let s = svd(c)?;
    let names = names(c);
    let mut classes = Vec::new();
    let mut skipped = 0;
    let mut all = true;
    for xi in &s.xi {
        if !xi.iter().all(NovikovSeries::is_exact) {
            skipped += 1;
            continue;
        }
        let r = duality_check(c, xi)?;
        all &= r.equal;
        classes.push((
            chain_to_json(&names, xi).to_string(),
            json!({
                "chain": chain_to_json(&names, xi),
                "spectral_invariant": r.lhs.to_string(),
                "dual_bound": r.rhs.to_string(),
                "equal": r.equal,
            }),
        ));
    }
    classes.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Report {
        failed: !all,
        value: json!({
            "schema": 1,
            "classes": classes.into_iter().map(|c| c.1).collect::<Vec<_>>(),
            "inexact_classes_skipped": skipped,
            "pass": all,
        }),
    })
}

fn gamma_cmd(
    a: &GradedAlgebra,
    g: Option<Vec<NovikovSeries>>,
    l1: &novp_core::qalg::LabeledComplex,
    l2: Option<&novp_core::qalg::LabeledComplex>,
    order: &BigRational,
    uniform_bound: Option<&BigRational>,
) -> CliResult<Report> {
    let e = idempotents(a, g, order)?;
    let delta = idempotent_filtration_bound(a, &e)?;
    let names = basis_names(a);
    let (elements, perm) = elements_json(&names, &e.elements);
    let per: Vec<Value> = perm
        .iter()
        .zip(elements)
        .map(|(&i, el)| {
            gamma_invariant(l1, a, &e.elements[i]).map(|g| json!({ "idempotent": el, "gamma": g.to_string() }))
        })
        .collect::<Result<_, _>>()?;
    let ge = gamma_e(l1, a, &e.elements)?;
    let mut value = json!({
        "schema": 1,
        "gammas": per,
        "gamma_e": ge.to_string(),
        "delta": delta.value().to_string(),
    });
    let mut failed = false;
    if let Some(l2) = l2 {
        let r = bar_stability_check(l1, l2, a, &e.elements, delta.value(), uniform_bound)?;
        failed = !r.within_gamma_bound || r.within_uniform_bound == Some(false);
        value["stability"] = json!({
            "bars1": r.bars1.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "bars2": r.bars2.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "gaps": r.gaps.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "max_gap": r.max_gap.to_string(),
            "gamma1": r.gamma1.to_string(),
            "gamma2": r.gamma2.to_string(),
            "gamma_bound": r.gamma_bound.to_string(),
            "within_gamma_bound": r.within_gamma_bound,
            "action_shift": r.action_shift.to_string(),
            "within_shift_bound": r.within_shift_bound,
            "uniform_bound": r.uniform_bound.as_ref().map(ToString::to_string),
            "within_uniform_bound": r.within_uniform_bound,
        });
    }
    Ok(Report { failed, value })
}
