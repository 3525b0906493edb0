//! Text forms of rationals, fields, series and polynomials.
//!
//! A series is a `+`-joined list of `<coeff>*T^<exp>` terms with an optional
//! `| O(T^<r>)` suffix, e.g. `1/2*T^0 + -1/4*T^1 | O(T^3)`. A bare `<coeff>`
//! means exponent 0 and a bare `T^<exp>` means coefficient 1. Polynomials
//! read `poly x: [c0; c1; ...; cd]` with series coefficients.
//!
//! Parsers return plain messages; callers attach the location.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use novp_core::polyext::NovikovPoly;
use novp_core::{CoefficientField, NovikovSeries};

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| format!("bad rational {s:?}"))?;
    let d: BigInt = den.parse().map_err(|_| format!("bad rational {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(n, d))
}

pub fn parse_field(s: &str) -> Result<CoefficientField, String> {
    match s.trim() {
        "Q" => Ok(CoefficientField::Rationals),
        "Z" => Ok(CoefficientField::Integers),
        other => {
            let p = other
                .strip_prefix("Fp:")
                .and_then(|p| p.trim().parse::<u64>().ok())
                .ok_or_else(|| format!("unknown field {other:?}, expected Q, Z or Fp:<prime>"))?;
            CoefficientField::prime_field(p).map_err(|e| e.to_string())
        }
    }
}

pub fn parse_series(field: CoefficientField, s: &str) -> Result<NovikovSeries, String> {
    let (body, tail) = match s.split_once('|') {
        Some((b, t)) => (b, Some(t.trim())),
        None => (s, None),
    };
    let truncation = match tail {
        Some(t) => {
            let inner = t
                .strip_prefix("O(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| format!("bad truncation {t:?}, expected O(T^<r>)"))?;
            Some(parse_power(inner.trim())?)
        }
        None => None,
    };
    let body = body.trim();
    let mut terms = Vec::new();
    if body != "0" && !body.is_empty() {
        for term in body.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(format!("empty term in {s:?}"));
            }
            let (coeff, exp) = parse_term(term)?;
            let c = field.from_rational(&coeff).map_err(|e| format!("{term:?}: {e}"))?;
            terms.push((exp, c));
        }
    } else if tail.is_none() && body.is_empty() {
        return Err("empty series".into());
    }
    NovikovSeries::new(field, terms, truncation).map_err(|e| e.to_string())
}

fn parse_term(term: &str) -> Result<(BigRational, BigRational), String> {
    if let Some((c, t)) = term.split_once('*') {
        return Ok((parse_rational(c)?, parse_power(t.trim())?));
    }
    let (sign, rest) = match term.strip_prefix('-') {
        Some(r) => (-1, r.trim()),
        None => (1, term),
    };
    if rest.starts_with('T') {
        return Ok((BigRational::from_integer(sign.into()), parse_power(rest)?));
    }
    Ok((parse_rational(term)?, BigRational::zero()))
}

fn parse_power(s: &str) -> Result<BigRational, String> {
    match s.strip_prefix('T') {
        Some("") => Ok(BigRational::from_integer(1.into())),
        Some(r) => match r.trim().strip_prefix('^') {
            Some(e) => parse_rational(e),
            None => Err(format!("bad power {s:?}, expected T^<exp>")),
        },
        None => Err(format!("bad power {s:?}, expected T^<exp>")),
    }
}

pub fn parse_poly(field: CoefficientField, s: &str) -> Result<NovikovPoly, String> {
    let rest = s
        .trim()
        .strip_prefix("poly")
        .ok_or_else(|| format!("polynomial must start with \"poly\": {s:?}"))?;
    let (var, list) = rest.split_once(':').ok_or("missing ':' after the variable name")?;
    if var.trim().is_empty() || !var.trim().chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(format!("bad variable name {:?}", var.trim()));
    }
    let inner = list
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or("coefficients must be enclosed in [ ]")?;
    let coeffs = inner
        .split(';')
        .enumerate()
        .map(|(i, c)| parse_series(field, c).map_err(|e| format!("coefficient {i}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    NovikovPoly::new(field, coeffs).map_err(|e| e.to_string())
}
