//! JSON file formats, version 1.
//!
//! Complex: `{"schema": 1, "field": "Q" | "Z" | "Fp:<p>", "generators":
//! [{"name", "degree", "action"}], "differential": [{"from", "to", "coeff"}]}`
//! with an optional `"grading": "Z" | "Z2"`. Barcode: `{"finite": [[a, b,
//! mult]], "infinite": [[a, mult]]}`. Algebra: `{"field", "basis": [{"name",
//! "degree"}], "unit", "table": [{"i", "j", "value": [{"basis", "coeff"}]}]}`
//! with an optional `"generator"` in the same shape as `"value"`. A labeled
//! complex is a complex file plus `"labels": {"<basis name>": {"chain":
//! [{"generator", "coeff"}]}}` and an optional `"unit"`.
//!
//! Rationals are strings such as `"-3/2"`; plain integers are accepted too.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

use novp_core::barcode::Barcode;
use novp_core::filtered::{FilteredComplex, Generator, Grading};
use novp_core::polyext::NovikovPoly;
use novp_core::qalg::{GradedAlgebra, LabeledComplex};
use novp_core::{CoefficientField, NovikovSeries};

use crate::error::{CliError, CliResult};
use crate::text::{parse_field, parse_poly, parse_rational, parse_series};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn text(&self) -> String {
        match self {
            Num::Int(n) => n.to_string(),
            Num::Text(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    pub degree: i64,
    pub action: Num,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialEntry {
    pub from: String,
    pub to: String,
    pub coeff: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ComplexFile {
    #[serde(default)]
    pub schema: Option<u64>,
    pub field: String,
    #[serde(default)]
    pub grading: Option<String>,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub differential: Vec<DifferentialEntry>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarcodeFile {
    #[serde(default)]
    pub schema: Option<u64>,
    #[serde(default)]
    pub finite: Vec<(Num, Num, usize)>,
    #[serde(default)]
    pub infinite: Vec<(Num, usize)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coordinate {
    pub basis: String,
    pub coeff: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub i: String,
    pub j: String,
    pub value: Vec<Coordinate>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    #[serde(default)]
    pub schema: Option<u64>,
    pub field: String,
    pub basis: Vec<BasisEntry>,
    pub unit: String,
    #[serde(default)]
    pub table: Vec<TableEntry>,
    #[serde(default)]
    pub generator: Option<Vec<Coordinate>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainTerm {
    pub generator: String,
    pub coeff: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Label {
    pub chain: Vec<ChainTerm>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct LabeledFile {
    #[serde(flatten)]
    pub complex: ComplexFile,
    pub labels: BTreeMap<String, Label>,
    #[serde(default)]
    pub unit: Option<String>,
}

/// Raw file text, kept to report line numbers for field-level errors.
pub struct Source<'a> {
    pub text: &'a str,
}

impl Source<'_> {
    /// `line N, <path>` where `N` is the first line containing `value` as a
    /// JSON string.
    fn at(&self, path: &str, value: &str) -> String {
        let needle = serde_json::to_string(value).unwrap_or_default();
        match self.text.find(&needle) {
            Some(pos) => format!("line {}, {path}", self.text[..pos].matches('\n').count() + 1),
            None => path.to_string(),
        }
    }

    fn series(&self, field: CoefficientField, path: &str, s: &str) -> CliResult<NovikovSeries> {
        parse_series(field, s).map_err(|m| CliError::parse(self.at(path, s), m))
    }

    fn rational(&self, path: &str, n: &Num) -> CliResult<BigRational> {
        parse_rational(&n.text()).map_err(|m| CliError::parse(self.at(path, &n.text()), m))
    }

    fn field(&self, s: &str) -> CliResult<CoefficientField> {
        parse_field(s).map_err(|m| CliError::parse(self.at("field", s), m))
    }
}

/// Deserializes `T`, reporting serde's line and column on failure.
pub fn from_text<T: for<'de> Deserialize<'de>>(text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| {
        CliError::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })
}

fn check_schema(schema: Option<u64>) -> CliResult<()> {
    match schema {
        None | Some(SCHEMA_VERSION) => Ok(()),
        Some(v) => Err(CliError::parse("schema", format!("unsupported schema version {v}"))),
    }
}

fn grading(g: Option<&str>) -> CliResult<Grading> {
    match g {
        None | Some("Z") => Ok(Grading::Z),
        Some("Z2") => Ok(Grading::Z2),
        Some(other) => Err(CliError::parse("grading", format!("unknown grading {other:?}"))),
    }
}

fn index_map<'a>(names: impl Iterator<Item = &'a str>, what: &str) -> CliResult<BTreeMap<String, usize>> {
    let mut map = BTreeMap::new();
    for (i, n) in names.enumerate() {
        if map.insert(n.to_string(), i).is_some() {
            return Err(CliError::parse(format!("{what}[{i}].name"), format!("duplicate name {n:?}")));
        }
    }
    Ok(map)
}

fn lookup(map: &BTreeMap<String, usize>, name: &str, path: &str, src: &Source) -> CliResult<usize> {
    map.get(name)
        .copied()
        .ok_or_else(|| CliError::parse(src.at(path, name), format!("unknown name {name:?}")))
}

pub fn complex_from_file(f: &ComplexFile, src: &Source) -> CliResult<FilteredComplex> {
    check_schema(f.schema)?;
    let field = src.field(&f.field)?;
    let grading = grading(f.grading.as_deref())?;
    let names = index_map(f.generators.iter().map(|g| g.name.as_str()), "generators")?;
    let mut gens = Vec::with_capacity(f.generators.len());
    for (i, g) in f.generators.iter().enumerate() {
        let action = src.rational(&format!("generators[{i}].action"), &g.action)?;
        gens.push(Generator::new(g.name.clone(), g.degree, action));
    }
    let mut entries = Vec::with_capacity(f.differential.len());
    for (k, e) in f.differential.iter().enumerate() {
        let from = lookup(&names, &e.from, &format!("differential[{k}].from"), src)?;
        let to = lookup(&names, &e.to, &format!("differential[{k}].to"), src)?;
        let coeff = src.series(field, &format!("differential[{k}].coeff"), &e.coeff)?;
        entries.push((from, to, coeff));
    }
    Ok(FilteredComplex::new(field, grading, gens, entries)?)
}

pub fn read_complex(text: &str) -> CliResult<FilteredComplex> {
    complex_from_file(&from_text(text)?, &Source { text })
}

pub fn complex_to_json(c: &FilteredComplex) -> Value {
    let gens: Vec<Value> = c
        .generators()
        .iter()
        .map(|g| json!({ "name": g.name, "degree": g.degree, "action": g.action.to_string() }))
        .collect();
    let mut entries: Vec<(usize, usize, &NovikovSeries)> = c.entries().collect();
    entries.sort_by_key(|(from, to, _)| (*from, *to));
    let diff: Vec<Value> = entries
        .into_iter()
        .map(|(from, to, s)| {
            json!({
                "from": c.generators()[from].name,
                "to": c.generators()[to].name,
                "coeff": s.to_string(),
            })
        })
        .collect();
    let mut v = json!({
        "schema": SCHEMA_VERSION,
        "field": c.field().tag(),
        "generators": gens,
        "differential": diff,
    });
    if c.grading() == Grading::Z2 {
        v["grading"] = json!("Z2");
    }
    v
}

pub fn barcode_from_file(f: &BarcodeFile, src: &Source) -> CliResult<Barcode> {
    check_schema(f.schema)?;
    let mut b = Barcode::new();
    for (k, (a, e, m)) in f.finite.iter().enumerate() {
        let a = src.rational(&format!("finite[{k}][0]"), a)?;
        let e = src.rational(&format!("finite[{k}][1]"), e)?;
        if e <= a {
            return Err(CliError::parse(format!("finite[{k}]"), format!("bar [{a}, {e}) is empty")));
        }
        b.add_finite(a, e, *m);
    }
    for (k, (a, m)) in f.infinite.iter().enumerate() {
        b.add_infinite(src.rational(&format!("infinite[{k}][0]"), a)?, *m);
    }
    Ok(b)
}

/// Finite bars by ascending length, then start; infinite bars by start.
pub fn barcode_to_json(b: &Barcode) -> Value {
    let mut finite: Vec<(&(BigRational, BigRational), &usize)> = b.finite().iter().collect();
    finite.sort_by(|((a1, b1), _), ((a2, b2), _)| (b1 - a1).cmp(&(b2 - a2)).then(a1.cmp(a2)).then(b1.cmp(b2)));
    let finite: Vec<Value> = finite
        .into_iter()
        .map(|((a, e), m)| json!([a.to_string(), e.to_string(), m]))
        .collect();
    let infinite: Vec<Value> = b.infinite().iter().map(|(a, m)| json!([a.to_string(), m])).collect();
    json!({ "finite": finite, "infinite": infinite })
}

pub fn rationals_to_json(v: &[BigRational]) -> Value {
    let mut v = v.to_vec();
    v.sort();
    Value::Array(v.iter().map(|q| Value::String(q.to_string())).collect())
}

/// A chain as `{"<generator>": "<series>"}`, zero coordinates omitted.
pub fn chain_to_json(names: &[String], chain: &[NovikovSeries]) -> Value {
    let map: serde_json::Map<String, Value> = names
        .iter()
        .zip(chain)
        .filter(|(_, s)| !s.is_exact_zero())
        .map(|(n, s)| (n.clone(), Value::String(s.to_string())))
        .collect();
    Value::Object(map)
}

fn coordinates(
    field: CoefficientField,
    basis: &BTreeMap<String, usize>,
    coords: &[Coordinate],
    path: &str,
    src: &Source,
) -> CliResult<Vec<NovikovSeries>> {
    let mut v = vec![NovikovSeries::zero(field); basis.len()];
    let mut seen = BTreeSet::new();
    for (k, c) in coords.iter().enumerate() {
        let i = lookup(basis, &c.basis, &format!("{path}[{k}].basis"), src)?;
        if !seen.insert(i) {
            return Err(CliError::parse(src.at(&format!("{path}[{k}].basis"), &c.basis), "repeated basis element"));
        }
        v[i] = src.series(field, &format!("{path}[{k}].coeff"), &c.coeff)?;
    }
    Ok(v)
}

/// The algebra and the optional generator from the file.
pub fn algebra_from_file(f: &AlgebraFile, src: &Source) -> CliResult<(GradedAlgebra, Option<Vec<NovikovSeries>>)> {
    check_schema(f.schema)?;
    let field = src.field(&f.field)?;
    let names = index_map(f.basis.iter().map(|b| b.name.as_str()), "basis")?;
    let unit = lookup(&names, &f.unit, "unit", src)?;
    let mut entries = Vec::new();
    for (k, t) in f.table.iter().enumerate() {
        let i = lookup(&names, &t.i, &format!("table[{k}].i"), src)?;
        let j = lookup(&names, &t.j, &format!("table[{k}].j"), src)?;
        entries.push((i, j, coordinates(field, &names, &t.value, &format!("table[{k}].value"), src)?));
    }
    let basis = f.basis.iter().map(|b| (b.name.clone(), b.degree)).collect();
    let algebra = GradedAlgebra::new(field, basis, unit, entries)?;
    let generator = match &f.generator {
        Some(g) => Some(coordinates(field, &names, g, "generator", src)?),
        None => None,
    };
    Ok((algebra, generator))
}

pub fn read_algebra(text: &str) -> CliResult<(GradedAlgebra, Option<Vec<NovikovSeries>>)> {
    algebra_from_file(&from_text(text)?, &Source { text })
}

/// Labeled complex; the unit label defaults to the algebra's unit name.
pub fn labeled_from_file(f: &LabeledFile, src: &Source, default_unit: &str) -> CliResult<LabeledComplex> {
    let complex = complex_from_file(&f.complex, src)?;
    let field = complex.field();
    let names = index_map(complex.generators().iter().map(|g| g.name.as_str()), "generators")?;
    let mut labels = BTreeMap::new();
    for (label, entry) in &f.labels {
        let mut chain = complex.zero_chain();
        for (k, t) in entry.chain.iter().enumerate() {
            let path = format!("labels.{label}.chain[{k}]");
            let i = lookup(&names, &t.generator, &format!("{path}.generator"), src)?;
            chain[i] = &chain[i] + &src.series(field, &format!("{path}.coeff"), &t.coeff)?;
        }
        labels.insert(label.clone(), chain);
    }
    let unit = f.unit.as_deref().unwrap_or(default_unit);
    Ok(LabeledComplex::new(complex, labels, unit)?)
}

pub fn read_labeled(text: &str, default_unit: &str) -> CliResult<LabeledComplex> {
    labeled_from_file(&from_text(text)?, &Source { text }, default_unit)
}

/// What a `reduce` input holds.
pub enum Reducible {
    Complex(FilteredComplex),
    Series(NovikovSeries),
    Poly(NovikovPoly),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesFile {
    #[serde(default)]
    schema: Option<u64>,
    field: String,
    #[serde(default)]
    series: Option<String>,
    #[serde(default)]
    poly: Option<String>,
}

pub fn read_reducible(text: &str) -> CliResult<Reducible> {
    let v: Value = from_text(text)?;
    if v.get("generators").is_some() {
        return Ok(Reducible::Complex(read_complex(text)?));
    }
    let f: SeriesFile = from_text(text)?;
    check_schema(f.schema)?;
    let src = Source { text };
    let field = src.field(&f.field)?;
    match (f.series, f.poly) {
        (Some(s), None) => Ok(Reducible::Series(src.series(field, "series", &s)?)),
        (None, Some(p)) => Ok(Reducible::Poly(
            parse_poly(field, &p).map_err(|m| CliError::parse(src.at("poly", &p), m))?,
        )),
        _ => Err(CliError::parse("", "expected a complex, or exactly one of \"series\" and \"poly\"")),
    }
}

/// A barcode file, or a complex whose barcode is taken.
pub fn read_barcode_or_complex(text: &str) -> CliResult<Barcode> {
    let v: Value = from_text(text)?;
    if v.get("generators").is_some() {
        let c = read_complex(text)?;
        return Ok(novp_core::filtered::barcode_of(&c)?.barcode);
    }
    barcode_from_file(&from_text(text)?, &Source { text })
}
