//! JSON model files (schema v1): ingestion with field-level diagnostics,
//! validation, and canonical re-emission.
//!
//! One file describes one scenario: a symbol basis, an optional Lie
//! algebra with named forms and vectors, optional mapping-torus, period,
//! and toric sections, and an ordered list of operation invocations.
//! Rationals serialize as strings `"p/q"` (or `"p"`); symbolic values as
//! objects `{"1": "p/q", "eps1": "p/q", …}`; basis indices are 1-based in
//! files and 0-based in the API.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::exterior::{Form, LieAlgebra, Vector};
use crate::scalar::{format_rational, parse_rational, Rational, SymbolBasis, SymbolicReal};
use crate::topology::{IntMatrix, MappingTorus, PeriodClass};
use crate::toric::MomentModel;

pub const SCHEMA_VERSION: u64 = 1;

/// One operation invocation: `op` plus named arguments, an optional `id`
/// for later steps to reference, an optional `expect` object matched
/// against the result, and a free-text note echoed into the report.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub id: Option<String>,
    pub op: String,
    pub args: BTreeMap<String, Value>,
    pub expect: Option<Value>,
    pub note: Option<String>,
}

/// A fully validated model file.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub label: String,
    pub symbols: SymbolBasis,
    pub lie_algebra: Option<LieAlgebra>,
    pub forms: BTreeMap<String, Form>,
    pub vectors: BTreeMap<String, Vector>,
    pub mapping_torus: Option<MappingTorus>,
    pub periods: BTreeMap<String, PeriodClass>,
    pub toric: Option<MomentModel>,
    pub scenario: Vec<Step>,
}

fn field_err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("{path}: {msg}"))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| field_err(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| field_err(path, "expected an array"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| field_err(path, "expected a string"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| field_err(path, "expected a nonnegative integer"))
}

pub fn parse_rational_field(v: &Value, path: &str) -> Result<Rational> {
    let s = as_str(v, path)?;
    parse_rational(s).map_err(|e| field_err(path, e))
}

/// A symbolic value: either a rational string or an object keyed by `"1"`
/// and symbol names.
pub fn parse_symbolic_field(v: &Value, basis: &SymbolBasis, path: &str) -> Result<SymbolicReal> {
    match v {
        Value::String(s) => {
            let r = parse_rational(s).map_err(|e| field_err(path, e))?;
            Ok(SymbolicReal::from_rational(r))
        }
        Value::Object(map) => {
            let mut out = SymbolicReal::zero();
            for (key, val) in map {
                let slot = basis
                    .slot_of(key)
                    .ok_or_else(|| field_err(path, format!("unknown symbol '{key}'")))?;
                let coeff = parse_rational_field(val, &format!("{path}.{key}"))?;
                out += &SymbolicReal::term(slot, coeff);
            }
            Ok(out)
        }
        _ => Err(field_err(
            path,
            "expected a rational string or a symbol-coefficient object",
        )),
    }
}

/// 1-based comma-separated multi-index, e.g. `"1,3"`.
fn parse_multi_index(key: &str, degree: usize, dim: usize, path: &str) -> Result<Vec<usize>> {
    if degree == 0 && key.is_empty() {
        return Ok(Vec::new());
    }
    let indices: Vec<usize> = key
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .ok()
                .filter(|&i| i >= 1 && i <= dim)
                .ok_or_else(|| field_err(path, format!("bad index '{part}' (1-based, ≤ {dim})")))
        })
        .collect::<Result<_>>()?;
    if indices.len() != degree {
        return Err(field_err(
            path,
            format!(
                "multi-index '{key}' has {} indices, expected {degree}",
                indices.len()
            ),
        ));
    }
    Ok(indices)
}

pub fn parse_form_field(v: &Value, dim: usize, basis: &SymbolBasis, path: &str) -> Result<Form> {
    let obj = as_object(v, path)?;
    let degree = as_usize(
        obj.get("degree")
            .ok_or_else(|| field_err(path, "missing 'degree'"))?,
        &format!("{path}.degree"),
    )?;
    let mut terms = Vec::new();
    if let Some(raw) = obj.get("terms") {
        let map = as_object(raw, &format!("{path}.terms"))?;
        for (key, val) in map {
            let term_path = format!("{path}.terms[\"{key}\"]");
            let idx = parse_multi_index(key, degree, dim, &term_path)?;
            let coeff = parse_symbolic_field(val, basis, &term_path)?;
            // to 0-based
            terms.push((idx.into_iter().map(|i| i - 1).collect::<Vec<_>>(), coeff));
        }
    }
    for key in obj.keys() {
        if key != "degree" && key != "terms" {
            return Err(field_err(path, format!("unknown field '{key}'")));
        }
    }
    Form::from_terms(dim, degree, terms).map_err(|e| field_err(path, e))
}

pub fn parse_vector_field(v: &Value, dim: usize, path: &str) -> Result<Vector> {
    let arr = as_array(v, path)?;
    if arr.len() != dim {
        return Err(field_err(
            path,
            format!("vector has {} entries, expected {dim}", arr.len()),
        ));
    }
    let comps: Vec<Rational> = arr
        .iter()
        .enumerate()
        .map(|(i, x)| parse_rational_field(x, &format!("{path}[{i}]")))
        .collect::<Result<_>>()?;
    Ok(Vector::new(comps))
}

fn parse_lie_algebra(v: &Value, path: &str) -> Result<LieAlgebra> {
    let obj = as_object(v, path)?;
    let dim = as_usize(
        obj.get("dim")
            .ok_or_else(|| field_err(path, "missing 'dim'"))?,
        &format!("{path}.dim"),
    )?;
    let mut brackets = Vec::new();
    if let Some(raw) = obj.get("brackets") {
        for (k, entry) in as_array(raw, &format!("{path}.brackets"))?
            .iter()
            .enumerate()
        {
            let entry_path = format!("{path}.brackets[{k}]");
            let emap = as_object(entry, &entry_path)?;
            let i = as_usize(
                emap.get("i")
                    .ok_or_else(|| field_err(&entry_path, "missing 'i'"))?,
                &format!("{entry_path}.i"),
            )?;
            let j = as_usize(
                emap.get("j")
                    .ok_or_else(|| field_err(&entry_path, "missing 'j'"))?,
                &format!("{entry_path}.j"),
            )?;
            if i < 1 || j < 1 || i > dim || j > dim {
                return Err(field_err(
                    &entry_path,
                    "bracket indices are 1-based and ≤ dim",
                ));
            }
            let cmap = as_object(
                emap.get("c")
                    .ok_or_else(|| field_err(&entry_path, "missing 'c'"))?,
                &format!("{entry_path}.c"),
            )?;
            let mut coeffs = Vec::new();
            for (target, cv) in cmap {
                let t: usize = target
                    .parse()
                    .ok()
                    .filter(|&t| t >= 1 && t <= dim)
                    .ok_or_else(|| {
                        field_err(&entry_path, format!("bad target index '{target}'"))
                    })?;
                coeffs.push((
                    t - 1,
                    parse_rational_field(cv, &format!("{entry_path}.c.{target}"))?,
                ));
            }
            brackets.push((i - 1, j - 1, coeffs));
        }
    }
    LieAlgebra::new(dim, brackets).map_err(|e| field_err(path, e))
}

fn parse_int_matrix(v: &Value, size: usize, path: &str) -> Result<IntMatrix> {
    let rows = as_array(v, path)?;
    if rows.len() != size {
        return Err(field_err(
            path,
            format!("matrix has {} rows, expected {size}", rows.len()),
        ));
    }
    let mut data = Vec::with_capacity(size * size);
    for (i, row) in rows.iter().enumerate() {
        let row = as_array(row, &format!("{path}[{i}]"))?;
        if row.len() != size {
            return Err(field_err(
                path,
                format!("row {i} has {} entries, expected {size}", row.len()),
            ));
        }
        for (j, x) in row.iter().enumerate() {
            let value = x
                .as_i64()
                .ok_or_else(|| field_err(&format!("{path}[{i}][{j}]"), "expected an integer"))?;
            data.push(value.into());
        }
    }
    IntMatrix::new(size, data).map_err(|e| field_err(path, e))
}

fn parse_mapping_torus(v: &Value, path: &str) -> Result<MappingTorus> {
    let obj = as_object(v, path)?;
    let betti_raw = obj
        .get("fiber_betti")
        .ok_or_else(|| field_err(path, "missing 'fiber_betti'"))?;
    let fiber_betti: Vec<usize> = as_array(betti_raw, &format!("{path}.fiber_betti"))?
        .iter()
        .enumerate()
        .map(|(i, x)| as_usize(x, &format!("{path}.fiber_betti[{i}]")))
        .collect::<Result<_>>()?;
    let label = match obj.get("label") {
        Some(l) => as_str(l, &format!("{path}.label"))?.to_string(),
        None => String::new(),
    };
    let mut maps: Vec<IntMatrix> = fiber_betti
        .iter()
        .map(|&b| IntMatrix::identity(b))
        .collect();
    if let Some(raw) = obj.get("maps") {
        let map_obj = as_object(raw, &format!("{path}.maps"))?;
        for (key, mv) in map_obj {
            let degree: usize = key
                .parse()
                .ok()
                .filter(|&d| d < fiber_betti.len())
                .ok_or_else(|| {
                    field_err(&format!("{path}.maps"), format!("bad degree key '{key}'"))
                })?;
            maps[degree] =
                parse_int_matrix(mv, fiber_betti[degree], &format!("{path}.maps.{key}"))?;
        }
    }
    MappingTorus::new(fiber_betti, maps, label).map_err(|e| field_err(path, e))
}

fn parse_toric(v: &Value, basis: &SymbolBasis, path: &str) -> Result<MomentModel> {
    let obj = as_object(v, path)?;
    let n = as_usize(
        obj.get("n").ok_or_else(|| field_err(path, "missing 'n'"))?,
        &format!("{path}.n"),
    )?;
    let mut model = MomentModel::cpn(n).map_err(|e| field_err(path, e))?;
    if let Some(raw) = obj.get("vertices") {
        let verts = as_array(raw, &format!("{path}.vertices"))?
            .iter()
            .enumerate()
            .map(|(i, vv)| {
                as_array(vv, &format!("{path}.vertices[{i}]"))?
                    .iter()
                    .enumerate()
                    .map(|(j, c)| parse_rational_field(c, &format!("{path}.vertices[{i}][{j}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        model = model.with_vertices(verts).map_err(|e| field_err(path, e))?;
    }
    if let Some(raw) = obj.get("eta0_theta") {
        model = model.with_eta0_theta(parse_rational_field(raw, &format!("{path}.eta0_theta"))?);
    }
    if let Some(raw) = obj.get("torus_element") {
        let rotations = as_array(raw, &format!("{path}.torus_element"))?
            .iter()
            .enumerate()
            .map(|(i, x)| parse_symbolic_field(x, basis, &format!("{path}.torus_element[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        model = model
            .with_torus_element(rotations)
            .map_err(|e| field_err(path, e))?;
    }
    Ok(model)
}

const STEP_META_KEYS: [&str; 4] = ["id", "op", "expect", "note"];

fn parse_step(v: &Value, path: &str) -> Result<Step> {
    let obj = as_object(v, path)?;
    let op = as_str(
        obj.get("op")
            .ok_or_else(|| field_err(path, "missing 'op'"))?,
        &format!("{path}.op"),
    )?
    .to_string();
    let id = match obj.get("id") {
        Some(x) => Some(as_str(x, &format!("{path}.id"))?.to_string()),
        None => None,
    };
    let note = match obj.get("note") {
        Some(x) => Some(as_str(x, &format!("{path}.note"))?.to_string()),
        None => None,
    };
    let expect = obj.get("expect").cloned();
    let mut args = BTreeMap::new();
    for (k, val) in obj {
        if !STEP_META_KEYS.contains(&k.as_str()) {
            args.insert(k.clone(), val.clone());
        }
    }
    Ok(Step {
        id,
        op,
        args,
        expect,
        note,
    })
}

/// Parse and validate a model from JSON text.
pub fn parse_model(text: &str) -> Result<ModelFile> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("parse error: {e}")))?;
    let obj = as_object(&root, "$")?;
    let version = obj
        .get("schema_version")
        .ok_or_else(|| field_err("$", "missing 'schema_version'"))?
        .as_u64()
        .ok_or_else(|| field_err("$.schema_version", "expected an integer"))?;
    if version != SCHEMA_VERSION {
        return Err(field_err(
            "$.schema_version",
            format!("unknown schema_version {version}"),
        ));
    }
    let known = [
        "schema_version",
        "label",
        "symbols",
        "lie_algebra",
        "forms",
        "vectors",
        "mapping_torus",
        "periods",
        "toric",
        "scenario",
    ];
    for key in obj.keys() {
        if !known.contains(&key.as_str()) {
            return Err(field_err("$", format!("unknown section '{key}'")));
        }
    }
    let label = match obj.get("label") {
        Some(l) => as_str(l, "$.label")?.to_string(),
        None => String::new(),
    };
    let symbols = match obj.get("symbols") {
        Some(raw) => {
            let names = as_array(raw, "$.symbols")?
                .iter()
                .enumerate()
                .map(|(i, x)| as_str(x, &format!("$.symbols[{i}]")).map(str::to_string))
                .collect::<Result<Vec<_>>>()?;
            SymbolBasis::new(names).map_err(|e| field_err("$.symbols", e))?
        }
        None => SymbolBasis::empty(),
    };
    let lie_algebra = match obj.get("lie_algebra") {
        Some(raw) => Some(parse_lie_algebra(raw, "$.lie_algebra")?),
        None => None,
    };
    let mut forms = BTreeMap::new();
    if let Some(raw) = obj.get("forms") {
        let g = lie_algebra
            .as_ref()
            .ok_or_else(|| field_err("$.forms", "forms need a 'lie_algebra' section"))?;
        for (name, fv) in as_object(raw, "$.forms")? {
            forms.insert(
                name.clone(),
                parse_form_field(fv, g.dim(), &symbols, &format!("$.forms.{name}"))?,
            );
        }
    }
    let mut vectors = BTreeMap::new();
    if let Some(raw) = obj.get("vectors") {
        let g = lie_algebra
            .as_ref()
            .ok_or_else(|| field_err("$.vectors", "vectors need a 'lie_algebra' section"))?;
        for (name, vv) in as_object(raw, "$.vectors")? {
            vectors.insert(
                name.clone(),
                parse_vector_field(vv, g.dim(), &format!("$.vectors.{name}"))?,
            );
        }
    }
    let mapping_torus = match obj.get("mapping_torus") {
        Some(raw) => Some(parse_mapping_torus(raw, "$.mapping_torus")?),
        None => None,
    };
    let mut periods = BTreeMap::new();
    if let Some(raw) = obj.get("periods") {
        for (name, pv) in as_object(raw, "$.periods")? {
            let path = format!("$.periods.{name}");
            let values = as_array(pv, &path)?
                .iter()
                .enumerate()
                .map(|(i, x)| parse_symbolic_field(x, &symbols, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            periods.insert(
                name.clone(),
                PeriodClass::new(values).map_err(|e| field_err(&path, e))?,
            );
        }
    }
    let toric = match obj.get("toric") {
        Some(raw) => Some(parse_toric(raw, &symbols, "$.toric")?),
        None => None,
    };
    let scenario = match obj.get("scenario") {
        Some(raw) => as_array(raw, "$.scenario")?
            .iter()
            .enumerate()
            .map(|(i, sv)| parse_step(sv, &format!("$.scenario[{i}]")))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let model = ModelFile {
        label,
        symbols,
        lie_algebra,
        forms,
        vectors,
        mapping_torus,
        periods,
        toric,
        scenario,
    };
    crate::scenario::validate_model(&model)?;
    Ok(model)
}

/// Load a model file from disk.
pub fn load_model(path: impl AsRef<Path>) -> Result<ModelFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text).map_err(|e| match e {
        Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

// --- canonical emission ---

pub fn rational_to_value(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn symbolic_to_value(s: &SymbolicReal, basis: &SymbolBasis) -> Value {
    if let Some(r) = s.as_rational() {
        return rational_to_value(&r);
    }
    let mut map = Map::new();
    for (slot, c) in s.iter() {
        let name = basis.slot_name(slot).unwrap_or("?").to_string();
        map.insert(name, Value::String(format_rational(c)));
    }
    Value::Object(map)
}

pub fn vector_to_value(v: &Vector) -> Value {
    Value::Array(v.components().iter().map(rational_to_value).collect())
}

pub fn form_to_value(f: &Form, basis: &SymbolBasis) -> Value {
    let mut terms = Map::new();
    for (idx, coeff) in f.terms() {
        let key = idx
            .iter()
            .map(|&i| (i as usize + 1).to_string())
            .collect::<Vec<_>>()
            .join(",");
        terms.insert(key, symbolic_to_value(coeff, basis));
    }
    let mut obj = Map::new();
    obj.insert("degree".into(), Value::from(f.degree() as u64));
    obj.insert("terms".into(), Value::Object(terms));
    Value::Object(obj)
}

fn lie_algebra_to_value(g: &LieAlgebra) -> Value {
    let mut brackets: BTreeMap<(usize, usize), Map<String, Value>> = BTreeMap::new();
    for (i, j, k, c) in g.bracket_entries() {
        brackets
            .entry((i, j))
            .or_default()
            .insert((k + 1).to_string(), rational_to_value(c));
    }
    let list: Vec<Value> = brackets
        .into_iter()
        .map(|((i, j), c)| {
            let mut entry = Map::new();
            entry.insert("i".into(), Value::from(i as u64 + 1));
            entry.insert("j".into(), Value::from(j as u64 + 1));
            entry.insert("c".into(), Value::Object(c));
            Value::Object(entry)
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("dim".into(), Value::from(g.dim() as u64));
    obj.insert("brackets".into(), Value::Array(list));
    Value::Object(obj)
}

fn int_matrix_to_value(m: &IntMatrix) -> Value {
    let n = m.size();
    Value::Array(
        (0..n)
            .map(|i| {
                Value::Array(
                    (0..n)
                        .map(|j| {
                            Value::from(i64::try_from(m.at(i, j).clone()).expect("entry fits i64"))
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn mapping_torus_to_value(m: &MappingTorus) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "fiber_betti".into(),
        Value::Array(
            m.fiber_betti()
                .iter()
                .map(|&b| Value::from(b as u64))
                .collect(),
        ),
    );
    if !m.label().is_empty() {
        obj.insert("label".into(), Value::String(m.label().to_string()));
    }
    let mut maps = Map::new();
    for (p, &b) in m.fiber_betti().iter().enumerate() {
        let phi = m.map(p).expect("validated");
        if b > 0 && !phi.is_identity() {
            maps.insert(p.to_string(), int_matrix_to_value(phi));
        }
    }
    if !maps.is_empty() {
        obj.insert("maps".into(), Value::Object(maps));
    }
    Value::Object(obj)
}

fn toric_to_value(t: &MomentModel, basis: &SymbolBasis) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), Value::from(t.n() as u64));
    obj.insert(
        "vertices".into(),
        Value::Array(
            t.vertices()
                .iter()
                .map(|v| Value::Array(v.iter().map(rational_to_value).collect()))
                .collect(),
        ),
    );
    obj.insert("eta0_theta".into(), rational_to_value(t.eta0_theta()));
    if let Some(rot) = t.torus_element() {
        obj.insert(
            "torus_element".into(),
            Value::Array(rot.iter().map(|a| symbolic_to_value(a, basis)).collect()),
        );
    }
    Value::Object(obj)
}

fn step_to_value(s: &Step) -> Value {
    let mut obj = Map::new();
    obj.insert("op".into(), Value::String(s.op.clone()));
    if let Some(id) = &s.id {
        obj.insert("id".into(), Value::String(id.clone()));
    }
    if let Some(note) = &s.note {
        obj.insert("note".into(), Value::String(note.clone()));
    }
    if let Some(expect) = &s.expect {
        obj.insert("expect".into(), expect.clone());
    }
    for (k, v) in &s.args {
        obj.insert(k.clone(), v.clone());
    }
    Value::Object(obj)
}

impl ModelFile {
    /// Canonical JSON value: sorted keys, normalized rationals, absent
    /// sections omitted. Loading the emission reproduces the model.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        if !self.label.is_empty() {
            obj.insert("label".into(), Value::String(self.label.clone()));
        }
        if !self.symbols.is_empty() {
            obj.insert(
                "symbols".into(),
                Value::Array(
                    self.symbols
                        .names()
                        .iter()
                        .map(|n| Value::String(n.clone()))
                        .collect(),
                ),
            );
        }
        if let Some(g) = &self.lie_algebra {
            obj.insert("lie_algebra".into(), lie_algebra_to_value(g));
        }
        if !self.forms.is_empty() {
            let mut forms = Map::new();
            for (name, f) in &self.forms {
                forms.insert(name.clone(), form_to_value(f, &self.symbols));
            }
            obj.insert("forms".into(), Value::Object(forms));
        }
        if !self.vectors.is_empty() {
            let mut vectors = Map::new();
            for (name, v) in &self.vectors {
                vectors.insert(name.clone(), vector_to_value(v));
            }
            obj.insert("vectors".into(), Value::Object(vectors));
        }
        if let Some(m) = &self.mapping_torus {
            obj.insert("mapping_torus".into(), mapping_torus_to_value(m));
        }
        if !self.periods.is_empty() {
            let mut periods = Map::new();
            for (name, pc) in &self.periods {
                periods.insert(
                    name.clone(),
                    Value::Array(
                        pc.periods()
                            .iter()
                            .map(|p| symbolic_to_value(p, &self.symbols))
                            .collect(),
                    ),
                );
            }
            obj.insert("periods".into(), Value::Object(periods));
        }
        if let Some(t) = &self.toric {
            obj.insert("toric".into(), toric_to_value(t, &self.symbols));
        }
        if !self.scenario.is_empty() {
            obj.insert(
                "scenario".into(),
                Value::Array(self.scenario.iter().map(step_to_value).collect()),
            );
        }
        Value::Object(obj)
    }

    /// Canonical pretty-printed serialization.
    pub fn to_canonical_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.to_json()).expect("value serializes");
        out.push('\n');
        out
    }
}
