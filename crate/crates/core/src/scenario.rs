//! Scenario orchestration: executes the ordered operation list of a model
//! file, records per-step verdicts, and renders deterministic reports.
//!
//! Steps run in order. A step whose inputs come from an errored step is
//! skipped; independent steps continue. A step with an `expect` object
//! passes iff the expectation is a subset of its result; without one it
//! passes unless it errors.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use crate::cosymplectic::{
    check_t_basic, deform_type_i, deform_type_ii, hamiltonian_vector, orbit_isotropy_defect,
    reeb_field, splitting_obstruction, verify_cosymplectic, CosymplecticPair, DeformationParameter,
    DeformationRecord,
};
use crate::error::{Error, Result};
use crate::exterior::{Form, Vector};
use crate::model::{
    form_to_value, parse_rational_field, parse_symbolic_field, rational_to_value,
    symbolic_to_value, vector_to_value, ModelFile, Step, SCHEMA_VERSION,
};
use crate::scalar::{Rational, SymbolicReal};
use crate::topology::{
    basic_betti, fibration_check, finite_order, k_cosymplectic_obstruction_torus,
    poincare_from_fixed, rationalize_class, toric_betti_check, wang_betti, BasicBetti,
    FixedCircleSet, IntMatrix, MatrixOrder, PeriodClass, Rationalization,
};
use crate::toric::{
    closed_reeb_orbit_count, cpn_moment, dense_subgroup_check, in_standard_simplex,
    moment_condition_residual, moment_rescale, moment_unchanged_type_ii, orbit_isotropy_residual,
    ProjectivePoint, ReebOrbits, RESIDUAL_STEP,
};

/// Residual tolerance documented with every report; the finite-difference
/// identity is exact in theory, so this only covers discretization error.
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
#[derive(Default)]
pub struct RunOptions {
    /// Default seed for sampling steps that do not carry their own.
    pub seed: u64,
}


#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepStatus {
    Pass,
    Fail,
    Error,
    Skipped,
}

impl StepStatus {
    fn as_str(self) -> &'static str {
        match self {
            StepStatus::Pass => "pass",
            StepStatus::Fail => "fail",
            StepStatus::Error => "error",
            StepStatus::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StepReport {
    pub index: usize,
    pub id: Option<String>,
    pub op: String,
    pub label: String,
    pub status: StepStatus,
    pub result: Value,
    pub error: Option<String>,
    pub note: Option<String>,
}

/// Deterministic run record: verdicts, values, and the convention ledger.
#[derive(Debug, Clone)]
pub struct Report {
    pub label: String,
    pub conventions: Value,
    pub steps: Vec<StepReport>,
    pub overall_pass: bool,
    pub generated_at_unix: u64,
}

fn conventions(model: &ModelFile) -> Value {
    json!({
        "chevalley_eilenberg_sign": "de^k = -sum_{i<j} c^k_{ij} e^{ij}",
        "momentum_map": "mu_j = |z_j|^2 / sum_i |z_i|^2; image is the standard simplex",
        "finite_difference": {"h": RESIDUAL_STEP, "tolerance": RESIDUAL_TOLERANCE},
        "symbols_declared_rationally_independent": model.symbols.names(),
    })
}

/// Entities a step can produce for later steps.
#[derive(Debug, Clone)]
enum Entity {
    Form(Form),
    Vector(Vector),
    Periods(PeriodClass),
    Record(DeformationRecord),
    Betti(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Form,
    Vector,
    Periods,
    Record,
    Betti,
}

impl Kind {
    fn as_str(self) -> &'static str {
        match self {
            Kind::Form => "form",
            Kind::Vector => "vector",
            Kind::Periods => "period class",
            Kind::Record => "deformation record",
            Kind::Betti => "Betti list",
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Arity {
    One,
    Many,
}

struct OpSpec {
    name: &'static str,
    label: &'static str,
    /// `(arg, kind, arity)` for arguments that may name entities.
    refs: &'static [(&'static str, Kind, Arity)],
    /// `(suffix, kind)` registered under the step id.
    outputs: &'static [(&'static str, Kind)],
}

const OPS: &[OpSpec] = &[
    OpSpec {
        name: "verify_cosymplectic",
        label: "cosymplectic structure check",
        refs: &[
            ("eta", Kind::Form, Arity::One),
            ("omega", Kind::Form, Arity::One),
        ],
        outputs: &[],
    },
    OpSpec {
        name: "reeb",
        label: "Reeb field",
        refs: &[
            ("eta", Kind::Form, Arity::One),
            ("omega", Kind::Form, Arity::One),
        ],
        outputs: &[("", Kind::Vector)],
    },
    OpSpec {
        name: "splitting_obstruction",
        label: "Killing-Reeb splitting obstruction",
        refs: &[
            ("eta", Kind::Form, Arity::One),
            ("omega", Kind::Form, Arity::One),
        ],
        outputs: &[],
    },
    OpSpec {
        name: "hamiltonian_vector",
        label: "Hamiltonian vector field",
        refs: &[
            ("eta", Kind::Form, Arity::One),
            ("omega", Kind::Form, Arity::One),
            ("df", Kind::Form, Arity::One),
        ],
        outputs: &[("", Kind::Vector)],
    },
    OpSpec {
        name: "deform_type_I",
        label: "type I deformation",
        refs: &[
            ("eta", Kind::Form, Arity::One),
            ("omega", Kind::Form, Arity::One),
            ("theta", Kind::Vector, Arity::One),
        ],
        outputs: &[
            ("", Kind::Record),
            (".eta", Kind::Form),
            (".omega", Kind::Form),
        ],
    },
    OpSpec {
        name: "deform_type_II",
        label: "type II deformation",
        refs: &[
            ("eta", Kind::Form, Arity::One),
            ("omega", Kind::Form, Arity::One),
            ("beta", Kind::Form, Arity::One),
        ],
        outputs: &[
            ("", Kind::Record),
            (".eta", Kind::Form),
            (".omega", Kind::Form),
        ],
    },
    OpSpec {
        name: "check_t_basic",
        label: "invariant 1-form basicness",
        refs: &[
            ("eta", Kind::Form, Arity::One),
            ("gens", Kind::Vector, Arity::Many),
        ],
        outputs: &[],
    },
    OpSpec {
        name: "isotropy_defect",
        label: "orbit isotropy",
        refs: &[
            ("eta", Kind::Form, Arity::One),
            ("omega", Kind::Form, Arity::One),
            ("a", Kind::Vector, Arity::One),
            ("b", Kind::Vector, Arity::One),
        ],
        outputs: &[],
    },
    OpSpec {
        name: "wang_betti",
        label: "mapping-torus Betti numbers",
        refs: &[],
        outputs: &[("", Kind::Betti)],
    },
    OpSpec {
        name: "toric_betti_check",
        label: "toric Betti relations",
        refs: &[("betti", Kind::Betti, Arity::One)],
        outputs: &[],
    },
    OpSpec {
        name: "poincare_from_fixed",
        label: "Poincare polynomial from fixed circles",
        refs: &[],
        outputs: &[("", Kind::Betti)],
    },
    OpSpec {
        name: "basic_betti",
        label: "basic cohomology recursion",
        refs: &[("betti", Kind::Betti, Arity::One)],
        outputs: &[("", Kind::Betti)],
    },
    OpSpec {
        name: "finite_order",
        label: "gluing-matrix order",
        refs: &[],
        outputs: &[],
    },
    OpSpec {
        name: "k_cosymplectic_obstruction",
        label: "K-cosymplectic obstruction",
        refs: &[],
        outputs: &[],
    },
    OpSpec {
        name: "fibration_check",
        label: "Tischler fibration criterion",
        refs: &[("periods", Kind::Periods, Arity::One)],
        outputs: &[],
    },
    OpSpec {
        name: "rationalize_class",
        label: "period-class rationalization",
        refs: &[
            ("periods", Kind::Periods, Arity::One),
            ("gens", Kind::Periods, Arity::Many),
        ],
        outputs: &[(".periods", Kind::Periods)],
    },
    OpSpec {
        name: "cpn_moment",
        label: "momentum map value",
        refs: &[],
        outputs: &[],
    },
    OpSpec {
        name: "in_standard_simplex",
        label: "simplex membership",
        refs: &[],
        outputs: &[],
    },
    OpSpec {
        name: "moment_rescale",
        label: "momentum polytope rescaling",
        refs: &[],
        outputs: &[],
    },
    OpSpec {
        name: "moment_unchanged_type_II",
        label: "momentum image under type II",
        refs: &[("record", Kind::Record, Arity::One)],
        outputs: &[],
    },
    OpSpec {
        name: "dense_subgroup_check",
        label: "dense subgroup test",
        refs: &[],
        outputs: &[],
    },
    OpSpec {
        name: "closed_reeb_orbit_count",
        label: "closed Reeb orbits",
        refs: &[],
        outputs: &[],
    },
    OpSpec {
        name: "moment_condition_residual",
        label: "momentum identity residual",
        refs: &[],
        outputs: &[],
    },
    OpSpec {
        name: "orbit_isotropy_residual",
        label: "orbit isotropy residual",
        refs: &[],
        outputs: &[],
    },
];

fn op_spec(name: &str) -> Option<&'static OpSpec> {
    OPS.iter().find(|spec| spec.name == name)
}

/// Static validation used by the loader: ops are known, every name the
/// scenario references is defined (model entity or earlier step output)
/// with the right kind, step ids are unique and shadow nothing, and every
/// model section present is actually needed by a nonempty scenario.
pub fn validate_model(model: &ModelFile) -> Result<()> {
    validate_steps_inner(model, &model.scenario, true)
}

/// Reference-only validation for ad-hoc step lists (CLI subcommands build
/// these over an existing model, which may carry extra sections).
pub fn validate_steps(model: &ModelFile, steps: &[Step]) -> Result<()> {
    validate_steps_inner(model, steps, false)
}

fn validate_steps_inner(model: &ModelFile, scenario: &[Step], check_usage: bool) -> Result<()> {
    let mut defined: BTreeMap<String, Kind> = BTreeMap::new();
    for name in model.forms.keys() {
        defined.insert(name.clone(), Kind::Form);
    }
    for name in model.vectors.keys() {
        defined.insert(name.clone(), Kind::Vector);
    }
    for name in model.periods.keys() {
        defined.insert(name.clone(), Kind::Periods);
    }
    let mut used_sections: BTreeSet<&'static str> = BTreeSet::new();
    let model_names: BTreeSet<String> = defined.keys().cloned().collect();
    for (index, step) in scenario.iter().enumerate() {
        let path = format!("$.scenario[{index}]");
        let spec = op_spec(&step.op)
            .ok_or_else(|| Error::Input(format!("{path}: unknown operation '{}'", step.op)))?;
        for &(arg, kind, arity) in spec.refs {
            let Some(value) = step.args.get(arg) else {
                continue;
            };
            let names: Vec<&str> = match arity {
                Arity::One => value.as_str().into_iter().collect(),
                Arity::Many => value
                    .as_array()
                    .map(|a| a.iter().filter_map(Value::as_str).collect())
                    .unwrap_or_default(),
            };
            for name in names {
                match defined.get(name) {
                    None => {
                        return Err(Error::Input(format!(
                            "{path}.{arg}: dangling reference {name}"
                        )));
                    }
                    Some(&k) if k != kind => {
                        return Err(Error::Input(format!(
                            "{path}.{arg}: {name} is a {}, expected a {}",
                            k.as_str(),
                            kind.as_str()
                        )));
                    }
                    _ => {}
                }
                if model_names.contains(name) {
                    match kind {
                        Kind::Form => used_sections.insert("forms"),
                        Kind::Vector => used_sections.insert("vectors"),
                        Kind::Periods => used_sections.insert("periods"),
                        _ => false,
                    };
                }
            }
        }
        match step.op.as_str() {
            "verify_cosymplectic"
            | "reeb"
            | "splitting_obstruction"
            | "hamiltonian_vector"
            | "deform_type_I"
            | "deform_type_II"
            | "check_t_basic"
            | "isotropy_defect" => {
                if model.lie_algebra.is_none() {
                    return Err(Error::Input(format!(
                        "{path}: '{}' needs a 'lie_algebra' section",
                        step.op
                    )));
                }
                used_sections.insert("lie_algebra");
            }
            "wang_betti" => {
                if model.mapping_torus.is_none() {
                    return Err(Error::Input(format!(
                        "{path}: 'wang_betti' needs a 'mapping_torus' section"
                    )));
                }
                used_sections.insert("mapping_torus");
            }
            "finite_order" | "k_cosymplectic_obstruction" => {
                if step.args.contains_key("degree") {
                    if model.mapping_torus.is_none() {
                        return Err(Error::Input(format!(
                            "{path}: 'degree' argument needs a 'mapping_torus' section"
                        )));
                    }
                    used_sections.insert("mapping_torus");
                }
            }
            "moment_rescale"
            | "moment_unchanged_type_II"
            | "closed_reeb_orbit_count"
            | "moment_condition_residual"
            | "orbit_isotropy_residual" => {
                if model.toric.is_none() {
                    return Err(Error::Input(format!(
                        "{path}: '{}' needs a 'toric' section",
                        step.op
                    )));
                }
                used_sections.insert("toric");
            }
            "dense_subgroup_check" => {
                if !step.args.contains_key("a") {
                    if model.toric.is_none() {
                        return Err(Error::Input(format!(
                            "{path}: 'dense_subgroup_check' needs a 'toric' section or an inline 'a'"
                        )));
                    }
                    used_sections.insert("toric");
                }
            }
            "cpn_moment"
                if model.toric.is_some() => {
                    used_sections.insert("toric");
                }
            _ => {}
        }
        if let Some(id) = &step.id {
            if defined.contains_key(id) {
                return Err(Error::Input(format!(
                    "{path}: step id '{id}' collides with an existing name"
                )));
            }
            for &(suffix, kind) in spec.outputs {
                defined.insert(format!("{id}{suffix}"), kind);
            }
        }
    }
    if check_usage && !scenario.is_empty() {
        let mut unused = Vec::new();
        if model.lie_algebra.is_some() && !used_sections.contains("lie_algebra") {
            unused.push("lie_algebra");
        }
        if !model.forms.is_empty() && !used_sections.contains("forms") {
            unused.push("forms");
        }
        if !model.vectors.is_empty() && !used_sections.contains("vectors") {
            unused.push("vectors");
        }
        if model.mapping_torus.is_some() && !used_sections.contains("mapping_torus") {
            unused.push("mapping_torus");
        }
        if !model.periods.is_empty() && !used_sections.contains("periods") {
            unused.push("periods");
        }
        if model.toric.is_some() && !used_sections.contains("toric") {
            unused.push("toric");
        }
        if !unused.is_empty() {
            return Err(Error::Input(format!(
                "sections not needed by the scenario: {}",
                unused.join(", ")
            )));
        }
    }
    Ok(())
}

struct Runner<'a> {
    model: &'a ModelFile,
    options: RunOptions,
    env: BTreeMap<String, Entity>,
    poisoned: BTreeSet<String>,
}

impl<'a> Runner<'a> {
    fn resolve_form(&self, args: &BTreeMap<String, Value>, key: &str) -> Result<Form> {
        let value = args
            .get(key)
            .ok_or_else(|| Error::Input(format!("missing argument '{key}'")))?;
        let name = value
            .as_str()
            .ok_or_else(|| Error::Input(format!("argument '{key}' must name a form")))?;
        if let Some(Entity::Form(f)) = self.env.get(name) {
            return Ok(f.clone());
        }
        self.model
            .forms
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Input(format!("dangling reference {name}")))
    }

    fn resolve_vector(&self, name: &str) -> Result<Vector> {
        if let Some(Entity::Vector(v)) = self.env.get(name) {
            return Ok(v.clone());
        }
        self.model
            .vectors
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Input(format!("dangling reference {name}")))
    }

    fn resolve_vector_arg(&self, args: &BTreeMap<String, Value>, key: &str) -> Result<Vector> {
        let value = args
            .get(key)
            .ok_or_else(|| Error::Input(format!("missing argument '{key}'")))?;
        let name = value
            .as_str()
            .ok_or_else(|| Error::Input(format!("argument '{key}' must name a vector")))?;
        self.resolve_vector(name)
    }

    fn resolve_periods(&self, args: &BTreeMap<String, Value>, key: &str) -> Result<PeriodClass> {
        let value = args
            .get(key)
            .ok_or_else(|| Error::Input(format!("missing argument '{key}'")))?;
        let name = value
            .as_str()
            .ok_or_else(|| Error::Input(format!("argument '{key}' must name a period class")))?;
        if let Some(Entity::Periods(p)) = self.env.get(name) {
            return Ok(p.clone());
        }
        self.model
            .periods
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Input(format!("dangling reference {name}")))
    }

    fn resolve_record(
        &self,
        args: &BTreeMap<String, Value>,
        key: &str,
    ) -> Result<DeformationRecord> {
        let value = args
            .get(key)
            .ok_or_else(|| Error::Input(format!("missing argument '{key}'")))?;
        let name = value.as_str().ok_or_else(|| {
            Error::Input(format!("argument '{key}' must name a deformation record"))
        })?;
        match self.env.get(name) {
            Some(Entity::Record(r)) => Ok(r.clone()),
            _ => Err(Error::Input(format!("dangling reference {name}"))),
        }
    }

    fn resolve_betti(&self, args: &BTreeMap<String, Value>, key: &str) -> Result<Vec<usize>> {
        let value = args
            .get(key)
            .ok_or_else(|| Error::Input(format!("missing argument '{key}'")))?;
        match value {
            Value::String(name) => match self.env.get(name) {
                Some(Entity::Betti(b)) => Ok(b.clone()),
                _ => Err(Error::Input(format!("dangling reference {name}"))),
            },
            Value::Array(items) => items
                .iter()
                .map(|x| {
                    x.as_u64()
                        .and_then(|v| usize::try_from(v).ok())
                        .ok_or_else(|| Error::Input(format!("'{key}' entries must be integers")))
                })
                .collect(),
            _ => Err(Error::Input(format!(
                "argument '{key}' must be a name or an integer list"
            ))),
        }
    }

    fn resolve_matrix(&self, args: &BTreeMap<String, Value>) -> Result<IntMatrix> {
        if let Some(value) = args.get("matrix") {
            let rows = value
                .as_array()
                .ok_or_else(|| Error::Input("'matrix' must be an array of rows".into()))?;
            let parsed: Vec<Vec<i64>> = rows
                .iter()
                .map(|row| {
                    row.as_array()
                        .map(|cells| cells.iter().filter_map(Value::as_i64).collect::<Vec<_>>())
                        .filter(|cells| cells.len() == rows.len())
                        .ok_or_else(|| {
                            Error::Input("'matrix' must be square with integer entries".into())
                        })
                })
                .collect::<Result<_>>()?;
            return IntMatrix::from_rows(&parsed);
        }
        if let Some(value) = args.get("degree") {
            let degree = value
                .as_u64()
                .and_then(|v| usize::try_from(v).ok())
                .ok_or_else(|| Error::Input("'degree' must be a nonnegative integer".into()))?;
            let torus = self
                .model
                .mapping_torus
                .as_ref()
                .ok_or_else(|| Error::Input("no 'mapping_torus' section".into()))?;
            return torus
                .map(degree)
                .cloned()
                .ok_or_else(|| Error::Input(format!("mapping torus has no degree {degree}")));
        }
        Err(Error::Input("need 'matrix' or 'degree'".into()))
    }

    fn pair(&self, args: &BTreeMap<String, Value>) -> Result<CosymplecticPair> {
        let g = self
            .model
            .lie_algebra
            .clone()
            .ok_or_else(|| Error::Input("no 'lie_algebra' section".into()))?;
        let eta = self.resolve_form(args, "eta")?;
        let omega = self.resolve_form(args, "omega")?;
        CosymplecticPair::new(g, eta, omega)
    }

    fn toric(&self) -> Result<&crate::toric::MomentModel> {
        self.model
            .toric
            .as_ref()
            .ok_or_else(|| Error::Input("no 'toric' section".into()))
    }

    fn seed(&self, args: &BTreeMap<String, Value>) -> Result<u64> {
        match args.get("seed") {
            Some(v) => v
                .as_u64()
                .ok_or_else(|| Error::Input("'seed' must be a nonnegative integer".into())),
            None => Ok(self.options.seed),
        }
    }

    fn usize_arg(
        &self,
        args: &BTreeMap<String, Value>,
        key: &str,
        default: Option<usize>,
    ) -> Result<usize> {
        match args.get(key) {
            Some(v) => v
                .as_u64()
                .and_then(|x| usize::try_from(x).ok())
                .ok_or_else(|| Error::Input(format!("'{key}' must be a nonnegative integer"))),
            None => default.ok_or_else(|| Error::Input(format!("missing argument '{key}'"))),
        }
    }

    fn int_vector_arg(&self, args: &BTreeMap<String, Value>, key: &str) -> Result<Vec<i64>> {
        let value = args
            .get(key)
            .ok_or_else(|| Error::Input(format!("missing argument '{key}'")))?;
        value
            .as_array()
            .map(|items| items.iter().filter_map(Value::as_i64).collect::<Vec<_>>())
            .filter(|v| Some(v.len()) == value.as_array().map(Vec::len))
            .ok_or_else(|| Error::Input(format!("'{key}' must be an integer array")))
    }

    fn record_to_value(&self, record: &DeformationRecord) -> Value {
        let basis = &self.model.symbols;
        let pair_value = |pair: &CosymplecticPair| {
            json!({
                "eta": form_to_value(pair.eta(), basis),
                "omega": form_to_value(pair.omega(), basis),
                "reeb": vector_to_value(pair.reeb()),
            })
        };
        let parameter = match &record.parameter {
            DeformationParameter::VectorField(theta) => json!({"theta": vector_to_value(theta)}),
            DeformationParameter::BasicForm(beta) => json!({"beta": form_to_value(beta, basis)}),
        };
        json!({
            "kind": match record.kind {
                crate::cosymplectic::DeformationKind::TypeI => "type_I",
                crate::cosymplectic::DeformationKind::TypeII => "type_II",
            },
            "parameter": parameter,
            "input": pair_value(&record.input),
            "output": pair_value(&record.output),
            "volume_scale": rational_to_value(&record.volume_scale),
            "is_cosymplectic": true,
            "reeb_preserved": record.input.reeb() == record.output.reeb(),
        })
    }

    fn execute(&mut self, step: &Step) -> Result<(Value, Vec<(String, Entity)>)> {
        let args = &step.args;
        let basis = &self.model.symbols;
        let mut outputs = Vec::new();
        let result = match step.op.as_str() {
            "verify_cosymplectic" => {
                let g = self
                    .model
                    .lie_algebra
                    .as_ref()
                    .ok_or_else(|| Error::Input("no 'lie_algebra' section".into()))?;
                let eta = self.resolve_form(args, "eta")?;
                let omega = self.resolve_form(args, "omega")?;
                let v = verify_cosymplectic(g, &eta, &omega)?;
                json!({
                    "n": v.n,
                    "d_eta_zero": v.d_eta_zero,
                    "d_omega_zero": v.d_omega_zero,
                    "volume_nonzero": v.volume_nonzero,
                    "is_cosymplectic": v.is_cosymplectic,
                    "volume": symbolic_to_value(&v.volume, basis),
                })
            }
            "reeb" => {
                let g = self
                    .model
                    .lie_algebra
                    .as_ref()
                    .ok_or_else(|| Error::Input("no 'lie_algebra' section".into()))?;
                let eta = self.resolve_form(args, "eta")?;
                let omega = self.resolve_form(args, "omega")?;
                let r = reeb_field(g, &eta, &omega)?;
                if let Some(id) = &step.id {
                    outputs.push((id.clone(), Entity::Vector(r.clone())));
                }
                json!({"reeb": vector_to_value(&r)})
            }
            "splitting_obstruction" => {
                let pair = self.pair(args)?;
                let v = splitting_obstruction(&pair)?;
                json!({
                    "ker_eta_subalgebra": v.ker_eta_subalgebra,
                    "reeb_central_on_ker": v.reeb_central_on_ker,
                    "splits": v.splits,
                })
            }
            "hamiltonian_vector" => {
                let pair = self.pair(args)?;
                let df = self.resolve_form(args, "df")?;
                let x = hamiltonian_vector(&pair, &df)?;
                if let Some(id) = &step.id {
                    outputs.push((id.clone(), Entity::Vector(x.clone())));
                }
                json!({"vector": vector_to_value(&x)})
            }
            "deform_type_I" => {
                let pair = self.pair(args)?;
                let theta = self.resolve_vector_arg(args, "theta")?;
                let record = deform_type_i(&pair, &theta)?;
                let value = self.record_to_value(&record);
                if let Some(id) = &step.id {
                    outputs.push((
                        format!("{id}.eta"),
                        Entity::Form(record.output.eta().clone()),
                    ));
                    outputs.push((
                        format!("{id}.omega"),
                        Entity::Form(record.output.omega().clone()),
                    ));
                    outputs.push((id.clone(), Entity::Record(record)));
                }
                value
            }
            "deform_type_II" => {
                let pair = self.pair(args)?;
                let beta = self.resolve_form(args, "beta")?;
                let record = deform_type_ii(&pair, &beta)?;
                let value = self.record_to_value(&record);
                if let Some(id) = &step.id {
                    outputs.push((
                        format!("{id}.eta"),
                        Entity::Form(record.output.eta().clone()),
                    ));
                    outputs.push((
                        format!("{id}.omega"),
                        Entity::Form(record.output.omega().clone()),
                    ));
                    outputs.push((id.clone(), Entity::Record(record)));
                }
                value
            }
            "check_t_basic" => {
                let g = self
                    .model
                    .lie_algebra
                    .as_ref()
                    .ok_or_else(|| Error::Input("no 'lie_algebra' section".into()))?;
                let eta = self.resolve_form(args, "eta")?;
                let gen_names = args.get("gens").and_then(Value::as_array).ok_or_else(|| {
                    Error::Input("'gens' must be an array of vector names".into())
                })?;
                let gens: Vec<Vector> = gen_names
                    .iter()
                    .map(|v| {
                        v.as_str()
                            .ok_or_else(|| Error::Input("'gens' entries must be names".into()))
                            .and_then(|name| self.resolve_vector(name))
                    })
                    .collect::<Result<_>>()?;
                let has_fixed_point = args
                    .get("has_fixed_point")
                    .and_then(Value::as_bool)
                    .unwrap_or(false);
                let v = check_t_basic(g, &eta, &gens, has_fixed_point)?;
                json!({
                    "constants": v.constants.iter().map(|c| symbolic_to_value(c, basis)).collect::<Vec<_>>(),
                    "is_basic": v.is_basic,
                    "fixed_point_asserted": v.fixed_point_asserted,
                    "contradiction": v.contradiction,
                })
            }
            "isotropy_defect" => {
                let pair = self.pair(args)?;
                let a = self.resolve_vector_arg(args, "a")?;
                let b = self.resolve_vector_arg(args, "b")?;
                let value = orbit_isotropy_defect(&pair, &a, &b)?;
                json!({
                    "value": symbolic_to_value(&value, basis),
                    "is_zero": value.is_zero(),
                })
            }
            "wang_betti" => {
                let torus = self
                    .model
                    .mapping_torus
                    .as_ref()
                    .ok_or_else(|| Error::Input("no 'mapping_torus' section".into()))?;
                let betti = wang_betti(torus);
                if let Some(id) = &step.id {
                    outputs.push((id.clone(), Entity::Betti(betti.clone())));
                }
                json!({"betti": betti, "label": torus.label()})
            }
            "toric_betti_check" => {
                let betti = self.resolve_betti(args, "betti")?;
                let v = toric_betti_check(&betti)?;
                json!({
                    "ok": v.ok,
                    "pairs_equal": v.pairs_equal,
                    "b0_is_one": v.b0_is_one,
                    "b1_is_one": v.b1_is_one,
                    "b2n_is_one": v.b2n_is_one,
                })
            }
            "poincare_from_fixed" => {
                let indices_raw = args
                    .get("indices")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Input("'indices' must be an integer array".into()))?;
                let indices: Vec<usize> = indices_raw
                    .iter()
                    .map(|v| {
                        v.as_u64()
                            .and_then(|x| usize::try_from(x).ok())
                            .ok_or_else(|| {
                                Error::Input("'indices' entries must be integers".into())
                            })
                    })
                    .collect::<Result<_>>()?;
                let fs = FixedCircleSet::new(indices)?;
                let betti = poincare_from_fixed(&fs);
                if let Some(id) = &step.id {
                    outputs.push((id.clone(), Entity::Betti(betti.clone())));
                }
                json!({"betti": betti})
            }
            "basic_betti" => {
                let betti = self.resolve_betti(args, "betti")?;
                match basic_betti(&betti)? {
                    BasicBetti::Consistent(basic) => {
                        if let Some(id) = &step.id {
                            outputs.push((id.clone(), Entity::Betti(basic.clone())));
                        }
                        json!({"consistent": true, "basic": basic})
                    }
                    BasicBetti::Inconsistent { degree } => {
                        json!({"consistent": false, "degree": degree})
                    }
                }
            }
            "finite_order" => {
                let matrix = self.resolve_matrix(args)?;
                match finite_order(&matrix)? {
                    MatrixOrder::Finite(k) => json!({"finite": true, "order": k}),
                    MatrixOrder::Infinite => json!({"finite": false}),
                }
            }
            "k_cosymplectic_obstruction" => {
                let matrix = self.resolve_matrix(args)?;
                let v = k_cosymplectic_obstruction_torus(&matrix)?;
                let order = match v.order {
                    MatrixOrder::Finite(k) => json!({"finite": true, "order": k}),
                    MatrixOrder::Infinite => json!({"finite": false}),
                };
                json!({"no_k_metric": v.no_k_metric, "order": order, "message": v.message})
            }
            "fibration_check" => {
                let pc = self.resolve_periods(args, "periods")?;
                let v = fibration_check(&pc)?;
                let mut obj = Map::new();
                obj.insert(
                    "rational_multiple_of_integer_class".into(),
                    Value::Bool(v.rational_multiple_of_integer_class),
                );
                if let Some(class) = &v.integer_class {
                    obj.insert(
                        "integer_class".into(),
                        Value::Array(class.iter().map(|c| json!(c.to_string())).collect()),
                    );
                }
                if let Some(multiple) = &v.multiple {
                    obj.insert("multiple".into(), symbolic_to_value(multiple, basis));
                }
                if let Some(scaling) = &v.scaling {
                    obj.insert("scaling".into(), rational_to_value(scaling));
                }
                obj.insert("summary".into(), Value::String(v.summary));
                Value::Object(obj)
            }
            "rationalize_class" => {
                let pc = self.resolve_periods(args, "periods")?;
                let gen_names = args.get("gens").and_then(Value::as_array).ok_or_else(|| {
                    Error::Input("'gens' must be an array of period names".into())
                })?;
                let gens: Vec<PeriodClass> =
                    gen_names
                        .iter()
                        .map(|v| {
                            let name = v.as_str().ok_or_else(|| {
                                Error::Input("'gens' entries must be names".into())
                            })?;
                            if let Some(Entity::Periods(p)) = self.env.get(name) {
                                Ok(p.clone())
                            } else {
                                self.model.periods.get(name).cloned().ok_or_else(|| {
                                    Error::Input(format!("dangling reference {name}"))
                                })
                            }
                        })
                        .collect::<Result<_>>()?;
                match rationalize_class(&pc, &gens)? {
                    Rationalization::Feasible {
                        coefficients,
                        new_periods,
                    } => {
                        if let Some(id) = &step.id {
                            outputs.push((
                                format!("{id}.periods"),
                                Entity::Periods(new_periods.clone()),
                            ));
                        }
                        json!({
                            "feasible": true,
                            "coefficients": coefficients.iter().map(rational_to_value).collect::<Vec<_>>(),
                            "new_periods": new_periods.periods().iter().map(|p| symbolic_to_value(p, basis)).collect::<Vec<_>>(),
                        })
                    }
                    Rationalization::Infeasible => json!({"feasible": false}),
                }
            }
            "cpn_moment" => {
                let coords_raw = args.get("point").and_then(Value::as_array).ok_or_else(|| {
                    Error::Input("'point' must be an array of [re, im] pairs".into())
                })?;
                let coords: Vec<(Rational, Rational)> = coords_raw
                    .iter()
                    .enumerate()
                    .map(|(i, pair)| {
                        let pair = pair
                            .as_array()
                            .filter(|p| p.len() == 2)
                            .ok_or_else(|| Error::Input(format!("point[{i}] must be [re, im]")))?;
                        Ok((
                            parse_rational_field(&pair[0], &format!("point[{i}][0]"))?,
                            parse_rational_field(&pair[1], &format!("point[{i}][1]"))?,
                        ))
                    })
                    .collect::<Result<_>>()?;
                let point = ProjectivePoint::new(coords)?;
                if let Some(toric) = &self.model.toric {
                    if point.n() != toric.n() {
                        return Err(Error::Input(format!(
                            "point lives on CP^{} but the model has n = {}",
                            point.n(),
                            toric.n()
                        )));
                    }
                }
                let mu = cpn_moment(&point)?;
                json!({
                    "point": mu.iter().map(rational_to_value).collect::<Vec<_>>(),
                    "in_standard_simplex": in_standard_simplex(&mu),
                })
            }
            "in_standard_simplex" => {
                let raw = args
                    .get("point")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Input("'point' must be an array of rationals".into()))?;
                let point: Vec<Rational> = raw
                    .iter()
                    .enumerate()
                    .map(|(i, v)| parse_rational_field(v, &format!("point[{i}]")))
                    .collect::<Result<_>>()?;
                json!({"inside": in_standard_simplex(&point)})
            }
            "moment_rescale" => {
                let toric = self.toric()?;
                let vertices = moment_rescale(toric)?;
                json!({
                    "eta0_theta": rational_to_value(toric.eta0_theta()),
                    "vertices": vertices
                        .iter()
                        .map(|v| v.iter().map(rational_to_value).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })
            }
            "moment_unchanged_type_II" => {
                let toric = self.toric()?;
                let record = self.resolve_record(args, "record")?;
                let v = moment_unchanged_type_ii(toric, &record)?;
                json!({
                    "unchanged": v.unchanged,
                    "vertices": v.vertices
                        .iter()
                        .map(|v| v.iter().map(rational_to_value).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })
            }
            "dense_subgroup_check" => {
                let rotations: Vec<SymbolicReal> = match args.get("a") {
                    Some(raw) => raw
                        .as_array()
                        .ok_or_else(|| Error::Input("'a' must be an array".into()))?
                        .iter()
                        .enumerate()
                        .map(|(i, v)| parse_symbolic_field(v, basis, &format!("a[{i}]")))
                        .collect::<Result<_>>()?,
                    None => self
                        .toric()?
                        .torus_element()
                        .ok_or_else(|| Error::Input("toric model carries no torus element".into()))?
                        .to_vec(),
                };
                json!({"dense": dense_subgroup_check(&rotations)?})
            }
            "closed_reeb_orbit_count" => {
                let toric = self.toric()?;
                match closed_reeb_orbit_count(toric)? {
                    ReebOrbits::AllClosed => json!({"kind": "all_closed"}),
                    ReebOrbits::Finite(count) => json!({"kind": "finite", "count": count}),
                    ReebOrbits::InfinitelyMany => json!({
                        "kind": "infinitely_many",
                        "note": "extension: the closure torus has a positive-dimensional fixed set",
                    }),
                }
            }
            "moment_condition_residual" => {
                let toric = self.toric()?;
                let a = self.int_vector_arg(args, "A")?;
                let samples = self.usize_arg(args, "samples", Some(100))?;
                let seed = self.seed(args)?;
                let record = moment_condition_residual(toric.n(), &a, samples, seed)?;
                json!({
                    "n": record.n,
                    "A": record.coefficients,
                    "samples": record.samples,
                    "seed": record.seed,
                    "h": record.step,
                    "max_residual": record.max_residual,
                    "within_tolerance": record.max_residual < RESIDUAL_TOLERANCE,
                })
            }
            "orbit_isotropy_residual" => {
                let toric = self.toric()?;
                let a = self.int_vector_arg(args, "A")?;
                let b = self.int_vector_arg(args, "B")?;
                let samples = self.usize_arg(args, "samples", Some(100))?;
                let seed = self.seed(args)?;
                let max_residual = orbit_isotropy_residual(toric.n(), &a, &b, samples, seed)?;
                json!({
                    "n": toric.n(),
                    "A": a,
                    "B": b,
                    "samples": samples,
                    "seed": seed,
                    "max_residual": max_residual,
                    "within_tolerance": max_residual < 1e-9,
                })
            }
            other => return Err(Error::Input(format!("unknown operation '{other}'"))),
        };
        Ok((result, outputs))
    }
}

/// Recursive containment: every key/element the expectation mentions must
/// be present and equal in the actual result.
pub fn expectation_matches(expect: &Value, actual: &Value) -> bool {
    match (expect, actual) {
        (Value::Object(e), Value::Object(a)) => e.iter().all(|(k, ev)| {
            a.get(k)
                .map(|av| expectation_matches(ev, av))
                .unwrap_or(false)
        }),
        (Value::Array(e), Value::Array(a)) => {
            e.len() == a.len() && e.iter().zip(a).all(|(ev, av)| expectation_matches(ev, av))
        }
        _ => expect == actual,
    }
}

/// Executes the scenario of a validated model.
pub fn run_scenario(model: &ModelFile, options: RunOptions) -> Report {
    let mut runner = Runner {
        model,
        options,
        env: BTreeMap::new(),
        poisoned: BTreeSet::new(),
    };
    let mut steps = Vec::new();
    for (index, step) in model.scenario.iter().enumerate() {
        let spec = op_spec(&step.op);
        let label = spec.map(|s| s.label).unwrap_or("").to_string();
        // skip steps whose inputs come from an errored step
        let depends_on_poisoned = step.args.values().any(|v| match v {
            Value::String(s) => runner.poisoned.contains(s),
            Value::Array(items) => items.iter().any(|x| {
                x.as_str()
                    .map(|s| runner.poisoned.contains(s))
                    .unwrap_or(false)
            }),
            _ => false,
        });
        if depends_on_poisoned {
            if let (Some(id), Some(spec)) = (&step.id, spec) {
                for &(suffix, _) in spec.outputs {
                    runner.poisoned.insert(format!("{id}{suffix}"));
                }
            }
            steps.push(StepReport {
                index,
                id: step.id.clone(),
                op: step.op.clone(),
                label,
                status: StepStatus::Skipped,
                result: Value::Null,
                error: Some("skipped: depends on a failed step".into()),
                note: step.note.clone(),
            });
            continue;
        }
        match runner.execute(step) {
            Ok((result, outputs)) => {
                for (name, entity) in outputs {
                    runner.env.insert(name, entity);
                }
                let status = match &step.expect {
                    Some(expect) => {
                        if expectation_matches(expect, &result) {
                            StepStatus::Pass
                        } else {
                            StepStatus::Fail
                        }
                    }
                    None => StepStatus::Pass,
                };
                steps.push(StepReport {
                    index,
                    id: step.id.clone(),
                    op: step.op.clone(),
                    label,
                    status,
                    result,
                    error: None,
                    note: step.note.clone(),
                });
            }
            Err(err) => {
                if let (Some(id), Some(spec)) = (&step.id, spec) {
                    for &(suffix, _) in spec.outputs {
                        runner.poisoned.insert(format!("{id}{suffix}"));
                    }
                }
                steps.push(StepReport {
                    index,
                    id: step.id.clone(),
                    op: step.op.clone(),
                    label,
                    status: StepStatus::Error,
                    result: Value::Null,
                    error: Some(err.to_string()),
                    note: step.note.clone(),
                });
            }
        }
    }
    let overall_pass = steps.iter().all(|s| s.status == StepStatus::Pass);
    let generated_at_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Report {
        label: model.label.clone(),
        conventions: conventions(model),
        steps,
        overall_pass,
        generated_at_unix,
    }
}

impl Report {
    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                let mut obj = Map::new();
                obj.insert("index".into(), Value::from(s.index as u64));
                if let Some(id) = &s.id {
                    obj.insert("id".into(), Value::String(id.clone()));
                }
                obj.insert("op".into(), Value::String(s.op.clone()));
                obj.insert("label".into(), Value::String(s.label.clone()));
                obj.insert("status".into(), Value::String(s.status.as_str().into()));
                if !s.result.is_null() {
                    obj.insert("result".into(), s.result.clone());
                }
                if let Some(err) = &s.error {
                    obj.insert("error".into(), Value::String(err.clone()));
                }
                if let Some(note) = &s.note {
                    obj.insert("note".into(), Value::String(note.clone()));
                }
                Value::Object(obj)
            })
            .collect();
        json!({
            "report_schema_version": SCHEMA_VERSION,
            "label": self.label,
            "conventions": self.conventions,
            "steps": steps,
            "overall_pass": self.overall_pass,
            "generated_at_unix": self.generated_at_unix,
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        out.push('\n');
        out
    }

    /// Human-readable rendering; verdict markers are `PASS`, `FAIL`,
    /// `ERROR`, and `SKIP`, one per step.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "model: {} (schema v{})\n",
            self.label, SCHEMA_VERSION
        ));
        out.push_str("conventions:\n");
        if let Value::Object(map) = &self.conventions {
            for (key, value) in map {
                out.push_str(&format!("  {key}: {value}\n"));
            }
        }
        out.push_str("steps:\n");
        for s in &self.steps {
            let marker = match s.status {
                StepStatus::Pass => "PASS",
                StepStatus::Fail => "FAIL",
                StepStatus::Error => "ERROR",
                StepStatus::Skipped => "SKIP",
            };
            let id =
                s.id.as_deref()
                    .map(|i| format!(" id={i}"))
                    .unwrap_or_default();
            out.push_str(&format!(
                "  {:>3}. {marker} {} [{}]{id}\n",
                s.index + 1,
                s.label,
                s.op
            ));
            if let Some(err) = &s.error {
                out.push_str(&format!("       {err}\n"));
            } else if !s.result.is_null() {
                out.push_str(&format!("       {}\n", s.result));
            }
            if let Some(note) = &s.note {
                out.push_str(&format!("       note: {note}\n"));
            }
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.overall_pass { "pass" } else { "fail" }
        ));
        out
    }
}

/// Library-level helpers for the CLI: canned scenarios over a model file.
pub mod canned {
    use super::*;

    /// `check`: verify, then Reeb field and splitting obstruction.
    pub fn check_steps(eta: &str, omega: &str) -> Vec<Step> {
        let step = |op: &str, extra: &[(&str, Value)]| {
            let mut args = BTreeMap::new();
            args.insert("eta".to_string(), Value::String(eta.into()));
            args.insert("omega".to_string(), Value::String(omega.into()));
            for (k, v) in extra {
                args.insert((*k).into(), v.clone());
            }
            Step {
                id: None,
                op: op.into(),
                args,
                expect: None,
                note: None,
            }
        };
        vec![
            step("verify_cosymplectic", &[]),
            step("reeb", &[]),
            step("splitting_obstruction", &[]),
        ]
    }

    /// `deform`: one deformation step of the requested kind.
    pub fn deform_step(kind: &str, eta: &str, omega: &str, parameter: &str) -> Result<Step> {
        let (op, arg) = match kind {
            "I" | "i" => ("deform_type_I", "theta"),
            "II" | "ii" => ("deform_type_II", "beta"),
            other => {
                return Err(Error::Input(format!(
                    "unknown deformation kind '{other}' (use I or II)"
                )))
            }
        };
        let mut args = BTreeMap::new();
        args.insert("eta".to_string(), Value::String(eta.into()));
        args.insert("omega".to_string(), Value::String(omega.into()));
        args.insert(arg.to_string(), Value::String(parameter.into()));
        Ok(Step {
            id: Some("deform".into()),
            op: op.into(),
            args,
            expect: None,
            note: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;

    fn run(text: &str) -> Report {
        let model = parse_model(text).unwrap();
        run_scenario(&model, RunOptions::default())
    }

    const FLAT_CHECK: &str = r#"{
        "schema_version": 1,
        "label": "flat",
        "lie_algebra": {"dim": 5},
        "forms": {
            "eta": {"degree": 1, "terms": {"5": "1"}},
            "omega": {"degree": 2, "terms": {"1,2": "1", "3,4": "1"}}
        },
        "scenario": [
            {"op": "verify_cosymplectic", "eta": "eta", "omega": "omega",
             "expect": {"is_cosymplectic": true, "volume": "2"}},
            {"op": "reeb", "eta": "eta", "omega": "omega", "id": "r",
             "expect": {"reeb": ["0","0","0","0","1"]}},
            {"op": "splitting_obstruction", "eta": "eta", "omega": "omega",
             "expect": {"splits": true}}
        ]
    }"#;

    #[test]
    fn flat_check_scenario_passes() {
        let report = run(FLAT_CHECK);
        assert!(report.overall_pass, "{}", report.to_text());
        assert_eq!(report.steps.len(), 3);
        assert!(report.steps.iter().all(|s| s.status == StepStatus::Pass));
    }

    #[test]
    fn expectation_mismatch_fails_step() {
        let text = FLAT_CHECK.replace("\"volume\": \"2\"", "\"volume\": \"3\"");
        let report = run(&text);
        assert!(!report.overall_pass);
        assert_eq!(report.steps[0].status, StepStatus::Fail);
        // the text rendering flags exactly one failure
        let text = report.to_text();
        assert_eq!(text.matches("FAIL").count(), 1, "{text}");
    }

    #[test]
    fn error_poisons_dependents() {
        let text = r#"{
            "schema_version": 1,
            "lie_algebra": {"dim": 5},
            "forms": {
                "eta": {"degree": 1, "terms": {"5": "1"}},
                "omega": {"degree": 2, "terms": {"1,2": "1", "3,4": "1"}},
                "bad_beta": {"degree": 1, "terms": {"5": "1"}}
            },
            "toric": {"n": 2},
            "scenario": [
                {"op": "deform_type_II", "eta": "eta", "omega": "omega", "beta": "bad_beta", "id": "def"},
                {"op": "moment_unchanged_type_II", "record": "def"},
                {"op": "verify_cosymplectic", "eta": "eta", "omega": "omega"}
            ]
        }"#;
        let report = run(text);
        assert_eq!(report.steps[0].status, StepStatus::Error); // β hits the Reeb direction
        assert_eq!(report.steps[1].status, StepStatus::Skipped);
        assert_eq!(report.steps[2].status, StepStatus::Pass); // independent step continues
        assert!(!report.overall_pass);
    }

    #[test]
    fn deform_outputs_feed_later_steps() {
        let text = r#"{
            "schema_version": 1,
            "lie_algebra": {"dim": 5},
            "forms": {
                "eta": {"degree": 1, "terms": {"5": "1"}},
                "omega": {"degree": 2, "terms": {"1,2": "1", "3,4": "1"}},
                "beta": {"degree": 1, "terms": {"1": "1"}}
            },
            "scenario": [
                {"op": "deform_type_II", "eta": "eta", "omega": "omega", "beta": "beta", "id": "def",
                 "expect": {"reeb_preserved": true}},
                {"op": "verify_cosymplectic", "eta": "def.eta", "omega": "def.omega",
                 "expect": {"is_cosymplectic": true}}
            ]
        }"#;
        let report = run(text);
        assert!(report.overall_pass, "{}", report.to_text());
    }

    #[test]
    fn empty_scenario_passes() {
        let report = run(r#"{"schema_version": 1, "label": "empty"}"#);
        assert!(report.overall_pass);
        assert!(report.steps.is_empty());
    }

    #[test]
    fn unused_section_rejected_at_load() {
        let text = r#"{
            "schema_version": 1,
            "lie_algebra": {"dim": 3},
            "toric": {"n": 2},
            "scenario": [{"op": "moment_rescale"}]
        }"#;
        let err = parse_model(text).unwrap_err();
        assert!(err.to_string().contains("not needed"), "{err}");
    }

    #[test]
    fn report_json_round_trips_verdicts() {
        let report = run(FLAT_CHECK);
        let value = report.to_json();
        let parsed: Value = serde_json::from_str(&report.to_json_string()).unwrap();
        assert_eq!(value, parsed);
        assert_eq!(parsed["overall_pass"], Value::Bool(true));
        assert_eq!(parsed["steps"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn determinism_modulo_timestamp() {
        let model = parse_model(FLAT_CHECK).unwrap();
        let mut a = run_scenario(&model, RunOptions { seed: 7 }).to_json();
        let mut b = run_scenario(&model, RunOptions { seed: 7 }).to_json();
        a.as_object_mut().unwrap().remove("generated_at_unix");
        b.as_object_mut().unwrap().remove("generated_at_unix");
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn subset_matching_semantics() {
        let actual = json!({"a": 1, "b": {"c": true, "d": "x"}, "e": [1, 2]});
        assert!(expectation_matches(&json!({"a": 1}), &actual));
        assert!(expectation_matches(&json!({"b": {"c": true}}), &actual));
        assert!(expectation_matches(&json!({"e": [1, 2]}), &actual));
        assert!(!expectation_matches(&json!({"e": [1]}), &actual));
        assert!(!expectation_matches(&json!({"b": {"c": false}}), &actual));
        assert!(!expectation_matches(&json!({"missing": 0}), &actual));
    }
}
