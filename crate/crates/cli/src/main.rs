//! `cosym`: run exact cosymplectic-geometry checks over JSON model files.
//!
//! Subcommands either execute the scenario bundled in a model file (`run`)
//! or assemble a small scenario from flags (`check`, `deform`, `betti`,
//! `fibration`, `moment`). Reports go to stdout as text or JSON; the exit
//! code is 0 when every step passes, 1 on any failed or errored step, and
//! 2 on invalid input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use cosym_core::model::{load_model, ModelFile, Step};
use cosym_core::scenario::{run_scenario, validate_steps, Report, RunOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "cosym",
    version,
    about = "Exact checks for cosymplectic structures, mapping tori, and toric momentum models"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Default seed for sampling steps without an explicit one.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ModelArg {
    /// Path to a JSON model file (schema v1).
    model: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Verify the cosymplectic structure, solve for the Reeb field, and
    /// test the Killing-Reeb splitting obstruction.
    Check {
        #[command(flatten)]
        model: ModelArg,
        /// Name of the 1-form in the model's `forms` section.
        #[arg(long, default_value = "eta")]
        eta: String,
        /// Name of the 2-form in the model's `forms` section.
        #[arg(long, default_value = "omega")]
        omega: String,
    },
    /// Apply a type I or type II deformation and verify the result.
    Deform {
        #[command(flatten)]
        model: ModelArg,
        /// Deformation kind: I (vector field) or II (basic 1-form).
        #[arg(long)]
        kind: String,
        /// Vector name for type I.
        #[arg(long)]
        theta: Option<String>,
        /// Form name for type II.
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value = "eta")]
        eta: String,
        #[arg(long, default_value = "omega")]
        omega: String,
    },
    /// Mapping-torus Betti numbers, toric Betti relations, the basic
    /// cohomology recursion, and Poincaré polynomials from fixed circles.
    Betti {
        #[command(flatten)]
        model: ModelArg,
        /// Explicit Betti list (comma-separated) instead of the Wang
        /// computation from the model's mapping torus.
        #[arg(long, value_delimiter = ',')]
        betti: Option<Vec<usize>>,
        /// Fixed-circle indices for a Poincaré polynomial step.
        #[arg(long, value_delimiter = ',')]
        poincare_indices: Option<Vec<usize>>,
    },
    /// Compact-leaf (fibration) criterion for a period class, with an
    /// optional rationalization against basic generators.
    Fibration {
        #[command(flatten)]
        model: ModelArg,
        /// Name in the model's `periods` section.
        #[arg(long)]
        periods: String,
        /// Comma-separated generator names for a rationalization step.
        #[arg(long, value_delimiter = ',')]
        rationalize: Option<Vec<String>>,
    },
    /// Momentum-map checks on the toric model: polytope rescaling, dense
    /// subgroup test, closed Reeb orbits, point evaluation, residuals.
    Moment {
        #[command(flatten)]
        model: ModelArg,
        /// Momentum evaluation point: homogeneous coordinates
        /// "re,im;re,im;…".
        #[arg(long)]
        point: Option<String>,
        /// Finite-difference residual check with these integer
        /// coefficients (comma-separated).
        #[arg(long, value_delimiter = ',')]
        residual_a: Option<Vec<i64>>,
        /// Samples for the residual check.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Execute the scenario bundled in the model file.
    Run {
        #[command(flatten)]
        model: ModelArg,
    },
}

fn string_arg(value: impl Into<String>) -> Value {
    Value::String(value.into())
}

fn step(op: &str, args: Vec<(&str, Value)>) -> Step {
    Step {
        id: None,
        op: op.into(),
        args: args.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        expect: None,
        note: None,
    }
}

fn step_with_id(id: &str, op: &str, args: Vec<(&str, Value)>) -> Step {
    Step {
        id: Some(id.into()),
        ..step(op, args)
    }
}

fn build_steps(command: &Command, model: &ModelFile) -> Result<Vec<Step>, String> {
    match command {
        Command::Run { .. } => Ok(model.scenario.clone()),
        Command::Check { eta, omega, .. } => {
            let forms = vec![("eta", string_arg(eta)), ("omega", string_arg(omega))];
            Ok(vec![
                step("verify_cosymplectic", forms.clone()),
                step("reeb", forms.clone()),
                step("splitting_obstruction", forms),
            ])
        }
        Command::Deform {
            kind,
            theta,
            beta,
            eta,
            omega,
            ..
        } => {
            let mut args = vec![("eta", string_arg(eta)), ("omega", string_arg(omega))];
            let op = match kind.as_str() {
                "I" | "i" | "1" => {
                    let theta = theta
                        .as_ref()
                        .ok_or("type I deformations need --theta <vector>")?;
                    args.push(("theta", string_arg(theta)));
                    "deform_type_I"
                }
                "II" | "ii" | "2" => {
                    let beta = beta
                        .as_ref()
                        .ok_or("type II deformations need --beta <form>")?;
                    args.push(("beta", string_arg(beta)));
                    "deform_type_II"
                }
                other => return Err(format!("unknown deformation kind '{other}' (use I or II)")),
            };
            Ok(vec![
                step_with_id("deform", op, args),
                step(
                    "verify_cosymplectic",
                    vec![
                        ("eta", string_arg("deform.eta")),
                        ("omega", string_arg("deform.omega")),
                    ],
                ),
            ])
        }
        Command::Betti {
            betti,
            poincare_indices,
            ..
        } => {
            let mut steps = Vec::new();
            let betti_ref: Value = match betti {
                Some(list) => Value::Array(list.iter().map(|&b| Value::from(b as u64)).collect()),
                None => {
                    if model.mapping_torus.is_none() {
                        return Err(
                            "model has no mapping_torus section; pass an explicit --betti list"
                                .into(),
                        );
                    }
                    steps.push(step_with_id("wang", "wang_betti", vec![]));
                    string_arg("wang")
                }
            };
            steps.push(step(
                "toric_betti_check",
                vec![("betti", betti_ref.clone())],
            ));
            steps.push(step("basic_betti", vec![("betti", betti_ref)]));
            if let Some(indices) = poincare_indices {
                steps.push(step(
                    "poincare_from_fixed",
                    vec![(
                        "indices",
                        Value::Array(indices.iter().map(|&i| Value::from(i as u64)).collect()),
                    )],
                ));
            }
            Ok(steps)
        }
        Command::Fibration {
            periods,
            rationalize,
            ..
        } => {
            let mut steps = vec![step(
                "fibration_check",
                vec![("periods", string_arg(periods))],
            )];
            if let Some(gens) = rationalize {
                steps.push(step_with_id(
                    "rationalized",
                    "rationalize_class",
                    vec![
                        ("periods", string_arg(periods)),
                        (
                            "gens",
                            Value::Array(gens.iter().map(string_arg).collect()),
                        ),
                    ],
                ));
                steps.push(step(
                    "fibration_check",
                    vec![("periods", string_arg("rationalized.periods"))],
                ));
            }
            Ok(steps)
        }
        Command::Moment {
            point,
            residual_a,
            samples,
            ..
        } => {
            let toric = model.toric.as_ref().ok_or("model has no toric section")?;
            let mut steps = vec![step("moment_rescale", vec![])];
            if toric.torus_element().is_some() {
                steps.push(step("dense_subgroup_check", vec![]));
                steps.push(step("closed_reeb_orbit_count", vec![]));
            }
            if let Some(spec) = point {
                let coords = parse_point(spec)?;
                steps.push(step("cpn_moment", vec![("point", coords)]));
            }
            if let Some(a) = residual_a {
                steps.push(step(
                    "moment_condition_residual",
                    vec![
                        (
                            "A",
                            Value::Array(a.iter().map(|&x| Value::from(x)).collect()),
                        ),
                        ("samples", Value::from(*samples as u64)),
                    ],
                ));
            }
            Ok(steps)
        }
    }
}

/// "re,im;re,im;…" into the JSON point encoding.
fn parse_point(spec: &str) -> Result<Value, String> {
    let coords: Vec<Value> = spec
        .split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [re] => Ok(Value::Array(vec![string_arg(*re), string_arg("0")])),
                [re, im] => Ok(Value::Array(vec![string_arg(*re), string_arg(*im)])),
                _ => Err(format!("bad coordinate '{pair}' (use re,im)")),
            }
        })
        .collect::<Result<_, String>>()?;
    Ok(Value::Array(coords))
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => print!("{}", report.to_json_string()),
        Format::Text => print!("{}", report.to_text()),
    }
}

/// Optional report archive directory (`COSYM_REPORT_DIR`).
fn archive_report(report: &Report, model_path: &std::path::Path) {
    let Ok(dir) = std::env::var("COSYM_REPORT_DIR") else {
        return;
    };
    let stem = model_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("model");
    let name = if report.label.is_empty() {
        stem
    } else {
        &report.label
    };
    let path = PathBuf::from(dir).join(format!("{name}.report.json"));
    if let Err(err) = std::fs::write(&path, report.to_json_string()) {
        eprintln!("warning: cannot write report to {}: {err}", path.display());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let model_path = match &cli.command {
        Command::Check { model, .. }
        | Command::Deform { model, .. }
        | Command::Betti { model, .. }
        | Command::Fibration { model, .. }
        | Command::Moment { model, .. }
        | Command::Run { model } => model.model.clone(),
    };
    let model = match load_model(&model_path) {
        Ok(m) => m,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    let steps = match build_steps(&cli.command, &model) {
        Ok(steps) => steps,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let scenario_model = ModelFile {
        scenario: steps,
        ..model
    };
    if !matches!(cli.command, Command::Run { .. }) {
        // `run` scenarios were validated at load time
        if let Err(err) = validate_steps(&scenario_model, &scenario_model.scenario) {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    }
    let report = run_scenario(&scenario_model, RunOptions { seed: cli.seed });
    emit(&report, cli.format);
    archive_report(&report, &model_path);
    if report.overall_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
