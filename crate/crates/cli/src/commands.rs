use std::fs;
use std::path::{Path, PathBuf};

use liesym::expr::{parse_expr, Expr};
use liesym::lie::{reduce_autonomous, AutonomousOde3, Generator, OdeFile, OdeSpec, Reduction};
use liesym::numeric::{integrate, sample_sweep, write_csv, ResidualEvaluator, System3State};
use liesym::solver::{analyze, AnalysisConfig, Assignments, SolverError, Specialize};
use liesym::{Params, VarNames};

use crate::config::{
    assignments, float_assignments, AnalyzeConfig, Binding, IntegrateConfig, OutputFormat,
    Reduce3Config, RunConfig, SweepConfig,
};
use crate::error::{CliError, Exit};
use crate::report::{compare_reference, AnalysisReport};

/// Output of a command: the document, the exit status it implies, and
/// diagnostics for stderr.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub content: String,
    pub exit: Exit,
    pub warnings: Vec<String>,
}

impl Artifact {
    fn ok(content: String) -> Self {
        Artifact {
            content,
            exit: Exit::Ok,
            warnings: Vec::new(),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn load_file(path: &Path) -> Result<OdeFile, CliError> {
    OdeFile::parse(&read(path)?).map_err(|e| CliError::ode_file(path, e))
}

fn binding_pairs(bindings: &[Binding]) -> Result<Vec<(String, String)>, CliError> {
    Ok(assignments(bindings)?
        .into_iter()
        .map(|(k, v)| (k, v.to_string()))
        .collect())
}

fn check_declared(values: &Assignments, params: &[liesym::expr::Symbol]) -> Result<(), CliError> {
    match values.keys().find(|k| !params.iter().any(|p| &**p == k.as_str())) {
        Some(k) => Err(SolverError::UnknownParameter(k.clone()).into()),
        None => Ok(()),
    }
}

/// Loads a second-order spec and applies the bindings to it.
fn load_spec(path: &Path, bindings: &[Binding]) -> Result<(OdeSpec, OdeSpec), CliError> {
    let file = load_file(path)?;
    let spec = file.to_spec().map_err(|e| CliError::ode_file(path, e))?;
    let bound = spec.specialize_params(&assignments(bindings)?)?;
    Ok((spec, bound))
}

/// Runs the full symmetry analysis and renders the report.
///
/// Parameters bound with `--bind` are substituted into the ODE before the
/// determining system is derived.
pub fn run_analyze(cfg: &AnalyzeConfig) -> Result<Artifact, CliError> {
    let (generic, spec) = load_spec(&cfg.ode_path, &cfg.bindings)?;
    let config = AnalysisConfig {
        deg_x: cfg.deg_x,
        deg_t: cfg.deg_t,
    };
    let analysis = analyze(&spec, config)?;
    let references = match &cfg.reference {
        None => Vec::new(),
        Some(path) => {
            let values = assignments(&cfg.bindings)?;
            let symbols = generic.symbols();
            let parse = |text: &str| -> Result<_, String> {
                parse_expr(text, &symbols)
                    .map_err(|e| e.to_string())?
                    .specialize_params(&values)
                    .map_err(|e| e.to_string())
            };
            compare_reference(&read(path)?, &analysis, parse).map_err(|msg| {
                CliError::Reference {
                    path: path.clone(),
                    msg,
                }
            })?
        }
    };
    let report = AnalysisReport::new(
        cfg.ode_path.display().to_string(),
        binding_pairs(&cfg.bindings)?,
        analysis,
        references,
    )?;
    let content = match cfg.format {
        OutputFormat::Text => report.to_text(),
        OutputFormat::Latex => report.to_latex(),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report.to_json())
                .expect("report values serialize");
            s.push('\n');
            s
        }
    };
    let mut artifact = Artifact::ok(content);
    if !report.verification_passed() {
        artifact.exit = Exit::InvariantViolation;
        artifact
            .warnings
            .push("basis verification failed; see the Basis section of the report".into());
    }
    Ok(artifact)
}

/// Reduces an autonomous third-order ODE and returns the reduced spec file.
pub fn reduce3(path: &Path, bindings: &[Binding]) -> Result<(Reduction, String), CliError> {
    let file = load_file(path)?;
    let ode3 = AutonomousOde3::from_file(&file).map_err(|e| CliError::ode_file(path, e))?;
    let values = assignments(bindings)?;
    check_declared(&values, ode3.params())?;
    let ode3 = if values.is_empty() {
        ode3
    } else {
        let params = ode3
            .params()
            .iter()
            .filter(|p| !values.contains_key(&***p))
            .cloned()
            .collect();
        AutonomousOde3::new(
            ode3.lhs().specialize_params(&values)?,
            params,
            ode3.names().clone(),
        )?
    };
    let red = reduce_autonomous(&ode3)?;
    let VarNames { indep: y, dep: z } = red.spec.names().clone();
    let t = &ode3.names().indep;
    let mut comments = vec![
        format!("reduction of {}", path.display()),
        format!("{z}({y}) = d{y}/d{t}"),
    ];
    for (k, v) in binding_pairs(bindings)? {
        comments.push(format!("bound {k} = {v}"));
    }
    comments.push(format!("{} = 0", red.equation.display_with(red.spec.names())));
    if red.removed_z_power > 0 {
        comments.push(format!(
            "branch {z} != 0: the factor {} was divided out",
            Expr::jet(0)
                .pow(red.removed_z_power)
                .expect("small power")
                .display_with(red.spec.names())
        ));
    }
    let text = red.spec.to_file_string(&comments);
    Ok((red, text))
}

pub fn run_reduce3(cfg: &Reduce3Config) -> Result<Artifact, CliError> {
    let (_, text) = reduce3(&cfg.ode_path, &cfg.bindings)?;
    Ok(Artifact::ok(text))
}

fn required(values: &std::collections::BTreeMap<String, f64>, name: &str) -> Result<f64, CliError> {
    values
        .get(name)
        .copied()
        .ok_or_else(|| liesym::numeric::NumericError::Unbound(name.into()).into())
}

pub fn run_integrate(cfg: &IntegrateConfig) -> Result<Artifact, CliError> {
    let values = float_assignments(&cfg.bindings)?;
    if let Some(k) = values.keys().find(|k| !matches!(k.as_str(), "a" | "b")) {
        return Err(SolverError::UnknownParameter(k.clone()).into());
    }
    let params = Params {
        a: required(&values, "a")?,
        b: required(&values, "b")?,
        step: cfg.step,
        t_end: cfg.t_end - cfg.t0,
    };
    let [x, y, z] = cfg.init;
    let traj = integrate(&params, System3State::new(cfg.t0, x, y, z))?;
    let mut buf = Vec::new();
    write_csv(&traj, &mut buf).expect("writing to memory");
    let mut artifact = Artifact::ok(String::from_utf8(buf).expect("CSV is ASCII"));
    if let Some(reason) = traj.truncated {
        let last = traj.last();
        artifact.warnings.push(format!(
            "trajectory truncated ({reason:?}) after t = {}",
            last.t
        ));
    }
    Ok(artifact)
}

pub fn run_residual_sweep(cfg: &SweepConfig) -> Result<Artifact, CliError> {
    let file = load_file(&cfg.ode_path)?;
    let spec = file.to_spec().map_err(|e| CliError::ode_file(&cfg.ode_path, e))?;
    let values = float_assignments(&cfg.bindings)?;
    check_declared(&assignments(&cfg.bindings)?, spec.params())?;
    let symbols = spec.symbols();
    let component = |what: &str, text: &str| {
        parse_expr(text, &symbols).map_err(|e| CliError::Argument(format!("--{what}: {e}")))
    };
    let g = Generator::new(component("xi", &cfg.xi)?, component("eta", &cfg.eta)?)?;
    let eval = ResidualEvaluator::new(&spec, &g, &values)?;
    let report = sample_sweep(&eval, cfg.samples, cfg.seed, &cfg.sample_box())?;
    let mut s = serde_json::to_string_pretty(&report).expect("sweep report serializes");
    s.push('\n');
    Ok(Artifact::ok(s))
}

pub fn run_command(cfg: &RunConfig) -> Result<Artifact, CliError> {
    match cfg {
        RunConfig::Analyze(c) => run_analyze(c),
        RunConfig::Reduce3(c) => run_reduce3(c),
        RunConfig::Integrate(c) => run_integrate(c),
        RunConfig::ResidualSweep(c) => run_residual_sweep(c),
    }
}

fn out_path(cfg: &RunConfig) -> Option<&PathBuf> {
    match cfg {
        RunConfig::Analyze(c) => c.out.as_ref(),
        RunConfig::Reduce3(c) => c.out.as_ref(),
        RunConfig::Integrate(c) => c.out.as_ref(),
        RunConfig::ResidualSweep(c) => c.out.as_ref(),
    }
}

/// Runs the command, writes the artifact to `--out` or stdout, reports
/// diagnostics on stderr and returns the exit status.
pub fn run(cfg: &RunConfig) -> Exit {
    let result = run_command(cfg).and_then(|artifact| {
        match out_path(cfg) {
            Some(path) => fs::write(path, &artifact.content).map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            })?,
            None => print!("{}", artifact.content),
        }
        Ok(artifact)
    });
    match result {
        Ok(artifact) => {
            for w in &artifact.warnings {
                eprintln!("warning: {w}");
            }
            artifact.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit()
        }
    }
}
