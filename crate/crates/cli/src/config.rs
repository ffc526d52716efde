use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liesym::expr::parse_rational_number;
use liesym::numeric::{SampleBox, DEFAULT_X_MIN};
use liesym::solver::Assignments;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::CliError;

#[derive(Parser, Debug, Clone)]
#[command(name = "liesym", version, about = "Lie point-symmetry analysis of scalar ODEs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: RunConfig,
}

/// One invocation of the tool.
#[derive(Subcommand, Debug, Clone)]
pub enum RunConfig {
    /// Determining system, polynomial ansatz, elimination and verdict for a second-order ODE.
    Analyze(AnalyzeConfig),
    /// Rewrite an autonomous third-order ODE in y(t) as a second-order ODE for z(y) = y'.
    Reduce3(Reduce3Config),
    /// Integrate x' = y, y' = z, z' = x^3 - a^2 x - y - b z with fixed-step RK4 and write CSV.
    Integrate(IntegrateConfig),
    /// Evaluate the cleared symmetry condition of a concrete generator at seeded random samples.
    ResidualSweep(SweepConfig),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Latex,
    Json,
}

/// `name=value` with an exact rational value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub name: String,
    pub value: BigRational,
}

impl Binding {
    pub fn parse(text: &str) -> Result<Binding, String> {
        let (name, value) = text
            .split_once('=')
            .ok_or_else(|| format!("expected name=value, got `{text}`"))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(format!("invalid parameter name `{name}`"));
        }
        let value = value.trim();
        let exact = parse_rational_number(value).or_else(|| {
            value
                .parse::<f64>()
                .ok()
                .and_then(BigRational::from_float)
        });
        let value = exact.ok_or_else(|| format!("`{value}` is not a finite number"))?;
        Ok(Binding {
            name: name.to_string(),
            value,
        })
    }
}

/// Rejects repeated names and returns the bindings as exact assignments.
pub fn assignments(bindings: &[Binding]) -> Result<Assignments, CliError> {
    let mut out = Assignments::new();
    for b in bindings {
        if out.insert(b.name.clone(), b.value.clone()).is_some() {
            return Err(CliError::Argument(format!("parameter `{}` bound twice", b.name)));
        }
    }
    Ok(out)
}

/// The same assignments in double precision.
pub fn float_assignments(bindings: &[Binding]) -> Result<BTreeMap<String, f64>, CliError> {
    Ok(assignments(bindings)?
        .into_iter()
        .map(|(k, v)| (k, v.to_f64().unwrap_or(f64::NAN)))
        .collect())
}

fn parse_pair(text: &str) -> Result<(f64, f64), String> {
    let v = parse_floats(text)?;
    match v[..] {
        [lo, hi] => Ok((lo, hi)),
        _ => Err(format!("expected lo,hi, got `{text}`")),
    }
}

fn parse_triple(text: &str) -> Result<[f64; 3], String> {
    let v = parse_floats(text)?;
    match v[..] {
        [x, y, z] => Ok([x, y, z]),
        _ => Err(format!("expected x,y,z, got `{text}`")),
    }
}

fn parse_floats(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"))
        })
        .collect()
}

#[derive(Args, Debug, Clone)]
pub struct AnalyzeConfig {
    /// ODE spec file (second order).
    pub ode_path: PathBuf,
    /// Degree in x of the polynomial ansatz for xi and eta.
    #[arg(long, default_value_t = 4)]
    pub deg_x: u32,
    /// Degree in t of every ansatz coefficient function.
    #[arg(long, default_value_t = 6)]
    pub deg_t: u32,
    /// Bind a parameter before deriving the determining system, e.g. --bind b=0.
    #[arg(long = "bind", value_name = "NAME=VALUE", value_parser = Binding::parse)]
    pub bindings: Vec<Binding>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// File with `xdotN = <expr>` lines to compare against the computed determining equations.
    #[arg(long, value_name = "PATH")]
    pub reference: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Reduce3Config {
    /// Autonomous third-order ODE spec file given by `lhs` (and optionally `rhs`).
    pub ode_path: PathBuf,
    /// Bind a parameter before reducing.
    #[arg(long = "bind", value_name = "NAME=VALUE", value_parser = Binding::parse)]
    pub bindings: Vec<Binding>,
    /// Write the reduced spec here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct IntegrateConfig {
    /// Parameter values; both a and b are required.
    #[arg(long = "bind", value_name = "NAME=VALUE", value_parser = Binding::parse)]
    pub bindings: Vec<Binding>,
    /// Initial state x,y,z.
    #[arg(long, value_parser = parse_triple, default_value = "0.1,0,0")]
    pub init: [f64; 3],
    #[arg(long, default_value_t = 0.0)]
    pub t0: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepConfig {
    /// ODE spec file (second order).
    pub ode_path: PathBuf,
    /// Generator component along t.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub xi: String,
    /// Generator component along x.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub eta: String,
    /// Parameter values; every declared parameter must be bound.
    #[arg(long = "bind", value_name = "NAME=VALUE", value_parser = Binding::parse)]
    pub bindings: Vec<Binding>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, value_parser = parse_pair, default_value = "-2,2", allow_hyphen_values = true)]
    pub t_range: (f64, f64),
    #[arg(long, value_parser = parse_pair, default_value = "-2,2", allow_hyphen_values = true)]
    pub x_range: (f64, f64),
    #[arg(long, value_parser = parse_pair, default_value = "-2,2", allow_hyphen_values = true)]
    pub xdot_range: (f64, f64),
    /// Samples with |x| below this floor are redrawn.
    #[arg(long, default_value_t = DEFAULT_X_MIN)]
    pub x_min: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl SweepConfig {
    pub fn sample_box(&self) -> SampleBox {
        SampleBox {
            t: self.t_range,
            x: self.x_range,
            xdot: self.xdot_range,
            x_min: self.x_min,
        }
    }
}
