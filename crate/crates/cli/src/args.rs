use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use minimal_tori::config::{RunConfig, DEFAULT_POLE};
use minimal_tori::TorusError;

#[derive(Debug, Parser)]
#[command(
    name = "minimal-tori",
    version,
    about = "Travelling-wave minimal tori in S³"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the embedding on a grid and write the raw 4D points (CSV).
    Embed(TorusArgs),
    /// Check minimality, energy conservation and closure; writes a JSON report.
    Verify(TorusArgs),
    /// Period of one θ-oscillation.
    Period(TorusArgs),
    /// Find the deformation with a given rational period (p/q)π.
    Search(SearchArgs),
    /// Deviation of the explicit k = l isometry from the square Clifford torus.
    Isometry(TorusArgs),
    /// Build a mesh and export it as OBJ, CSV or a JSON report.
    Mesh(TorusArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TorusArgs {
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub k: i32,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub l: i32,
    /// Energy E in (0, 1/2].
    #[arg(long = "E", conflicts_with = "e", allow_negative_numbers = true)]
    pub energy: Option<f64>,
    /// Deformation e >= 0.
    #[arg(long = "e", allow_negative_numbers = true)]
    pub e: Option<f64>,
    /// Grid resolution: `N` or `N1xN2`.
    #[arg(long, default_value = "64")]
    pub grid: String,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// obj, csv or json-report.
    #[arg(long)]
    pub format: Option<String>,
    /// Projection pole as four comma-separated components.
    #[arg(long, allow_hyphen_values = true)]
    pub pole: Option<String>,
    /// Rational period `p/q` for a closed torus.
    #[arg(long)]
    pub closure: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub k: i32,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub l: i32,
    #[arg(long, allow_negative_numbers = true)]
    pub p: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub q: i64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn bad(msg: String) -> TorusError {
    TorusError::InvalidParams(msg)
}

pub fn parse_grid(s: &str) -> Result<(usize, usize), TorusError> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| bad(format!("invalid grid size '{s}'")))
    };
    match s.split_once(['x', 'X']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}

pub fn parse_pole(s: &str) -> Result<[f64; 4], TorusError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("invalid pole '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    <[f64; 4]>::try_from(v).map_err(|_| bad(format!("pole '{s}' needs four components")))
}

pub fn parse_ratio(s: &str) -> Result<(i64, i64), TorusError> {
    let (p, q) = s
        .split_once('/')
        .ok_or_else(|| bad(format!("closure '{s}' must look like p/q")))?;
    let num = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| bad(format!("invalid closure '{s}'")))
    };
    Ok((num(p)?, num(q)?))
}

impl TorusArgs {
    pub fn config(&self) -> Result<RunConfig, TorusError> {
        let config = RunConfig {
            k: self.k,
            l: self.l,
            energy: self.energy,
            e: self.e,
            grid: parse_grid(&self.grid)?,
            tol: self.tol,
            out: self.out.clone(),
            pole: self
                .pole
                .as_deref()
                .map(parse_pole)
                .transpose()?
                .unwrap_or(DEFAULT_POLE),
            closure: self.closure.as_deref().map(parse_ratio).transpose()?,
        };
        config.params()?;
        Ok(config)
    }
}
