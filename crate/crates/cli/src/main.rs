mod args;

use clap::Parser;
use serde::Serialize;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use minimal_tori::clifford::{verify_isometry, CliffordParams};
use minimal_tori::config::RunConfig;
use minimal_tori::export::{self, ExportFormat};
use minimal_tori::mesh::generate_mesh;
use minimal_tori::periodicity::{
    period_elliptic, period_quadrature, search_rational_period, PeriodResult,
};
use minimal_tori::{Result, TorusError};

use args::{Cli, Command, SearchArgs, TorusArgs};

const ISOMETRY_SAMPLES: usize = 10_000;

fn exit_code(err: &TorusError) -> u8 {
    match err {
        TorusError::Tolerance(_) => 3,
        TorusError::Io(_) => 1,
        _ => 2,
    }
}

fn open_out(path: Option<&std::path::Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| TorusError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, path: Option<&std::path::Path>) -> Result<()> {
    let mut out = open_out(path)?;
    let text = serde_json::to_string_pretty(value).map_err(|e| TorusError::Io(e.to_string()))?;
    writeln!(out, "{text}")?;
    out.flush()?;
    Ok(())
}

fn write_mesh(config: &RunConfig, format: ExportFormat) -> Result<()> {
    let mesh = generate_mesh(config)?;
    let mut out = open_out(config.out.as_deref())?;
    export::write_mesh(&mesh, format, &config.pole, &mut out)?;
    out.flush()?;
    Ok(())
}

fn embed(args: &TorusArgs) -> Result<()> {
    let config = args.config()?;
    let format = match args.format.as_deref() {
        Some(f) => f.parse()?,
        None => ExportFormat::Csv,
    };
    write_mesh(&config, format)
}

fn mesh(args: &TorusArgs) -> Result<()> {
    let config = args.config()?;
    let format = match args.format.as_deref() {
        Some(f) => f.parse()?,
        None => ExportFormat::Obj,
    };
    write_mesh(&config, format)
}

fn verify(args: &TorusArgs) -> Result<()> {
    let config = args.config()?;
    let report = export::verify_run(&config)?;
    write_json(&report, config.out.as_deref())?;
    if !report.passed {
        return Err(TorusError::Tolerance(format!(
            "residuals exceed {:.1e} or the torus does not close",
            report.residual_bound
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct PeriodOutput {
    quadrature: PeriodResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    elliptic: Option<PeriodResult>,
}

fn period(args: &TorusArgs) -> Result<()> {
    let config = args.config()?;
    let params = config.params()?;
    let e = config.deformation()?;
    let quadrature = period_quadrature(params.k(), params.l(), e, config.tol)?;
    let elliptic = if (params.k(), params.l()) == (0, 1) && !params.is_clifford_point() {
        Some(period_elliptic(params.energy())?)
    } else {
        None
    };
    write_json(
        &PeriodOutput {
            quadrature,
            elliptic,
        },
        config.out.as_deref(),
    )
}

fn search(args: &SearchArgs) -> Result<()> {
    let found = search_rational_period(args.k, args.l, args.p, args.q, args.tol)?;
    write_json(&found, args.out.as_deref())
}

#[derive(Serialize)]
struct IsometryOutput {
    k: i32,
    e: f64,
    samples: usize,
    max_deviation: f64,
}

fn isometry(args: &TorusArgs) -> Result<()> {
    let config = args.config()?;
    let params = config.params()?;
    if params.k() != params.l() {
        return Err(TorusError::InvalidParams(format!(
            "the explicit isometry needs k = l, got ({}, {})",
            params.k(),
            params.l()
        )));
    }
    let cp = CliffordParams::new(config.deformation()?, 0.0, params.k())?;
    let max_deviation = verify_isometry(&cp, ISOMETRY_SAMPLES)?;
    write_json(
        &IsometryOutput {
            k: cp.k,
            e: cp.e,
            samples: ISOMETRY_SAMPLES,
            max_deviation,
        },
        config.out.as_deref(),
    )?;
    if max_deviation > (10.0 * config.tol).max(1e-12) {
        return Err(TorusError::Tolerance(format!(
            "isometry deviation {max_deviation:.3e} exceeds tolerance"
        )));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Embed(a) => embed(a),
        Command::Verify(a) => verify(a),
        Command::Period(a) => period(a),
        Command::Search(a) => search(a),
        Command::Isometry(a) => isometry(a),
        Command::Mesh(a) => mesh(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
