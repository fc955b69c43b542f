//! Writers for meshes and verification reports.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips every `f64` exactly.

use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::config::RunConfig;
use crate::error::{Result, TorusError};
use crate::mesh::{generate_mesh, stereographic_project, Domain, SurfaceMesh};
use crate::periodicity::{closure_check, period_quadrature, ClosureReport, PeriodResult};

pub const CSV_HEADER: &str = "phi1,phi2,theta,x1,x2,x3,x4";

/// Points used for the closure check in a report.
const CLOSURE_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExportFormat {
    Obj,
    Csv,
    JsonReport,
}

impl FromStr for ExportFormat {
    type Err = TorusError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(Self::Obj),
            "csv" => Ok(Self::Csv),
            "json" | "json-report" => Ok(Self::JsonReport),
            other => Err(TorusError::InvalidParams(format!(
                "unknown format '{other}' (expected obj, csv or json-report)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub k: i32,
    pub l: i32,
    pub e: f64,
    #[serde(rename = "E")]
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub params: ReportParams,
    pub grid: [usize; 2],
    pub tol: f64,
    pub domain: Domain,
    pub max_minimality_residual: f64,
    pub max_energy_residual: f64,
    #[serde(rename = "gaussian_R_max_abs")]
    pub gaussian_r_max_abs: f64,
    pub max_sphere_defect: f64,
    pub period: PeriodResult,
    pub closure: Option<ClosureReport>,
    /// Residual bound applied by [`VerifyReport::passed`]: `max(1e3·tol, 1e-12)`.
    pub residual_bound: f64,
    pub passed: bool,
}

impl VerifyReport {
    pub fn from_mesh(mesh: &SurfaceMesh) -> Result<Self> {
        let md = &mesh.metadata;
        let d = &mesh.diagnostics;
        let period = period_quadrature(md.k, md.l, md.e, (md.tol * 1e-2).max(1e-14))?;
        let closure = match md.closure {
            Some((p, q)) => Some(closure_check(md.k, md.l, md.e, p, q, CLOSURE_SAMPLES)?),
            None => None,
        };
        let residual_bound = (1e3 * md.tol).max(1e-12);
        let passed = d.max_minimality_residual <= residual_bound
            && d.max_energy_residual <= residual_bound
            && closure.is_none_or(|c| c.closes);
        Ok(Self {
            params: ReportParams {
                k: md.k,
                l: md.l,
                e: md.e,
                energy: md.energy,
            },
            grid: [mesh.n1, mesh.n2],
            tol: md.tol,
            domain: md.domain,
            max_minimality_residual: d.max_minimality_residual,
            max_energy_residual: d.max_energy_residual,
            gaussian_r_max_abs: d.gaussian_r_max_abs,
            max_sphere_defect: d.max_sphere_defect,
            period,
            closure,
            residual_bound,
            passed,
        })
    }
}

/// Builds the mesh for `config` and summarises its residuals, period and
/// closure.
pub fn verify_run(config: &RunConfig) -> Result<VerifyReport> {
    VerifyReport::from_mesh(&generate_mesh(config)?)
}

pub fn write_obj<W: Write>(mesh: &SurfaceMesh, pole: &[f64; 4], out: &mut W) -> Result<()> {
    for y in stereographic_project(&mesh.vertices, pole)? {
        writeln!(out, "v {:.16e} {:.16e} {:.16e}", y[0], y[1], y[2])?;
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1)?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(mesh: &SurfaceMesh, out: &mut W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for (c, x) in mesh.coords.iter().zip(&mesh.vertices) {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            c[0], c[1], c[2], x[0], x[1], x[2], x[3]
        )?;
    }
    Ok(())
}

pub fn write_report<W: Write>(report: &VerifyReport, out: &mut W) -> Result<()> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| TorusError::Io(format!("serialising report: {e}")))?;
    out.write_all(json.as_bytes())?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Writes `mesh` to `out` in `format`; OBJ vertices are projected from
/// `pole`.
pub fn write_mesh<W: Write>(
    mesh: &SurfaceMesh,
    format: ExportFormat,
    pole: &[f64; 4],
    out: &mut W,
) -> Result<()> {
    match format {
        ExportFormat::Obj => write_obj(mesh, pole, out),
        ExportFormat::Csv => write_csv(mesh, out),
        ExportFormat::JsonReport => write_report(&VerifyReport::from_mesh(mesh)?, out),
    }
}

/// [`write_mesh`] into a file at `path`.
pub fn export(
    mesh: &SurfaceMesh,
    format: ExportFormat,
    path: &Path,
    pole: &[f64; 4],
) -> Result<()> {
    let file =
        File::create(path).map_err(|e| TorusError::Io(format!("{}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    write_mesh(mesh, format, pole, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Parses the `v` and `f` lines of an OBJ file written by [`write_obj`].
pub fn parse_obj(text: &str) -> Result<(Vec<[f64; 3]>, Vec<Vec<usize>>)> {
    let bad = |line: &str| TorusError::Io(format!("malformed OBJ line: {line}"));
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for line in text.lines() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let v: Vec<f64> = parts
                    .map(|p| p.parse::<f64>().map_err(|_| bad(line)))
                    .collect::<Result<_>>()?;
                let [x, y, z] = v[..] else {
                    return Err(bad(line));
                };
                vertices.push([x, y, z]);
            }
            Some("f") => faces.push(
                parts
                    .map(|p| p.parse::<usize>().map_err(|_| bad(line)))
                    .collect::<Result<_>>()?,
            ),
            None => {}
            Some(_) => return Err(bad(line)),
        }
    }
    Ok((vertices, faces))
}
