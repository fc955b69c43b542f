//! Sampling a torus on a lattice of its parameter plane and projecting it
//! to ℝ³.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::clifford::{closed_embedding, CliffordParams, ClosedFormTheta};
use crate::config::RunConfig;
use crate::error::{Result, TorusError};
use crate::mechanics::{
    integrate_theta_with, potential, ProfileOptions, ThetaProfile, TorusParams,
};
use crate::periodicity::{bezout_i32, closing_shift, period_quadrature};
use crate::surface::{curvature_report, embed_point, SurfaceChart, ThetaSource};

/// Distance below which a vertex counts as sitting on the projection pole.
pub const POLE_EXCLUSION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Both lattice directions wrap: a closed torus.
    Closed,
    /// One θ-oscillation; the second direction does not wrap.
    OpenStrip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshMetadata {
    pub k: i32,
    pub l: i32,
    pub e: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    pub closure: Option<(i64, i64)>,
    pub domain: Domain,
    /// Integrator tolerance the mesh was built with.
    pub tol: f64,
    /// Lattice generators in (φ¹, φ²); vertex `(i, j)` sits at
    /// `(i/n₁) V₁ + (j/n₂) V₂`, or `j/(n₂ − 1)` for an open strip.
    pub lattice: [[f64; 2]; 2],
}

/// Largest residuals observed over the vertices.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MeshDiagnostics {
    pub max_minimality_residual: f64,
    pub max_energy_residual: f64,
    #[serde(rename = "gaussian_R_max_abs")]
    pub gaussian_r_max_abs: f64,
    pub max_sphere_defect: f64,
}

/// A sampled torus on S³; vertex `(i, j)` is stored at `i·n₂ + j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMesh {
    pub vertices: Vec<[f64; 4]>,
    /// `(φ¹, φ², θ)` of each vertex.
    pub coords: Vec<[f64; 3]>,
    pub n1: usize,
    pub n2: usize,
    pub faces: Vec<[usize; 4]>,
    pub metadata: MeshMetadata,
    pub diagnostics: MeshDiagnostics,
}

impl SurfaceMesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }
}

struct Layout {
    lattice: [[f64; 2]; 2],
    domain: Domain,
}

fn layout(params: &TorusParams, closure: Option<(i64, i64)>, period: f64) -> Result<Layout> {
    let (k, l) = (params.k(), params.l());
    if k == l || params.is_clifford_point() {
        return Ok(Layout {
            lattice: [[TAU, 0.0], [0.0, TAU]],
            domain: Domain::Closed,
        });
    }
    let (x, y, g) = bezout_i32(k, l);
    let gf = g as f64;
    let v1 = [TAU * l as f64 / gf, -TAU * k as f64 / gf];
    match closure {
        Some((p, q)) => {
            let (_, shift) = closing_shift(k, l, p, q)?;
            Ok(Layout {
                lattice: [v1, shift],
                domain: Domain::Closed,
            })
        }
        None => Ok(Layout {
            lattice: [v1, [period * x as f64 / gf, period * y as f64 / gf]],
            domain: Domain::OpenStrip,
        }),
    }
}

/// Samples the configured torus.
///
/// `k = l` tori use the closed form; others integrate θ across the whole
/// lattice. With closure data `(p, q)` the period must equal `(p/q)π` to
/// within `max(1e3·tol, 1e-8)` and the lattice spans the closed torus;
/// without it the mesh is an open strip covering one oscillation.
pub fn generate_mesh(config: &RunConfig) -> Result<SurfaceMesh> {
    let params = config.params()?;
    let (n1, n2) = config.grid;
    if n1 < 3 || n2 < 3 {
        return Err(TorusError::InvalidParams(format!(
            "grid {n1}×{n2} must be at least 3×3"
        )));
    }
    let e = config.deformation()?;
    let (k, l) = (params.k(), params.l());
    let closed_form = k == l;
    let trivially_closed = closed_form || params.is_clifford_point();

    let period = if trivially_closed {
        PI * (k.abs() + l.abs()) as f64
    } else {
        period_quadrature(k, l, e, (config.tol * 1e-2).max(1e-14))?.delta_phi2
    };
    if let (Some((p, q)), false) = (config.closure, trivially_closed) {
        let target = p as f64 / q as f64 * PI;
        let slack = (1e3 * config.tol).max(1e-8);
        if (period - target).abs() > slack {
            return Err(TorusError::Tolerance(format!(
                "period {period} differs from ({p}/{q})π = {target} by {:.3e}; the torus does not close",
                (period - target).abs()
            )));
        }
    }
    let lay = layout(&params, config.closure, period)?;
    let metadata = MeshMetadata {
        k,
        l,
        e,
        energy: params.energy(),
        closure: config.closure,
        domain: lay.domain,
        tol: config.tol,
        lattice: lay.lattice,
    };

    if closed_form {
        let cp = CliffordParams::new(e, 0.0, k)?;
        let chart = SurfaceChart::new(ClosedFormTheta::new(cp), k, k);
        build(&chart, &params, n1, n2, metadata, |p1, p2| {
            closed_embedding(p1, p2, &cp).x
        })
    } else {
        let profile = if params.is_clifford_point() {
            ThetaProfile::constant(params)
        } else {
            let t_max =
                lay.lattice[1][0].abs() * k.abs() as f64 + lay.lattice[1][1].abs() * l.abs() as f64;
            let opts = ProfileOptions::with_tol(config.tol);
            integrate_theta_with(&params, t_max + 1.0, &opts)?
        };
        let chart = SurfaceChart::from_profile(&profile);
        build(&chart, &params, n1, n2, metadata, |p1, p2| {
            embed_point(p1, p2, &chart).x
        })
    }
}

fn build<S, F>(
    chart: &SurfaceChart<S>,
    params: &TorusParams,
    n1: usize,
    n2: usize,
    metadata: MeshMetadata,
    embed: F,
) -> Result<SurfaceMesh>
where
    S: ThetaSource + Sync,
    F: Fn(f64, f64) -> [f64; 4] + Sync,
{
    let open = metadata.domain == Domain::OpenStrip;
    let [v1, v2] = metadata.lattice;
    let step2 = if open { (n2 - 1) as f64 } else { n2 as f64 };

    let row = |i: usize| -> Result<Vec<([f64; 4], [f64; 3], MeshDiagnostics)>> {
        let a = i as f64 / n1 as f64;
        (0..n2)
            .map(|j| {
                let b = j as f64 / step2;
                let p1 = a * v1[0] + b * v2[0];
                let p2 = a * v1[1] + b * v2[1];
                let x = embed(p1, p2);
                let jet = chart.source().jet(chart.wave_variable(p1, p2));
                let report = curvature_report(p1, p2, chart)?;
                let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                let diag = MeshDiagnostics {
                    max_minimality_residual: report.mean_curvature_residual.abs(),
                    max_energy_residual: (jet.theta_dot * jet.theta_dot
                        + potential(jet.theta, params))
                    .abs(),
                    gaussian_r_max_abs: report.gaussian_r.abs(),
                    max_sphere_defect: (norm - 1.0).abs(),
                };
                Ok((x, [p1, p2, jet.theta], diag))
            })
            .collect()
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<_> = (0..n1).into_par_iter().map(row).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<_> = (0..n1).map(row).collect();

    let mut vertices = Vec::with_capacity(n1 * n2);
    let mut coords = Vec::with_capacity(n1 * n2);
    let mut diagnostics = MeshDiagnostics::default();
    for row in rows {
        for (x, c, d) in row? {
            vertices.push(x);
            coords.push(c);
            diagnostics.max_minimality_residual = diagnostics
                .max_minimality_residual
                .max(d.max_minimality_residual);
            diagnostics.max_energy_residual =
                diagnostics.max_energy_residual.max(d.max_energy_residual);
            diagnostics.gaussian_r_max_abs =
                diagnostics.gaussian_r_max_abs.max(d.gaussian_r_max_abs);
            diagnostics.max_sphere_defect = diagnostics.max_sphere_defect.max(d.max_sphere_defect);
        }
    }
    if diagnostics.max_sphere_defect > 1e-10 {
        return Err(TorusError::Tolerance(format!(
            "vertex off the unit sphere by {:.3e}",
            diagnostics.max_sphere_defect
        )));
    }

    let j_faces = if open { n2 - 1 } else { n2 };
    let mut faces = Vec::with_capacity(n1 * j_faces);
    for i in 0..n1 {
        let i1 = (i + 1) % n1;
        for j in 0..j_faces {
            let j1 = (j + 1) % n2;
            faces.push([i * n2 + j, i1 * n2 + j, i1 * n2 + j1, i * n2 + j1]);
        }
    }
    Ok(SurfaceMesh {
        vertices,
        coords,
        n1,
        n2,
        faces,
        metadata,
        diagnostics,
    })
}

/// Orthonormal basis of the hyperplane orthogonal to `pole`, taken from the
/// standard basis by Gram–Schmidt.
fn tangent_basis(pole: &[f64; 4]) -> [[f64; 4]; 3] {
    let mut basis: Vec<[f64; 4]> = Vec::with_capacity(3);
    for axis in 0..4 {
        let mut v = [0.0; 4];
        v[axis] = 1.0;
        for u in std::iter::once(pole).chain(basis.iter()) {
            let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= d * ui;
            }
        }
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 0.5 {
            basis.push(v.map(|c| c / n));
        }
        if basis.len() == 3 {
            break;
        }
    }
    [basis[0], basis[1], basis[2]]
}

fn check_pole(pole: &[f64; 4]) -> Result<()> {
    let n = pole.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !((n - 1.0).abs() <= 1e-12) {
        return Err(TorusError::InvalidParams(format!(
            "pole must be a unit vector, |pole| = {n}"
        )));
    }
    Ok(())
}

/// `x′ᵢ = bᵢ·x / (1 − x·pole)` with `bᵢ` an orthonormal basis of `pole⊥`.
/// For the default pole `(0, 0, 0, −1)` this is `(x₁, x₂, x₃)/(1 + x₄)`.
pub fn stereographic_project(points: &[[f64; 4]], pole: &[f64; 4]) -> Result<Vec<[f64; 3]>> {
    check_pole(pole)?;
    let basis = tangent_basis(pole);
    points
        .iter()
        .map(|x| {
            let dist = x
                .iter()
                .zip(pole)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if dist < POLE_EXCLUSION {
                return Err(TorusError::PoleProximity(format!(
                    "vertex {x:?} lies within {dist:.3e} of the pole"
                )));
            }
            let denom = 1.0 - x.iter().zip(pole).map(|(a, b)| a * b).sum::<f64>();
            Ok(basis.map(|b| b.iter().zip(x).map(|(u, v)| u * v).sum::<f64>() / denom))
        })
        .collect()
}

/// Inverse of [`stereographic_project`].
pub fn stereographic_lift(points: &[[f64; 3]], pole: &[f64; 4]) -> Result<Vec<[f64; 4]>> {
    check_pole(pole)?;
    let basis = tangent_basis(pole);
    Ok(points
        .iter()
        .map(|y| {
            let s = y.iter().map(|c| c * c).sum::<f64>();
            let mut x = pole.map(|p| (s - 1.0) * p);
            for (yi, b) in y.iter().zip(&basis) {
                for (xc, bc) in x.iter_mut().zip(b) {
                    *xc += 2.0 * yi * bc;
                }
            }
            x.map(|c| c / (s + 1.0))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::DEFAULT_POLE;

    #[test]
    fn clifford_mesh_counts_and_radii() {
        let mesh = generate_mesh(&RunConfig::with_deformation(0, 1, 0.0).grid(8, 8)).unwrap();
        assert_eq!(mesh.vertex_count(), 64);
        assert_eq!(mesh.face_count(), 64);
        assert_eq!(mesh.metadata.domain, Domain::Closed);
        for x in &mesh.vertices {
            assert!((x[0] * x[0] + x[1] * x[1] - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn invalid_energy_rejected() {
        let err = generate_mesh(&RunConfig::with_energy(0, 1, 0.7)).unwrap_err();
        assert!(matches!(err, TorusError::InvalidParams(_)));
        let err = generate_mesh(&RunConfig::with_energy(0, 1, 0.4).grid(2, 8)).unwrap_err();
        assert!(matches!(err, TorusError::InvalidParams(_)));
    }

    #[test]
    fn open_strip_without_closure() {
        let mesh = generate_mesh(&RunConfig::with_energy(0, 1, 0.4).grid(8, 10)).unwrap();
        assert_eq!(mesh.metadata.domain, Domain::OpenStrip);
        assert_eq!(mesh.face_count(), 8 * 9);
        // second generator advances t by one period
        let v2 = mesh.metadata.lattice[1];
        let period = period_quadrature(0, 1, mesh.metadata.e, 1e-12)
            .unwrap()
            .delta_phi2;
        assert!((v2[1] - period).abs() < 1e-12);
    }

    #[test]
    fn projection_examples() {
        let y = stereographic_project(&[[1.0, 0.0, 0.0, 0.0]], &DEFAULT_POLE).unwrap();
        assert_eq!(y[0], [1.0, 0.0, 0.0]);
        let x = [0.3f64, -0.4, 0.5, 0.6];
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        let x = x.map(|c| c / r);
        let y = stereographic_project(&[x], &DEFAULT_POLE).unwrap();
        for (a, b) in y[0].iter().zip(&x[..3]) {
            assert!((a - b / (1.0 + x[3])).abs() < 1e-15);
        }
        let back = stereographic_lift(&y, &DEFAULT_POLE).unwrap();
        for (a, b) in back[0].iter().zip(&x) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn pole_on_surface_is_rejected() {
        let mesh = generate_mesh(&RunConfig::with_deformation(1, 1, 0.0).grid(4, 4)).unwrap();
        let pole = mesh.vertices[5];
        assert!(matches!(
            stereographic_project(&mesh.vertices, &pole),
            Err(TorusError::PoleProximity(_))
        ));
        assert!(stereographic_project(&mesh.vertices, &[0.0, 0.0, 0.0, 2.0]).is_err());
    }
}
