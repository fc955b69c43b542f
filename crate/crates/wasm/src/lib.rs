//! Browser bindings: the period curve, a stereographically projected mesh
//! and θ over one oscillation.

use wasm_bindgen::prelude::*;

use minimal_tori::config::{RunConfig, DEFAULT_POLE};
use minimal_tori::mechanics::{integrate_theta, TorusParams};
use minimal_tori::mesh::{generate_mesh, stereographic_project, Domain};
use minimal_tori::periodicity::period_quadrature;
use minimal_tori::{Result, ThetaSource, TorusError};

fn js(err: TorusError) -> JsValue {
    JsValue::from_str(&err.to_string())
}

/// `(e, δ/π)` pairs for `n` values of e spaced evenly in `asinh e` on
/// `[0, e_max]`, flattened.
pub fn period_curve_samples(k: i32, l: i32, e_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(e_max > 0.0) {
        return Err(TorusError::InvalidParams(format!(
            "need n >= 2 and e_max > 0, got {n}, {e_max}"
        )));
    }
    let top = e_max.asinh();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let e = (top * i as f64 / (n - 1) as f64).sinh();
        out.push(e);
        out.push(period_quadrature(k, l, e, 1e-10)?.ratio_to_pi);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn period_curve(
    k: i32,
    l: i32,
    e_max: f64,
    n: usize,
) -> std::result::Result<Vec<f64>, JsValue> {
    period_curve_samples(k, l, e_max, n).map_err(js)
}

/// A mesh projected to ℝ³ from the pole `(0, 0, 0, −1)`.
#[wasm_bindgen]
pub struct ProjectedMesh {
    positions: Vec<f64>,
    n1: usize,
    n2: usize,
    closed: bool,
    max_residual: f64,
}

#[wasm_bindgen]
impl ProjectedMesh {
    /// Flattened `x, y, z` triples; vertex `(i, j)` starts at `3(i·n₂ + j)`.
    #[wasm_bindgen(getter)]
    pub fn positions(&self) -> Vec<f64> {
        self.positions.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn n1(&self) -> usize {
        self.n1
    }

    #[wasm_bindgen(getter)]
    pub fn n2(&self) -> usize {
        self.n2
    }

    /// Whether the second grid direction wraps around.
    #[wasm_bindgen(getter)]
    pub fn closed(&self) -> bool {
        self.closed
    }

    #[wasm_bindgen(getter)]
    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }
}

pub fn build_projected_mesh(k: i32, l: i32, e: f64, n1: usize, n2: usize) -> Result<ProjectedMesh> {
    let config = RunConfig::with_deformation(k, l, e).grid(n1, n2).tol(1e-9);
    let mesh = generate_mesh(&config)?;
    let positions = stereographic_project(&mesh.vertices, &DEFAULT_POLE)?
        .into_iter()
        .flatten()
        .collect();
    Ok(ProjectedMesh {
        positions,
        n1: mesh.n1,
        n2: mesh.n2,
        closed: mesh.metadata.domain == Domain::Closed,
        max_residual: mesh.diagnostics.max_minimality_residual,
    })
}

#[wasm_bindgen]
pub fn projected_mesh(
    k: i32,
    l: i32,
    e: f64,
    n1: usize,
    n2: usize,
) -> std::result::Result<ProjectedMesh, JsValue> {
    build_projected_mesh(k, l, e, n1, n2).map_err(js)
}

/// `(t, θ)` pairs at `n` evenly spaced times over one oscillation.
pub fn theta_profile_samples(k: i32, l: i32, e: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(TorusError::InvalidParams(format!("need n >= 2, got {n}")));
    }
    let params = TorusParams::from_deformation(k, l, e)?;
    let profile = integrate_theta(&params, 0.0, 1e-10)?;
    let period = profile.period();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let t = period * i as f64 / (n - 1) as f64;
        out.push(t);
        out.push(profile.jet(t).theta);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn theta_profile(k: i32, l: i32, e: f64, n: usize) -> std::result::Result<Vec<f64>, JsValue> {
    theta_profile_samples(k, l, e, n).map_err(js)
}
