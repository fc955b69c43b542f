//! The `k = l` family in closed form and its isometry to the square
//! Clifford torus.
//!
//! With `φ = φ¹ + φ²`, `ψ = φ − φ₀`, `Q = 1 + e² sin²ψ` and α(φ) = 2θ:
//!
//! ```text
//! sin α = 1/√Q,   cos α = −e sinψ/√Q,   α′ = e cosψ/Q,
//! α″ = −e sinψ (1 + e² + e² cos²ψ)/Q²
//! ```
//!
//! The profile depends on φ only, so the family is the same for every
//! `k = l ≠ 0`; `k` only rescales the wave variable `t = kφ`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TorusError};
use crate::mechanics::TorusParams;
use crate::numerics::quadrature::{self, QuadOptions};
use crate::surface::{
    embed_with_theta, fundamental_forms, minimality_residual, EmbeddingPoint, SurfaceChart,
    ThetaJet, ThetaSource,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CliffordParams {
    /// Deformation `e = sinh γ`.
    pub e: f64,
    pub phi0: f64,
    /// Common winding number `k = l`.
    pub k: i32,
}

impl CliffordParams {
    pub fn new(e: f64, phi0: f64, k: i32) -> Result<Self> {
        if k == 0 {
            return Err(TorusError::InvalidParams("k = l must be non-zero".into()));
        }
        if !e.is_finite() || !phi0.is_finite() {
            return Err(TorusError::InvalidParams(format!("e = {e}, φ₀ = {phi0}")));
        }
        Ok(Self { e, phi0, k })
    }

    /// The normalisation `k = l = 1`, `φ₀ = 0`.
    pub fn unit(e: f64) -> Result<Self> {
        Self::new(e, 0.0, 1)
    }

    /// `E = 1/(2√(1 + e²))`.
    pub fn energy(&self) -> f64 {
        crate::energy_from_deformation(self.e)
    }

    /// `a = cosh γ = √(1 + e²)`.
    pub fn a(&self) -> f64 {
        self.e.hypot(1.0)
    }

    pub fn torus_params(&self) -> Result<TorusParams> {
        TorusParams::new(self.k, self.k, self.energy())
    }
}

/// α = 2θ and its φ-derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaValue {
    pub alpha: f64,
    pub sin_alpha: f64,
    pub cos_alpha: f64,
    pub alpha_prime: f64,
    pub alpha_double_prime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryData {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    /// `J = ∂φ̃/∂φ = [[1 + u, u], [v, 1 + v]]`.
    pub j: [[f64; 2]; 2],
}

/// `(cos²θ, sin²θ) = ((1 − f)/2, (1 + f)/2)` with `f = e sinψ/√Q`, formed
/// without cancellation for large `|e|`.
fn half_angle_squares(e: f64, psi: f64) -> (f64, f64) {
    let es = e * psi.sin();
    let root_q = es.hypot(1.0);
    // (√Q ∓ es) / (2√Q), with √Q − |es| = 1/(√Q + |es|)
    let small = 1.0 / (2.0 * root_q * (root_q + es.abs()));
    let large = (root_q + es.abs()) / (2.0 * root_q);
    if es >= 0.0 {
        (small, large)
    } else {
        (large, small)
    }
}

pub fn alpha_closed_form(phi: f64, params: &CliffordParams) -> AlphaValue {
    let e = params.e;
    let (s, c) = (phi - params.phi0).sin_cos();
    let q = 1.0 + e * e * s * s;
    let root_q = q.sqrt();
    let sin_alpha = 1.0 / root_q;
    let cos_alpha = -e * s / root_q;
    AlphaValue {
        alpha: sin_alpha.atan2(cos_alpha),
        sin_alpha,
        cos_alpha,
        alpha_prime: e * c / q,
        alpha_double_prime: -e * s * (1.0 + e * e + e * e * c * c) / (q * q),
    }
}

/// θ(t) = α(t/k)/2 as a [`ThetaSource`].
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormTheta {
    params: CliffordParams,
}

impl ClosedFormTheta {
    pub fn new(params: CliffordParams) -> Self {
        Self { params }
    }
}

impl ThetaSource for ClosedFormTheta {
    fn jet(&self, t: f64) -> ThetaJet {
        let k = self.params.k as f64;
        let phi = t / k;
        let a = alpha_closed_form(phi, &self.params);
        let (cos2, sin2) = half_angle_squares(self.params.e, phi - self.params.phi0);
        ThetaJet {
            theta: sin2.sqrt().atan2(cos2.sqrt()),
            theta_dot: a.alpha_prime / (2.0 * k),
            theta_ddot: a.alpha_double_prime / (2.0 * k * k),
        }
    }
}

/// Chart of the closed-form solution for use with the generic surface
/// routines.
pub fn closed_form_chart(params: &CliffordParams) -> SurfaceChart<ClosedFormTheta> {
    SurfaceChart::new(ClosedFormTheta::new(*params), params.k, params.k)
}

/// `x = (√((1−f)/2) (cosφ¹, sinφ¹), √((1+f)/2) (cosφ², sinφ²))`.
pub fn closed_embedding(phi1: f64, phi2: f64, params: &CliffordParams) -> EmbeddingPoint {
    let (cos2, sin2) = half_angle_squares(params.e, phi1 + phi2 - params.phi0);
    let (r1, r2) = (cos2.sqrt(), sin2.sqrt());
    let (s1, c1) = phi1.sin_cos();
    let (s2, c2) = phi2.sin_cos();
    EmbeddingPoint {
        x: [r1 * c1, r1 * s1, r2 * c2, r2 * s2],
    }
}

/// Deterministic low-discrepancy points on `[0, 2π)²` (additive recurrence
/// with the plastic-number increments).
pub fn torus_samples(n: usize) -> impl Iterator<Item = (f64, f64)> {
    const G: f64 = 1.324_717_957_244_746;
    let (a1, a2) = (1.0 / G, 1.0 / (G * G));
    let tau = std::f64::consts::TAU;
    (0..n).map(move |i| {
        let i = i as f64 + 1.0;
        (tau * (0.5 + a1 * i).fract(), tau * (0.5 + a2 * i).fract())
    })
}

/// Largest |minimality residual| of the closed-form chart over `n_samples`
/// quasi-random points.
pub fn verify_minimal_closed_form(params: &CliffordParams, n_samples: usize) -> Result<f64> {
    if n_samples == 0 {
        return Err(TorusError::InvalidParams("n_samples must be >= 1".into()));
    }
    let chart = closed_form_chart(params);
    Ok(torus_samples(n_samples)
        .map(|(p1, p2)| minimality_residual(p1, p2, &chart).abs())
        .fold(0.0, f64::max))
}

/// `(sin α) α″ − 2 α′² cos α − cos α sin² α`, zero along solutions.
pub fn alpha_equation_residual(value: &AlphaValue) -> f64 {
    value.sin_alpha * value.alpha_double_prime
        - 2.0 * value.alpha_prime * value.alpha_prime * value.cos_alpha
        - value.cos_alpha * value.sin_alpha * value.sin_alpha
}

/// `u = ½cos α + w`, `v = −½cos α + w` with `w` the root of
/// `2w² + 2w + ½cos²α = ½α′²` that vanishes at `e = 0`:
///
/// ```text
/// w = ½ (√(1 + e²)/(1 + e² sin²ψ) − 1)
/// ```
///
/// With these, `JᵀJ = 2g`, so `φ ↦ φ̃` is an isometry onto the square torus
/// of radius `1/√2`.
pub fn isometry_functions(phi: f64, params: &CliffordParams) -> IsometryData {
    let e = params.e;
    let a = params.a();
    let s = (phi - params.phi0).sin();
    let q = 1.0 + e * e * s * s;
    // a/Q − 1 = e² (1/(a + 1) − sin²ψ)/Q
    let w = 0.5 * e * e * (1.0 / (a + 1.0) - s * s) / q;
    let cos_alpha = -e * s / q.sqrt();
    let u = 0.5 * cos_alpha + w;
    let v = -0.5 * cos_alpha + w;
    IsometryData {
        u,
        v,
        w,
        j: [[1.0 + u, u], [v, 1.0 + v]],
    }
}

/// `2w² + 2w + ½cos²α − ½α′²`.
pub fn isometry_quadratic_residual(phi: f64, params: &CliffordParams) -> f64 {
    let iso = isometry_functions(phi, params);
    let al = alpha_closed_form(phi, params);
    let w = iso.w;
    2.0 * w * w + 2.0 * w + 0.5 * al.cos_alpha * al.cos_alpha
        - 0.5 * al.alpha_prime * al.alpha_prime
}

fn jtj(j: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            out[a][b] = j[0][a] * j[0][b] + j[1][a] * j[1][b];
        }
    }
    out
}

/// Largest entry of `|2g − JᵀJ|` over `n_samples` points, with g from the
/// generic fundamental-form routine on the closed-form chart.
pub fn verify_isometry(params: &CliffordParams, n_samples: usize) -> Result<f64> {
    if n_samples == 0 {
        return Err(TorusError::InvalidParams("n_samples must be >= 1".into()));
    }
    let chart = closed_form_chart(params);
    let mut worst: f64 = 0.0;
    for (p1, p2) in torus_samples(n_samples) {
        let g = fundamental_forms(p1, p2, &chart)?.g;
        let jj = jtj(&isometry_functions(p1 + p2, params).j);
        for a in 0..2 {
            for b in 0..2 {
                worst = worst.max((2.0 * g[a][b] - jj[a][b]).abs());
            }
        }
    }
    Ok(worst)
}

/// `(φ̃¹, φ̃²) = (φ¹ + ∫₀^φ u, φ² + ∫₀^φ v)` by adaptive quadrature.
pub fn reparametrize_to_square(
    phi1: f64,
    phi2: f64,
    params: &CliffordParams,
) -> Result<(f64, f64)> {
    let phi = phi1 + phi2;
    let opts = QuadOptions::with_tol(1e-13);
    // u and v share w; integrate w and ½cos α separately
    let w_int = quadrature::integrate(|x| isometry_functions(x, params).w, 0.0, phi, &[], &opts)?;
    let c_int = quadrature::integrate(
        |x| 0.5 * alpha_closed_form(x, params).cos_alpha,
        0.0,
        phi,
        &[],
        &opts,
    )?;
    Ok((
        phi1 + c_int.value + w_int.value,
        phi2 - c_int.value + w_int.value,
    ))
}

/// The map `x(φ¹, φ²) ↦ x̃(φ̃¹, φ̃²)` target: `(cos φ̃¹, sin φ̃¹, cos φ̃², sin φ̃²)/√2`.
pub fn square_clifford_point(phi1_tilde: f64, phi2_tilde: f64) -> EmbeddingPoint {
    embed_with_theta(phi1_tilde, phi2_tilde, std::f64::consts::FRAC_PI_4)
}
