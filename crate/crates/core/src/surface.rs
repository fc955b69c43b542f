//! Geometry of the embedding
//! `x(φ¹, φ²) = (cosθ cosφ¹, cosθ sinφ¹, sinθ cosφ², sinθ sinφ²)` with
//! θ = θ(kφ¹ + lφ²): normal, fundamental forms, minimality residual and
//! intrinsic curvature.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TorusError};
use crate::mechanics::ThetaProfile;

/// θ and its first two derivatives with respect to the wave variable t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaJet {
    pub theta: f64,
    pub theta_dot: f64,
    pub theta_ddot: f64,
}

/// Anything that can supply θ(t), θ̇(t), θ̈(t).
pub trait ThetaSource {
    fn jet(&self, t: f64) -> ThetaJet;
}

impl<T: ThetaSource + ?Sized> ThetaSource for &T {
    fn jet(&self, t: f64) -> ThetaJet {
        (**self).jet(t)
    }
}

/// θ ≡ constant.
#[derive(Debug, Clone, Copy)]
pub struct ConstantTheta(pub f64);

impl ThetaSource for ConstantTheta {
    fn jet(&self, _t: f64) -> ThetaJet {
        ThetaJet {
            theta: self.0,
            theta_dot: 0.0,
            theta_ddot: 0.0,
        }
    }
}

/// Adapts a closure `t -> ThetaJet`.
pub struct FnTheta<F>(pub F);

impl<F: Fn(f64) -> ThetaJet> ThetaSource for FnTheta<F> {
    fn jet(&self, t: f64) -> ThetaJet {
        (self.0)(t)
    }
}

/// A travelling-wave chart: θ(φ¹, φ²) = θ(kφ¹ + lφ²).
#[derive(Debug, Clone, Copy)]
pub struct SurfaceChart<S> {
    source: S,
    k: i32,
    l: i32,
}

/// Partial derivatives of θ with respect to (φ¹, φ²) at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaPartials {
    pub theta: f64,
    pub d1: f64,
    pub d2: f64,
    pub d11: f64,
    pub d12: f64,
    pub d22: f64,
}

impl<S: ThetaSource> SurfaceChart<S> {
    pub fn new(source: S, k: i32, l: i32) -> Self {
        Self { source, k, l }
    }

    pub fn source(&self) -> &S {
        &self.source
    }

    pub fn k(&self) -> i32 {
        self.k
    }

    pub fn l(&self) -> i32 {
        self.l
    }

    pub fn wave_variable(&self, phi1: f64, phi2: f64) -> f64 {
        self.k as f64 * phi1 + self.l as f64 * phi2
    }

    /// `∂_a θ = (k, l)_a θ̇`, `∂²_ab θ = (k, l)_a (k, l)_b θ̈`.
    pub fn partials(&self, phi1: f64, phi2: f64) -> ThetaPartials {
        let jet = self.source.jet(self.wave_variable(phi1, phi2));
        let (k, l) = (self.k as f64, self.l as f64);
        ThetaPartials {
            theta: jet.theta,
            d1: k * jet.theta_dot,
            d2: l * jet.theta_dot,
            d11: k * k * jet.theta_ddot,
            d12: k * l * jet.theta_ddot,
            d22: l * l * jet.theta_ddot,
        }
    }
}

impl<'a> SurfaceChart<&'a ThetaProfile> {
    pub fn from_profile(profile: &'a ThetaProfile) -> Self {
        let p = profile.params();
        Self::new(profile, p.k(), p.l())
    }
}

/// A point of S³ ⊂ ℝ⁴.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingPoint {
    pub x: [f64; 4],
}

impl EmbeddingPoint {
    pub fn norm(&self) -> f64 {
        dot(&self.x, &self.x).sqrt()
    }
}

/// First and second fundamental forms, with the (unnormalised) normal `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForms {
    pub g: [[f64; 2]; 2],
    pub h: [[f64; 2]; 2],
    pub normal: [f64; 4],
    pub normal_length: f64,
}

impl FundamentalForms {
    pub fn det_g(&self) -> f64 {
        det2(&self.g)
    }

    pub fn det_h(&self) -> f64 {
        det2(&self.h)
    }

    /// Shape operator `W = g⁻¹ h`.
    pub fn shape_operator(&self) -> [[f64; 2]; 2] {
        mul2(&inv2(&self.g), &self.h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub mean_curvature_residual: f64,
    /// `(tr W)² − tr W² + (tr W̃)² − tr W̃²` with `W̃ = −𝟙`; twice the
    /// Gaussian curvature.
    pub gaussian_r: f64,
    pub det_g: f64,
    pub det_h: f64,
    pub ratio_h_over_g: f64,
}

pub(crate) fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn det2(m: &[[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn inv2(m: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let d = det2(m);
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

fn mul2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// The embedding itself.
pub fn embed_point<S: ThetaSource>(
    phi1: f64,
    phi2: f64,
    chart: &SurfaceChart<S>,
) -> EmbeddingPoint {
    let theta = chart.source.jet(chart.wave_variable(phi1, phi2)).theta;
    embed_with_theta(phi1, phi2, theta)
}

pub(crate) fn embed_with_theta(phi1: f64, phi2: f64, theta: f64) -> EmbeddingPoint {
    let (s, c) = theta.sin_cos();
    let (s1, c1) = phi1.sin_cos();
    let (s2, c2) = phi2.sin_cos();
    EmbeddingPoint {
        x: [c * c1, c * s1, s * c2, s * s2],
    }
}

fn normal_from_partials(phi1: f64, phi2: f64, p: &ThetaPartials) -> [f64; 4] {
    let (s, c) = p.theta.sin_cos();
    let (s1, c1) = phi1.sin_cos();
    let (s2, c2) = phi2.sin_cos();
    let sc = s * c;
    [
        sc * (-s * c1) + s * s1 * p.d1,
        sc * (-s * s1) - s * c1 * p.d1,
        sc * (c * c2) + c * s2 * p.d2,
        sc * (c * s2) - c * c2 * p.d2,
    ]
}

/// Normal `m = sc(−s c₁, −s s₁, c c₂, c s₂) − (−s s₁θ₁, s c₁θ₁, −c s₂θ₂, c c₂θ₂)`,
/// orthogonal to `x`, `∂₁x` and `∂₂x`; `|m|² = det g`.
pub fn normal_vector<S: ThetaSource>(
    phi1: f64,
    phi2: f64,
    chart: &SurfaceChart<S>,
) -> Result<[f64; 4]> {
    let p = chart.partials(phi1, phi2);
    let m = normal_from_partials(phi1, phi2, &p);
    if dot(&m, &m).sqrt() < 1e-13 {
        return Err(TorusError::Degenerate(format!(
            "normal vanishes at (φ¹, φ²) = ({phi1}, {phi2}), θ = {}",
            p.theta
        )));
    }
    Ok(m)
}

/// Numerators of h_ab (h_ab times |m|).
fn second_form_numerators(p: &ThetaPartials) -> [[f64; 2]; 2] {
    let (s, c) = p.theta.sin_cos();
    let (s2, c2, sc) = (s * s, c * c, s * c);
    let h11 = s2 * c2 + sc * p.d11 + 2.0 * s2 * p.d1 * p.d1;
    let h12 = sc * p.d12 + (s2 - c2) * p.d1 * p.d2;
    let h22 = -s2 * c2 + sc * p.d22 - 2.0 * c2 * p.d2 * p.d2;
    [[h11, h12], [h12, h22]]
}

fn first_form(p: &ThetaPartials) -> [[f64; 2]; 2] {
    let (s, c) = p.theta.sin_cos();
    let g12 = p.d1 * p.d2;
    [[c * c + p.d1 * p.d1, g12], [g12, s * s + p.d2 * p.d2]]
}

pub fn fundamental_forms<S: ThetaSource>(
    phi1: f64,
    phi2: f64,
    chart: &SurfaceChart<S>,
) -> Result<FundamentalForms> {
    let p = chart.partials(phi1, phi2);
    let normal = normal_from_partials(phi1, phi2, &p);
    let normal_length = dot(&normal, &normal).sqrt();
    if normal_length < 1e-13 {
        return Err(TorusError::Degenerate(format!(
            "normal vanishes at (φ¹, φ²) = ({phi1}, {phi2}), θ = {}",
            p.theta
        )));
    }
    let num = second_form_numerators(&p);
    let h = [
        [num[0][0] / normal_length, num[0][1] / normal_length],
        [num[1][0] / normal_length, num[1][1] / normal_length],
    ];
    Ok(FundamentalForms {
        g: first_form(&p),
        h,
        normal,
        normal_length,
    })
}

/// Cofactor contraction of g with the numerators of h,
/// `g₂₂ N₁₁ + g₁₁ N₂₂ − 2 g₁₂ N₁₂`, which is zero exactly where the mean
/// curvature vanishes.
///
/// Expanded, the quartic terms in the first derivatives cancel identically
/// and what remains is
///
/// ```text
/// s²c²(s² − c²) + sc(s²θ₁₁ + c²θ₂₂) + sc(θ₂²θ₁₁ + θ₁²θ₂₂ − 2θ₁θ₂θ₁₂)
///   + θ₁²(2s⁴ − s²c²) + θ₂²(s²c² − 2c⁴)
/// ```
///
/// which is evaluated in this form to avoid cancelling large terms.
pub fn minimality_residual<S: ThetaSource>(phi1: f64, phi2: f64, chart: &SurfaceChart<S>) -> f64 {
    let p = chart.partials(phi1, phi2);
    let (s, c) = p.theta.sin_cos();
    let (s2, c2, sc) = (s * s, c * c, s * c);
    let (d1s, d2s) = (p.d1 * p.d1, p.d2 * p.d2);
    let mixed = d2s * p.d11 + d1s * p.d22 - 2.0 * (p.d1 * p.d2) * p.d12;
    s2 * c2 * (s2 - c2)
        + sc * (s2 * p.d11 + c2 * p.d22)
        + sc * mixed
        + d1s * s2 * (2.0 * s2 - c2)
        + d2s * c2 * (s2 - 2.0 * c2)
}

/// The residual in unexpanded cofactor form, kept for cross-checking.
pub fn minimality_residual_cofactor<S: ThetaSource>(
    phi1: f64,
    phi2: f64,
    chart: &SurfaceChart<S>,
) -> f64 {
    let p = chart.partials(phi1, phi2);
    let (s, c) = p.theta.sin_cos();
    let n = second_form_numerators(&p);
    (s * s + p.d2 * p.d2) * n[0][0] + (c * c + p.d1 * p.d1) * n[1][1] - 2.0 * p.d1 * p.d2 * n[0][1]
}

pub fn curvature_report<S: ThetaSource>(
    phi1: f64,
    phi2: f64,
    chart: &SurfaceChart<S>,
) -> Result<CurvatureReport> {
    let forms = fundamental_forms(phi1, phi2, chart)?;
    let w = forms.shape_operator();
    let tr_w = w[0][0] + w[1][1];
    let tr_w2 = w[0][0] * w[0][0] + 2.0 * w[0][1] * w[1][0] + w[1][1] * w[1][1];
    // W̃ = −𝟙: (tr W̃)² = 4, tr W̃² = 2
    let gaussian_r = tr_w * tr_w - tr_w2 + 4.0 - 2.0;
    let det_g = forms.det_g();
    let det_h = forms.det_h();
    Ok(CurvatureReport {
        mean_curvature_residual: minimality_residual(phi1, phi2, chart),
        gaussian_r,
        det_g,
        det_h,
        ratio_h_over_g: det_h / det_g,
    })
}
