//! Pointwise isothermal decomposition `g = ρ² JᵀJ` for general `(k, l)`.
//!
//! On the energy shell θ̇² = Y(θ) = −V_E(θ) the metric is
//! `g = diag(c², s²) + Y n nᵀ` with `n = (k, l)`, and the ansatz
//! `J = [[1 + ku, lu], [kv, 1 + lv]] = 𝟙 + (u, v)ᵀ nᵀ` gives three equations
//! for `(u, v, ρ²)`. Writing `(u, v) = a n + b n⊥` with `n⊥ = (−l, k)`:
//!
//! * the `n⊥n⊥` component fixes `ρ² = (k²s² + l²c²)/(k² + l²)`;
//! * the `n n⊥` component is the linear relation between u and v,
//!   `b = kl(s² − c²)/(ρ² N²)`, `N = k² + l²`;
//! * the `nn` component is a quadratic in `A = aN`,
//!   `(1 + A)² = ((k²c² + l²s²)/N + Y N)/ρ² − b² N²`, solved with
//!   `1 + A > 0` so that J → 𝟙 at the Clifford point.

use serde::{Deserialize, Serialize};

use crate::clifford::torus_samples;
use crate::error::{Result, TorusError};
use crate::mechanics::{potential, TorusParams};
use crate::surface::ThetaSource;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsothermalSolution {
    pub rho_squared: f64,
    pub u: f64,
    pub v: f64,
    pub y: f64,
}

impl IsothermalSolution {
    pub fn jacobian(&self, k: i32, l: i32) -> [[f64; 2]; 2] {
        let (k, l) = (k as f64, l as f64);
        [
            [1.0 + k * self.u, l * self.u],
            [k * self.v, 1.0 + l * self.v],
        ]
    }
}

/// `ρ² = (k² sin²θ + l² cos²θ)/(k² + l²)`; requires `(k, l) ≠ (0, 0)`.
pub fn conformal_factor(theta: f64, k: i32, l: i32) -> f64 {
    debug_assert!(k != 0 || l != 0);
    let (s, c) = theta.sin_cos();
    let (k2, l2) = ((k * k) as f64, (l * l) as f64);
    (k2 * s * s + l2 * c * c) / (k2 + l2)
}

/// `Y(θ) = −V_E(θ)`, the squared velocity on the shell.
pub fn shell_velocity_squared(theta: f64, params: &TorusParams) -> f64 {
    -potential(theta, params)
}

/// The metric on the shell, `diag(c², s²) + Y(θ) n nᵀ`.
pub fn shell_metric(theta: f64, params: &TorusParams) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    let y = shell_velocity_squared(theta, params);
    let (k, l) = (params.k() as f64, params.l() as f64);
    [
        [c * c + k * k * y, k * l * y],
        [k * l * y, s * s + l * l * y],
    ]
}

pub fn solve_uv(theta: f64, params: &TorusParams) -> Result<IsothermalSolution> {
    let (k, l) = (params.k() as f64, params.l() as f64);
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let n = k * k + l * l;
    let rho2 = conformal_factor(theta, params.k(), params.l());
    if rho2 <= 0.0 {
        return Err(TorusError::Singularity(format!(
            "conformal factor vanishes at θ = {theta}"
        )));
    }
    let y = shell_velocity_squared(theta, params);
    // linear relation: n⊥ component of (u, v)
    let b = k * l * (s2 - c2) / (rho2 * n * n);
    let disc = ((k * k * c2 + l * l * s2) / n + y * n) / rho2 - b * b * n * n;
    if disc < 0.0 {
        return Err(TorusError::NoRealRoot(format!(
            "discriminant {disc:.3e} < 0 at θ = {theta}"
        )));
    }
    let a = (disc.sqrt() - 1.0) / n;
    Ok(IsothermalSolution {
        rho_squared: rho2,
        u: a * k - b * l,
        v: a * l + b * k,
        y,
    })
}

/// Residuals of the three component equations
/// `c² + k²Y = ρ²(1 + k²S + 2ku)`, `s² + l²Y = ρ²(1 + l²S + 2lv)`,
/// `klY = ρ²(lu + kv + klS)` with `S = u² + v²`.
pub fn uv_residuals(theta: f64, params: &TorusParams, sol: &IsothermalSolution) -> [f64; 3] {
    let (k, l) = (params.k() as f64, params.l() as f64);
    let (s, c) = theta.sin_cos();
    let (u, v, y, rho2) = (sol.u, sol.v, sol.y, sol.rho_squared);
    let sq = u * u + v * v;
    [
        c * c + k * k * y - rho2 * (1.0 + k * k * sq + 2.0 * k * u),
        s * s + l * l * y - rho2 * (1.0 + l * l * sq + 2.0 * l * v),
        k * l * y - rho2 * (l * u + k * v + k * l * sq),
    ]
}

/// Largest entry of `|g − ρ² JᵀJ|` over `n_samples` quasi-random points of
/// the torus, θ taken from `profile` and g from the shell metric.
pub fn verify_isothermal_metric<S: ThetaSource>(
    params: &TorusParams,
    profile: &S,
    n_samples: usize,
) -> Result<f64> {
    if n_samples == 0 {
        return Err(TorusError::InvalidParams("n_samples must be >= 1".into()));
    }
    let (k, l) = (params.k() as f64, params.l() as f64);
    let mut worst: f64 = 0.0;
    for (p1, p2) in torus_samples(n_samples) {
        let theta = profile.jet(k * p1 + l * p2).theta;
        let g = shell_metric(theta, params);
        let sol = solve_uv(theta, params)?;
        let j = sol.jacobian(params.k(), params.l());
        for a in 0..2 {
            for b in 0..2 {
                let jtj = j[0][a] * j[0][b] + j[1][a] * j[1][b];
                worst = worst.max((g[a][b] - sol.rho_squared * jtj).abs());
            }
        }
    }
    Ok(worst)
}
