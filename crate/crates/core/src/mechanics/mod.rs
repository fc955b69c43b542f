//! The mechanical picture of the travelling-wave ansatz.
//!
//! With `t = kφ¹ + lφ²`, `c = cosθ`, `s = sinθ` and the weight
//! `D(θ) = k²s² + l²c²`, minimality reduces to the zero-energy condition
//!
//! ```text
//! θ̇² + V_E(θ) = 0,    V_E(θ) = (c²s² / D) (1 − c²s² / E²)
//! ```
//!
//! and, equivalently, to Hamilton's equations for
//! `H(θ, π) = ½ sin 2θ √(1 − π²/D)` on the level set `H = E`.

mod profile;

pub use profile::{
    integrate_theta, integrate_theta_with, ProfileNode, ProfileOptions, ThetaProfile,
};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TorusError};

/// Radicands and denominators below this are treated as zero.
const DEGENERACY_EPS: f64 = 1e-14;

/// Winding numbers `(k, l)` and energy `E` of one member of the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusParams {
    k: i32,
    l: i32,
    energy: f64,
}

impl TorusParams {
    /// Requires `(k, l) ≠ (0, 0)` and `0 < E ≤ 1/2`.
    pub fn new(k: i32, l: i32, energy: f64) -> Result<Self> {
        if k == 0 && l == 0 {
            return Err(TorusError::InvalidParams(
                "winding numbers (k, l) must not both vanish".into(),
            ));
        }
        if !(energy > 0.0 && energy <= 0.5) {
            return Err(TorusError::InvalidParams(format!(
                "energy E = {energy} outside (0, 1/2]"
            )));
        }
        Ok(Self { k, l, energy })
    }

    /// Parameters for deformation `e`, i.e. `E = 1/(2√(1+e²))`.
    pub fn from_deformation(k: i32, l: i32, e: f64) -> Result<Self> {
        if !e.is_finite() {
            return Err(TorusError::InvalidParams(format!("deformation e = {e}")));
        }
        Self::new(k, l, crate::energy_from_deformation(e))
    }

    pub fn k(&self) -> i32 {
        self.k
    }

    pub fn l(&self) -> i32 {
        self.l
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// `a = 1/(2E) = cosh γ ≥ 1`.
    pub fn a(&self) -> f64 {
        0.5 / self.energy
    }

    /// `e = sinh γ ≥ 0`.
    pub fn deformation(&self) -> f64 {
        crate::deformation_from_energy(self.energy)
    }

    /// `E = 1/2`: the well collapses to the single point θ = π/4.
    pub fn is_clifford_point(&self) -> bool {
        self.energy == 0.5
    }

    /// `D(θ) = k² sin²θ + l² cos²θ`.
    pub fn weight(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let (k, l) = (self.k as f64, self.l as f64);
        k * k * s * s + l * l * c * c
    }

    fn weight_derivative(&self, theta: f64) -> f64 {
        let (k, l) = (self.k as f64, self.l as f64);
        (k * k - l * l) * (2.0 * theta).sin()
    }
}

/// A point of phase space together with its evolution parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanicalState {
    pub theta: f64,
    pub theta_dot: f64,
    pub pi_momentum: f64,
    pub t: f64,
}

impl MechanicalState {
    /// State with the momentum computed from `(θ, θ̇)`.
    pub fn from_velocity(theta: f64, theta_dot: f64, t: f64, params: &TorusParams) -> Result<Self> {
        Ok(Self {
            theta,
            theta_dot,
            pi_momentum: canonical_momentum(theta, theta_dot, params)?,
            t,
        })
    }
}

/// `V_E(θ)`; negative strictly between the turning points.
pub fn potential(theta: f64, params: &TorusParams) -> f64 {
    let (s, c) = theta.sin_cos();
    let cs2 = c * c * s * s;
    let e2 = params.energy * params.energy;
    cs2 / params.weight(theta) * (1.0 - cs2 / e2)
}

/// `dV_E/dθ`.
pub fn potential_derivative(theta: f64, params: &TorusParams) -> f64 {
    let (s, c) = theta.sin_cos();
    let cs2 = c * c * s * s;
    // d(c²s²)/dθ = ½ sin 4θ
    let dcs2 = 0.5 * (4.0 * theta).sin();
    let d = params.weight(theta);
    let dd = params.weight_derivative(theta);
    let e2 = params.energy * params.energy;
    let q = cs2 / d;
    let dq = (dcs2 * d - cs2 * dd) / (d * d);
    dq * (1.0 - cs2 / e2) - q * dcs2 / e2
}

fn momentum_radicand(theta: f64, pi_momentum: f64, params: &TorusParams) -> Result<f64> {
    let d = params.weight(theta);
    if d <= 0.0 {
        return Err(TorusError::Singularity(format!(
            "weight k²s² + l²c² vanishes at θ = {theta}"
        )));
    }
    let r = 1.0 - pi_momentum * pi_momentum / d;
    if r < -DEGENERACY_EPS {
        return Err(TorusError::Domain(format!(
            "π² = {} exceeds k²s² + l²c² = {d}",
            pi_momentum * pi_momentum
        )));
    }
    Ok(r.max(0.0))
}

/// `H(θ, π) = ½ sin 2θ √(1 − π²/(k²s² + l²c²))`.
pub fn hamiltonian(theta: f64, pi_momentum: f64, params: &TorusParams) -> Result<f64> {
    let r = momentum_radicand(theta, pi_momentum, params)?;
    Ok(0.5 * (2.0 * theta).sin() * r.sqrt())
}

/// `π = ∂L/∂θ̇ = −D θ̇ / √(c²s² + D θ̇²)` for `L = −√(c²s² + D θ̇²)`.
pub fn canonical_momentum(theta: f64, theta_dot: f64, params: &TorusParams) -> Result<f64> {
    let (s, c) = theta.sin_cos();
    let d = params.weight(theta);
    let denom = (c * c * s * s + d * theta_dot * theta_dot).sqrt();
    if denom < DEGENERACY_EPS {
        return Err(TorusError::Domain(format!(
            "degenerate Lagrangian at θ = {theta}, θ̇ = {theta_dot}"
        )));
    }
    Ok(-d * theta_dot / denom)
}

/// θ̈ from the second-order minimality equation
///
/// ```text
/// sc D θ̈ + θ̇² [(l² − k²) s²c² + 2k² s⁴ − 2l² c⁴] + s²c² (s² − c²) = 0
/// ```
///
/// which is the t-derivative of the energy condition divided by θ̇; it does
/// not involve E.
pub fn ode_rhs_second_order(state: &MechanicalState, params: &TorusParams) -> Result<f64> {
    theta_acceleration(state.theta, state.theta_dot, params)
}

pub(crate) fn theta_acceleration(theta: f64, theta_dot: f64, params: &TorusParams) -> Result<f64> {
    let (s, c) = theta.sin_cos();
    let sc = s * c;
    let d = params.weight(theta);
    if sc.abs() < DEGENERACY_EPS || d < DEGENERACY_EPS {
        return Err(TorusError::Singularity(format!(
            "second-order equation singular at θ = {theta}"
        )));
    }
    let (k2, l2) = ((params.k * params.k) as f64, (params.l * params.l) as f64);
    let (s2, c2) = (s * s, c * c);
    let bracket = (l2 - k2) * s2 * c2 + 2.0 * k2 * s2 * s2 - 2.0 * l2 * c2 * c2;
    Ok(-(theta_dot * theta_dot * bracket + s2 * c2 * (s2 - c2)) / (sc * d))
}

/// Partial derivatives `(∂H/∂θ, ∂H/∂π)`.
pub fn hamiltonian_gradient(
    theta: f64,
    pi_momentum: f64,
    params: &TorusParams,
) -> Result<(f64, f64)> {
    let r2 = momentum_radicand(theta, pi_momentum, params)?;
    if r2 < DEGENERACY_EPS {
        return Err(TorusError::Domain(format!(
            "Hamiltonian not differentiable at θ = {theta}, π = {pi_momentum} (radicand 0)"
        )));
    }
    let r = r2.sqrt();
    let d = params.weight(theta);
    let dd = params.weight_derivative(theta);
    let sc = 0.5 * (2.0 * theta).sin();
    let pi2 = pi_momentum * pi_momentum;
    let dh_dtheta = (2.0 * theta).cos() * r + sc * pi2 * dd / (2.0 * r * d * d);
    let dh_dpi = -sc * pi_momentum / (d * r);
    Ok((dh_dtheta, dh_dpi))
}

/// Hamilton's equations `(dθ/dt, dπ/dt) = (∂H/∂π, −∂H/∂θ)`.
pub fn hamilton_rhs(state: &MechanicalState, params: &TorusParams) -> Result<(f64, f64)> {
    let (dh_dtheta, dh_dpi) = hamiltonian_gradient(state.theta, state.pi_momentum, params)?;
    Ok((dh_dpi, -dh_dtheta))
}

/// Turning points `θ₋ ≤ θ₊` with `sin²θ± = v± = ½ ± √(¼ − E²)`; `θ₋ + θ₊ = π/2`.
pub fn turning_points(params: &TorusParams) -> (f64, f64) {
    let (v_minus, v_plus) = turning_values(params.energy);
    // atan2 keeps θ₋ + θ₊ = π/2 to rounding
    let (sm, sp) = (v_minus.sqrt(), v_plus.sqrt());
    (sm.atan2(sp), sp.atan2(sm))
}

/// `(v₋, v₊)`; `v₋` is formed as `E²/v₊` to avoid cancellation for small E.
pub fn turning_values(energy: f64) -> (f64, f64) {
    let root = ((0.5 - energy) * (0.5 + energy)).max(0.0).sqrt();
    let v_plus = 0.5 + root;
    (energy * energy / v_plus, v_plus)
}

/// Validating variant of [`turning_points`] for a raw energy value.
pub fn turning_points_for_energy(energy: f64) -> Result<(f64, f64)> {
    if !(energy > 0.0 && energy <= 0.5) {
        return Err(TorusError::Domain(format!(
            "energy E = {energy} outside (0, 1/2]"
        )));
    }
    Ok(turning_points(&TorusParams { k: 0, l: 1, energy }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    fn p(k: i32, l: i32, e: f64) -> TorusParams {
        TorusParams::new(k, l, e).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(TorusParams::new(0, 0, 0.3).is_err());
        assert!(TorusParams::new(1, 0, 0.0).is_err());
        assert!(TorusParams::new(1, 0, 0.7).is_err());
        assert!(TorusParams::new(1, 0, f64::NAN).is_err());
        assert!(TorusParams::new(1, 0, 0.5).unwrap().is_clifford_point());
        let q = p(2, 1, 0.25);
        assert!((q.a() - 2.0).abs() < 1e-15);
        assert!((q.deformation() - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn potential_examples() {
        assert!(potential(FRAC_PI_4, &p(1, 1, 0.5)).abs() < 1e-16);
        assert!((potential(FRAC_PI_4, &p(1, 1, 0.4)) + 0.140625).abs() < 1e-15);
        assert_eq!(potential(0.0, &p(0, 1, 0.3)), 0.0);
    }

    #[test]
    fn hamiltonian_examples() {
        let q = p(1, 1, 0.4);
        assert!((hamiltonian(FRAC_PI_4, 0.0, &q).unwrap() - 0.5).abs() < 1e-16);
        let (k, l) = (3.0, 2.0);
        let s = FRAC_PI_4.sin();
        let pi_max = (k * k * s * s + l * l * s * s).sqrt();
        assert!(hamiltonian(FRAC_PI_4, pi_max, &p(3, 2, 0.4)).unwrap().abs() < 1e-8);
        let v = hamiltonian(FRAC_PI_6, 0.0, &p(0, 1, 0.3)).unwrap();
        assert!((v - 3f64.sqrt() / 4.0).abs() < 1e-16);
        assert!(matches!(
            hamiltonian(FRAC_PI_4, 2.0, &q),
            Err(TorusError::Domain(_))
        ));
    }

    #[test]
    fn canonical_momentum_examples() {
        let q = p(1, 1, 0.4);
        assert_eq!(canonical_momentum(0.7, 0.0, &q).unwrap(), 0.0);
        let v = canonical_momentum(FRAC_PI_4, 1.0, &q).unwrap();
        assert!((v + 2.0 / 5f64.sqrt()).abs() < 1e-15);
        assert!(canonical_momentum(0.0, 0.0, &p(1, 0, 0.3)).is_err());
        assert!(canonical_momentum(FRAC_PI_2, 0.0, &p(0, 1, 0.3)).is_err());
    }

    #[test]
    fn acceleration_at_equilibrium_and_poles() {
        let st = MechanicalState {
            theta: FRAC_PI_4,
            theta_dot: 0.0,
            pi_momentum: 0.0,
            t: 0.0,
        };
        assert!(ode_rhs_second_order(&st, &p(1, 1, 0.5)).unwrap().abs() < 1e-15);
        for theta in [0.0, FRAC_PI_2] {
            let st = MechanicalState { theta, ..st };
            assert!(matches!(
                ode_rhs_second_order(&st, &p(1, 1, 0.3)),
                Err(TorusError::Singularity(_))
            ));
        }
    }

    #[test]
    fn hamilton_rhs_fixed_point() {
        let st = MechanicalState {
            theta: FRAC_PI_4,
            theta_dot: 0.0,
            pi_momentum: 0.0,
            t: 0.0,
        };
        let (a, b) = hamilton_rhs(&st, &p(1, 1, 0.5)).unwrap();
        assert!(a.abs() < 1e-16 && b.abs() < 1e-16);
    }

    #[test]
    fn turning_point_examples() {
        let (lo, hi) = turning_points(&p(0, 1, 0.5));
        assert!((lo - FRAC_PI_4).abs() < 1e-16 && (hi - FRAC_PI_4).abs() < 1e-16);
        let (lo, hi) = turning_points(&p(0, 1, 0.4));
        assert!((lo - 0.2f64.sqrt().asin()).abs() < 1e-15);
        assert!((hi - 0.8f64.sqrt().asin()).abs() < 1e-15);
        let (vm, vp) = turning_values(0.4);
        assert!((vp - 0.8).abs() < 1e-15 && (vm - 0.2).abs() < 1e-15);
        assert!(turning_points_for_energy(0.0).is_err());
        assert!(turning_points_for_energy(0.51).is_err());
    }

    #[test]
    fn potential_derivative_matches_central_differences() {
        for (k, l, e) in [(0, 1, 0.4), (2, 1, 0.25), (3, 2, 0.2)] {
            let q = p(k, l, e);
            for i in 1..20 {
                let th = 0.07 * i as f64;
                let h = 1e-6;
                let fd = (potential(th + h, &q) - potential(th - h, &q)) / (2.0 * h);
                let an = potential_derivative(th, &q);
                assert!(
                    (fd - an).abs() < 1e-7 * (1.0 + an.abs()),
                    "{k},{l},{e} θ={th}"
                );
            }
        }
    }
}
