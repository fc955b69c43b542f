//! Dense θ(t) trajectories.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use super::{potential, theta_acceleration, turning_points, TorusParams};
use crate::error::{Result, TorusError};
use crate::numerics::ode::{self, OdeOptions, StepControl};
use crate::surface::{ThetaJet, ThetaSource};

/// Integration controls for [`integrate_theta_with`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProfileOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Node spacing cap; bounds the cubic Hermite interpolation error.
    pub max_step: f64,
    /// Largest accepted `|θ̇² + V_E(θ)|` over the nodes.
    pub energy_tol: f64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            max_step: 5e-3,
            energy_tol: 1e-9,
        }
    }
}

impl ProfileOptions {
    /// Options keyed by a single accuracy target `tol` for the energy
    /// residual; the local step tolerance is two orders tighter so that the
    /// drift over many oscillations stays below `10·tol`.
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol * 1e-2,
            atol: tol * 1e-4,
            energy_tol: tol * 10.0,
            ..Self::default()
        }
    }
}

/// One accepted integrator step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileNode {
    pub t: f64,
    pub theta: f64,
    pub theta_dot: f64,
    pub theta_ddot: f64,
}

/// θ(t) started at the upper turning point θ₊ with θ̇(0) = 0.
///
/// Between nodes θ and θ̇ are cubic Hermite interpolants (θ with slopes θ̇,
/// θ̇ with slopes θ̈); θ̈ is the derivative of the θ̇ interpolant. Negative
/// times use the reflection symmetry θ(−t) = θ(t); times past the integrated
/// span are folded back by the measured period.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaProfile {
    params: TorusParams,
    nodes: Vec<ProfileNode>,
    half_period: f64,
    max_energy_residual: f64,
    options: ProfileOptions,
}

/// [`integrate_theta_with`] using [`ProfileOptions::with_tol`].
pub fn integrate_theta(params: &TorusParams, t_span: f64, tol: f64) -> Result<ThetaProfile> {
    if !(tol > 0.0) {
        return Err(TorusError::InvalidParams(format!(
            "tolerance {tol} must be positive"
        )));
    }
    integrate_theta_with(params, t_span, &ProfileOptions::with_tol(tol))
}

/// Integrates the second-order equation over at least `[0, t_span]` and at
/// least one full oscillation.
///
/// At `E = 1/2` the well is a single point and the constant profile
/// θ ≡ π/4 is returned.
pub fn integrate_theta_with(
    params: &TorusParams,
    t_span: f64,
    options: &ProfileOptions,
) -> Result<ThetaProfile> {
    if !(t_span >= 0.0) || !t_span.is_finite() {
        return Err(TorusError::InvalidParams(format!(
            "t_span {t_span} must be finite and >= 0"
        )));
    }
    if params.is_clifford_point() {
        return Ok(ThetaProfile::constant(*params));
    }
    let (_, theta_plus) = turning_points(params);
    let ode_opts = OdeOptions {
        rtol: options.rtol,
        atol: options.atol,
        max_step: options.max_step,
        initial_step: options.max_step.min(1e-3),
        ..OdeOptions::default()
    };

    let mut nodes: Vec<ProfileNode> = Vec::new();
    let mut half_period: Option<f64> = None;
    let mut failure: Option<TorusError> = None;
    let mut max_residual: f64 = 0.0;
    let rhs = |_t: f64, y: &[f64; 2]| -> [f64; 2] {
        // NaN propagates to the step controller, which shrinks the step
        [
            y[1],
            theta_acceleration(y[0], y[1], params).unwrap_or(f64::NAN),
        ]
    };

    let result = ode::integrate(
        rhs,
        0.0,
        [theta_plus, 0.0],
        f64::MAX,
        &ode_opts,
        |t, y, dy| {
            let node = ProfileNode {
                t,
                theta: y[0],
                theta_dot: y[1],
                theta_ddot: dy[1],
            };
            if let Some(prev) = nodes.last() {
                if half_period.is_none() && prev.theta_dot < 0.0 && node.theta_dot >= 0.0 {
                    half_period = Some(locate_velocity_zero(prev, &node));
                }
            }
            max_residual = max_residual.max((y[1] * y[1] + potential(y[0], params)).abs());
            nodes.push(node);
            if !(y[0] > 0.0 && y[0] < std::f64::consts::FRAC_PI_2) {
                failure = Some(TorusError::Tolerance(format!(
                    "trajectory left (0, π/2) at t = {t}"
                )));
                return StepControl::Stop;
            }
            match half_period {
                Some(h) if t >= t_span.max(2.0 * h) => StepControl::Stop,
                _ => StepControl::Continue,
            }
        },
    );
    result?;
    if let Some(err) = failure {
        return Err(err);
    }
    let half_period = half_period
        .ok_or_else(|| TorusError::Tolerance("no return to the lower turning point".into()))?;
    if max_residual > options.energy_tol {
        return Err(TorusError::Tolerance(format!(
            "energy residual {max_residual:.3e} exceeds {:.3e}",
            options.energy_tol
        )));
    }
    Ok(ThetaProfile {
        params: *params,
        nodes,
        half_period,
        max_energy_residual: max_residual,
        options: *options,
    })
}

fn hermite(y0: f64, m0: f64, y1: f64, m1: f64, h: f64, s: f64) -> (f64, f64) {
    let s2 = s * s;
    let s3 = s2 * s;
    let value = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
        + (s3 - 2.0 * s2 + s) * h * m0
        + (-2.0 * s3 + 3.0 * s2) * y1
        + (s3 - s2) * h * m1;
    let slope = ((6.0 * s2 - 6.0 * s) * y0
        + (3.0 * s2 - 4.0 * s + 1.0) * h * m0
        + (-6.0 * s2 + 6.0 * s) * y1
        + (3.0 * s2 - 2.0 * s) * h * m1)
        / h;
    (value, slope)
}

/// Zero of the θ̇ interpolant on `[a.t, b.t]`, where θ̇ changes sign.
fn locate_velocity_zero(a: &ProfileNode, b: &ProfileNode) -> f64 {
    let h = b.t - a.t;
    let vel = |s: f64| hermite(a.theta_dot, a.theta_ddot, b.theta_dot, b.theta_ddot, h, s).0;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if vel(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    a.t + 0.5 * (lo + hi) * h
}

impl ThetaProfile {
    /// θ ≡ π/4, the Clifford solution at `E = 1/2`.
    ///
    /// The recorded half-period is the small-oscillation limit
    /// `π √((k² + l²)/2)`.
    pub fn constant(params: TorusParams) -> Self {
        let (k, l) = (params.k() as f64, params.l() as f64);
        let half_period = std::f64::consts::PI * (0.5 * (k * k + l * l)).sqrt();
        Self {
            params,
            nodes: vec![ProfileNode {
                t: 0.0,
                theta: FRAC_PI_4,
                theta_dot: 0.0,
                theta_ddot: 0.0,
            }],
            half_period,
            max_energy_residual: 0.0,
            options: ProfileOptions::default(),
        }
    }

    pub fn params(&self) -> &TorusParams {
        &self.params
    }

    pub fn nodes(&self) -> &[ProfileNode] {
        &self.nodes
    }

    /// Time of the first arrival at θ₋.
    pub fn half_period(&self) -> f64 {
        self.half_period
    }

    /// Duration of one full oscillation θ₊ → θ₋ → θ₊.
    pub fn period(&self) -> f64 {
        2.0 * self.half_period
    }

    pub fn max_energy_residual(&self) -> f64 {
        self.max_energy_residual
    }

    pub fn options(&self) -> &ProfileOptions {
        &self.options
    }

    pub fn is_constant(&self) -> bool {
        self.nodes.len() == 1
    }

    /// End of the integrated span.
    pub fn t_end(&self) -> f64 {
        self.nodes.last().map_or(0.0, |n| n.t)
    }

    /// `|θ̇² + V_E(θ)|` at an arbitrary time.
    pub fn energy_residual_at(&self, t: f64) -> f64 {
        let jet = self.jet(t);
        (jet.theta_dot * jet.theta_dot + potential(jet.theta, &self.params)).abs()
    }

    /// Evaluates without folding; `t` must lie in `[0, t_end]`.
    fn interpolate(&self, t: f64) -> ThetaJet {
        let nodes = &self.nodes;
        let idx = nodes
            .partition_point(|n| n.t <= t)
            .clamp(1, nodes.len() - 1);
        let (a, b) = (&nodes[idx - 1], &nodes[idx]);
        let h = b.t - a.t;
        let s = (t - a.t) / h;
        let (theta, _) = hermite(a.theta, a.theta_dot, b.theta, b.theta_dot, h, s);
        let (theta_dot, theta_ddot) =
            hermite(a.theta_dot, a.theta_ddot, b.theta_dot, b.theta_ddot, h, s);
        ThetaJet {
            theta,
            theta_dot,
            theta_ddot,
        }
    }
}

impl ThetaSource for ThetaProfile {
    fn jet(&self, t: f64) -> ThetaJet {
        if self.is_constant() {
            return ThetaJet {
                theta: FRAC_PI_4,
                theta_dot: 0.0,
                theta_ddot: 0.0,
            };
        }
        let mut tau = t.abs();
        if tau > self.t_end() {
            tau = tau.rem_euclid(self.period());
        }
        let mut jet = self.interpolate(tau);
        if t < 0.0 {
            jet.theta_dot = -jet.theta_dot;
        }
        jet
    }
}
