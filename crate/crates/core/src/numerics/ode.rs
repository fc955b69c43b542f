//! Dormand–Prince 5(4) with embedded error estimate and FSAL.

use crate::error::{Result, TorusError};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on the step size; also bounds the node spacing seen by
    /// step observers.
    pub max_step: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: f64::INFINITY,
            initial_step: 1e-3,
            max_steps: 2_000_000,
        }
    }
}

/// Returned by a step observer to continue or stop the integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepControl {
    Continue,
    Stop,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order weights minus embedded fourth-order weights
const ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `t0` to `t_end` (which may lie on either
/// side of `t0`).
///
/// `observer(t, y, dy)` is called at the initial point and after every
/// accepted step with the state and its derivative there. Returns the final
/// time and state.
pub fn integrate<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
    mut observer: O,
) -> Result<(f64, [f64; N])>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N], &[f64; N]) -> StepControl,
{
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(TorusError::InvalidParams(
            "integrator tolerances must be positive".into(),
        ));
    }
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut dy = f(t, &y);
    if observer(t, &y, &dy) == StepControl::Stop || t0 == t_end {
        return Ok((t, y));
    }
    let mut h = opts.initial_step.min(opts.max_step).min((t_end - t0).abs());
    let mut k = [[0.0; N]; 7];

    for _ in 0..opts.max_steps {
        let h_min = 1e-14 * (1.0 + t.abs());
        let remaining = (t_end - t).abs();
        if remaining <= h_min {
            return Ok((t, y));
        }
        h = h.min(remaining).min(opts.max_step);
        let step = dir * h;

        k[0] = dy;
        for s in 1..7 {
            let mut ys = y;
            for (i, v) in ys.iter_mut().enumerate() {
                let mut acc = 0.0;
                for j in 0..s {
                    acc += A[s][j] * k[j][i];
                }
                *v += step * acc;
            }
            k[s] = f(t + C[s] * step, &ys);
        }
        // stage 7 is evaluated at the fifth-order solution itself (FSAL)
        let mut y_new = y;
        for (i, v) in y_new.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..6 {
                acc += A[6][j] * k[j][i];
            }
            *v += step * acc;
        }

        let mut err_sq = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for j in 0..7 {
                e += ERR[j] * k[j][i];
            }
            let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (step * e / scale).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            h *= 0.25;
            if h < h_min {
                return Err(TorusError::Tolerance(format!(
                    "non-finite state near t = {t}"
                )));
            }
            continue;
        }

        if err <= 1.0 {
            t += step;
            y = y_new;
            dy = k[6];
            if observer(t, &y, &dy) == StepControl::Stop {
                return Ok((t, y));
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            if h < h_min {
                return Err(TorusError::Tolerance(format!(
                    "step size underflow at t = {t} (rtol {}, atol {})",
                    opts.rtol, opts.atol
                )));
            }
        }
    }
    Err(TorusError::Tolerance(format!(
        "exceeded {} steps before reaching t = {t_end}",
        opts.max_steps
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_matches_closed_form() {
        let opts = OdeOptions::default();
        let (t, y) = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            10.0,
            &opts,
            |_, _, _| StepControl::Continue,
        )
        .unwrap();
        assert_eq!(t, 10.0);
        assert!((y[0] - 10f64.cos()).abs() < 1e-9);
        assert!((y[1] + 10f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn backward_integration() {
        let opts = OdeOptions::default();
        let (_, y) = integrate(
            |_, y: &[f64; 1]| [y[0]],
            1.0,
            [1.0],
            0.0,
            &opts,
            |_, _, _| StepControl::Continue,
        )
        .unwrap();
        assert!((y[0] - (-1f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn observer_can_stop_early_and_sees_step_cap() {
        let opts = OdeOptions {
            max_step: 0.01,
            ..OdeOptions::default()
        };
        let mut last = 0.0;
        let mut widest: f64 = 0.0;
        let (t, _) = integrate(
            |_, _y: &[f64; 1]| [1.0],
            0.0,
            [0.0],
            5.0,
            &opts,
            |t, y, _| {
                widest = widest.max(t - last);
                last = t;
                if y[0] > 1.0 {
                    StepControl::Stop
                } else {
                    StepControl::Continue
                }
            },
        )
        .unwrap();
        assert!(t > 1.0 && t < 1.02);
        assert!(widest <= 0.01 + 1e-15);
    }
}
