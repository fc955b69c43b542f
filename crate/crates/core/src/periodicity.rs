//! Period of one θ-oscillation, its elliptic-integral form, and the search
//! for deformations whose period closes the surface.
//!
//! Reparametrising the wave variable by `dt/dφ̃ = √(k² sin²θ̃ + l² cos²θ̃)`,
//! where θ̃(φ̃) is the `k = l = 1` closed-form profile with the same energy,
//! turns every oscillation into one `2π` sweep of φ̃. The period in t is
//!
//! ```text
//! δt = ∫₀^{2π} √((k² + l²)/2) √(1 + (k² − l²)/(k² + l²) · e sinφ̃/√(1 + e² sin²φ̃)) dφ̃
//! ```
//!
//! which for `(k, l) = (0, 1)` is the φ²-advance `δφ²`, ranging over
//! `(π, √2 π]` as e runs from ∞ to 0.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Result, TorusError};
use crate::mechanics::{integrate_theta_with, turning_values, ProfileOptions, TorusParams};
use crate::numerics::carlson;
use crate::numerics::quadrature::{self, QuadOptions};
use crate::numerics::roots;
use crate::surface::{embed_point, SurfaceChart};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PeriodMethod {
    Quadrature,
    Elliptic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodResult {
    pub k: i32,
    pub l: i32,
    /// Advance of the wave variable over one full oscillation.
    pub delta_phi2: f64,
    pub ratio_to_pi: f64,
    pub e: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    pub method: PeriodMethod,
}

impl PeriodResult {
    fn new(k: i32, l: i32, delta: f64, e: f64, method: PeriodMethod) -> Self {
        Self {
            k,
            l,
            delta_phi2: delta,
            ratio_to_pi: delta / PI,
            e,
            energy: crate::energy_from_deformation(e),
            method,
        }
    }
}

/// Arguments of the third-kind integral for the `(0, 1)` period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticArgs {
    pub v_plus: f64,
    pub v_minus: f64,
    pub amplitude: f64,
    pub characteristic: f64,
    pub modulus: f64,
}

fn check_windings(k: i32, l: i32) -> Result<()> {
    if k == 0 && l == 0 {
        return Err(TorusError::InvalidParams(
            "winding numbers (k, l) must not both vanish".into(),
        ));
    }
    Ok(())
}

/// `dt/dφ̃` at φ̃ for deformation e; evaluated as `√(k² sin²θ̃ + l² cos²θ̃)`
/// with the half-angle squares formed without cancellation.
pub fn dphi_dtilde(phi_tilde: f64, k: i32, l: i32, e: f64) -> f64 {
    let es = e * phi_tilde.sin();
    let root_q = es.hypot(1.0);
    let small = 1.0 / (2.0 * root_q * (root_q + es.abs()));
    let large = (root_q + es.abs()) / (2.0 * root_q);
    let (cos2, sin2) = if es >= 0.0 {
        (small, large)
    } else {
        (large, small)
    };
    let (k2, l2) = ((k * k) as f64, (l * l) as f64);
    (k2 * sin2 + l2 * cos2).sqrt()
}

/// Period by adaptive Gauss–Kronrod quadrature of [`dphi_dtilde`] over
/// `[0, 2π]`.
pub fn period_quadrature(k: i32, l: i32, e: f64, tol: f64) -> Result<PeriodResult> {
    check_windings(k, l)?;
    if !(tol > 0.0) {
        return Err(TorusError::InvalidParams(format!(
            "tolerance {tol} must be positive"
        )));
    }
    if !e.is_finite() {
        return Err(TorusError::InvalidParams(format!("deformation e = {e}")));
    }
    let opts = QuadOptions {
        abs_tol: tol,
        rel_tol: tol,
        max_intervals: 50_000,
    };
    let r = quadrature::integrate(
        |x| dphi_dtilde(x, k, l, e),
        0.0,
        TAU,
        &[FRAC_PI_2, PI, 1.5 * PI],
        &opts,
    )?;
    Ok(PeriodResult::new(
        k,
        l,
        r.value,
        e,
        PeriodMethod::Quadrature,
    ))
}

/// `Π(φ; n | k²) = ∫₀^φ dϑ / ((1 − n sin²ϑ) √(1 − k² sin²ϑ))`, with `k` the
/// modulus, via Carlson's R_F and R_J. Amplitudes beyond ±π/2 use
/// `Π(φ + jπ) = Π(φ) + 2j Π(π/2)`.
pub fn elliptic_pi_incomplete(amplitude: f64, characteristic: f64, modulus: f64) -> Result<f64> {
    let m = modulus * modulus;
    if amplitude.abs() <= FRAC_PI_2 {
        return carlson::ellip_pi(amplitude, characteristic, m);
    }
    let j = (amplitude / PI).round();
    let rest = amplitude - j * PI;
    let complete = carlson::ellip_pi(FRAC_PI_2, characteristic, m)?;
    Ok(2.0 * j * complete + carlson::ellip_pi(rest, characteristic, m)?)
}

/// Elliptic arguments for the sweep from θ₋ up to `sin²θ = v`, `v₋ ≤ v ≤ v₊`.
///
/// With `v = v₋ + (v₊ − v₋) sin²ϑ`, the φ²-advance of the `(0, 1)` torus is
/// `Π(ϑ; n | k²)/√v₋` with `n = −(v₊ − v₋)/v₋`, `k² = (v₊ − v₋)/v₊`.
pub fn elliptic_args(energy: f64, v: f64) -> Result<EllipticArgs> {
    if !(energy > 0.0 && energy < 0.5) {
        return Err(TorusError::Domain(format!(
            "elliptic form needs 0 < E < 1/2, got {energy}"
        )));
    }
    let (v_minus, v_plus) = turning_values(energy);
    let width = v_plus - v_minus;
    if !(v >= v_minus - 1e-15 && v <= v_plus + 1e-15) {
        return Err(TorusError::Domain(format!(
            "v = {v} outside [v₋, v₊] = [{v_minus}, {v_plus}]"
        )));
    }
    let frac = ((v - v_minus) / width).clamp(0.0, 1.0);
    Ok(EllipticArgs {
        v_plus,
        v_minus,
        amplitude: frac.sqrt().asin(),
        characteristic: -width / v_minus,
        modulus: (width / v_plus).sqrt(),
    })
}

/// φ²-advance of the `(0, 1)` torus while `sin²θ` climbs from `v₋` to `v`.
pub fn phi2_advance(energy: f64, v: f64) -> Result<f64> {
    let args = elliptic_args(energy, v)?;
    Ok(
        elliptic_pi_incomplete(args.amplitude, args.characteristic, args.modulus)?
            / args.v_minus.sqrt(),
    )
}

/// `δφ²` for `(k, l) = (0, 1)` from the complete third-kind integral:
/// `δφ² = 2 Π(π/2; n | k²)/√v₋`.
pub fn period_elliptic(energy: f64) -> Result<PeriodResult> {
    if energy == 0.5 {
        return Err(TorusError::Domain(
            "E = 1/2 is degenerate (v₊ = v₋); the period there is √2·π".into(),
        ));
    }
    let args = elliptic_args(energy, turning_values(energy).1)?;
    let delta = 2.0 * elliptic_pi_incomplete(FRAC_PI_2, args.characteristic, args.modulus)?
        / args.v_minus.sqrt();
    Ok(PeriodResult::new(
        0,
        1,
        delta,
        crate::deformation_from_energy(energy),
        PeriodMethod::Elliptic,
    ))
}

/// The attained period range: `e = 0` gives `2π√((k² + l²)/2)`, `e → ∞`
/// tends to `π(|k| + |l|)`.
pub fn period_limits(k: i32, l: i32) -> (f64, f64) {
    let (k, l) = (k as f64, l as f64);
    (
        TAU * (0.5 * (k * k + l * l)).sqrt(),
        PI * (k.abs() + l.abs()),
    )
}

/// Outcome of a period search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodSearch {
    pub e: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    pub period: f64,
    pub target: f64,
    /// Sign changes of `period(e) − target` seen on the bracketing scan; more
    /// than one means the root is not unique and the smallest is returned.
    pub sign_changes: usize,
}

const SCAN_DECADES: (i32, i32) = (-3, 6);
const SCAN_PER_DECADE: usize = 8;

/// Smallest `e ≥ 0` with `|period(e) − target| ≤ tol`, bracketed on a
/// log-spaced scan of e then refined by bisection.
pub fn search_period(k: i32, l: i32, target: f64, tol: f64) -> Result<PeriodSearch> {
    check_windings(k, l)?;
    if !(tol > 0.0) {
        return Err(TorusError::InvalidParams(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let quad_tol = (tol * 1e-3).max(1e-14);
    let period = |e: f64| period_quadrature(k, l, e, quad_tol).map(|p| p.delta_phi2);
    let (at_zero, at_infinity) = period_limits(k, l);
    let done = |e: f64, p: f64, changes: usize| PeriodSearch {
        e,
        energy: crate::energy_from_deformation(e),
        period: p,
        target,
        sign_changes: changes,
    };
    let p0 = period(0.0)?;
    if (p0 - target).abs() <= tol {
        return Ok(done(0.0, p0, 0));
    }
    let (lo, hi) = (at_zero.min(at_infinity), at_zero.max(at_infinity));
    if !(target > lo - tol && target < hi + tol) {
        return Err(TorusError::NoSolution(format!(
            "target {target} outside the attainable period range ({lo}, {hi}]"
        )));
    }

    let mut grid = vec![0.0];
    let (d0, d1) = SCAN_DECADES;
    for i in 0..=((d1 - d0) as usize * SCAN_PER_DECADE) {
        grid.push(10f64.powf(d0 as f64 + i as f64 / SCAN_PER_DECADE as f64));
    }
    let values: Vec<f64> = grid
        .iter()
        .map(|&e| period(e).map(|p| p - target))
        .collect::<Result<_>>()?;
    let mut brackets = Vec::new();
    for i in 1..grid.len() {
        if values[i - 1].signum() != values[i].signum() || values[i] == 0.0 {
            brackets.push(i);
        }
    }
    let Some(&first) = brackets.first() else {
        return Err(TorusError::NoSolution(format!(
            "no deformation e in [0, 1e{d1}] reaches period {target}"
        )));
    };
    let e_star = roots::bisect(
        |e| period(e).map(|p| p - target),
        grid[first - 1],
        grid[first],
        1e-15 * grid[first],
        1e-2 * tol,
    )?;
    let p = period(e_star)?;
    if (p - target).abs() > tol {
        return Err(TorusError::Tolerance(format!(
            "period {p} misses target {target} by {:.3e} > {tol:.1e}",
            (p - target).abs()
        )));
    }
    Ok(done(e_star, p, brackets.len()))
}

/// [`search_period`] for the target `(p/q)π`.
pub fn search_rational_period(k: i32, l: i32, p: i64, q: i64, tol: f64) -> Result<PeriodSearch> {
    if p <= 0 || q <= 0 {
        return Err(TorusError::InvalidParams(format!(
            "p/q = {p}/{q} must be positive"
        )));
    }
    search_period(k, l, p as f64 / q as f64 * PI, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub closes: bool,
    pub max_mismatch: f64,
    /// Oscillations of θ travelled by the closing shift.
    pub oscillations: i64,
    /// The closing translation in (φ¹, φ²).
    pub shift: [f64; 2],
}

/// Mismatch threshold for a closing surface.
pub const CLOSURE_TOL: f64 = 1e-8;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `(x, y)` with `k x + l y = gcd(k, l)`.
pub(crate) fn bezout(k: i64, l: i64) -> (i64, i64) {
    let (mut r0, mut r1) = (k, l);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-x0, -y0)
    } else {
        (x0, y0)
    }
}

/// `(x, y, g)` with `k x + l y = g = gcd(k, l) > 0`.
pub(crate) fn bezout_i32(k: i32, l: i32) -> (i64, i64, i64) {
    let (x, y) = bezout(k as i64, l as i64);
    (x, y, gcd(k as i64, l as i64))
}

/// The lattice translation that closes the surface if the period is
/// `(p/q)π`: `N` oscillations with `N (p/q) π = 2π j g`, `g = gcd(k, l)`,
/// realised by `(Δφ¹, Δφ²) = 2π j (x, y)` with `kx + ly = g`.
pub fn closing_shift(k: i32, l: i32, p: i64, q: i64) -> Result<(i64, [f64; 2])> {
    check_windings(k, l)?;
    if p <= 0 || q <= 0 {
        return Err(TorusError::InvalidParams(format!(
            "p/q = {p}/{q} must be positive"
        )));
    }
    let g = gcd(k as i64, l as i64);
    let denom = 2 * q * g;
    let n = denom / gcd(p, denom);
    let j = n * p / denom;
    let (x, y) = bezout(k as i64, l as i64);
    Ok((n, [TAU * (j * x) as f64, TAU * (j * y) as f64]))
}

/// Integrates θ for deformation `e` and compares the embedding at
/// `n_samples` points with its translate by [`closing_shift`]. No periodic
/// folding is used: the trajectory is integrated across the whole shift.
pub fn closure_check(
    k: i32,
    l: i32,
    e: f64,
    p: i64,
    q: i64,
    n_samples: usize,
) -> Result<ClosureReport> {
    if n_samples == 0 {
        return Err(TorusError::InvalidParams("n_samples must be >= 1".into()));
    }
    let params = TorusParams::from_deformation(k, l, e)?;
    let (oscillations, shift) = closing_shift(k, l, p, q)?;
    let (kf, lf) = (k as f64, l as f64);
    let t_shift = kf * shift[0] + lf * shift[1];
    let t_max = TAU * (kf.abs() + lf.abs()) + t_shift.abs() + 1.0;
    let profile = integrate_theta_with(&params, t_max, &ProfileOptions::default())?;
    let chart = SurfaceChart::from_profile(&profile);
    let mut worst: f64 = 0.0;
    for (p1, p2) in crate::clifford::torus_samples(n_samples) {
        let a = embed_point(p1, p2, &chart).x;
        let b = embed_point(p1 + shift[0], p2 + shift[1], &chart).x;
        let d = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        worst = worst.max(d);
    }
    Ok(ClosureReport {
        closes: worst <= CLOSURE_TOL,
        max_mismatch: worst,
        oscillations,
        shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dphi_dtilde_examples() {
        for x in [0.0, 0.4, 2.0, 5.5] {
            assert!((dphi_dtilde(x, 3, 3, 2.0) - 3.0).abs() < 1e-15);
            assert!((dphi_dtilde(x, 2, 1, 0.0) - 2.5f64.sqrt()).abs() < 1e-15);
        }
        let v = dphi_dtilde(FRAC_PI_2, 0, 1, 1.0);
        let direct = (0.5f64).sqrt() * (1.0 - 0.5f64.sqrt()).sqrt();
        assert!((v - direct).abs() < 1e-15);
        assert!((v - 0.38268).abs() < 1e-5);
    }

    #[test]
    fn elliptic_argument_examples() {
        let a = elliptic_args(0.4, 0.8).unwrap();
        assert!((a.v_plus - 0.8).abs() < 1e-15 && (a.v_minus - 0.2).abs() < 1e-15);
        assert!((a.v_plus + a.v_minus - 1.0).abs() < 1e-15);
        assert!((a.v_plus * a.v_minus - 0.16).abs() < 1e-15);
        assert!((a.amplitude - FRAC_PI_2).abs() < 1e-15);
        assert!(elliptic_args(0.5, 0.5).is_err());
        assert!(elliptic_args(0.4, 0.9).is_err());
        assert!(matches!(period_elliptic(0.5), Err(TorusError::Domain(_))));
    }

    #[test]
    fn elliptic_pi_trivial_values_and_pole() {
        assert!((elliptic_pi_incomplete(0.7, 0.0, 0.0).unwrap() - 0.7).abs() < 1e-15);
        assert!((elliptic_pi_incomplete(FRAC_PI_2, 0.0, 0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((elliptic_pi_incomplete(2.5, 0.0, 0.0).unwrap() - 2.5).abs() < 1e-14);
        assert!(matches!(
            elliptic_pi_incomplete(1.2, 1.2, 0.3),
            Err(TorusError::Domain(_))
        ));
    }

    #[test]
    fn bezout_and_shift() {
        for (k, l) in [(0i64, 1i64), (2, 1), (3, 2), (4, 6), (-3, 2), (1, 0)] {
            let (x, y) = bezout(k, l);
            assert_eq!(k * x + l * y, gcd(k, l), "{k},{l}");
        }
        let (n, shift) = closing_shift(0, 1, 4, 3).unwrap();
        assert_eq!(n, 3);
        assert_eq!(shift, [0.0, 2.0 * TAU]);
        let (n, shift) = closing_shift(0, 1, 5, 4).unwrap();
        assert_eq!(n, 8);
        assert_eq!(shift, [0.0, 5.0 * TAU]);
        assert!(closing_shift(0, 0, 1, 1).is_err());
        assert!(closing_shift(0, 1, 0, 1).is_err());
    }

    #[test]
    fn search_rejects_out_of_range_targets() {
        assert!(matches!(
            search_rational_period(0, 1, 2, 1, 1e-9),
            Err(TorusError::NoSolution(_))
        ));
        assert!(matches!(
            search_rational_period(0, 1, 1, 1, 1e-9),
            Err(TorusError::NoSolution(_))
        ));
        let r = search_period(0, 1, 2f64.sqrt() * PI, 1e-10).unwrap();
        assert_eq!(r.e, 0.0);
        // k = l: the period does not depend on e
        assert!(search_period(1, 1, 2.0 * PI, 1e-9).unwrap().e == 0.0);
        assert!(search_period(1, 1, 1.5 * PI, 1e-9).is_err());
    }
}
