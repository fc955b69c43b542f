//! Carlson's symmetric elliptic integrals R_F, R_C and R_J by the
//! duplication theorem, and Legendre's incomplete integrals expressed
//! through them.

use crate::error::{Result, TorusError};

// Truncation error of the final series scales like ERRTOL^6.
const ERRTOL: f64 = 1e-3;
const MAX_ITER: usize = 200;

/// R_F(x, y, z) = ½∫₀^∞ dt / √((t+x)(t+y)(t+z)); at most one argument may be zero.
pub fn rf(x: f64, y: f64, z: f64) -> Result<f64> {
    if x.min(y).min(z) < 0.0 || (x + y).min(x + z).min(y + z) <= 0.0 {
        return Err(TorusError::Domain(format!(
            "R_F({x}, {y}, {z}) needs non-negative arguments, at most one zero"
        )));
    }
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..MAX_ITER {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let ave = (x + y + z) / 3.0;
        let (dx, dy, dz) = ((ave - x) / ave, (ave - y) / ave, (ave - z) / ave);
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return Ok((1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / ave.sqrt());
        }
    }
    Err(TorusError::Tolerance(
        "R_F duplication did not converge".into(),
    ))
}

/// R_C(x, y) = R_F(x, y, y) for x ≥ 0, y > 0.
pub fn rc(x: f64, y: f64) -> Result<f64> {
    if x < 0.0 || y <= 0.0 {
        return Err(TorusError::Domain(format!(
            "R_C({x}, {y}) needs x >= 0, y > 0"
        )));
    }
    let (mut x, mut y) = (x, y);
    for _ in 0..MAX_ITER {
        let lambda = 2.0 * x.sqrt() * y.sqrt() + y;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        let ave = (x + 2.0 * y) / 3.0;
        let s = (y - ave) / ave;
        if s.abs() < ERRTOL {
            let series = 1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)));
            return Ok(series / ave.sqrt());
        }
    }
    Err(TorusError::Tolerance(
        "R_C duplication did not converge".into(),
    ))
}

/// R_J(x, y, z, p) = (3/2)∫₀^∞ dt / ((t+p)√((t+x)(t+y)(t+z))) for p > 0.
pub fn rj(x: f64, y: f64, z: f64, p: f64) -> Result<f64> {
    if x.min(y).min(z) < 0.0 || (x + y).min(x + z).min(y + z) <= 0.0 || p <= 0.0 {
        return Err(TorusError::Domain(format!(
            "R_J({x}, {y}, {z}, {p}) needs non-negative x, y, z (at most one zero) and p > 0"
        )));
    }
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 3.0;
    const C3: f64 = 3.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.75 * C3;
    const C6: f64 = 1.5 * C4;
    const C7: f64 = 0.5 * C2;
    const C8: f64 = C3 + C3;

    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let mut sum = 0.0;
    let mut fac = 1.0;
    for _ in 0..MAX_ITER {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        let alpha = (p * (sx + sy + sz) + sx * sy * sz).powi(2);
        let beta = p * (p + lambda).powi(2);
        sum += fac * rc(alpha, beta)?;
        fac *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        p = 0.25 * (p + lambda);
        let ave = 0.2 * (x + y + z + 2.0 * p);
        let (dx, dy, dz, dp) = (
            (ave - x) / ave,
            (ave - y) / ave,
            (ave - z) / ave,
            (ave - p) / ave,
        );
        if dx.abs().max(dy.abs()).max(dz.abs()).max(dp.abs()) < ERRTOL {
            let ea = dx * (dy + dz) + dy * dz;
            let eb = dx * dy * dz;
            let ec = dp * dp;
            let ed = ea - 3.0 * ec;
            let ee = eb + 2.0 * dp * (ea - ec);
            let series = 1.0
                + ed * (-C1 + C5 * ed - C6 * ee)
                + eb * (C7 + dp * (-C8 + dp * C4))
                + dp * ea * (C2 - dp * C3)
                - C2 * dp * ec;
            return Ok(3.0 * sum + fac * series / (ave * ave.sqrt()));
        }
    }
    Err(TorusError::Tolerance(
        "R_J duplication did not converge".into(),
    ))
}

/// Legendre's incomplete integral of the first kind F(φ | m), |φ| ≤ π/2.
pub fn ellip_f(amplitude: f64, m: f64) -> Result<f64> {
    let (s, c) = amplitude.sin_cos();
    Ok(s * rf(c * c, 1.0 - m * s * s, 1.0)?)
}

/// Legendre's incomplete integral of the third kind
/// Π(φ; n | m) = ∫₀^φ dϑ / ((1 − n sin²ϑ) √(1 − m sin²ϑ)), |φ| ≤ π/2.
pub fn ellip_pi(amplitude: f64, n: f64, m: f64) -> Result<f64> {
    let (s, c) = amplitude.sin_cos();
    let s2 = s * s;
    let delta = 1.0 - m * s2;
    let p = 1.0 - n * s2;
    if delta <= 0.0 {
        return Err(TorusError::Domain(format!(
            "m sin²φ = {} must be < 1",
            m * s2
        )));
    }
    if p <= 0.0 {
        return Err(TorusError::Domain(format!(
            "pole crossing: n sin²φ = {} must be < 1",
            n * s2
        )));
    }
    let f = s * rf(c * c, delta, 1.0)?;
    if n == 0.0 {
        return Ok(f);
    }
    Ok(f + n / 3.0 * s * s2 * rj(c * c, delta, 1.0, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn closed_form_special_values() {
        // R_F(0, 1, 1) = π/2, R_C(0, 1) = π/2, R_C(1, 1) = 1
        assert!((rf(0.0, 1.0, 1.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((rc(0.0, 1.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((rc(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        // R_J(x, x, x, x) = x^{-3/2}
        assert!((rj(4.0, 4.0, 4.0, 4.0).unwrap() - 0.125).abs() < 1e-15);
        // R_C(x, y) for x > y: acosh(√(x/y)) / √(x − y)
        let v = rc(2.0, 1.0).unwrap();
        assert!((v - 2f64.sqrt().acosh()).abs() < 1e-15);
        // Legendre forms reduce to elementary ones at m = 0 / n = m = 0
        assert!((ellip_f(1.2, 0.0).unwrap() - 1.2).abs() < 1e-15);
        assert!((ellip_pi(FRAC_PI_2, 0.0, 0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        // Π(π/2; n | 0) = π / (2√(1−n))
        let n = -3.0;
        let v = ellip_pi(FRAC_PI_2, n, 0.0).unwrap();
        assert!((v - PI / (2.0 * (1.0f64 - n).sqrt())).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(rf(-1.0, 1.0, 1.0).is_err());
        assert!(rf(0.0, 0.0, 1.0).is_err());
        assert!(rj(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(matches!(
            ellip_pi(FRAC_PI_2, 1.5, 0.2),
            Err(TorusError::Domain(_))
        ));
        assert!(ellip_pi(FRAC_PI_2, 0.2, 1.0).is_err());
    }
}
