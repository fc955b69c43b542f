//! Parameters of a single run: which torus, how finely to sample it and
//! where to put the output.

use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use crate::error::{Result, TorusError};
use crate::mechanics::TorusParams;

pub const DEFAULT_POLE: [f64; 4] = [0.0, 0.0, 0.0, -1.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub k: i32,
    pub l: i32,
    /// Energy E in (0, 1/2]. Exactly one of `energy` and `e` must be set.
    #[serde(rename = "E")]
    pub energy: Option<f64>,
    /// Deformation e ≥ 0.
    pub e: Option<f64>,
    /// Lattice resolution `(n₁, n₂)`.
    pub grid: (usize, usize),
    /// Integrator and verification tolerance.
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub pole: [f64; 4],
    /// Rational period `(p, q)`: the surface closes after δ = (p/q)π.
    pub closure: Option<(i64, i64)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: 0,
            l: 1,
            energy: None,
            e: Some(0.0),
            grid: (64, 64),
            tol: 1e-10,
            out: None,
            pole: DEFAULT_POLE,
            closure: None,
        }
    }
}

impl RunConfig {
    pub fn with_energy(k: i32, l: i32, energy: f64) -> Self {
        Self {
            k,
            l,
            energy: Some(energy),
            e: None,
            ..Self::default()
        }
    }

    pub fn with_deformation(k: i32, l: i32, e: f64) -> Self {
        Self {
            k,
            l,
            energy: None,
            e: Some(e),
            ..Self::default()
        }
    }

    pub fn grid(mut self, n1: usize, n2: usize) -> Self {
        self.grid = (n1, n2);
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn closure(mut self, p: i64, q: i64) -> Self {
        self.closure = Some((p, q));
        self
    }

    /// Checks every field and resolves the torus parameters.
    pub fn params(&self) -> Result<TorusParams> {
        let params = match (self.energy, self.e) {
            (Some(energy), None) => TorusParams::new(self.k, self.l, energy)?,
            (None, Some(e)) => {
                if !(e >= 0.0) {
                    return Err(TorusError::InvalidParams(format!(
                        "deformation e must be non-negative, got {e}"
                    )));
                }
                TorusParams::from_deformation(self.k, self.l, e)?
            }
            (Some(_), Some(_)) => {
                return Err(TorusError::InvalidParams(
                    "give exactly one of E and e, not both".into(),
                ))
            }
            (None, None) => {
                return Err(TorusError::InvalidParams(
                    "one of E and e is required".into(),
                ))
            }
        };
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(TorusError::InvalidParams(format!(
                "tolerance must lie in (0, 1), got {}",
                self.tol
            )));
        }
        let pole_norm = self.pole.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !((pole_norm - 1.0).abs() <= 1e-12) {
            return Err(TorusError::InvalidParams(format!(
                "pole must be a unit vector, |pole| = {pole_norm}"
            )));
        }
        if let Some((p, q)) = self.closure {
            if p <= 0 || q <= 0 {
                return Err(TorusError::InvalidParams(format!(
                    "closure p/q = {p}/{q} must be positive"
                )));
            }
        }
        Ok(params)
    }

    /// Deformation e of the configured torus, as given when `e` was set.
    pub fn deformation(&self) -> Result<f64> {
        let params = self.params()?;
        Ok(self.e.unwrap_or_else(|| params.deformation()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_one_of_energy_and_deformation() {
        let mut c = RunConfig::with_energy(0, 1, 0.4);
        assert!(c.params().is_ok());
        c.e = Some(1.0);
        assert!(matches!(c.params(), Err(TorusError::InvalidParams(_))));
        c.energy = None;
        c.e = None;
        assert!(c.params().is_err());
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(RunConfig::with_energy(0, 1, 0.7).params().is_err());
        assert!(RunConfig::with_deformation(0, 1, -1.0).params().is_err());
        assert!(RunConfig::with_deformation(0, 1, 1.0)
            .tol(0.0)
            .params()
            .is_err());
        let mut c = RunConfig::with_deformation(0, 1, 1.0);
        c.pole = [0.0, 0.0, 0.0, -2.0];
        assert!(c.params().is_err());
        assert!(RunConfig::with_deformation(0, 1, 1.0)
            .closure(0, 3)
            .params()
            .is_err());
    }

    #[test]
    fn deformation_resolves_energy() {
        let e = RunConfig::with_energy(1, 1, 0.5 / 2f64.sqrt())
            .deformation()
            .unwrap();
        assert!((e - 1.0).abs() < 1e-14);
    }
}
