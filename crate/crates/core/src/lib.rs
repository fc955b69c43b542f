//! Minimal tori in the unit 3-sphere built from a travelling-wave ansatz
//!
//! ```text
//! x(φ¹, φ²) = (cosθ cosφ¹, cosθ sinφ¹, sinθ cosφ², sinθ sinφ²),   θ = θ(kφ¹ + lφ²)
//! ```
//!
//! where θ(t) is a zero-energy trajectory of a one-dimensional mechanical
//! system. The crate covers the mechanics ([`mechanics`]), the surface
//! geometry and curvature checks ([`surface`]), the closed-form `k = l`
//! family and its isometry to the square Clifford torus ([`clifford`]),
//! isothermal coordinates for general `(k, l)` ([`isothermal`]), the period
//! and closure analysis ([`periodicity`]) and mesh generation/export
//! ([`mesh`], [`export`]).

pub mod clifford;
pub mod config;
pub mod error;
pub mod export;
pub mod isothermal;
pub mod mechanics;
pub mod mesh;
pub mod numerics;
pub mod periodicity;
pub mod surface;

pub use clifford::CliffordParams;
pub use config::RunConfig;
pub use error::{Result, TorusError};
pub use mechanics::{MechanicalState, ThetaProfile, TorusParams};
pub use mesh::SurfaceMesh;
pub use periodicity::PeriodResult;
pub use surface::{SurfaceChart, ThetaJet, ThetaSource};

/// Energy of the torus with deformation parameter `e`: `E = 1 / (2√(1 + e²))`.
pub fn energy_from_deformation(e: f64) -> f64 {
    0.5 / e.hypot(1.0)
}

/// Inverse of [`energy_from_deformation`], returning the non-negative root.
///
/// `e = √(1/(4E²) − 1) = √((1 − 2E)(1 + 2E)) / (2E)`.
pub fn deformation_from_energy(energy: f64) -> f64 {
    let two_e = 2.0 * energy;
    ((1.0 - two_e) * (1.0 + two_e)).max(0.0).sqrt() / two_e
}
