//! Numerical building blocks: an adaptive Runge–Kutta integrator, adaptive
//! Gauss–Kronrod quadrature, Carlson symmetric elliptic integrals and a
//! bracketing root finder.

pub mod carlson;
pub mod ode;
pub mod quadrature;
pub mod roots;
