//! One-loop effective actions for a Wilson-line holonomy on R² × S¹, and the
//! quantum-kink problem they define.
//!
//! All quantities are dimensionless with the circle length set to one: the
//! coupling is λ = e²L, masses are μ = mL and temperatures τ = TL.

pub mod specfun;
pub mod action;
pub mod quadrature;
pub mod ode;
pub mod kink;
pub mod stability;
