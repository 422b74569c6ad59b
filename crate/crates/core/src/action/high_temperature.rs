//! High-temperature forms for a massive complex scalar.

use super::general::gamma_scalar_matsubara_row;
use super::ActionError;
use crate::specfun::{fold_angle, series_sum, SeriesTolerance, SpecfunError, SumResult};
use std::f64::consts::PI;

fn check(function: &'static str, mu: f64, tau: f64, need_mass: bool) -> Result<(), ActionError> {
    let mass_ok = if need_mass { mu > 0.0 } else { mu >= 0.0 };
    if !(mass_ok && mu.is_finite()) {
        return Err(SpecfunError::Domain {
            function,
            detail: format!("mass must be {} and finite, got {mu}", if need_mass { "positive" } else { "non-negative" }),
        }
        .into());
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(SpecfunError::Domain {
            function,
            detail: format!("temperature must be positive and finite, got {tau}"),
        }
        .into());
    }
    Ok(())
}

/// Ṽ = (4τ/π) Σ_{l≥1} (μ/l) K₂(μl) sin²(lφ/2).
///
/// This grows like τ/μ as μ → 0, which drives the growth of the kink mass
/// at high temperature.
pub fn v_scalar_high_t(
    phi: f64,
    mu: f64,
    tau: f64,
    tol: &SeriesTolerance,
) -> Result<SumResult, ActionError> {
    check("v_scalar_high_t", mu, tau, true)?;
    let theta = fold_angle(phi);
    if theta == 0.0 {
        return Ok(SumResult::exact(0.0));
    }
    let pref = 4.0 * tau / PI;
    let envelope = |l: u64| {
        let x = mu * l as f64;
        if x > 705.0 {
            return 0.0;
        }
        let (k0, k1) = crate::specfun::k01(x);
        pref * mu / l as f64 * (k0 + 2.0 / x * k1)
    };
    let term = |l: u64| {
        let s = (0.5 * l as f64 * theta).sin();
        envelope(l) * s * s
    };
    Ok(series_sum(1, term, envelope, mu, tol))
}

/// γ = (λτ/4) Σ_l (2πl + φ)²/[(2πl + φ)² + μ²]^{5/2}, the static Matsubara row
/// of the full scalar correction.
pub fn gamma_scalar_high_t(phi: f64, mu: f64, tau: f64, lambda: f64) -> Result<f64, ActionError> {
    check("gamma_scalar_high_t", mu, tau, false)?;
    gamma_scalar_matsubara_row(phi, mu, tau, lambda, 0)
}
