//! Massless fields at zero temperature, in closed form.

use super::ActionError;
use crate::specfun::{inverse_square_sum, sum_fermion_cube, sum_sin2_cube, SeriesTolerance, SpecfunError};
use std::f64::consts::PI;

/// cosec²(φ/2), failing at multiples of 2π.
pub(crate) fn cosec2_half(phi: f64, function: &'static str) -> Result<f64, ActionError> {
    inverse_square_sum(phi)
        .map(|v| 4.0 * v)
        .map_err(|_| {
            ActionError::from(SpecfunError::Domain {
                function,
                detail: format!("cosec²(φ/2) is singular at φ = {phi}"),
            })
        })
}

/// Ṽ(φ) = (2/π) Σ sin²(lφ/2)/l³ for one massless complex scalar.
pub fn v_scalar_massless0(phi: f64) -> f64 {
    2.0 / PI * sum_sin2_cube(phi, &SeriesTolerance::default()).value
}

/// γ(φ) = λ/(24π) cosec²(φ/2) for one massless complex scalar.
pub fn gamma_scalar_massless0(phi: f64, lambda: f64) -> Result<f64, ActionError> {
    Ok(lambda / (24.0 * PI) * cosec2_half(phi, "gamma_scalar_massless0")?)
}

/// Ṽ_f(φ) = (1/π) Σ (cos lφ - (-1)^l)/l³ for one massless Dirac fermion.
pub fn v_fermion_massless0(phi: f64) -> f64 {
    sum_fermion_cube(phi, &SeriesTolerance::default()).value / PI
}

/// γ_f(φ) = λ/(48π) cosec²(φ/2) for one massless Dirac fermion.
pub fn gamma_fermion_massless0(phi: f64, lambda: f64) -> Result<f64, ActionError> {
    Ok(lambda / (48.0 * PI) * cosec2_half(phi, "gamma_fermion_massless0")?)
}

/// SU(2) Yang-Mills potential at zero temperature. It has the same form as
/// the massless scalar one.
pub fn v_ym(phi: f64, tol: &SeriesTolerance) -> f64 {
    2.0 / PI * sum_sin2_cube(phi, tol).value
}

/// γ_YM(φ) = -11λ/(24π) cosec²(φ/2): the opposite sign of the classical
/// kinetic term.
pub fn gamma_ym(phi: f64, lambda: f64) -> Result<f64, ActionError> {
    // -11 times the scalar value, so the ratio is -11 up to one rounding
    Ok(-11.0 * (lambda / (24.0 * PI) * cosec2_half(phi, "gamma_ym")?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{TWO_PI, ZETA3};

    // (2/π)(7/8)ζ(3)
    const V_AT_PI: f64 = 0.669_596_543_054_548_1;

    #[test]
    fn scalar_potential_values() {
        assert_eq!(v_scalar_massless0(0.0), 0.0);
        assert!((2.0 / PI * 0.875 * ZETA3 - V_AT_PI).abs() < 1e-15);
        assert!((v_scalar_massless0(PI) - V_AT_PI).abs() < 1e-14);
        let a = v_scalar_massless0(PI / 2.0);
        let b = v_scalar_massless0(1.5 * PI);
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn scalar_gamma_values() {
        let g = gamma_scalar_massless0(PI, 0.01).unwrap();
        assert!((g - 0.01 / (24.0 * PI)).abs() < 1e-18);
        assert!((g - 1.326_291_192e-4).abs() < 1e-12);
        let g2 = gamma_scalar_massless0(PI / 2.0, 0.01).unwrap();
        assert!((g2 - 2.652_582_384e-4).abs() < 1e-12);
        assert_eq!(gamma_scalar_massless0(1.234, 0.0).unwrap(), 0.0);
        assert!(gamma_scalar_massless0(0.0, 0.01).is_err());
        assert!(gamma_scalar_massless0(TWO_PI, 0.01).is_err());
    }

    #[test]
    fn sin2_times_gamma_is_constant() {
        for i in 1..200 {
            let phi = i as f64 * TWO_PI / 200.0;
            let s = (phi / 2.0).sin();
            let g = gamma_scalar_massless0(phi, 0.37).unwrap();
            assert!((s * s * g - 0.37 / (24.0 * PI)).abs() < 1e-14);
        }
    }

    #[test]
    fn fermion_values() {
        assert_eq!(v_fermion_massless0(PI), 0.0);
        assert!((v_fermion_massless0(0.0) - V_AT_PI).abs() < 1e-14);
        let a = v_fermion_massless0(0.3);
        let b = v_fermion_massless0(TWO_PI - 0.3);
        assert!((a - b).abs() < 1e-15);
        let g = gamma_fermion_massless0(PI, 0.01).unwrap();
        assert!((g - 6.631_455_962e-5).abs() < 1e-13);
        for &phi in &[0.1, 1.0, 2.0, 4.0] {
            let ratio = gamma_fermion_massless0(phi, 0.2).unwrap()
                / gamma_scalar_massless0(phi, 0.2).unwrap();
            assert!((ratio - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn yang_mills_values() {
        let t = SeriesTolerance::default();
        assert!((v_ym(PI, &t) - V_AT_PI).abs() < 1e-14);
        assert_eq!(v_ym(0.7, &t), v_scalar_massless0(0.7));
        let g = gamma_ym(PI, 0.1).unwrap();
        assert!((g + 0.014_589_203_1).abs() < 1e-10);
        for &phi in &[0.05, 1.0, 3.0, 5.0] {
            assert!(gamma_ym(phi, 0.1).unwrap() < 0.0);
            let ratio = gamma_ym(phi, 0.1).unwrap() / gamma_scalar_massless0(phi, 0.1).unwrap();
            assert!((ratio + 11.0).abs() <= 11.0 * 2.0 * f64::EPSILON, "{ratio}");
        }
        assert!(gamma_ym(0.0, 0.1).is_err());
    }
}
