//! Periodic sums over Kaluza-Klein modes.
//!
//! The cubic sums converge like 1/l³, far too slowly to truncate directly at
//! double precision. They are evaluated from the expansion of
//! C₃(θ) = Σ cos(lθ)/l³ about θ = 0,
//!
//! C₃(θ) = ζ(3) - 3θ²/4 + (θ²/2) ln θ - Σ_{k≥1} 2ζ(2k) θ² (θ/2π)^{2k} / (2k(2k+1)(2k+2)),
//!
//! which converges geometrically (ratio ≤ 1/4) once θ is folded into [0, π].

use super::{fold_angle, series_sum, SeriesTolerance, SpecfunError, SumResult, TWO_PI};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Apéry's constant ζ(3).
pub const ZETA3: f64 = 1.202_056_903_159_594_2;

const ZETA_TABLE_LEN: usize = 48;

/// ζ(2k) for k ≥ 1.
pub fn zeta_even(k: u32) -> f64 {
    assert!(k >= 1, "zeta_even needs k >= 1");
    static TABLE: OnceLock<[f64; ZETA_TABLE_LEN]> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = [1.0; ZETA_TABLE_LEN];
        t[1] = PI.powi(2) / 6.0;
        t[2] = PI.powi(4) / 90.0;
        t[3] = PI.powi(6) / 945.0;
        t[4] = PI.powi(8) / 9450.0;
        t[5] = PI.powi(10) / 93555.0;
        for (k, slot) in t.iter_mut().enumerate().skip(6) {
            let s = 2 * k as i32;
            // j^{-12} < 1e-18 relative for j > 32
            let mut acc = 0.0;
            for j in (2..=40).rev() {
                acc += (j as f64).powi(-s);
            }
            *slot = 1.0 + acc;
        }
        t
    });
    table.get(k as usize).copied().unwrap_or(1.0)
}

/// Σ_{l≥1} sin²(lθ/2)/l³ for θ already folded into [0, π].
fn sin2_cube_folded(theta: f64, tol: &SeriesTolerance) -> SumResult {
    if theta == 0.0 {
        return SumResult::exact(0.0);
    }
    let t2 = theta * theta;
    let r2 = (theta / TWO_PI).powi(2);
    let base = 0.75 * t2 - 0.5 * t2 * theta.ln();
    let coeff = |k: u64| {
        let m = 2.0 * k as f64;
        2.0 * t2 * r2.powi(k as i32) / (m * (m + 1.0) * (m + 2.0))
    };
    let series = series_sum(
        1,
        |k| zeta_even(k as u32) * coeff(k),
        |k| zeta_even(1) * coeff(k),
        -r2.ln(),
        tol,
    );
    SumResult {
        value: 0.5 * (base + series.value),
        tail_bound: 0.5 * series.tail_bound,
        ..series
    }
}

/// Σ_{l≥1} sin²(lφ/2)/l³.
///
/// The result is non-negative, 2π-periodic and symmetric about φ = π.
pub fn sum_sin2_cube(phi: f64, tol: &SeriesTolerance) -> SumResult {
    sin2_cube_folded(fold_angle(phi), tol)
}

/// Σ_{l≥1} (cos lφ - (-1)^l)/l³, which vanishes at φ = π.
pub fn sum_fermion_cube(phi: f64, tol: &SeriesTolerance) -> SumResult {
    // cos lφ - (-1)^l = 2 sin²(lπ/2) - 2 sin²(lφ/2)
    let at_pi = sin2_cube_folded(PI, tol);
    let here = sin2_cube_folded(fold_angle(phi), tol);
    at_pi.combine(2.0, here, -2.0)
}

/// Σ_{l≥1} sin²(lφ/2)/l² = πθ/4 - θ²/8 with θ the folded angle.
pub fn sum_sin2_square(phi: f64) -> f64 {
    let theta = fold_angle(phi);
    0.25 * PI * theta - 0.125 * theta * theta
}

/// Σ_{l∈ℤ} (2πl + φ)⁻² = cosec²(φ/2) / 4.
pub fn inverse_square_sum(phi: f64) -> Result<f64, SpecfunError> {
    let theta = fold_angle(phi);
    if theta == 0.0 {
        return Err(SpecfunError::Domain {
            function: "inverse_square_sum",
            detail: format!("φ = {phi} is a multiple of 2π"),
        });
    }
    let s = (0.5 * theta).sin();
    Ok(0.25 / (s * s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct partial sum plus an Euler-Maclaurin tail for the 1/l³ envelope.
    fn sin2_cube_direct(phi: f64) -> f64 {
        let n = 200_000u64;
        let mut acc = 0.0;
        for l in (1..=n).rev() {
            let s = (l as f64 * phi / 2.0).sin();
            acc += s * s / (l as f64).powi(3);
        }
        // sin² averages to 1/2 over the oscillation; the remainder is O(1/n²)
        acc + 0.25 / (n as f64).powi(2)
    }

    #[test]
    fn zeta_values() {
        assert!((zeta_even(1) - 1.644_934_066_848_226_4).abs() < 1e-15);
        assert!((zeta_even(6) - 1.000_246_086_553_308).abs() < 1e-15);
        assert!((zeta_even(10) - 1.000_000_953_962_033_9).abs() < 1e-15);
        assert_eq!(zeta_even(200), 1.0);
    }

    #[test]
    fn sin2_cube_special_values() {
        let t = SeriesTolerance::default();
        assert_eq!(sum_sin2_cube(0.0, &t).value, 0.0);
        let at_pi = sum_sin2_cube(PI, &t);
        assert!(at_pi.converged);
        assert!((at_pi.value - 0.875 * ZETA3).abs() < 1e-14);
        assert!((at_pi.value - 1.051_799_790_264_644_9).abs() < 1e-14);
        let a = sum_sin2_cube(1.0, &t).value;
        let b = sum_sin2_cube(TWO_PI - 1.0, &t).value;
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn sin2_cube_against_direct_summation() {
        let t = SeriesTolerance::default();
        for &phi in &[0.01, 0.3, 1.0, 2.0, 3.0, PI] {
            let got = sum_sin2_cube(phi, &t).value;
            let want = sin2_cube_direct(phi);
            assert!((got - want).abs() < 1e-10, "φ={phi}: {got} vs {want}");
        }
    }

    #[test]
    fn fermion_cube_special_values() {
        let t = SeriesTolerance::default();
        assert_eq!(sum_fermion_cube(PI, &t).value, 0.0);
        let at_zero = sum_fermion_cube(0.0, &t);
        assert!((at_zero.value - 1.75 * ZETA3).abs() < 1e-14);
        assert!((at_zero.value - 2.103_599_580_529_289_8).abs() < 1e-13);
        let a = sum_fermion_cube(0.5, &t).value;
        let b = sum_fermion_cube(-0.5, &t).value;
        assert_eq!(a, b);
    }

    #[test]
    fn fermion_cube_against_direct_summation() {
        let t = SeriesTolerance::default();
        for &phi in &[0.2, 1.3, 2.5] {
            let mut direct = 0.0;
            let n = 400_000u64;
            for l in (1..=n).rev() {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                direct += ((l as f64 * phi).cos() - sign) / (l as f64).powi(3);
            }
            let got = sum_fermion_cube(phi, &t).value;
            assert!((got - direct).abs() < 1e-10, "φ={phi}: {got} vs {direct}");
        }
    }

    #[test]
    fn sin2_square_closed_form() {
        for &phi in &[0.4, 2.0, 5.5] {
            let mut direct = 0.0;
            let n = 2_000_000u64;
            for l in (1..=n).rev() {
                let s = (l as f64 * phi / 2.0).sin();
                direct += s * s / (l as f64).powi(2);
            }
            direct += 0.5 / n as f64;
            assert!((sum_sin2_square(phi) - direct).abs() < 1e-8);
        }
    }

    #[test]
    fn inverse_square_sum_values() {
        assert!((inverse_square_sum(PI).unwrap() - 0.25).abs() < 1e-15);
        assert!((inverse_square_sum(PI / 2.0).unwrap() - 0.5).abs() < 1e-15);
        let phi = 1e-3;
        assert!((phi * phi * inverse_square_sum(phi).unwrap() - 1.0).abs() < 1e-6);
        assert!(inverse_square_sum(0.0).is_err());
        assert!(inverse_square_sum(2.0 * TWO_PI).is_err());
    }

    #[test]
    fn inverse_square_sum_richardson() {
        // Symmetric partial sums S_N = Σ_{|l|≤N} carry an error ~ c/N; two
        // levels of Richardson extrapolation remove the 1/N and 1/N² terms.
        let partial = |phi: f64, n: i64| -> f64 {
            let mut acc = 0.0;
            for l in (-n..=n).rev() {
                let u = TWO_PI * l as f64 + phi;
                acc += 1.0 / (u * u);
            }
            acc
        };
        for &phi in &[0.7, PI / 2.0, PI, 4.0] {
            let n = 2000;
            let (s1, s2, s4) = (partial(phi, n), partial(phi, 2 * n), partial(phi, 4 * n));
            let r1 = 2.0 * s2 - s1;
            let r2 = 2.0 * s4 - s2;
            let extrapolated = (4.0 * r2 - r1) / 3.0;
            let closed = inverse_square_sum(phi).unwrap();
            assert!((extrapolated - closed).abs() < 1e-8, "φ={phi}");
        }
    }

    proptest! {
        #[test]
        fn sin2_cube_periodic_and_reflective(phi in 0.0f64..TWO_PI) {
            let t = SeriesTolerance::default();
            let base = sum_sin2_cube(phi, &t).value;
            let shifted = sum_sin2_cube(phi + TWO_PI, &t).value;
            let reflected = sum_sin2_cube(TWO_PI - phi, &t).value;
            prop_assert!(base >= 0.0);
            // forming φ + 2π or 2π - φ rounds the argument, so the sums agree
            // to the conditioning of the input rather than bit for bit
            prop_assert!((base - reflected).abs() < 1e-14);
            prop_assert!((base - shifted).abs() < 1e-14);
        }
    }
}
