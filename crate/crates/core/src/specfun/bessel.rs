use super::SpecfunError;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Below this argument K₀ and K₁ come from the power series, above it from
/// Steed's continued fraction. Both branches agree to better than 1e-13 here.
const SERIES_SWITCH: f64 = 2.0;

/// Modified Bessel function of the second kind of half-odd order `two_nu / 2`,
/// for `two_nu` in {1, 3, 5}.
///
/// These orders have closed forms: K_{1/2}(x) = √(π/2x) e^{-x}, and the higher
/// orders follow from the upward recurrence K_{ν+1} = K_{ν-1} + (2ν/x) K_ν.
/// The result underflows quietly to zero for very large `x`.
pub fn bessel_k_half_odd(two_nu: u32, x: f64) -> Result<f64, SpecfunError> {
    if !(x > 0.0) {
        return Err(SpecfunError::Domain {
            function: "bessel_k_half_odd",
            detail: format!("argument must be positive, got {x}"),
        });
    }
    let k_half = (PI / (2.0 * x)).sqrt() * (-x).exp();
    match two_nu {
        1 => Ok(k_half),
        3 => Ok(k_half * (1.0 + 1.0 / x)),
        5 => {
            let k_three_halves = k_half * (1.0 + 1.0 / x);
            Ok(k_half + 3.0 / x * k_three_halves)
        }
        _ => Err(SpecfunError::Domain {
            function: "bessel_k_half_odd",
            detail: format!("order {two_nu}/2 is not supported (use 1, 3 or 5)"),
        }),
    }
}

/// Modified Bessel function of the second kind K_n(x) for n in {0, 1, 2}.
pub fn bessel_k_int(n: u32, x: f64) -> Result<f64, SpecfunError> {
    if !(x > 0.0) {
        return Err(SpecfunError::Domain {
            function: "bessel_k_int",
            detail: format!("argument must be positive, got {x}"),
        });
    }
    if n > 2 {
        return Err(SpecfunError::Domain {
            function: "bessel_k_int",
            detail: format!("order {n} is not supported (use 0, 1 or 2)"),
        });
    }
    let (k0, k1) = k01(x);
    Ok(match n {
        0 => k0,
        1 => k1,
        _ => k0 + 2.0 / x * k1,
    })
}

/// K₀ and K₁ at a positive argument, without domain checks.
pub(crate) fn k01(x: f64) -> (f64, f64) {
    if x < SERIES_SWITCH {
        k01_series(x)
    } else {
        k01_continued_fraction(x)
    }
}

/// Ascending series for small arguments.
///
/// K₀(x) = -(ln(x/2) + γ) I₀(x) + Σ H_k (x²/4)^k / (k!)²
/// K₁(x) = 1/x + ln(x/2) I₁(x) - (x/4) Σ [ψ(k+1) + ψ(k+2)] (x²/4)^k / (k!(k+1)!)
pub(crate) fn k01_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let log_half = (0.5 * x).ln();

    // k = 0 terms
    let mut c0 = 1.0; // (x²/4)^k / (k!)²
    let mut c1 = 1.0; // (x²/4)^k / (k!(k+1)!)
    let mut harmonic = 0.0; // H_k
    let mut i0 = c0;
    let mut i1 = c1;
    let mut s0 = 0.0;
    // ψ(1) + ψ(2) = -2γ + 1
    let mut s1 = c1 * (1.0 - 2.0 * EULER_GAMMA);

    for k in 1..200 {
        let kf = k as f64;
        c0 *= q / (kf * kf);
        c1 *= q / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        // ψ(k+1) + ψ(k+2) = -2γ + H_k + H_{k+1}
        let psi_pair = -2.0 * EULER_GAMMA + harmonic + harmonic + 1.0 / (kf + 1.0);
        i0 += c0;
        i1 += c1;
        s0 += harmonic * c0;
        s1 += psi_pair * c1;
        if c0 * (harmonic + 1.0) < 1e-17 * i0.abs() && c1 * psi_pair.abs() < 1e-17 * s1.abs() {
            break;
        }
    }
    let k0 = -(log_half + EULER_GAMMA) * i0 + s0;
    let k1 = 1.0 / x + log_half * (0.5 * x * i1) - 0.25 * x * s1;
    (k0, k1)
}

/// Steed's continued-fraction (CF2) evaluation for x ≥ 2, in the
/// Thompson-Barnett form with order ν = 0.
pub(crate) fn k01_continued_fraction(x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-16;
    let a1 = 0.25; // 1/4 - ν²
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}
