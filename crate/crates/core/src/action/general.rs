//! Massive fields at arbitrary temperature.
//!
//! The potentials are double sums over winding numbers `(n, l)` of
//! K_{3/2}(z)/z^{3/2}. When the temperature is high or the mass small the
//! winding sum converges slowly in `n`, so it is Poisson-resummed into a
//! Matsubara-frequency sum of K₁ terms, which converges fast exactly there.
//! Both routes are exposed so they can be checked against each other.
//!
//! The kinetic corrections are sums over frequencies `n` and momenta `l` of
//! rational kernels that decay only as a power. Each frequency row is summed
//! directly near the pole and closed with an Euler-Maclaurin tail; the rows
//! themselves approach K/c_n² and are closed the same way.

use super::ActionError;
use crate::specfun::{
    fold_angle, lattice_sum_with, series_sum, sum_fermion_cube, sum_sin2_cube, sum_sin2_square,
    Decay, LatticeOptions, NeumaierSum, SeriesTolerance, SpecfunError, SumResult, TWO_PI,
};
use std::f64::consts::PI;

/// Above this mass the τ = 0 kinetic sums equal their large-μ limits to
/// double precision.
const LARGE_MASS: f64 = 40.0;

/// Momenta summed directly on each side of a frequency row.
const ROW_DIRECT: i64 = 128;

/// Minimum number of frequency rows summed directly.
const MIN_ROWS: i64 = 40;

/// Exponent below which K-type terms are treated as negligible when sizing
/// lattice routes.
const DECAY_BUDGET: f64 = 37.0;

/// Summation route for the finite-temperature potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialRoute {
    /// Pick whichever route needs fewer terms.
    Auto,
    /// Sum over winding numbers in space and Euclidean time.
    Winding,
    /// Sum over Matsubara frequencies and spatial windings.
    Matsubara,
}

fn check_mass_temperature(function: &'static str, mu: f64, tau: f64) -> Result<(), ActionError> {
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(domain(function, format!("mass must be finite and non-negative, got {mu}")));
    }
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(domain(
            function,
            format!("temperature must be finite and non-negative, got {tau}"),
        ));
    }
    Ok(())
}

fn check_lambda(function: &'static str, lambda: f64) -> Result<(), ActionError> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(domain(function, format!("coupling must be finite and non-negative, got {lambda}")));
    }
    Ok(())
}

fn domain(function: &'static str, detail: String) -> ActionError {
    ActionError::from(SpecfunError::Domain { function, detail })
}

/// K_{3/2}(z)/z^{3/2} = √(π/2) e^{-z} (1 + z)/z³.
#[inline]
fn half_odd_kernel(z: f64) -> f64 {
    (0.5 * PI).sqrt() * (-z).exp() * (1.0 + z) / (z * z * z)
}

#[inline]
fn k1(x: f64) -> f64 {
    if x > 705.0 {
        0.0
    } else {
        crate::specfun::k01(x).1
    }
}

fn choose_route(route: PotentialRoute, mu: f64, tau: f64, fermion: bool) -> PotentialRoute {
    if route != PotentialRoute::Auto {
        return route;
    }
    if mu == 0.0 {
        return PotentialRoute::Matsubara;
    }
    let l_extent = DECAY_BUDGET / mu;
    let winding = (2.0 * l_extent * tau.max(1.0) + 1.0) * (2.0 * l_extent + 1.0);
    let spacing = if fermion { PI * tau } else { TWO_PI * tau };
    let shells = DECAY_BUDGET / spacing + 1.0;
    let matsubara = (2.0 * shells + 1.0).powi(2) + l_extent;
    if winding < matsubara {
        PotentialRoute::Winding
    } else {
        PotentialRoute::Matsubara
    }
}

fn winding_options(tau: f64) -> LatticeOptions {
    LatticeOptions {
        n_stride: tau.round().max(1.0) as u64,
        ..Default::default()
    }
}

/// One massive complex scalar: Ṽ = (√2 μ³/π^{3/2}) Σ' K_{3/2}(z)/z^{3/2} sin²(lφ/2)
/// with z = μ√((n/τ)² + l²). At τ = 0 only the n = 0 row survives.
pub fn v_scalar_general(
    phi: f64,
    mu: f64,
    tau: f64,
    tol: &SeriesTolerance,
) -> Result<SumResult, ActionError> {
    v_scalar_general_via(phi, mu, tau, tol, PotentialRoute::Auto)
}

/// [`v_scalar_general`] with an explicit summation route.
pub fn v_scalar_general_via(
    phi: f64,
    mu: f64,
    tau: f64,
    tol: &SeriesTolerance,
    route: PotentialRoute,
) -> Result<SumResult, ActionError> {
    check_mass_temperature("v_scalar_general", mu, tau)?;
    let theta = fold_angle(phi);
    if theta == 0.0 {
        return Ok(SumResult::exact(0.0));
    }
    let sin2 = |l: f64| {
        let s = (0.5 * l * theta).sin();
        s * s
    };
    if tau == 0.0 {
        if mu == 0.0 {
            return Ok(sum_sin2_cube(theta, tol).scaled(2.0 / PI));
        }
        let pref = 2.0 * 2f64.sqrt() * mu.powi(3) / PI.powf(1.5);
        let envelope = |l: u64| pref * half_odd_kernel(mu * l as f64);
        return Ok(series_sum(1, |l| envelope(l) * sin2(l as f64), envelope, mu, tol));
    }

    match choose_route(route, mu, tau, false) {
        PotentialRoute::Winding if mu > 0.0 => {
            let pref = 2f64.sqrt() * mu.powi(3) / PI.powf(1.5);
            let term = |n: i64, l: i64| {
                if l == 0 {
                    return 0.0;
                }
                let (x, y) = (n as f64 / tau, l as f64);
                let z = mu * (x * x + y * y).sqrt();
                pref * half_odd_kernel(z) * sin2(y)
            };
            Ok(lattice_sum_with(term, tol, true, winding_options(tau)))
        }
        PotentialRoute::Winding => Err(domain(
            "v_scalar_general",
            "the winding route needs a positive mass".into(),
        )),
        _ => {
            let pref = 4.0 * tau / PI;
            let static_row = if mu == 0.0 {
                SumResult::exact(pref * sum_sin2_square(theta))
            } else {
                let envelope = |l: u64| pref * mu / l as f64 * k1(mu * l as f64);
                series_sum(1, |l| envelope(l) * sin2(l as f64), envelope, mu, tol)
            };
            // the lattice covers l ∈ ℤ \ {0}, hence the half weight
            let term = |k: i64, l: i64| {
                if k == 0 || l == 0 {
                    return 0.0;
                }
                let q = TWO_PI * tau * k as f64;
                let w = (mu * mu + q * q).sqrt();
                let la = l.unsigned_abs() as f64;
                0.5 * pref * w / la * k1(la * w) * sin2(la)
            };
            let modes = lattice_sum_with(term, tol, true, LatticeOptions::default());
            Ok(static_row.combine(1.0, modes, 1.0))
        }
    }
}

/// One massive Dirac fermion: Ṽ_f = (μ³/(√2 π^{3/2})) Σ' (-1)^n K_{3/2}(z)/z^{3/2}
/// (cos lφ - (-1)^l), which vanishes at φ = π.
pub fn v_fermion_general(
    phi: f64,
    mu: f64,
    tau: f64,
    tol: &SeriesTolerance,
) -> Result<SumResult, ActionError> {
    v_fermion_general_via(phi, mu, tau, tol, PotentialRoute::Auto)
}

/// [`v_fermion_general`] with an explicit summation route.
pub fn v_fermion_general_via(
    phi: f64,
    mu: f64,
    tau: f64,
    tol: &SeriesTolerance,
    route: PotentialRoute,
) -> Result<SumResult, ActionError> {
    check_mass_temperature("v_fermion_general", mu, tau)?;
    let theta = fold_angle(phi);
    let kernel = |l: f64| {
        let parity = if (l as i64) % 2 == 0 { 1.0 } else { -1.0 };
        (l * theta).cos() - parity
    };
    if tau == 0.0 {
        if mu == 0.0 {
            return Ok(sum_fermion_cube(theta, tol).scaled(1.0 / PI));
        }
        let pref = 2.0 * mu.powi(3) / (2f64.sqrt() * PI.powf(1.5));
        let envelope = |l: u64| 2.0 * pref * half_odd_kernel(mu * l as f64);
        return Ok(series_sum(
            1,
            |l| 0.5 * envelope(l) * kernel(l as f64),
            envelope,
            mu,
            tol,
        ));
    }

    match choose_route(route, mu, tau, true) {
        PotentialRoute::Winding if mu > 0.0 => {
            let pref = mu.powi(3) / (2f64.sqrt() * PI.powf(1.5));
            let term = |n: i64, l: i64| {
                if l == 0 {
                    return 0.0;
                }
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let (x, y) = (n as f64 / tau, l as f64);
                let z = mu * (x * x + y * y).sqrt();
                sign * pref * half_odd_kernel(z) * kernel(y.abs())
            };
            Ok(lattice_sum_with(term, tol, true, winding_options(tau)))
        }
        PotentialRoute::Winding => Err(domain(
            "v_fermion_general",
            "the winding route needs a positive mass".into(),
        )),
        _ => {
            let pref = 2.0 * tau / PI;
            let term = |k: i64, l: i64| {
                if l == 0 {
                    return 0.0;
                }
                let q = TWO_PI * tau * (k as f64 + 0.5);
                let w = (mu * mu + q * q).sqrt();
                let la = l.unsigned_abs() as f64;
                0.5 * pref * w / la * k1(la * w) * kernel(la)
            };
            Ok(lattice_sum_with(term, tol, true, LatticeOptions::default()))
        }
    }
}

/// sinh x - x without cancellation for small x.
fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut acc = term;
        let mut k = 3.0;
        while term.abs() > 1e-18 * acc.abs() {
            term *= x2 / ((k + 1.0) * (k + 2.0));
            acc += term;
            k += 2.0;
        }
        acc
    } else {
        x.sinh() - x
    }
}

/// Pieces of the τ = 0 momentum sums Σ_l 1/(u² + μ²) and Σ_l 1/(u² + μ²)²,
/// u = 2πl + θ, for 0 < μ ≤ LARGE_MASS. Returns (S₀, μ²S₂) and also
/// Σ_l u²/(u² + μ²)² = S₀ - μ²S₂.
fn momentum_sums(theta: f64, mu: f64) -> (f64, f64, f64) {
    let s2 = (0.5 * theta).sin().powi(2);
    let h2 = (0.5 * mu).sinh().powi(2);
    let d = 2.0 * (h2 + s2);
    let denom = 4.0 * mu * d * d;
    let sinh = mu.sinh();
    let s0 = sinh / (2.0 * mu * d);
    // sinh μ·D ∓ μ(1 - cosh μ cos θ), expanded so that nothing cancels
    let minus = 2.0 * s2 * sinh_minus_x(mu) + 2.0 * h2 * (sinh_minus_x(mu) + 2.0 * mu * (1.0 - s2));
    let plus = 2.0 * s2 * (sinh + mu) + 2.0 * h2 * (sinh_minus_x(mu) + 2.0 * mu * s2);
    (s0, minus / denom, plus / denom)
}

/// Σ_{l∈ℤ} (a u² + b)/(u² + c²)^{5/2}, u = 2πl + θ, with an estimate of the
/// truncation error.
fn row_sum(a: f64, b: f64, c2: f64, theta: f64) -> (f64, f64) {
    let g = |u: f64| {
        let r2 = u * u + c2;
        (a * u * u + b) / (r2 * r2 * r2.sqrt())
    };
    let mut acc = NeumaierSum::new();
    let (tail_pos, err_pos) = row_tail(a, b, c2, TWO_PI * ROW_DIRECT as f64 + theta);
    let (tail_neg, err_neg) = row_tail(a, b, c2, TWO_PI * (ROW_DIRECT + 1) as f64 - theta);
    acc.add(tail_neg);
    acc.add(tail_pos);
    for m in (0..=ROW_DIRECT).rev() {
        let mf = m as f64;
        if m >= 1 {
            acc.add(g(TWO_PI * mf - theta));
        }
        if m < ROW_DIRECT {
            acc.add(g(TWO_PI * mf + theta));
        }
    }
    (acc.value(), err_pos + err_neg)
}

/// Σ_{m≥0} g(u₀ + 2πm) by Euler-Maclaurin through the third derivative.
fn row_tail(a: f64, b: f64, c2: f64, u0: f64) -> (f64, f64) {
    let r2 = u0 * u0 + c2;
    let r = r2.sqrt();
    let s = u0 / r;
    let rp = r + u0;
    let integral = a * (1.0 + s + s * s) / (3.0 * r * rp) + b * (2.0 + s) / (3.0 * r2 * rp * rp);
    // g = P·R with P = a u² + b and R = (u² + c²)^{-5/2}
    let p = a * u0 * u0 + b;
    let r5 = r2 * r2 * r;
    let (r7, r9) = (r5 * r2, r5 * r2 * r2);
    let r11 = r9 * r2;
    let d1 = -5.0 * u0 / r7;
    let d2 = -5.0 / r7 + 35.0 * u0 * u0 / r9;
    let d3 = 105.0 * u0 / r9 - 315.0 * u0 * u0 * u0 / r11;
    let g0 = p / r5;
    let g1 = 2.0 * a * u0 / r5 + p * d1;
    let g3 = p * d3 + 6.0 * a * u0 * d2 + 6.0 * a * d1;
    let w = TWO_PI;
    let value = integral / w + 0.5 * g0 - w * g1 / 12.0 + w.powi(3) * g3 / 720.0;
    let r8 = r2 * r2 * r2 * r2;
    let err = w.powi(5) * (2520.0 * a + 15120.0 * b / r2) / (30240.0 * r8);
    (value, err)
}

/// Σ_{n>N} 1/(a²(n + δ)² + μ²) by Euler-Maclaurin through the third derivative.
fn frequency_tail(spacing: f64, delta: f64, mu: f64, last: i64) -> (f64, f64) {
    let x = last as f64 + delta + 1.0;
    let m = mu / spacing;
    let a2 = spacing * spacing;
    let q = x * x + m * m;
    let integral = if m == 0.0 { 1.0 / x } else { (m / x).atan() / m };
    let h = 1.0 / q;
    let h1 = -2.0 * x / (q * q);
    let h3 = 24.0 * x * (m * m - x * x) / (q * q * q * q);
    let value = (integral + 0.5 * h - h1 / 12.0 + h3 / 720.0) / a2;
    let err = 720.0 / (30240.0 * a2 * x.powi(7));
    (value, err)
}

fn row_count(spacing: f64) -> i64 {
    ((DECAY_BUDGET + 3.0) / spacing).ceil().max(MIN_ROWS as f64) as i64
}

/// `scale` times the sum over frequency rows n ≥ 0 (bosonic rows n ≥ 1 count
/// twice, for ±n) of the momentum rows, closed by the K/c_n² tail. The number
/// of direct rows doubles until the error estimate meets the tolerance.
fn frequency_sum(
    theta: f64,
    mu: f64,
    tau: f64,
    fermion: bool,
    scale: f64,
    tol: &SeriesTolerance,
) -> SumResult {
    let spacing = TWO_PI * tau;
    let delta = if fermion { 0.5 } else { 0.0 };
    let first = row_count(spacing);
    let mut rows = first;
    loop {
        let mut acc = NeumaierSum::new();
        let (tail, tail_err) = frequency_tail(spacing, delta, mu, rows);
        let tail_weight = 2.0 / (3.0 * PI);
        acc.add(tail_weight * tail);
        let mut err = tail_weight * tail_err;
        for n in (0..=rows).rev() {
            let q = spacing * (n as f64 + delta);
            let c2 = q * q + mu * mu;
            let (row, row_err) = if fermion {
                row_sum(0.0, c2, c2, theta)
            } else {
                row_sum(1.0, 0.0, c2, theta)
            };
            let weight = if fermion || n == 0 { 1.0 } else { 2.0 };
            acc.add(weight * row);
            err += weight * row_err;
        }
        let value = scale * acc.value();
        let tail_bound = scale * err;
        let converged = tail_bound <= tol.threshold(value);
        if converged || rows >= 32 * first {
            return SumResult {
                value,
                terms_used: (rows as usize + 1) * (2 * ROW_DIRECT as usize + 1),
                tail_bound,
                converged,
            };
        }
        rows *= 2;
    }
}

/// One Matsubara row of the scalar kinetic correction,
/// (λτ/4) Σ_l (2πl + φ)²/[(2πτn)² + (2πl + φ)² + μ²]^{5/2}.
///
/// Row 0 is the high-temperature kinetic correction.
pub fn gamma_scalar_matsubara_row(
    phi: f64,
    mu: f64,
    tau: f64,
    lambda: f64,
    n: i64,
) -> Result<f64, ActionError> {
    check_mass_temperature("gamma_scalar_matsubara_row", mu, tau)?;
    check_lambda("gamma_scalar_matsubara_row", lambda)?;
    let theta = fold_angle(phi);
    let q = TWO_PI * tau * n as f64;
    let c2 = q * q + mu * mu;
    if c2 == 0.0 && theta == 0.0 {
        return Err(domain(
            "gamma_scalar_matsubara_row",
            "the static massless row diverges at φ ≡ 0".into(),
        ));
    }
    Ok(0.25 * lambda * tau * row_sum(1.0, 0.0, c2, theta).0)
}

/// One massive complex scalar:
/// γ = (λτ/4) Σ_{n,l} (2πl + φ)²/[(2πτn)² + (2πl + φ)² + μ²]^{5/2}.
/// At τ = 0 the frequency sum becomes an integral, done in closed form.
pub fn gamma_scalar_general(
    phi: f64,
    mu: f64,
    tau: f64,
    lambda: f64,
    tol: &SeriesTolerance,
) -> Result<SumResult, ActionError> {
    check_mass_temperature("gamma_scalar_general", mu, tau)?;
    check_lambda("gamma_scalar_general", lambda)?;
    let theta = fold_angle(phi);
    if mu == 0.0 && theta == 0.0 {
        return Err(domain(
            "gamma_scalar_general",
            "the massless correction diverges at φ ≡ 0".into(),
        ));
    }
    if tau == 0.0 {
        let sum = if mu == 0.0 {
            0.25 / (0.5 * theta).sin().powi(2)
        } else if mu > LARGE_MASS {
            0.25 / mu
        } else {
            momentum_sums(theta, mu).2
        };
        return Ok(SumResult::exact(lambda / (6.0 * PI) * sum));
    }

    Ok(frequency_sum(theta, mu, tau, false, 0.25 * lambda * tau, tol))
}

/// One massive Dirac fermion:
/// γ_f = (λτ/4) Σ_{n,l} [ω_n² + μ²]/[ω_n² + (2πl + φ)² + μ²]^{5/2},
/// ω_n = 2πτ(n + 1/2). At τ = 0 the frequency sum becomes an integral.
pub fn gamma_fermion_general(
    phi: f64,
    mu: f64,
    tau: f64,
    lambda: f64,
    tol: &SeriesTolerance,
) -> Result<SumResult, ActionError> {
    check_mass_temperature("gamma_fermion_general", mu, tau)?;
    check_lambda("gamma_fermion_general", lambda)?;
    let theta = fold_angle(phi);
    if tau == 0.0 {
        let sum = if mu == 0.0 {
            if theta == 0.0 {
                return Err(domain(
                    "gamma_fermion_general",
                    "the massless correction diverges at φ ≡ 0".into(),
                ));
            }
            0.25 / (0.5 * theta).sin().powi(2)
        } else if mu > LARGE_MASS {
            1.0 / mu
        } else {
            let (s0, mu2_s2, _) = momentum_sums(theta, mu);
            s0 + 2.0 * mu2_s2
        };
        return Ok(SumResult::exact(lambda / (12.0 * PI) * sum));
    }

    Ok(frequency_sum(theta, mu, tau, true, 0.5 * lambda * tau, tol))
}

/// Summand of the scalar kinetic correction at frequency `n` and momentum `l`.
pub fn gamma_scalar_summand(n: i64, l: i64, phi: f64, mu: f64, tau: f64, lambda: f64) -> f64 {
    let u = TWO_PI * l as f64 + fold_angle(phi);
    let q = TWO_PI * tau * n as f64;
    let r2 = q * q + u * u + mu * mu;
    0.25 * lambda * tau * u * u / (r2 * r2 * r2.sqrt())
}

/// Summand of the fermion kinetic correction at frequency `n` and momentum `l`.
pub fn gamma_fermion_summand(n: i64, l: i64, phi: f64, mu: f64, tau: f64, lambda: f64) -> f64 {
    let u = TWO_PI * l as f64 + fold_angle(phi);
    let q = TWO_PI * tau * (n as f64 + 0.5);
    let c2 = q * q + mu * mu;
    let r2 = c2 + u * u;
    0.25 * lambda * tau * c2 / (r2 * r2 * r2.sqrt())
}

/// Shell amplitude for [`gamma_scalar_summand`] as a power-law lattice sum:
/// on shell max(|n|, |l|) = s the summand is at most `amplitude · s⁻³`.
pub fn gamma_scalar_decay(tau: f64, lambda: f64) -> Decay {
    let reach = (TWO_PI * tau).min(PI);
    Decay::Power {
        exponent: 3.0,
        amplitude: 0.25 * lambda * tau / reach.powi(3),
    }
}
