//! Limit cross-checks between the general sums and the closed forms.

use kinkforge_core::action::{
    gamma_fermion_general, gamma_fermion_massless0, gamma_scalar_general, gamma_scalar_high_t,
    gamma_scalar_massless0, gamma_scalar_summand, v_fermion_general, v_fermion_massless0,
    v_scalar_general, v_scalar_high_t, v_scalar_massless0, ActionError,
};
use kinkforge_core::specfun::{NeumaierSum, SeriesTolerance, TWO_PI};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Reported only.
    Warn,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Warn => "WARN",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub reference: f64,
    /// |value - reference| / |reference|
    pub deviation: f64,
    /// None for report-only checks.
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
}

fn check(name: String, value: f64, reference: f64, tolerance: Option<f64>) -> Check {
    let deviation = (value - reference).abs() / reference.abs();
    let verdict = match tolerance {
        Some(t) if deviation <= t => Verdict::Pass,
        Some(_) => Verdict::Fail,
        None => Verdict::Warn,
    };
    Check {
        name,
        value,
        reference,
        deviation,
        tolerance,
        verdict,
    }
}

/// The static (n = 0) frequency row of the scalar kinetic sum, summed
/// directly over momenta with an integral tail.
fn static_row_direct(phi: f64, mu: f64, tau: f64, lambda: f64) -> f64 {
    let l_max = 200_000i64;
    let mut acc = NeumaierSum::new();
    for l in (1..=l_max).rev() {
        acc.add(gamma_scalar_summand(0, l, phi, mu, tau, lambda));
        acc.add(gamma_scalar_summand(0, -l, phi, mu, tau, lambda));
    }
    acc.add(gamma_scalar_summand(0, 0, phi, mu, tau, lambda));
    // Σ_{|l| > L} (λτ/4)/|2πl|³
    let tail = 0.25 * lambda * tau * 2.0 / TWO_PI.powi(3) / (2.0 * (l_max as f64 + 0.5).powi(2));
    acc.value() + tail
}

pub fn run_checks() -> Result<Vec<Check>, ActionError> {
    let tol = SeriesTolerance::default();
    let small_mu = 1e-4;
    let lambda = 0.01;
    let mut out = Vec::new();

    for &(label, phi) in &[("pi/4", PI / 4.0), ("pi/2", PI / 2.0), ("pi", PI)] {
        out.push(check(
            format!("scalar potential, mu -> 0 at phi = {label}"),
            v_scalar_general(phi, small_mu, 0.0, &tol)?.value,
            v_scalar_massless0(phi),
            Some(1e-3),
        ));
    }
    for &(label, phi) in &[("0", 0.0), ("pi/4", PI / 4.0), ("pi/2", PI / 2.0)] {
        out.push(check(
            format!("fermion potential, mu -> 0 at phi = {label}"),
            v_fermion_general(phi, small_mu, 0.0, &tol)?.value,
            v_fermion_massless0(phi),
            Some(1e-3),
        ));
    }
    // the massless fermion potential vanishes at π, so compare absolutely there
    let vf = v_fermion_general(PI, small_mu, 0.0, &tol)?.value;
    out.push(Check {
        name: "fermion potential, mu -> 0 at phi = pi (absolute)".into(),
        value: vf,
        reference: 0.0,
        deviation: vf.abs(),
        tolerance: Some(1e-6),
        verdict: if vf.abs() <= 1e-6 { Verdict::Pass } else { Verdict::Fail },
    });

    out.push(check(
        "scalar kinetic, mu -> 0 at phi = pi".into(),
        gamma_scalar_general(PI, small_mu, 0.0, lambda, &tol)?.value,
        gamma_scalar_massless0(PI, lambda)?,
        Some(1e-6),
    ));
    out.push(check(
        "scalar kinetic, tau -> 0 (tau = 0.01) at phi = pi".into(),
        gamma_scalar_general(PI, 0.0, 0.01, lambda, &tol)?.value,
        gamma_scalar_massless0(PI, lambda)?,
        Some(1e-6),
    ));
    out.push(check(
        "fermion kinetic, mu -> 0 at phi = pi".into(),
        gamma_fermion_general(PI, small_mu, 0.0, lambda, &tol)?.value,
        gamma_fermion_massless0(PI, lambda)?,
        Some(1e-6),
    ));
    out.push(check(
        "fermion kinetic, tau -> 0 (tau = 0.01) at phi = pi".into(),
        gamma_fermion_general(PI, 0.0, 0.01, lambda, &tol)?.value,
        gamma_fermion_massless0(PI, lambda)?,
        Some(1e-6),
    ));

    for &(phi, mu, tau) in &[(1.0, 0.5, 2.0), (PI, 0.05, 20.0)] {
        out.push(check(
            format!("static kinetic row vs high-T form at phi = {phi}, mu = {mu}, tau = {tau}"),
            gamma_scalar_high_t(phi, mu, tau, lambda)?,
            static_row_direct(phi, mu, tau, lambda),
            Some(1e-9),
        ));
    }

    for &(mu, tau) in &[(0.4, 20.0), (0.05, 20.0)] {
        out.push(check(
            format!("high-T potential vs full sums at phi = pi, mu = {mu}, tau = {tau}"),
            v_scalar_high_t(PI, mu, tau, &tol)?.value,
            v_scalar_general(PI, mu, tau, &tol)?.value,
            None,
        ));
    }
    Ok(out)
}
