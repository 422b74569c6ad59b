use super::{speed_with_vacuum, tail_fit, vacuum, KinkError, KinkModel, TailFit};
use crate::ode::{OdeOptions, Stepper};
use crate::specfun::TWO_PI;
use std::f64::consts::PI;

/// Where the profile is sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum ZGrid {
    /// Uniform spacing `step` in both directions from z = 0, stopping once
    /// φ is within `vacuum_distance` of the vacuum or |z| exceeds `z_max`.
    Auto {
        step: f64,
        vacuum_distance: f64,
        z_max: Option<f64>,
    },
    /// Exactly these points, sorted ascending.
    Explicit(Vec<f64>),
}

impl Default for ZGrid {
    fn default() -> Self {
        ZGrid::Auto {
            step: 0.05,
            vacuum_distance: 1e-4,
            z_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileOptions {
    pub grid: ZGrid,
    pub ode: OdeOptions,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            grid: ZGrid::default(),
            ode: OdeOptions {
                initial_step: 1e-2,
                ..OdeOptions::default()
            },
        }
    }
}

/// A sampled kink, centred so that φ(0) is halfway between the vacua.
#[derive(Debug, Clone, PartialEq)]
pub struct KinkProfile {
    pub z: Vec<f64>,
    pub phi: Vec<f64>,
    pub lambda: f64,
    pub left_vacuum: f64,
    pub right_vacuum: f64,
    /// Power or exponential fit to the z < 0 tail, when the tail is long enough.
    pub tail: Option<TailFit>,
    /// ∫ [½κφ'² + Ṽ - Ṽ_vac] dz over the samples, by the trapezoid rule.
    pub energy: f64,
    /// max |½κφ'² - (Ṽ - Ṽ_vac)| / max(Ṽ - Ṽ_vac) with φ' from finite
    /// differences of the samples.
    pub first_integral_residual: f64,
    pub rhs_evaluations: usize,
}

impl KinkProfile {
    /// A profile from given samples, for fitting data from elsewhere.
    pub fn from_samples(z: Vec<f64>, phi: Vec<f64>, left_vacuum: f64) -> Result<Self, KinkError> {
        if z.len() != phi.len() {
            return Err(KinkError::InvalidInput("z and φ must have the same length".into()));
        }
        Ok(Self {
            z,
            phi,
            lambda: f64::NAN,
            left_vacuum,
            right_vacuum: left_vacuum + TWO_PI,
            tail: None,
            energy: f64::NAN,
            first_integral_residual: f64::NAN,
            rhs_evaluations: 0,
        })
    }
}

fn ode_error<E: std::fmt::Display>(e: crate::ode::OdeError<E>) -> KinkError {
    KinkError::Ode(e.to_string())
}

/// Integrate dφ/dz = ±√(2(Ṽ - Ṽ_vac)/κ) outward from the centre.
pub fn kink_profile<M: KinkModel + ?Sized>(model: &M, opts: &ProfileOptions) -> Result<KinkProfile, KinkError> {
    let vac = vacuum(model)?;
    let v_vac = model.potential(vac)?;
    let centre = vac + PI;
    let lambda = model.lambda();

    // s = |z|; φ moves toward the right vacuum (sign +1) or the left one (-1)
    let half = |sign: f64, targets: &[f64]| -> Result<(Vec<f64>, Vec<f64>, usize), KinkError> {
        let rhs = |_s: f64, phi: f64| speed_with_vacuum(model, phi, vac, v_vac).map(|v| sign * v);
        let mut stepper = Stepper::new(rhs, 0.0, centre, opts.ode);
        let (mut s_out, mut phi_out) = (Vec::new(), Vec::new());
        match &opts.grid {
            ZGrid::Explicit(_) => {
                for &s in targets {
                    let phi = if s == 0.0 { centre } else { stepper.advance_to(s).map_err(ode_error)? };
                    s_out.push(s);
                    phi_out.push(phi);
                }
            }
            ZGrid::Auto {
                step,
                vacuum_distance,
                z_max,
            } => {
                let limit = z_max.unwrap_or_else(|| (200.0 / lambda.sqrt()).min(1e4));
                let limit = if limit.is_finite() { limit } else { 1e4 };
                s_out.push(0.0);
                phi_out.push(centre);
                let mut i = 1usize;
                loop {
                    let s = *step * i as f64;
                    if s > limit {
                        break;
                    }
                    let phi = stepper.advance_to(s).map_err(ode_error)?;
                    s_out.push(s);
                    phi_out.push(phi);
                    let distance = if sign > 0.0 { vac + TWO_PI - phi } else { phi - vac };
                    if distance < *vacuum_distance {
                        break;
                    }
                    i += 1;
                }
            }
        }
        Ok((s_out, phi_out, stepper.evaluations))
    };

    let (left_targets, right_targets) = match &opts.grid {
        ZGrid::Explicit(z) => {
            if z.is_empty() || z.iter().any(|v| !v.is_finite()) || z.windows(2).any(|w| w[1] <= w[0]) {
                return Err(KinkError::InvalidInput(
                    "z-grid must be finite and strictly increasing".into(),
                ));
            }
            let left: Vec<f64> = z.iter().filter(|&&v| v < 0.0).rev().map(|v| -v).collect();
            let right: Vec<f64> = z.iter().filter(|&&v| v >= 0.0).copied().collect();
            (left, right)
        }
        ZGrid::Auto { step, vacuum_distance, .. } => {
            if !(*step > 0.0 && step.is_finite()) || !(*vacuum_distance > 0.0) {
                return Err(KinkError::InvalidInput(
                    "auto grid needs a positive step and vacuum distance".into(),
                ));
            }
            (Vec::new(), Vec::new())
        }
    };

    let (s_left, phi_left, evals_left) = half(-1.0, &left_targets)?;
    let (s_right, phi_right, evals_right) = half(1.0, &right_targets)?;

    let mut z = Vec::with_capacity(s_left.len() + s_right.len());
    let mut phi = Vec::with_capacity(z.capacity());
    // the centre sample appears in both halves of the auto grid
    let skip_centre = matches!(opts.grid, ZGrid::Auto { .. });
    for (s, p) in s_left.iter().zip(&phi_left).rev() {
        if skip_centre && *s == 0.0 {
            continue;
        }
        z.push(-s);
        phi.push(*p);
    }
    z.extend_from_slice(&s_right);
    phi.extend_from_slice(&phi_right);

    let mut profile = KinkProfile {
        z,
        phi,
        lambda,
        left_vacuum: vac,
        right_vacuum: vac + TWO_PI,
        tail: None,
        energy: 0.0,
        first_integral_residual: 0.0,
        rhs_evaluations: evals_left + evals_right,
    };
    diagnose(model, &mut profile, v_vac)?;
    profile.tail = tail_fit(&profile).ok();
    Ok(profile)
}

/// Energy along the samples and the first-integral residual.
fn diagnose<M: KinkModel + ?Sized>(model: &M, p: &mut KinkProfile, v_vac: f64) -> Result<(), KinkError> {
    let n = p.z.len();
    let mut excess = Vec::with_capacity(n);
    let mut kappa = Vec::with_capacity(n);
    for &phi in &p.phi {
        let inside = phi > p.left_vacuum && phi < p.right_vacuum;
        excess.push(if inside { (model.potential(phi)? - v_vac).max(0.0) } else { 0.0 });
        kappa.push(if inside { model.kinetic(phi)? } else { 1.0 });
    }
    // ½κφ'² = Ṽ - Ṽ_vac on the exact solution, so the energy density is 2(Ṽ - Ṽ_vac)
    let mut energy = 0.0;
    for i in 1..n {
        energy += (p.z[i] - p.z[i - 1]) * (excess[i] + excess[i - 1]);
    }
    p.energy = energy;

    let peak = excess.iter().cloned().fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for i in 1..n.saturating_sub(1) {
        let (h0, h1) = (p.z[i] - p.z[i - 1], p.z[i + 1] - p.z[i]);
        // three-point derivative on a possibly uneven grid
        let d = (h0 * h0 * (p.phi[i + 1] - p.phi[i]) + h1 * h1 * (p.phi[i] - p.phi[i - 1]))
            / (h0 * h1 * (h0 + h1));
        let residual = (0.5 * kappa[i] * d * d - excess[i]).abs();
        worst = worst.max(residual);
    }
    p.first_integral_residual = if peak > 0.0 { worst / peak } else { 0.0 };
    Ok(())
}
