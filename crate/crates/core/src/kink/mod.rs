//! Static kinks of the effective action.
//!
//! With Lagrangian ½κ(φ)φ'² + Ṽ(φ) and vacua at both ends, the static field
//! equation has the first integral ½κφ'² = Ṽ - Ṽ_vac. The mass becomes a
//! one-dimensional integral over φ, and the profile follows from a single
//! first-order equation.

mod fit;
mod profile;
mod sweep;

pub use fit::{linear_fit, tail_fit, LinearFit, TailFit, TailKind};
pub use profile::{kink_profile, KinkProfile, ProfileOptions, ZGrid};
pub use sweep::{high_t_mass_scaling, mass_curve, MassCurve, MassPoint, ScalingReport};

use crate::action::{ActionError, EffectiveModel};
use crate::quadrature::{integrate, QuadError, QuadOptions, Quadrature};
use crate::specfun::TWO_PI;
use std::f64::consts::PI;
use thiserror::Error;

/// Anything with a potential and a kinetic coefficient.
pub trait KinkModel: Sync {
    fn potential(&self, phi: f64) -> Result<f64, ActionError>;
    fn kinetic(&self, phi: f64) -> Result<f64, ActionError>;
    /// Coupling recorded with profiles.
    fn lambda(&self) -> f64;
}

impl KinkModel for EffectiveModel {
    fn potential(&self, phi: f64) -> Result<f64, ActionError> {
        EffectiveModel::potential(self, phi)
    }

    fn kinetic(&self, phi: f64) -> Result<f64, ActionError> {
        EffectiveModel::kinetic(self, phi)
    }

    fn lambda(&self) -> f64 {
        self.params().lambda()
    }
}

impl<M: KinkModel + ?Sized> KinkModel for &M {
    fn potential(&self, phi: f64) -> Result<f64, ActionError> {
        (**self).potential(phi)
    }

    fn kinetic(&self, phi: f64) -> Result<f64, ActionError> {
        (**self).kinetic(phi)
    }

    fn lambda(&self) -> f64 {
        (**self).lambda()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KinkError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("kinetic coefficient is not positive at φ = {phi} (κ = {kappa})")]
    Unstable { phi: f64, kappa: f64 },
    #[error("potential lies below its vacuum value at φ = {phi} ({excess})")]
    NegativePotential { phi: f64, excess: f64 },
    #[error("mass quadrature missed its tolerance: value {value}, error estimate {error}")]
    Quadrature { value: f64, error: f64 },
    #[error("profile integration failed: {0}")]
    Ode(String),
    #[error("profile does not reach the vacuum closely enough for a tail fit (closest {closest})")]
    InsufficientTail { closest: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl From<QuadError<KinkError>> for KinkError {
    fn from(e: QuadError<KinkError>) -> Self {
        match e {
            QuadError::Integrand(inner) => inner,
            QuadError::NotConverged(q) => KinkError::Quadrature {
                value: q.value,
                error: q.error,
            },
        }
    }
}

/// The left vacuum of the kink: 0 unless the potential is lower at π, as for
/// fermions. The kink runs from it to the same point plus 2π.
pub fn vacuum<M: KinkModel + ?Sized>(model: &M) -> Result<f64, KinkError> {
    let at_zero = model.potential(0.0)?;
    let at_pi = model.potential(PI)?;
    Ok(if at_pi < at_zero { PI } else { 0.0 })
}

/// Potential above its vacuum value, with rounding-level negatives clipped.
fn excess_potential<M: KinkModel + ?Sized>(model: &M, phi: f64, v_vac: f64) -> Result<f64, KinkError> {
    let excess = model.potential(phi)? - v_vac;
    let slack = 1e-12 * (1.0 + v_vac.abs());
    if excess < -slack {
        return Err(KinkError::NegativePotential { phi, excess });
    }
    Ok(excess.max(0.0))
}

fn positive_kinetic<M: KinkModel + ?Sized>(model: &M, phi: f64) -> Result<f64, KinkError> {
    let kappa = model.kinetic(phi)?;
    if !(kappa > 0.0) {
        return Err(KinkError::Unstable { phi, kappa });
    }
    Ok(kappa)
}

/// φ' = √(2(Ṽ - Ṽ_vac)/κ) from the first integral.
pub fn first_integral_speed<M: KinkModel + ?Sized>(model: &M, phi: f64) -> Result<f64, KinkError> {
    let vac = vacuum(model)?;
    let v_vac = model.potential(vac)?;
    speed_with_vacuum(model, phi, vac, v_vac)
}

pub(crate) fn speed_with_vacuum<M: KinkModel + ?Sized>(
    model: &M,
    phi: f64,
    vac: f64,
    v_vac: f64,
) -> Result<f64, KinkError> {
    let offset = phi - vac;
    if offset <= 0.0 || offset >= TWO_PI {
        return Ok(0.0);
    }
    let kappa = positive_kinetic(model, phi)?;
    let v = excess_potential(model, phi, v_vac)?;
    Ok((2.0 * v / kappa).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassOptions {
    pub quad: QuadOptions,
    /// Within this distance of a vacuum, φ - φ_vac = s·e^{-t} is integrated in t.
    pub endpoint_split: f64,
    /// Upper limit of t; e^{-t_max} is far below any tolerance.
    pub t_max: f64,
}

impl Default for MassOptions {
    fn default() -> Self {
        Self {
            quad: QuadOptions::default(),
            endpoint_split: 1.0,
            t_max: 60.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkMass {
    /// Scaled mass M̃ = ∫ √(2(Ṽ - Ṽ_vac)κ) dφ over one period.
    pub mass: f64,
    /// Sum of the quadrature error estimates.
    pub error: f64,
    pub evaluations: usize,
}

/// Scaled kink mass with default quadrature settings.
pub fn kink_mass<M: KinkModel + ?Sized>(model: &M) -> Result<KinkMass, KinkError> {
    kink_mass_with(model, &MassOptions::default())
}

pub fn kink_mass_with<M: KinkModel + ?Sized>(model: &M, opts: &MassOptions) -> Result<KinkMass, KinkError> {
    let vac = vacuum(model)?;
    let v_vac = model.potential(vac)?;
    let density = |phi: f64| -> Result<f64, KinkError> {
        let offset = phi - vac;
        if offset <= 0.0 || offset >= TWO_PI {
            return Ok(0.0);
        }
        let kappa = positive_kinetic(model, phi)?;
        let v = excess_potential(model, phi, v_vac)?;
        Ok((2.0 * v * kappa).sqrt())
    };
    let s = opts.endpoint_split.clamp(1e-6, PI);
    let parts: [Quadrature; 3] = [
        // near the left vacuum, φ = vac + s e^{-t}
        integrate(
            |t: f64| {
                let d = s * (-t).exp();
                Ok(density(vac + d)? * d)
            },
            0.0,
            opts.t_max,
            &opts.quad,
        )?,
        integrate(&density, vac + s, vac + TWO_PI - s, &opts.quad)?,
        // near the right vacuum, φ = vac + 2π - s e^{-t}
        integrate(
            |t: f64| {
                let d = s * (-t).exp();
                Ok(density(vac + TWO_PI - d)? * d)
            },
            0.0,
            opts.t_max,
            &opts.quad,
        )?,
    ];
    Ok(KinkMass {
        mass: parts.iter().map(|q| q.value).sum(),
        error: parts.iter().map(|q| q.error).sum(),
        evaluations: parts.iter().map(|q| q.evaluations).sum(),
    })
}
