//! One-loop effective action for the Wilson-line angle φ.
//!
//! Every quantity is dimensionless with the circle length set to one: the
//! coupling is λ = e²L, masses are μ = mL and the temperature is τ = TL.
//! Each matter species contributes a potential Ṽ(φ) and a correction γ(φ) to
//! the kinetic coefficient κ(φ) = 1 + Σγ(φ).

mod general;
mod high_temperature;
mod massless;

pub use general::{
    gamma_fermion_general, gamma_fermion_summand, gamma_scalar_decay, gamma_scalar_general,
    gamma_scalar_matsubara_row, gamma_scalar_summand, v_fermion_general, v_fermion_general_via,
    v_scalar_general, v_scalar_general_via, PotentialRoute,
};
pub use high_temperature::{gamma_scalar_high_t, v_scalar_high_t};
pub use massless::{
    gamma_fermion_massless0, gamma_scalar_massless0, gamma_ym, v_fermion_massless0,
    v_scalar_massless0, v_ym,
};

use crate::specfun::{SeriesTolerance, SpecfunError, SumResult};
use std::fmt;
use thiserror::Error;

/// Couplings above this are outside the comfortable range of the derivative
/// expansion.
pub const LAMBDA_ADVISORY: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ActionError {
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{quantity} did not converge at φ = {phi}: value {value}, remainder estimate {tail_bound}")]
    NotConverged {
        quantity: &'static str,
        phi: f64,
        value: f64,
        tail_bound: f64,
    },
    #[error("the species list is empty")]
    EmptySpecies,
    #[error("Yang-Mills fields are only available at zero temperature")]
    YangMillsAtFiniteTemperature,
    #[error("unsupported model: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpeciesKind {
    ComplexScalar,
    DiracFermion,
    YangMillsSU2,
}

impl fmt::Display for SpeciesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpeciesKind::ComplexScalar => "scalar",
            SpeciesKind::DiracFermion => "fermion",
            SpeciesKind::YangMillsSU2 => "ym",
        })
    }
}

/// One kind of matter with its mass and number of identical copies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatterSpecies {
    kind: SpeciesKind,
    mu: f64,
    copies: u32,
}

impl MatterSpecies {
    pub fn new(kind: SpeciesKind, mu: f64, copies: u32) -> Result<Self, ActionError> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(ActionError::InvalidParameter(format!(
                "mass must be finite and non-negative, got {mu}"
            )));
        }
        if copies == 0 {
            return Err(ActionError::InvalidParameter("copies must be positive".into()));
        }
        if kind == SpeciesKind::YangMillsSU2 && (mu != 0.0 || copies != 1) {
            return Err(ActionError::InvalidParameter(
                "SU(2) Yang-Mills is massless and comes as a single copy".into(),
            ));
        }
        Ok(Self { kind, mu, copies })
    }

    pub fn scalar(mu: f64) -> Result<Self, ActionError> {
        Self::new(SpeciesKind::ComplexScalar, mu, 1)
    }

    pub fn fermion(mu: f64) -> Result<Self, ActionError> {
        Self::new(SpeciesKind::DiracFermion, mu, 1)
    }

    pub fn yang_mills() -> Self {
        Self {
            kind: SpeciesKind::YangMillsSU2,
            mu: 0.0,
            copies: 1,
        }
    }

    pub fn kind(&self) -> SpeciesKind {
        self.kind
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn copies(&self) -> u32 {
        self.copies
    }
}

/// Coupling, temperature and series tolerances shared by all species.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    lambda: f64,
    tau: f64,
    tol: SeriesTolerance,
}

impl ModelParams {
    pub fn new(lambda: f64, tau: f64, tol: SeriesTolerance) -> Result<Self, ActionError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(ActionError::InvalidParameter(format!(
                "coupling must be positive and finite, got {lambda}"
            )));
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(ActionError::InvalidParameter(format!(
                "temperature must be finite and non-negative, got {tau}"
            )));
        }
        Ok(Self { lambda, tau, tol })
    }

    /// Zero temperature with default tolerances.
    pub fn zero_temperature(lambda: f64) -> Result<Self, ActionError> {
        Self::new(lambda, 0.0, SeriesTolerance::default())
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn tol(&self) -> &SeriesTolerance {
        &self.tol
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self, ActionError> {
        Self::new(lambda, self.tau, self.tol)
    }

    pub fn with_tau(self, tau: f64) -> Result<Self, ActionError> {
        Self::new(self.lambda, tau, self.tol)
    }
}

/// Which closed form a finite-temperature scalar uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThermalForm {
    /// The full winding/Matsubara sums.
    #[default]
    Full,
    /// Only the static Matsubara sector, with the K₂ potential.
    HighTemperature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelOptions {
    /// With this off, κ ≡ 1.
    pub derivative_corrections: bool,
    pub thermal_form: ThermalForm,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            derivative_corrections: true,
            thermal_form: ThermalForm::Full,
        }
    }
}

/// Total potential and kinetic coefficient for a list of species.
///
/// Immutable once built; the evaluators are pure and can be shared across
/// threads.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveModel {
    species: Vec<MatterSpecies>,
    params: ModelParams,
    options: ModelOptions,
    warnings: Vec<String>,
}

/// Assemble a model with derivative corrections and the full thermal sums.
pub fn build_model(
    species: &[MatterSpecies],
    params: ModelParams,
) -> Result<EffectiveModel, ActionError> {
    build_model_with(species, params, ModelOptions::default())
}

pub fn build_model_with(
    species: &[MatterSpecies],
    params: ModelParams,
    options: ModelOptions,
) -> Result<EffectiveModel, ActionError> {
    if species.is_empty() {
        return Err(ActionError::EmptySpecies);
    }
    let has_ym = species.iter().any(|s| s.kind == SpeciesKind::YangMillsSU2);
    if has_ym && params.tau > 0.0 {
        return Err(ActionError::YangMillsAtFiniteTemperature);
    }
    if options.thermal_form == ThermalForm::HighTemperature {
        if params.tau <= 0.0 {
            return Err(ActionError::Unsupported(
                "the high-temperature form needs a positive temperature".into(),
            ));
        }
        if let Some(bad) = species
            .iter()
            .find(|s| s.kind != SpeciesKind::ComplexScalar || s.mu <= 0.0)
        {
            return Err(ActionError::Unsupported(format!(
                "the high-temperature form covers massive scalars only, got {} with mass {}",
                bad.kind, bad.mu
            )));
        }
    }
    let mut warnings = Vec::new();
    if params.lambda > LAMBDA_ADVISORY {
        warnings.push(format!(
            "coupling {} exceeds {LAMBDA_ADVISORY}; the derivative expansion assumes it is small",
            params.lambda
        ));
    }
    Ok(EffectiveModel {
        species: species.to_vec(),
        params,
        options,
        warnings,
    })
}

fn converged(quantity: &'static str, phi: f64, r: SumResult) -> Result<f64, ActionError> {
    if r.converged {
        Ok(r.value)
    } else {
        Err(ActionError::NotConverged {
            quantity,
            phi,
            value: r.value,
            tail_bound: r.tail_bound,
        })
    }
}

impl EffectiveModel {
    pub fn species(&self) -> &[MatterSpecies] {
        &self.species
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn options(&self) -> &ModelOptions {
        &self.options
    }

    /// Advisories raised while building the model.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// The same model with derivative corrections switched on or off.
    pub fn with_derivative_corrections(&self, on: bool) -> Self {
        let mut m = self.clone();
        m.options.derivative_corrections = on;
        m
    }

    /// The same species and options at a different coupling.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self, ActionError> {
        build_model_with(&self.species, self.params.with_lambda(lambda)?, self.options)
    }

    fn species_potential(&self, s: &MatterSpecies, phi: f64) -> Result<f64, ActionError> {
        let (mu, tau, tol) = (s.mu, self.params.tau, &self.params.tol);
        match (s.kind, self.options.thermal_form) {
            (SpeciesKind::YangMillsSU2, _) => Ok(v_ym(phi, tol)),
            (SpeciesKind::ComplexScalar, ThermalForm::HighTemperature) => {
                converged("potential", phi, v_scalar_high_t(phi, mu, tau, tol)?)
            }
            (SpeciesKind::ComplexScalar, _) if mu == 0.0 && tau == 0.0 => Ok(v_scalar_massless0(phi)),
            (SpeciesKind::ComplexScalar, _) => {
                converged("potential", phi, v_scalar_general(phi, mu, tau, tol)?)
            }
            (SpeciesKind::DiracFermion, _) if mu == 0.0 && tau == 0.0 => Ok(v_fermion_massless0(phi)),
            (SpeciesKind::DiracFermion, _) => {
                converged("potential", phi, v_fermion_general(phi, mu, tau, tol)?)
            }
        }
    }

    fn species_gamma(&self, s: &MatterSpecies, phi: f64) -> Result<f64, ActionError> {
        let (mu, tau, lambda, tol) = (s.mu, self.params.tau, self.params.lambda, &self.params.tol);
        match (s.kind, self.options.thermal_form) {
            (SpeciesKind::YangMillsSU2, _) => gamma_ym(phi, lambda),
            (SpeciesKind::ComplexScalar, ThermalForm::HighTemperature) => {
                gamma_scalar_high_t(phi, mu, tau, lambda)
            }
            (SpeciesKind::ComplexScalar, _) if mu == 0.0 && tau == 0.0 => {
                gamma_scalar_massless0(phi, lambda)
            }
            (SpeciesKind::ComplexScalar, _) => {
                converged("kinetic correction", phi, gamma_scalar_general(phi, mu, tau, lambda, tol)?)
            }
            (SpeciesKind::DiracFermion, _) if mu == 0.0 && tau == 0.0 => {
                gamma_fermion_massless0(phi, lambda)
            }
            (SpeciesKind::DiracFermion, _) => converged(
                "kinetic correction",
                phi,
                gamma_fermion_general(phi, mu, tau, lambda, tol)?,
            ),
        }
    }

    /// Ṽ(φ), summed over species with their copy counts.
    pub fn potential(&self, phi: f64) -> Result<f64, ActionError> {
        let mut total = 0.0;
        for s in &self.species {
            total += s.copies as f64 * self.species_potential(s, phi)?;
        }
        Ok(total)
    }

    /// Σγ(φ), zero when derivative corrections are off.
    pub fn gamma(&self, phi: f64) -> Result<f64, ActionError> {
        if !self.options.derivative_corrections {
            return Ok(0.0);
        }
        let mut total = 0.0;
        for s in &self.species {
            total += s.copies as f64 * self.species_gamma(s, phi)?;
        }
        Ok(total)
    }

    /// κ(φ) = 1 + Σγ(φ).
    pub fn kinetic(&self, phi: f64) -> Result<f64, ActionError> {
        Ok(1.0 + self.gamma(phi)?)
    }
}
