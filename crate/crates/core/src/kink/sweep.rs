use super::{kink_mass_with, linear_fit, KinkError, KinkMass, LinearFit, MassOptions};
use crate::action::{build_model_with, EffectiveModel, MatterSpecies, ModelOptions, ModelParams, ThermalForm};
use crate::specfun::SeriesTolerance;
use rayon::prelude::*;

/// One coupling of a mass sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct MassPoint {
    pub lambda: f64,
    /// With the model's derivative corrections.
    pub mass: Result<KinkMass, KinkError>,
    /// With κ ≡ 1.
    pub baseline: Result<KinkMass, KinkError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassCurve {
    /// In input order.
    pub points: Vec<MassPoint>,
    /// M̃ ≈ a + bλ over the points that succeeded; None with fewer than two.
    pub fit: Option<LinearFit>,
    /// Smallest and largest coupling entering the fit.
    pub fit_window: Option<(f64, f64)>,
}

impl MassCurve {
    pub fn lambdas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lambda).collect()
    }

    pub fn masses(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.mass.as_ref().ok().map(|m| m.mass)).collect()
    }

    pub fn baselines(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.baseline.as_ref().ok().map(|m| m.mass)).collect()
    }
}

/// Kink mass of `model` at each coupling, evaluated in parallel.
pub fn mass_curve(model: &EffectiveModel, lambdas: &[f64], opts: &MassOptions) -> Result<MassCurve, KinkError> {
    if let Some(bad) = lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return Err(KinkError::InvalidInput(format!("couplings must be positive, got {bad}")));
    }
    let points: Vec<MassPoint> = lambdas
        .par_iter()
        .map(|&lambda| {
            let at = model.with_lambda(lambda).map_err(KinkError::from);
            let mass = at.clone().and_then(|m| kink_mass_with(&m, opts));
            let baseline = at.and_then(|m| kink_mass_with(&m.with_derivative_corrections(false), opts));
            MassPoint { lambda, mass, baseline }
        })
        .collect();
    let (x, y): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter_map(|p| p.mass.as_ref().ok().map(|m| (p.lambda, m.mass)))
        .unzip();
    let fit = linear_fit(&x, &y);
    let fit_window = fit.map(|_| {
        (
            x.iter().cloned().fold(f64::INFINITY, f64::min),
            x.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        )
    });
    Ok(MassCurve { points, fit, fit_window })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub tau: f64,
    pub lambda: f64,
    pub derivative_corrections: bool,
    pub mus: Vec<f64>,
    pub masses: Vec<f64>,
    /// Slope of ln M̃ against ln μ; None for a single mass.
    pub fit: Option<LinearFit>,
    pub warnings: Vec<String>,
}

impl ScalingReport {
    pub fn exponent(&self) -> Option<f64> {
        self.fit.map(|f| f.b)
    }
}

/// Kink masses of a single massive scalar in the high-temperature form,
/// and the power of μ they follow.
pub fn high_t_mass_scaling(
    mus: &[f64],
    tau: f64,
    lambda: f64,
    derivative_corrections: bool,
    tol: SeriesTolerance,
    opts: &MassOptions,
) -> Result<ScalingReport, KinkError> {
    if mus.is_empty() {
        return Err(KinkError::InvalidInput("no masses given".into()));
    }
    let params = ModelParams::new(lambda, tau, tol)?;
    let options = ModelOptions {
        derivative_corrections,
        thermal_form: ThermalForm::HighTemperature,
    };
    let masses = mus
        .par_iter()
        .map(|&mu| {
            let model = build_model_with(&[MatterSpecies::scalar(mu)?], params, options)?;
            kink_mass_with(&model, opts).map(|m| m.mass)
        })
        .collect::<Result<Vec<f64>, KinkError>>()?;

    let mut warnings = Vec::new();
    if tau < 5.0 {
        warnings.push(format!("τ = {tau} is not large; the high-temperature form assumes τ ≫ 1"));
    }
    let (lo, hi) = mus
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &m| (lo.min(m), hi.max(m)));
    if mus.len() > 1 && hi / lo < 10.0 {
        warnings.push(format!("masses span only a factor {:.3}; the exponent is poorly constrained", hi / lo));
    }
    let log_mu: Vec<f64> = mus.iter().map(|m| m.ln()).collect();
    let log_mass: Vec<f64> = masses.iter().map(|m| m.ln()).collect();
    Ok(ScalingReport {
        tau,
        lambda,
        derivative_corrections,
        mus: mus.to_vec(),
        masses,
        fit: linear_fit(&log_mu, &log_mass),
        warnings,
    })
}
