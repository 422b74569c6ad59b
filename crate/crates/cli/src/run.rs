use crate::config::{Command, Format, Grid, RunConfig, Species};
use crate::output::{finite, Cell, Plot, ResultEnvelope};
use crate::svg::{line_chart, Series};
use crate::validate::{run_checks, Verdict};
use kinkforge_core::action::{
    build_model_with, v_scalar_general, v_scalar_high_t, EffectiveModel, MatterSpecies, ModelOptions,
    ModelParams, SpeciesKind, ThermalForm,
};
use kinkforge_core::kink::{
    high_t_mass_scaling, kink_mass_with, kink_profile, mass_curve, MassOptions, ProfileOptions, TailKind, ZGrid,
};
use kinkforge_core::quadrature::QuadOptions;
use kinkforge_core::specfun::{SeriesTolerance, TWO_PI};
use kinkforge_core::stability::{kinetic_scan, ym_critical_phi};
use rayon::prelude::*;
use serde_json::json;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Computation(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Computation(_) | CliError::Io(_) => 3,
        }
    }

    pub fn class(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Computation(_) => "computation",
            CliError::Io(_) => "io",
        }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn compute_err(at: impl std::fmt::Display, e: impl std::fmt::Display) -> CliError {
    CliError::Computation(format!("{at}: {e}"))
}

#[derive(Debug)]
pub struct RunOutput {
    pub envelope: ResultEnvelope,
    /// Set by `validate` when an asserted check fails.
    pub validation_failed: bool,
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        if self.validation_failed {
            4
        } else {
            0
        }
    }

    pub fn render(&self) -> Result<String, CliError> {
        let e = &self.envelope;
        match e.config.format {
            Format::Csv => Ok(e.to_csv()),
            Format::Json => Ok(e.to_json()),
            Format::Svg => {
                let p = e
                    .plot
                    .as_ref()
                    .ok_or_else(|| config_err(format!("{:?} has no plot; use csv or json", e.config.command)))?;
                Ok(line_chart(&p.title, &p.x_label, &p.y_label, &p.series))
            }
        }
    }
}

/// Execute a configuration, on a dedicated pool when `jobs` is set.
pub fn run(config: &RunConfig) -> Result<RunOutput, CliError> {
    check_config(config)?;
    match config.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| config_err(format!("cannot start {n} workers: {e}")))?
            .install(|| dispatch(config)),
        None => dispatch(config),
    }
}

fn check_config(c: &RunConfig) -> Result<(), CliError> {
    let finite_grid = |g: &Grid| g.values().iter().all(|v| v.is_finite());
    if !c.tau.is_finite() || !(c.tol > 0.0 && c.tol.is_finite()) {
        return Err(config_err("τ and the tolerance must be finite, the tolerance positive"));
    }
    for (name, g) in [("mu", Some(&c.mu)), ("lambda", Some(&c.lambda)), ("phi", c.phi.as_ref()), ("z", c.z.as_ref())] {
        if let Some(g) = g {
            if g.is_empty() || !finite_grid(g) {
                return Err(config_err(format!("--{name} must be a non-empty grid of finite numbers")));
            }
        }
    }
    if c.jobs == Some(0) {
        return Err(config_err("--jobs must be at least 1"));
    }
    if c.species.is_empty() {
        return Err(config_err("at least one --species is required"));
    }
    Ok(())
}

fn single(g: &Grid, name: &str, command: Command) -> Result<f64, CliError> {
    g.as_single()
        .ok_or_else(|| config_err(format!("{command:?} takes a single --{name}, got {g}")))
}

fn model_at(c: &RunConfig, lambda: f64, mu: f64) -> Result<EffectiveModel, CliError> {
    let species = c
        .species
        .iter()
        .map(|s| match s {
            Species::Scalar => MatterSpecies::new(SpeciesKind::ComplexScalar, mu, c.copies),
            Species::Fermion => MatterSpecies::new(SpeciesKind::DiracFermion, mu, c.copies),
            Species::Ym => Ok(MatterSpecies::yang_mills()),
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| config_err(e.to_string()))?;
    let params = ModelParams::new(lambda, c.tau, SeriesTolerance::default()).map_err(|e| config_err(e.to_string()))?;
    let options = ModelOptions {
        derivative_corrections: c.derivative_corrections,
        thermal_form: ThermalForm::Full,
    };
    build_model_with(&species, params, options).map_err(|e| config_err(e.to_string()))
}

fn model(c: &RunConfig) -> Result<EffectiveModel, CliError> {
    let lambda = single(&c.lambda, "lambda", c.command)?;
    let mu = single(&c.mu, "mu", c.command)?;
    model_at(c, lambda, mu)
}

fn mass_options(c: &RunConfig) -> MassOptions {
    MassOptions {
        quad: QuadOptions {
            abs_tol: c.tol,
            rel_tol: c.tol,
            ..QuadOptions::default()
        },
        ..MassOptions::default()
    }
}

fn dispatch(c: &RunConfig) -> Result<RunOutput, CliError> {
    let mut validation_failed = false;
    let mut envelope = match c.command {
        Command::Potential => potential(c)?,
        Command::Kinetic => kinetic(c)?,
        Command::Profile => profile(c)?,
        Command::Mass => mass(c)?,
        Command::Sweep => sweep(c)?,
        Command::Scaling => scaling(c)?,
        Command::Stability => stability(c)?,
        Command::Validate => {
            let e = validate(c)?;
            validation_failed = e.data.iter().any(|row| row[5] == Cell::Text("FAIL".into()));
            e
        }
    };
    if c.command != Command::Scaling && c.command != Command::Validate {
        if let Ok(lambda) = single(&c.lambda, "lambda", c.command) {
            if let Ok(m) = model_at(c, lambda, c.mu.as_single().unwrap_or(0.0)) {
                envelope.warnings.extend(m.warnings().iter().cloned());
            }
        }
    }
    Ok(RunOutput {
        envelope,
        validation_failed,
    })
}

fn phi_grid(c: &RunConfig, default: Grid) -> Vec<f64> {
    c.phi.clone().unwrap_or(default).values()
}

fn potential(c: &RunConfig) -> Result<ResultEnvelope, CliError> {
    let m = model(c)?;
    let phis = phi_grid(c, Grid::linear(0.0, TWO_PI, 65));
    let mut e = ResultEnvelope::new(c, &["phi", "potential"]);
    let values = phis
        .par_iter()
        .map(|&phi| m.potential(phi).map_err(|err| compute_err(format!("potential at φ = {phi}"), err)))
        .collect::<Result<Vec<f64>, _>>()?;
    for (&phi, &v) in phis.iter().zip(&values) {
        e.push_row(vec![phi.into(), v.into()]);
    }
    e.plot = Some(Plot {
        title: format!("Effective potential ({})", species_label(c)),
        x_label: "φ".into(),
        y_label: "Ṽ(φ)".into(),
        series: vec![Series {
            name: "Ṽ".into(),
            x: phis,
            y: values,
        }],
    });
    Ok(e)
}

fn kinetic(c: &RunConfig) -> Result<ResultEnvelope, CliError> {
    let m = model(c)?;
    let h = TWO_PI / 128.0;
    let phis = phi_grid(c, Grid::linear(h, TWO_PI - h, 127));
    let mut e = ResultEnvelope::new(c, &["phi", "gamma", "kappa"]);
    let values = phis
        .par_iter()
        .map(|&phi| {
            m.gamma(phi)
                .map_err(|err| compute_err(format!("kinetic coefficient at φ = {phi}"), err))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    for (&phi, &g) in phis.iter().zip(&values) {
        e.push_row(vec![phi.into(), g.into(), (1.0 + g).into()]);
    }
    e.plot = Some(Plot {
        title: format!("Kinetic coefficient ({}, λ = {})", species_label(c), c.lambda),
        x_label: "φ".into(),
        y_label: "κ(φ)".into(),
        series: vec![Series {
            name: "κ = 1 + γ".into(),
            x: phis,
            y: values.iter().map(|g| 1.0 + g).collect(),
        }],
    });
    Ok(e)
}

fn profile(c: &RunConfig) -> Result<ResultEnvelope, CliError> {
    let m = model(c)?;
    let lambda = m.params().lambda();
    let mut opts = ProfileOptions::default();
    if let Some(z) = &c.z {
        opts.grid = ZGrid::Explicit(z.values());
    }
    let at = format!("kink profile at λ = {lambda}");
    let p = kink_profile(&m, &opts).map_err(|err| compute_err(&at, err))?;
    let mass = kink_mass_with(&m, &mass_options(c)).map_err(|err| compute_err(&at, err))?;

    let mut e = ResultEnvelope::new(c, &["z", "phi"]);
    for (&z, &phi) in p.z.iter().zip(&p.phi) {
        e.push_row(vec![z.into(), phi.into()]);
    }
    e.diagnostic("lambda", lambda);
    e.diagnostic("left_vacuum", p.left_vacuum);
    e.diagnostic("right_vacuum", p.right_vacuum);
    e.diagnostic("mass", mass.mass);
    e.diagnostic("mass_error_estimate", mass.error);
    e.diagnostic("profile_energy", finite(p.energy));
    e.diagnostic("first_integral_residual", finite(p.first_integral_residual));
    e.diagnostic("rhs_evaluations", p.rhs_evaluations);
    e.diagnostic(
        "tail",
        match p.tail {
            Some(t) => json!({
                "kind": match t.kind { TailKind::Power => "power", TailKind::Exponential => "exponential" },
                "parameter": t.parameter,
                "power_exponent": t.power_exponent,
                "power_residual": t.power_residual,
                "exponential_rate": t.exponential_rate,
                "exponential_residual": t.exponential_residual,
                "window": [t.window.0, t.window.1],
                "points": t.points,
            }),
            None => serde_json::Value::Null,
        },
    );
    if p.energy.is_finite() && (p.energy - mass.mass).abs() > 5e-3 * mass.mass {
        e.warnings.push(format!(
            "profile energy {} differs from the quadrature mass {} by more than 0.5%",
            p.energy, mass.mass
        ));
    }
    e.plot = Some(Plot {
        title: format!("Kink profile ({}, λ = {lambda})", species_label(c)),
        x_label: "z".into(),
        y_label: "φ(z)".into(),
        series: vec![Series {
            name: if c.derivative_corrections { "with γ" } else { "κ ≡ 1" }.into(),
            x: p.z.clone(),
            y: p.phi.clone(),
        }],
    });
    Ok(e)
}

fn mass(c: &RunConfig) -> Result<ResultEnvelope, CliError> {
    let mu = single(&c.mu, "mu", c.command)?;
    let lambdas = c.lambda.values();
    let opts = mass_options(c);
    let models = lambdas
        .iter()
        .map(|&l| model_at(c, l, mu))
        .collect::<Result<Vec<_>, _>>()?;
    let results: Vec<_> = models.par_iter().map(|m| kink_mass_with(m, &opts)).collect();
    let mut e = ResultEnvelope::new(c, &["lambda", "mass", "error_estimate"]);
    let mut failed = 0;
    for (&lambda, r) in lambdas.iter().zip(&results) {
        match r {
            Ok(m) => e.push_row(vec![lambda.into(), m.mass.into(), m.error.into()]),
            Err(err) => {
                if lambdas.len() == 1 {
                    return Err(compute_err(format!("kink mass at λ = {lambda}"), err));
                }
                failed += 1;
                e.warnings.push(format!("kink mass at λ = {lambda} failed: {err}"));
                e.push_row(vec![lambda.into(), None.into(), None.into()]);
            }
        }
    }
    if failed == lambdas.len() {
        return Err(CliError::Computation("every kink mass failed".into()));
    }
    e.diagnostic("failed_points", failed);
    Ok(e)
}

fn sweep(c: &RunConfig) -> Result<ResultEnvelope, CliError> {
    let lambdas = c.lambda.values();
    if lambdas.len() < 2 {
        return Err(config_err("a sweep needs at least two couplings for its fit"));
    }
    let mu = single(&c.mu, "mu", c.command)?;
    let m = model_at(c, lambdas[0], mu)?;
    let curve = mass_curve(&m, &lambdas, &mass_options(c)).map_err(|err| compute_err("mass sweep", err))?;
    let mut e = ResultEnvelope::new(c, &["lambda", "mass", "baseline_mass"]);
    let (masses, baselines) = (curve.masses(), curve.baselines());
    for (i, p) in curve.points.iter().enumerate() {
        e.push_row(vec![p.lambda.into(), masses[i].into(), baselines[i].into()]);
        if let Err(err) = &p.mass {
            e.warnings.push(format!("kink mass at λ = {} failed: {err}", p.lambda));
        }
    }
    match curve.fit {
        Some(f) => {
            e.diagnostic("fit_a", f.a);
            e.diagnostic("fit_b", f.b);
            e.diagnostic("fit_rms", f.rms);
        }
        None => {
            e.diagnostic("fit_a", serde_json::Value::Null);
            e.diagnostic("fit_b", serde_json::Value::Null);
            e.warnings.push("fewer than two masses succeeded; the slope is undefined".into());
        }
    }
    if let Some((lo, hi)) = curve.fit_window {
        e.diagnostic("fit_window", json!([lo, hi]));
    }
    e.diagnostic("derivative_corrections", c.derivative_corrections);
    e.diagnostic("failed_points", masses.iter().filter(|m| m.is_none()).count());
    if let (Some(f), true) = (curve.fit, c.derivative_corrections) {
        let sign = if f.b > 0.0 { "increase" } else { "decrease" };
        e.diagnostic("correction_effect", format!("derivative corrections {sign} the mass"));
    }
    let label = if c.derivative_corrections { "with γ" } else { "κ ≡ 1" };
    e.plot = Some(Plot {
        title: format!("Kink mass ({})", species_label(c)),
        x_label: "λ".into(),
        y_label: "M̃".into(),
        series: vec![
            Series {
                name: label.into(),
                x: lambdas.clone(),
                y: masses.iter().map(|m| m.unwrap_or(f64::NAN)).collect(),
            },
            Series {
                name: "κ ≡ 1".into(),
                x: lambdas,
                y: baselines.iter().map(|m| m.unwrap_or(f64::NAN)).collect(),
            },
        ],
    });
    Ok(e)
}

fn scaling(c: &RunConfig) -> Result<ResultEnvelope, CliError> {
    if c.species != [Species::Scalar] {
        return Err(config_err("scaling uses a single massive scalar; pass --species scalar or nothing"));
    }
    if c.copies != 1 {
        return Err(config_err("scaling uses a single scalar copy"));
    }
    let lambda = single(&c.lambda, "lambda", c.command)?;
    let mus = c.mu.values();
    if mus.iter().any(|&m| !(m > 0.0)) {
        return Err(config_err("scaling needs positive masses"));
    }
    if !(c.tau > 0.0) {
        return Err(config_err("scaling needs a positive temperature"));
    }
    let tol = SeriesTolerance::default();
    let report = high_t_mass_scaling(&mus, c.tau, lambda, c.derivative_corrections, tol, &mass_options(c))
        .map_err(|err| compute_err(format!("high-temperature masses at τ = {}", c.tau), err))?;
    let mut e = ResultEnvelope::new(c, &["mu", "mass"]);
    for (&mu, &m) in report.mus.iter().zip(&report.masses) {
        e.push_row(vec![mu.into(), m.into()]);
    }
    e.warnings.extend(report.warnings.iter().cloned());
    e.diagnostic("tau", c.tau);
    e.diagnostic("lambda", lambda);
    match report.fit {
        Some(f) => {
            e.diagnostic("exponent", f.b);
            e.diagnostic("fit_rms", f.rms);
        }
        None => e.diagnostic("exponent", serde_json::Value::Null),
    }
    // how far the high-temperature potential is from the full sums at the smallest mass
    let mu_min = mus.iter().cloned().fold(f64::INFINITY, f64::min);
    let high = v_scalar_high_t(PI, mu_min, c.tau, &tol).map_err(|err| compute_err("high-T potential", err))?;
    let full = v_scalar_general(PI, mu_min, c.tau, &tol).map_err(|err| compute_err("full potential", err))?;
    let deviation = (high.value - full.value).abs() / full.value.abs();
    e.diagnostic(
        "high_t_potential_vs_full",
        json!({"phi": PI, "mu": mu_min, "tau": c.tau, "high_t": high.value, "full": full.value, "relative_deviation": finite(deviation)}),
    );
    e.warnings.push(format!(
        "WARN high-T potential differs from the full sums by {deviation:.3e} (relative) at φ = π, μ = {mu_min}, τ = {}",
        c.tau
    ));
    e.plot = Some(Plot {
        title: format!("High-temperature kink mass, τ = {}", c.tau),
        x_label: "ln μ".into(),
        y_label: "ln M̃".into(),
        series: vec![Series {
            name: match report.exponent() {
                Some(p) => format!("slope {p:.3}"),
                None => "masses".into(),
            },
            x: mus.iter().map(|m| m.ln()).collect(),
            y: report.masses.iter().map(|m| m.ln()).collect(),
        }],
    });
    Ok(e)
}

fn stability(c: &RunConfig) -> Result<ResultEnvelope, CliError> {
    let m = model(c)?;
    let lambda = m.params().lambda();
    let r = kinetic_scan(&m, c.grid_points).map_err(|err| match err {
        kinkforge_core::stability::StabilityError::GridTooSmall(_) => config_err(err.to_string()),
        other => compute_err(format!("kinetic scan at λ = {lambda}"), other),
    })?;
    let mut e = ResultEnvelope::new(c, &["phi_lo", "phi_hi"]);
    for &(lo, hi) in &r.unstable_intervals {
        e.push_row(vec![lo.into(), hi.into()]);
    }
    e.diagnostic("lambda", lambda);
    e.diagnostic("everywhere_stable", r.everywhere_stable);
    e.diagnostic("critical_points", r.critical_points.clone());
    if c.species.iter().all(|s| *s == Species::Ym) {
        e.diagnostic(
            "ym_critical_phi",
            match ym_critical_phi(lambda) {
                Ok(phi) => json!(phi),
                Err(err) => json!(err.to_string()),
            },
        );
    }
    let h = TWO_PI / 512.0;
    let phis: Vec<f64> = (1..512).map(|i| i as f64 * h).collect();
    let kappa = phis
        .iter()
        .map(|&p| m.kinetic(p))
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|err| compute_err("kinetic coefficient", err))?;
    e.plot = Some(Plot {
        title: format!("Kinetic coefficient ({}, λ = {lambda})", species_label(c)),
        x_label: "φ".into(),
        y_label: "κ(φ)".into(),
        series: vec![Series {
            name: "κ".into(),
            x: phis,
            y: kappa,
        }],
    });
    Ok(e)
}

fn validate(c: &RunConfig) -> Result<ResultEnvelope, CliError> {
    let checks = run_checks().map_err(|err| compute_err("validate", err))?;
    let mut e = ResultEnvelope::new(c, &["check", "value", "reference", "deviation", "tolerance", "status"]);
    for k in &checks {
        e.push_row(vec![
            k.name.clone().into(),
            k.value.into(),
            k.reference.into(),
            k.deviation.into(),
            k.tolerance.into(),
            k.verdict.as_str().into(),
        ]);
        if k.verdict == Verdict::Warn {
            e.warnings.push(format!("WARN {}: relative deviation {:.3e}", k.name, k.deviation));
        }
    }
    let count = |v: Verdict| checks.iter().filter(|k| k.verdict == v).count();
    e.diagnostic("passed", count(Verdict::Pass));
    e.diagnostic("failed", count(Verdict::Fail));
    e.diagnostic("warned", count(Verdict::Warn));
    Ok(e)
}

fn species_label(c: &RunConfig) -> String {
    let names: Vec<String> = c
        .species
        .iter()
        .map(|s| {
            let name = match s {
                Species::Scalar => "scalar",
                Species::Fermion => "fermion",
                Species::Ym => "SU(2)",
            };
            if *s != Species::Ym && c.copies > 1 {
                format!("{}×{name}", c.copies)
            } else {
                name.to_string()
            }
        })
        .collect();
    names.join(" + ")
}
