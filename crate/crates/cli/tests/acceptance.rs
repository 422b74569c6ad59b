//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the terminal.

use kinkforge::validate::{run_checks, Verdict};
use kinkforge_core::action::{
    build_model, build_model_with, gamma_fermion_general, gamma_fermion_massless0, gamma_scalar_decay,
    gamma_scalar_general, gamma_scalar_massless0, gamma_scalar_summand, gamma_ym, v_fermion_general,
    v_fermion_massless0, v_scalar_general, v_scalar_massless0, EffectiveModel, MatterSpecies, ModelOptions,
    ModelParams, SpeciesKind,
};
use kinkforge_core::kink::{
    high_t_mass_scaling, kink_mass_with, kink_profile, mass_curve, MassOptions, ProfileOptions, TailKind,
};
use kinkforge_core::quadrature::QuadOptions;
use kinkforge_core::specfun::{lattice_sum_with, LatticeOptions, NeumaierSum, SeriesTolerance, TWO_PI};
use kinkforge_core::stability::{kinetic_scan, ym_critical_phi};
use std::f64::consts::PI;
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn scalar(lambda: f64, corrections: bool) -> EffectiveModel {
    build_model(
        &[MatterSpecies::scalar(0.0).unwrap()],
        ModelParams::zero_temperature(lambda).unwrap(),
    )
    .unwrap()
    .with_derivative_corrections(corrections)
}

fn quad(tol: f64) -> MassOptions {
    MassOptions {
        quad: QuadOptions {
            abs_tol: tol,
            rel_tol: 0.0,
            ..QuadOptions::default()
        },
        ..MassOptions::default()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn leading_mass() -> Outcome {
    let start = Instant::now();
    let m = kink_mass_with(&scalar(0.01, false), &quad(1e-4)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let dev = rel(m.mass, 5.104);
    ensure(
        dev < 0.01 && elapsed < 1.0,
        format!("M = {:.7} (5.104 within 1%: deviation {:.2e}), {:.3} s", m.mass, dev, elapsed),
    )
}

fn mass_law() -> Outcome {
    let start = Instant::now();
    let lambdas: Vec<f64> = (0..10)
        .map(|i| (0.005f64.ln() + (0.05f64.ln() - 0.005f64.ln()) * i as f64 / 9.0).exp())
        .collect();
    let curve = mass_curve(&scalar(0.01, true), &lambdas, &quad(1e-8)).map_err(|e| e.to_string())?;
    let masses: Vec<f64> = curve.masses().into_iter().collect::<Option<_>>().ok_or("a mass failed")?;
    // fit M - 5.104 = (a - 5.104) + bλ
    let shifted: Vec<f64> = masses.iter().map(|m| m - 5.104).collect();
    let f = kinkforge_core::kink::linear_fit(&lambdas, &shifted).ok_or("degenerate fit")?;
    let (a, b) = (f.a + 5.104, f.b);
    let elapsed = start.elapsed().as_secs_f64();
    ensure(
        rel(a, 5.104) < 0.01 && (b - 0.26).abs() <= 0.3 * 0.26 && elapsed < 30.0,
        format!("a = {a:.5}, b = {b:.5} (0.26 ± 30%), rms {:.1e}, {elapsed:.2} s", f.rms),
    )
}

fn tail_laws() -> Outcome {
    let opts = ProfileOptions::default();
    let with = kink_profile(&scalar(0.01, true), &opts).map_err(|e| e.to_string())?;
    let without = kink_profile(&scalar(0.01, false), &opts).map_err(|e| e.to_string())?;
    let (t1, t0) = (with.tail.ok_or("no tail with γ")?, without.tail.ok_or("no tail without γ")?);
    ensure(
        t1.kind == TailKind::Power && (t1.power_exponent + 1.0).abs() <= 0.15 && t0.kind == TailKind::Exponential,
        format!(
            "with γ: {:?}, exponent {:.4} (rms {:.1e} vs exponential {:.1e}); without γ: {:?} (rms {:.1e} vs power {:.1e})",
            t1.kind, t1.power_exponent, t1.power_residual, t1.exponential_residual, t0.kind, t0.exponential_residual,
            t0.power_residual
        ),
    )
}

/// ∫ f over ℝ with x = u·sinh t, trapezoid in t.
fn line_integral(u: f64, f: impl Fn(f64) -> f64) -> f64 {
    let h = 1e-3;
    let mut acc = NeumaierSum::new();
    for i in -25_000..=25_000 {
        let t = i as f64 * h;
        acc.add(f(u * t.sinh()) * u * t.cosh());
    }
    acc.value() * h
}

fn limits() -> Outcome {
    let tol = SeriesTolerance::default();
    let mu = 1e-4;
    let mut worst_v: f64 = 0.0;
    let phis: Vec<f64> = [PI / 4.0, PI / 2.0, PI]
        .into_iter()
        .chain((1..=24).map(|i| i as f64 * TWO_PI / 25.0))
        .collect();
    for &phi in &phis {
        let s = v_scalar_general(phi, mu, 0.0, &tol).map_err(|e| e.to_string())?.value;
        let f = v_fermion_general(phi, mu, 0.0, &tol).map_err(|e| e.to_string())?.value;
        worst_v = worst_v.max(rel(s, v_scalar_massless0(phi))).max(rel(f, v_fermion_massless0(phi)));
    }
    let lambda = 0.01;
    let gs = gamma_scalar_general(PI, mu, 0.0, lambda, &tol).map_err(|e| e.to_string())?.value;
    let gf = gamma_fermion_general(PI, mu, 0.0, lambda, &tol).map_err(|e| e.to_string())?.value;
    let dev_s = rel(gs, gamma_scalar_massless0(PI, lambda).unwrap());
    let dev_f = rel(gf, gamma_fermion_massless0(PI, lambda).unwrap());
    let mut worst_int: f64 = 0.0;
    for &u in &[0.3, 1.0, PI, 17.0] {
        let a = line_integral(u, |x| u * u / (x * x + u * u).powf(2.5));
        let b = line_integral(u, |x| x * x / (x * x + u * u).powf(2.5));
        worst_int = worst_int.max(rel(a, 4.0 / (3.0 * u * u))).max(rel(b, 2.0 / (3.0 * u * u)));
    }
    ensure(
        worst_v < 1e-3 && dev_s < 1e-6 && dev_f < 1e-6 && worst_int < 1e-10,
        format!(
            "potentials {worst_v:.1e} over {} angles (< 1e-3); kinetic scalar {dev_s:.1e}, fermion {dev_f:.1e} (< 1e-6); integral identities {worst_int:.1e}",
            phis.len()
        ),
    )
}

fn lattice_oracle() -> Outcome {
    let (phi, mu, tau, lambda) = (PI, 0.5, 2.0, 0.01);
    let term = |n: i64, l: i64| gamma_scalar_summand(n, l, phi, mu, tau, lambda);
    let options = LatticeOptions {
        decay: gamma_scalar_decay(tau, lambda),
        ..LatticeOptions::default()
    };
    let tol = SeriesTolerance::new(1e-7, 0.0, 100_000).map_err(|e| e.to_string())?;
    let lattice = lattice_sum_with(term, &tol, false, options);
    let mut acc = NeumaierSum::new();
    for n in -5000i64..=5000 {
        for l in -5000i64..=5000 {
            acc.add(term(n, l));
        }
    }
    let diff = (lattice.value - acc.value()).abs();
    ensure(
        lattice.converged && diff < 1e-6,
        format!(
            "lattice {:.12e} ({} terms), nested {:.12e}, |difference| {diff:.1e}",
            lattice.value,
            lattice.terms_used,
            acc.value()
        ),
    )
}

fn high_t_scaling() -> Outcome {
    let mus = [0.4, 0.2, 0.1, 0.05];
    let r = high_t_mass_scaling(&mus, 20.0, 0.01, true, SeriesTolerance::default(), &quad(1e-8))
        .map_err(|e| e.to_string())?;
    let p = r.exponent().ok_or("no exponent")?;
    let warn = run_checks()
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|c| c.verdict == Verdict::Warn)
        .map(|c| format!("{:.2}", c.deviation))
        .collect::<Vec<_>>()
        .join(", ");
    ensure(
        (p + 0.5).abs() <= 0.1,
        format!("exponent {p:.4} (-0.5 ± 0.1); WARN high-T vs full potential relative deviation at μ = 0.4, 0.05: {warn}"),
    )
}

fn ym_instability() -> Outcome {
    let lambda = 0.1;
    let ym = build_model(&[MatterSpecies::yang_mills()], ModelParams::zero_temperature(lambda).unwrap()).unwrap();
    let kappa = ym.kinetic(PI).map_err(|e| e.to_string())?;
    let closed = 1.0 - 11.0 * lambda / (24.0 * PI);
    let r = kinetic_scan(&ym, 1024).map_err(|e| e.to_string())?;
    let c = ym_critical_phi(lambda).map_err(|e| e.to_string())?;
    let intervals_ok = r.unstable_intervals.len() == 2
        && r.unstable_intervals[0].0 == 0.0
        && (r.unstable_intervals[0].1 - 0.242_162).abs() < 1e-6
        && (r.unstable_intervals[1].0 - (TWO_PI - 0.242_162)).abs() < 1e-6
        && r.unstable_intervals[1].1 == TWO_PI
        && (r.unstable_intervals[0].1 - c).abs() < 1e-8;
    let mut worst_ratio: f64 = 0.0;
    for i in 1..64 {
        let phi = i as f64 * TWO_PI / 64.0;
        let ratio = gamma_ym(phi, lambda).unwrap() / gamma_scalar_massless0(phi, lambda).unwrap();
        worst_ratio = worst_ratio.max((ratio + 11.0).abs());
    }
    ensure(
        (kappa - closed).abs() < 1e-10 && intervals_ok && worst_ratio <= 11.0 * 2.0 * f64::EPSILON,
        format!(
            "κ(π) = {kappa:.12} = 1 - {:.10} (closed form to {:.1e}, {:.1e} from the rounded 0.0145893); unstable {:?}; γ_YM/γ_scalar = -11 to {worst_ratio:.1e}",
            1.0 - kappa,
            (kappa - closed).abs(),
            ((1.0 - kappa) - 0.014_589_3).abs(),
            r.unstable_intervals.iter().map(|(a, b)| (format!("{a:.6}"), format!("{b:.6}"))).collect::<Vec<_>>()
        ),
    )
}

fn hygiene() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let (mut worst_cons, mut worst_dual): (f64, f64) = (0.0, 0.0);
    for &lambda in &[0.001, 0.01, 0.1] {
        let m = scalar(lambda, true);
        let p = kink_profile(&m, &ProfileOptions::default()).map_err(|e| e.to_string())?;
        let mass = kink_mass_with(&m, &MassOptions::default()).map_err(|e| e.to_string())?.mass;
        worst_cons = worst_cons.max(p.first_integral_residual);
        worst_dual = worst_dual.max(rel(p.energy, mass));
    }
    ok &= worst_cons < 1e-3 && worst_dual < 5e-3;
    notes.push(format!("conservation {worst_cons:.1e}, duality {worst_dual:.1e}"));

    let tol = SeriesTolerance::default();
    let models = [
        scalar(0.01, true),
        build_model(&[MatterSpecies::fermion(0.0).unwrap()], ModelParams::zero_temperature(0.01).unwrap()).unwrap(),
        build_model(&[MatterSpecies::yang_mills()], ModelParams::zero_temperature(0.1).unwrap()).unwrap(),
        build_model(&[MatterSpecies::scalar(0.7).unwrap()], ModelParams::new(0.02, 0.8, tol).unwrap()).unwrap(),
        build_model_with(
            &[MatterSpecies::new(SpeciesKind::DiracFermion, 0.3, 2).unwrap()],
            ModelParams::new(0.02, 1.5, tol).unwrap(),
            ModelOptions::default(),
        )
        .unwrap(),
    ];
    let mut worst_sym: f64 = 0.0;
    for m in &models {
        for i in 1..16 {
            let phi = 0.1 + i as f64 * 0.37;
            for f in [EffectiveModel::potential, EffectiveModel::kinetic] {
                let base = f(m, phi).map_err(|e| e.to_string())?;
                let shifted = f(m, phi + TWO_PI).map_err(|e| e.to_string())?;
                let mirrored = f(m, TWO_PI - phi).map_err(|e| e.to_string())?;
                let scale = base.abs().max(1.0);
                worst_sym = worst_sym.max((shifted - base).abs() / scale).max((mirrored - base).abs() / scale);
            }
        }
    }
    ok &= worst_sym <= 1e-10;
    notes.push(format!("periodicity/reflection {worst_sym:.1e}"));

    let mut worst_halving: f64 = 0.0;
    for corrections in [false, true] {
        let m = scalar(0.01, corrections);
        let a = kink_mass_with(&m, &quad(1e-4)).map_err(|e| e.to_string())?.mass;
        let b = kink_mass_with(&m, &quad(5e-5)).map_err(|e| e.to_string())?.mass;
        worst_halving = worst_halving.max((a - b).abs());
        let mut opts = ProfileOptions::default();
        let e1 = kink_profile(&m, &opts).map_err(|e| e.to_string())?.energy;
        opts.ode.rel_tol *= 0.5;
        opts.ode.abs_tol *= 0.5;
        let e2 = kink_profile(&m, &opts).map_err(|e| e.to_string())?.energy;
        worst_halving = worst_halving.max((e1 - e2).abs());
    }
    ok &= worst_halving < 1e-4;
    notes.push(format!("tolerance halving {worst_halving:.1e}"));
    ensure(ok, notes.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("leading kink mass", leading_mass),
        ("mass law slope", mass_law),
        ("tail laws", tail_laws),
        ("limit consistency", limits),
        ("lattice sum vs nested sum", lattice_oracle),
        ("high-temperature scaling", high_t_scaling),
        ("Yang-Mills instability", ym_instability),
        ("numerical hygiene", hygiene),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (verdict, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{verdict} [{}] {name}: {detail} ({:.2} s)",
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
