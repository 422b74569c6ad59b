//! Where the kinetic coefficient κ = 1 + Σγ fails to be positive.
//!
//! Pure Yang-Mills has γ < 0 with a cosec²(φ/2) divergence, so κ turns
//! negative near the trivial vacua. Scalars and fermions push the other way.

use crate::action::{ActionError, EffectiveModel};
use crate::specfun::TWO_PI;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error("κ < 0 for every angle at λ = {lambda} (11λ/24π > 1)")]
    AllUnstable { lambda: f64 },
    #[error("coupling must be positive and finite, got {0}")]
    InvalidCoupling(f64),
    #[error("a kinetic scan needs at least {MIN_GRID} points, got {0}")]
    GridTooSmall(usize),
    #[error(transparent)]
    Action(#[from] ActionError),
}

pub const MIN_GRID: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub lambda: f64,
    /// Open intervals in (0, 2π) where κ ≤ 0, sorted.
    pub unstable_intervals: Vec<(f64, f64)>,
    /// Angles where κ changes sign.
    pub critical_points: Vec<f64>,
    pub everywhere_stable: bool,
}

/// Sample κ on `grid_points` interior angles, then bisect each sign change.
///
/// An unstable region narrower than the grid spacing can be missed.
pub fn kinetic_scan(model: &EffectiveModel, grid_points: usize) -> Result<StabilityReport, StabilityError> {
    if grid_points < MIN_GRID {
        return Err(StabilityError::GridTooSmall(grid_points));
    }
    let kappa = |phi: f64| model.kinetic(phi);
    let h = TWO_PI / grid_points as f64;
    let phis: Vec<f64> = (1..grid_points).map(|i| i as f64 * h).collect();
    let values = phis.iter().map(|&p| kappa(p)).collect::<Result<Vec<f64>, _>>()?;

    let mut intervals = Vec::new();
    let mut critical = Vec::new();
    let mut start: Option<f64> = if values[0] <= 0.0 { Some(0.0) } else { None };
    for i in 1..values.len() {
        let (was, now) = (values[i - 1] <= 0.0, values[i] <= 0.0);
        if was == now {
            continue;
        }
        let root = bisect(&kappa, phis[i - 1], phis[i], values[i - 1])?;
        critical.push(root);
        if now {
            start = Some(root);
        } else if let Some(lo) = start.take() {
            intervals.push((lo, root));
        }
    }
    if let Some(lo) = start {
        intervals.push((lo, TWO_PI));
    }
    Ok(StabilityReport {
        lambda: model.params().lambda(),
        everywhere_stable: intervals.is_empty(),
        unstable_intervals: intervals,
        critical_points: critical,
    })
}

/// Root of κ in [a, b], where κ(a) = ka has the opposite sign to κ(b).
fn bisect<F>(kappa: &F, mut a: f64, mut b: f64, ka: f64) -> Result<f64, ActionError>
where
    F: Fn(f64) -> Result<f64, ActionError>,
{
    let left_unstable = ka <= 0.0;
    loop {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return Ok(mid);
        }
        let km = kappa(mid)?;
        if km.abs() < 1e-12 {
            return Ok(mid);
        }
        if (km <= 0.0) == left_unstable {
            a = mid;
        } else {
            b = mid;
        }
    }
}

/// Edge of the pure-SU(2) unstable region: κ ≤ 0 on (0, φ_c) and (2π - φ_c, 2π)
/// where sin(φ_c/2) = √(11λ/24π).
pub fn ym_critical_phi(lambda: f64) -> Result<f64, StabilityError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(StabilityError::InvalidCoupling(lambda));
    }
    let x = 11.0 * lambda / (24.0 * PI);
    if x > 1.0 + 4.0 * f64::EPSILON {
        return Err(StabilityError::AllUnstable { lambda });
    }
    Ok(2.0 * x.min(1.0).sqrt().asin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{build_model, MatterSpecies, ModelParams, SpeciesKind};

    fn model(species: &[MatterSpecies], lambda: f64) -> EffectiveModel {
        build_model(species, ModelParams::zero_temperature(lambda).unwrap()).unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert!((ym_critical_phi(0.1).unwrap() - 0.242_162).abs() < 1e-6);
        assert!((ym_critical_phi(24.0 * PI / 11.0).unwrap() - PI).abs() < 1e-7);
        let small = ym_critical_phi(0.01).unwrap();
        assert!((small - 0.0764).abs() < 1e-4, "{small}");
        assert!(matches!(ym_critical_phi(7.0), Err(StabilityError::AllUnstable { .. })));
        assert!(ym_critical_phi(-1.0).is_err());
    }

    #[test]
    fn pure_yang_mills_intervals() {
        for &lambda in &[0.01, 0.1, 1.0] {
            let r = kinetic_scan(&model(&[MatterSpecies::yang_mills()], lambda), 1024).unwrap();
            let c = ym_critical_phi(lambda).unwrap();
            assert!(!r.everywhere_stable);
            assert_eq!(r.unstable_intervals.len(), 2);
            let (a, b) = (r.unstable_intervals[0], r.unstable_intervals[1]);
            assert_eq!(a.0, 0.0);
            assert_eq!(b.1, TWO_PI);
            assert!((a.1 - c).abs() < 1e-8, "λ={lambda}: {} vs {c}", a.1);
            assert!((b.0 - (TWO_PI - c)).abs() < 1e-8);
            // symmetric under φ → 2π - φ
            assert!((a.1 + b.0 - TWO_PI).abs() < 1e-12);
            let m = model(&[MatterSpecies::yang_mills()], lambda);
            for p in &r.critical_points {
                assert!(m.kinetic(*p).unwrap().abs() < 1e-9);
            }
        }
    }

    #[test]
    fn small_coupling_agrees_with_closed_form() {
        let r = kinetic_scan(&model(&[MatterSpecies::yang_mills()], 0.01), 256).unwrap();
        assert!((r.critical_points[0] - ym_critical_phi(0.01).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn matter_stabilises() {
        let scalar = kinetic_scan(&model(&[MatterSpecies::scalar(0.0).unwrap()], 0.01), 512).unwrap();
        assert!(scalar.everywhere_stable && scalar.critical_points.is_empty());

        let mut previous = f64::INFINITY;
        for copies in [0u32, 1, 5, 10, 15, 21, 22] {
            let mut species = vec![MatterSpecies::yang_mills()];
            if copies > 0 {
                species.push(MatterSpecies::new(SpeciesKind::ComplexScalar, 0.0, copies).unwrap());
            }
            let r = kinetic_scan(&model(&species, 0.1), 512).unwrap();
            let width: f64 = r.unstable_intervals.iter().map(|(a, b)| b - a).sum();
            assert!(width <= previous);
            previous = width;
            if copies == 22 {
                assert!(r.everywhere_stable);
            }
        }
    }

    #[test]
    fn strong_coupling_is_unstable_everywhere() {
        let r = kinetic_scan(&model(&[MatterSpecies::yang_mills()], 8.0), 256).unwrap();
        assert_eq!(r.unstable_intervals, vec![(0.0, TWO_PI)]);
        assert!(r.critical_points.is_empty());
    }

    #[test]
    fn coarse_grid_is_refused() {
        let m = model(&[MatterSpecies::yang_mills()], 0.1);
        assert!(matches!(kinetic_scan(&m, 100), Err(StabilityError::GridTooSmall(100))));
    }
}
