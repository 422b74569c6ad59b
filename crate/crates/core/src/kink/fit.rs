use super::{KinkError, KinkProfile};

/// Least-squares line y ≈ a + b·x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub a: f64,
    pub b: f64,
    /// Root-mean-square residual.
    pub rms: f64,
    pub points: usize,
}

/// None when fewer than two distinct abscissae are given.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = x[..n].iter().sum::<f64>() / nf;
    let my = y[..n].iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for i in 0..n {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if !(sxx > 0.0) {
        return None;
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let ss: f64 = (0..n).map(|i| (y[i] - a - b * x[i]).powi(2)).sum();
    Some(LinearFit {
        a,
        b,
        rms: (ss / nf).sqrt(),
        points: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailKind {
    /// φ - φ_vac ∝ |z|^p
    Power,
    /// φ - φ_vac ∝ e^{-r|z|}
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub kind: TailKind,
    /// p for a power tail, the rate r for an exponential one.
    pub parameter: f64,
    /// Exponent p of the power fit, whichever kind won.
    pub power_exponent: f64,
    /// RMS residual of ln(φ - φ_vac) against ln|z|.
    pub power_residual: f64,
    pub exponential_rate: f64,
    /// RMS residual of ln(φ - φ_vac) against |z|.
    pub exponential_residual: f64,
    /// Range of z used.
    pub window: (f64, f64),
    pub points: usize,
}

impl TailFit {
    /// The power-law exponent; the field name reads better at call sites.
    pub fn exponent(&self) -> f64 {
        self.power_exponent
    }
}

/// Fit the z < 0 tail on the outermost 20% of its samples (at least three).
pub fn tail_fit(profile: &KinkProfile) -> Result<TailFit, KinkError> {
    let mut samples: Vec<(f64, f64)> = profile
        .z
        .iter()
        .zip(&profile.phi)
        .filter(|(z, _)| **z < 0.0)
        .map(|(z, phi)| (-z, phi - profile.left_vacuum))
        .collect();
    let closest = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    if !(closest < 0.05) {
        return Err(KinkError::InsufficientTail { closest });
    }
    // farthest first
    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    let take = ((samples.len() as f64 * 0.2).ceil() as usize).max(3);
    let window: Vec<(f64, f64)> = samples.into_iter().take(take).filter(|s| s.1 > 0.0).collect();
    if window.len() < 3 {
        return Err(KinkError::InsufficientTail { closest });
    }
    let log_phi: Vec<f64> = window.iter().map(|s| s.1.ln()).collect();
    let dist: Vec<f64> = window.iter().map(|s| s.0).collect();
    let log_dist: Vec<f64> = dist.iter().map(|d| d.ln()).collect();
    let insufficient = || KinkError::InsufficientTail { closest };
    let power = linear_fit(&log_dist, &log_phi).ok_or_else(insufficient)?;
    let expo = linear_fit(&dist, &log_phi).ok_or_else(insufficient)?;
    let kind = if power.rms < expo.rms {
        TailKind::Power
    } else {
        TailKind::Exponential
    };
    let (lo, hi) = (dist[dist.len() - 1], dist[0]);
    Ok(TailFit {
        kind,
        parameter: match kind {
            TailKind::Power => power.b,
            TailKind::Exponential => -expo.b,
        },
        power_exponent: power.b,
        power_residual: power.rms,
        exponential_rate: -expo.b,
        exponential_residual: expo.rms,
        window: (-hi, -lo),
        points: window.len(),
    })
}
