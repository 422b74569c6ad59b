//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.

use thiserror::Error;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    /// Both tolerances scaled by `factor`.
    pub fn tightened(self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum over subintervals of |K15 - G7|.
    pub error: f64,
    pub evaluations: usize,
    pub intervals: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError<E> {
    #[error("integrand failed: {0}")]
    Integrand(E),
    #[error("quadrature did not reach tolerance: value {value}, error estimate {error}", value = .0.value, error = .0.error)]
    NotConverged(Quadrature),
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F, E>(f: &mut F, a: f64, b: f64) -> Result<Piece, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx)? + f(centre + dx)?;
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Piece {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

/// ∫_a^b f by repeatedly bisecting the subinterval with the largest error
/// estimate until the total estimate is below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F, E>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Quadrature, QuadError<E>>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            intervals: 0,
        });
    }
    let mut pieces = vec![gk15(&mut f, a, b).map_err(QuadError::Integrand)?];
    let mut evaluations = 15;
    loop {
        let value: f64 = pieces.iter().map(|p| p.value).sum();
        let error: f64 = pieces.iter().map(|p| p.error).sum();
        let result = Quadrature {
            value,
            error,
            evaluations,
            intervals: pieces.len(),
        };
        if error <= opts.abs_tol.max(opts.rel_tol * value.abs()) {
            return Ok(result);
        }
        if pieces.len() >= opts.max_intervals {
            return Err(QuadError::NotConverged(result));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            // the interval cannot be split any further in floating point
            return Err(QuadError::NotConverged(result));
        }
        pieces.push(gk15(&mut f, p.a, mid).map_err(QuadError::Integrand)?);
        pieces.push(gk15(&mut f, mid, p.b).map_err(QuadError::Integrand)?);
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;
    use std::f64::consts::PI;

    fn ok(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> Result<f64, Infallible> {
        move |x| Ok(f(x))
    }

    #[test]
    fn weights_integrate_polynomials() {
        let sum: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        assert!((sum - 2.0).abs() < 1e-15);
        let gsum: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((gsum - 2.0).abs() < 1e-15);
        let r = integrate(ok(|x| x.powi(13) + 3.0 * x.powi(4)), -1.0, 2.0, &QuadOptions::default()).unwrap();
        let exact = (2f64.powi(14) - 1.0) / 14.0 + 3.0 * (32.0 + 1.0) / 5.0;
        assert!((r.value - exact).abs() < 1e-11);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn smooth_and_peaked_integrands() {
        let opts = QuadOptions::default();
        let r = integrate(ok(|x: f64| x.sin()), 0.0, PI, &opts).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        let r = integrate(ok(|x: f64| 1.0 / (1e-4 + x * x)), -1.0, 1.0, &opts).unwrap();
        assert!((r.value - 2.0 * (1.0 / 1e-2f64).atan() / 1e-2).abs() < 1e-7);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let opts = QuadOptions {
            max_intervals: 5000,
            ..Default::default()
        };
        let r = integrate(ok(|x: f64| x.ln()), 0.0, 1.0, &opts).unwrap();
        assert!((r.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let opts = QuadOptions::default();
        let a = integrate(ok(|x: f64| x.exp()), 0.0, 1.0, &opts).unwrap().value;
        let b = integrate(ok(|x: f64| x.exp()), 1.0, 0.0, &opts).unwrap().value;
        assert!((a + b).abs() < 1e-15);
    }

    #[test]
    fn integrand_errors_propagate() {
        let r = integrate(|x: f64| if x > 0.5 { Err("boom") } else { Ok(x) }, 0.0, 1.0, &QuadOptions::default());
        assert_eq!(r, Err(QuadError::Integrand("boom")));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let opts = QuadOptions {
            abs_tol: 1e-15,
            rel_tol: 0.0,
            max_intervals: 4,
        };
        let r = integrate(ok(|x: f64| 1.0 / x.sqrt()), 0.0, 1.0, &opts);
        assert!(matches!(r, Err(QuadError::NotConverged(_))));
    }
}
