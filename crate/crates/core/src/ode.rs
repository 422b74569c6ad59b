//! Dormand-Prince 5(4) integrator for scalar first-order equations.

use thiserror::Error;

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order solution minus the embedded fourth-order one.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            initial_step: 1e-3,
            min_step: 1e-14,
            max_step: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError<E> {
    #[error("right-hand side failed: {0}")]
    Rhs(E),
    #[error("step size fell below the minimum at t = {t}")]
    StepTooSmall { t: f64 },
    #[error("step budget exhausted at t = {t}")]
    TooManySteps { t: f64 },
}

/// Integrates y' = f(t, y) forward in t, stopping exactly on requested
/// output points.
pub struct Stepper<F> {
    f: F,
    t: f64,
    y: f64,
    dydt: Option<f64>,
    h: f64,
    opts: OdeOptions,
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

impl<F, Err> Stepper<F>
where
    F: FnMut(f64, f64) -> Result<f64, Err>,
{
    pub fn new(f: F, t0: f64, y0: f64, opts: OdeOptions) -> Self {
        Self {
            f,
            t: t0,
            y: y0,
            dydt: None,
            h: opts.initial_step,
            opts,
            accepted: 0,
            rejected: 0,
            evaluations: 0,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    fn eval(&mut self, t: f64, y: f64) -> Result<f64, OdeError<Err>> {
        self.evaluations += 1;
        (self.f)(t, y).map_err(OdeError::Rhs)
    }

    /// Advance to `target > t` and return y(target).
    pub fn advance_to(&mut self, target: f64) -> Result<f64, OdeError<Err>> {
        while self.t < target {
            if self.accepted + self.rejected >= self.opts.max_steps {
                return Err(OdeError::TooManySteps { t: self.t });
            }
            let k0 = match self.dydt {
                Some(d) => d,
                None => self.eval(self.t, self.y)?,
            };
            let remaining = target - self.t;
            let h = self.h.min(self.opts.max_step).min(remaining);
            let mut k = [0.0; 7];
            k[0] = k0;
            for s in 1..7 {
                let mut acc = 0.0;
                for (j, kj) in k.iter().take(s).enumerate() {
                    acc += A[s][j] * kj;
                }
                k[s] = self.eval(self.t + C[s] * h, self.y + h * acc)?;
            }
            // stage 7 is evaluated at the fifth-order solution
            let mut y_new = self.y;
            for (j, kj) in k.iter().take(6).enumerate() {
                y_new += h * A[6][j] * kj;
            }
            let err: f64 = h * E.iter().zip(k.iter()).map(|(e, kj)| e * kj).sum::<f64>();
            let scale = self.opts.abs_tol + self.opts.rel_tol * self.y.abs().max(y_new.abs());
            let ratio = (err / scale).abs();
            let factor = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            if ratio <= 1.0 {
                self.t = if h == remaining { target } else { self.t + h };
                self.y = y_new;
                self.dydt = Some(k[6]);
                self.accepted += 1;
                // a step shortened to hit the target says nothing about the next one
                if h == self.h.min(self.opts.max_step) {
                    self.h = h * factor;
                }
            } else {
                self.rejected += 1;
                self.h = h * factor;
                if self.h < self.opts.min_step {
                    return Err(OdeError::StepTooSmall { t: self.t });
                }
            }
        }
        Ok(self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    #[test]
    fn exponential_growth() {
        let mut s = Stepper::new(|_t, y: f64| Ok::<_, Infallible>(y), 0.0, 1.0, OdeOptions::default());
        let y = s.advance_to(2.0).unwrap();
        assert!((y - 2f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn logistic_through_output_points() {
        // y' = y(1 - y), y(0) = 1/2 → y = 1/(1 + e^{-t})
        let mut s = Stepper::new(|_t, y: f64| Ok::<_, Infallible>(y * (1.0 - y)), 0.0, 0.5, OdeOptions::default());
        for i in 1..=40 {
            let t = 0.25 * i as f64;
            let y = s.advance_to(t).unwrap();
            assert_eq!(s.t(), t);
            assert!((y - 1.0 / (1.0 + (-t).exp())).abs() < 1e-10);
        }
    }

    #[test]
    fn time_dependent_rhs() {
        let mut s = Stepper::new(|t: f64, _y| Ok::<_, Infallible>(t.cos()), 0.0, 0.0, OdeOptions::default());
        let y = s.advance_to(3.0).unwrap();
        assert!((y - 3f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn rhs_errors_propagate() {
        let mut s = Stepper::new(|t: f64, _y| if t > 1.0 { Err("bad") } else { Ok(1.0) }, 0.0, 0.0, OdeOptions::default());
        assert_eq!(s.advance_to(2.0), Err(OdeError::Rhs("bad")));
    }
}
