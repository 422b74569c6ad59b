//! Special functions and convergence-controlled sums.
//!
//! Everything the effective-action formulas are assembled from lives here:
//! modified Bessel functions of the second kind for the orders that occur,
//! the periodic cubic series over Kaluza-Klein modes, and a generic engine for
//! primed double sums over `(n, l)` lattices.
//!
//! All functions are pure. Truncated sums report how many terms they used and
//! an estimate of what was left out via [`SumResult`].

mod bessel;
mod periodic;
mod series;

pub use bessel::{bessel_k_half_odd, bessel_k_int};
pub use periodic::{
    inverse_square_sum, sum_fermion_cube, sum_sin2_cube, sum_sin2_square, zeta_even, ZETA3,
};
pub use series::{lattice_sum, lattice_sum_with, series_sum, Decay, LatticeOptions, NeumaierSum};

pub(crate) use bessel::k01;

use std::f64::consts::PI;
use thiserror::Error;

pub const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },
    #[error("invalid series tolerance: {0}")]
    InvalidTolerance(&'static str),
}

/// Stopping rules for truncated series and lattice sums.
///
/// A sum stops once its estimated remainder is below
/// `max(abs_tol, rel_tol * |value|)`, or after `max_terms` terms (shells, for
/// lattice sums) with `converged = false`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTolerance {
    abs_tol: f64,
    rel_tol: f64,
    max_terms: usize,
}

impl SeriesTolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_terms: usize) -> Result<Self, SpecfunError> {
        if !(abs_tol >= 0.0 && abs_tol.is_finite()) || !(rel_tol >= 0.0 && rel_tol.is_finite()) {
            return Err(SpecfunError::InvalidTolerance(
                "tolerances must be finite and non-negative",
            ));
        }
        if abs_tol + rel_tol <= 0.0 {
            return Err(SpecfunError::InvalidTolerance(
                "at least one of abs_tol and rel_tol must be positive",
            ));
        }
        if max_terms < 8 {
            return Err(SpecfunError::InvalidTolerance("max_terms must be at least 8"));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_terms,
        })
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Same rules with a different term budget.
    pub fn with_max_terms(self, max_terms: usize) -> Result<Self, SpecfunError> {
        Self::new(self.abs_tol, self.rel_tol, max_terms)
    }

    /// Same rules with a different relative tolerance.
    pub fn with_rel_tol(self, rel_tol: f64) -> Result<Self, SpecfunError> {
        Self::new(self.abs_tol, rel_tol, self.max_terms)
    }

    /// The admissible truncation error for a sum whose current value is `value`.
    pub fn threshold(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl Default for SeriesTolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-300,
            rel_tol: 1e-13,
            max_terms: 4_000_000,
        }
    }
}

/// Outcome of a truncated infinite sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumResult {
    pub value: f64,
    pub terms_used: usize,
    /// Estimate (or bound, where the summand allows one) of the neglected remainder.
    pub tail_bound: f64,
    pub converged: bool,
}

impl SumResult {
    pub(crate) fn exact(value: f64) -> Self {
        Self {
            value,
            terms_used: 0,
            tail_bound: 0.0,
            converged: true,
        }
    }

    /// Combine two independent partial results as `a * self + b * other`.
    pub(crate) fn combine(self, a: f64, other: SumResult, b: f64) -> SumResult {
        SumResult {
            value: a * self.value + b * other.value,
            terms_used: self.terms_used + other.terms_used,
            tail_bound: a.abs() * self.tail_bound + b.abs() * other.tail_bound,
            converged: self.converged && other.converged,
        }
    }

    pub(crate) fn scaled(self, a: f64) -> SumResult {
        SumResult {
            value: a * self.value,
            tail_bound: a.abs() * self.tail_bound,
            ..self
        }
    }
}

/// Reduce an angle to `[0, 2π)`.
pub fn reduce_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TWO_PI);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// Reduce an angle to `[0, π]` using 2π-periodicity and the reflection φ → 2π − φ.
pub fn fold_angle(phi: f64) -> f64 {
    let r = reduce_angle(phi);
    if r > PI {
        TWO_PI - r
    } else {
        r
    }
}
