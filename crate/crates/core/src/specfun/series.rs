use super::{SeriesTolerance, SumResult};

/// Compensated (Kahan-Babuska-Neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Sum `term(k)` for `k = start, start + 1, ...` until a geometric tail bound
/// drops below the tolerance.
///
/// The caller supplies an `envelope` with `|term(k)| <= envelope(k)` such that
/// `envelope(k) * exp(decay * k)` is non-increasing from `start` on. The
/// remainder after the last used index `K` is then bounded by
/// `envelope(K + 1) / (1 - exp(-decay))`.
pub fn series_sum<T, E>(
    start: u64,
    term: T,
    envelope: E,
    decay: f64,
    tol: &SeriesTolerance,
) -> SumResult
where
    T: Fn(u64) -> f64,
    E: Fn(u64) -> f64,
{
    assert!(decay > 0.0, "series_sum needs a positive geometric decay rate");
    let geometric = 1.0 / (-(-decay).exp_m1());
    let mut acc = NeumaierSum::new();
    let mut k = start;
    let mut used = 0usize;
    loop {
        acc.add(term(k));
        used += 1;
        let tail = envelope(k + 1) * geometric;
        let value = acc.value();
        if tail <= tol.threshold(value) {
            return SumResult {
                value,
                terms_used: used,
                tail_bound: tail,
                converged: true,
            };
        }
        if used >= tol.max_terms() {
            return SumResult {
                value,
                terms_used: used,
                tail_bound: tail,
                converged: false,
            };
        }
        k += 1;
    }
}

/// Decay class of a lattice summand, used for the stopping rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// Shell contributions shrink at least geometrically once small.
    Exponential,
    /// `|term(n, l)| <= amplitude * s^(-exponent)` on shell `s >= 1`, with
    /// `exponent > 2` so that the lattice sum converges.
    Power { exponent: f64, amplitude: f64 },
}

/// Shell geometry and decay class for [`lattice_sum_with`].
///
/// Shell `s` is the set of points with `|n| <= s * n_stride` and
/// `|l| <= s * l_stride` that are not in shell `s - 1`; shell 0 is the origin.
/// Unit strides give the square shells `max(|n|, |l|) = s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeOptions {
    pub n_stride: u64,
    pub l_stride: u64,
    pub decay: Decay,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        Self {
            n_stride: 1,
            l_stride: 1,
            decay: Decay::Exponential,
        }
    }
}

/// Sum `term(n, l)` over ℤ² in expanding square shells.
///
/// Equivalent to [`lattice_sum_with`] with unit strides and exponential decay.
pub fn lattice_sum<F>(term: F, tol: &SeriesTolerance, omit_origin: bool) -> SumResult
where
    F: Fn(i64, i64) -> f64,
{
    lattice_sum_with(term, tol, omit_origin, LatticeOptions::default())
}

/// Sum `term(n, l)` over ℤ² shell by shell.
///
/// Inside a shell points are visited with `l` ascending in the outer loop and
/// `n` ascending in the inner loop, and every addition is compensated, so the
/// result is bit-reproducible for a fixed tolerance. Summation stops once two
/// successive shells have absolute mass below the tolerance and the tail
/// estimate for the declared [`Decay`] is below it too. `max_terms` of the
/// tolerance caps the number of shells.
pub fn lattice_sum_with<F>(
    term: F,
    tol: &SeriesTolerance,
    omit_origin: bool,
    options: LatticeOptions,
) -> SumResult
where
    F: Fn(i64, i64) -> f64,
{
    let a = options.n_stride.max(1) as i64;
    let b = options.l_stride.max(1) as i64;
    let mut acc = NeumaierSum::new();
    let mut used = 0usize;
    if !omit_origin {
        acc.add(term(0, 0));
        used += 1;
    }

    let mut prev_mass = f64::INFINITY;
    let mut s: i64 = 0;
    loop {
        s += 1;
        let (n_out, l_out) = (s * a, s * b);
        let (n_in, l_in) = ((s - 1) * a, (s - 1) * b);
        let mut shell = NeumaierSum::new();
        let mut mass = 0.0;
        for l in -l_out..=l_out {
            if l.abs() > l_in {
                for n in -n_out..=n_out {
                    let t = term(n, l);
                    shell.add(t);
                    mass += t.abs();
                }
                used += (2 * n_out + 1) as usize;
            } else {
                for n in (-n_out..-n_in).chain(n_in + 1..=n_out) {
                    let t = term(n, l);
                    shell.add(t);
                    mass += t.abs();
                }
                used += (2 * (n_out - n_in)) as usize;
            }
        }
        acc.add(shell.value());
        let value = acc.value();
        let threshold = tol.threshold(value);

        let tail = match options.decay {
            Decay::Exponential => {
                if mass == 0.0 {
                    0.0
                } else if prev_mass.is_finite() && prev_mass > 0.0 {
                    let ratio = (mass / prev_mass).min(0.99);
                    mass * ratio / (1.0 - ratio)
                } else {
                    mass
                }
            }
            Decay::Power {
                exponent,
                amplitude,
            } => power_tail(s as f64, a as f64, b as f64, exponent, amplitude),
        };

        let shells_small = mass <= threshold && prev_mass <= threshold;
        if s >= 2 && shells_small && tail <= threshold {
            return SumResult {
                value,
                terms_used: used,
                tail_bound: tail,
                converged: true,
            };
        }
        if s as usize >= tol.max_terms() {
            return SumResult {
                value,
                terms_used: used,
                tail_bound: tail.max(mass),
                converged: false,
            };
        }
        prev_mass = mass;
    }
}

/// Integral-comparison bound for Σ_{s > S} count(s) · A s^{-p}, where shell `s`
/// of strides (a, b) holds 4ab(2s - 1) + 2(a + b) points.
fn power_tail(s: f64, a: f64, b: f64, p: f64, amplitude: f64) -> f64 {
    assert!(p > 2.0, "power-law lattice sums need an exponent above 2");
    amplitude
        * (8.0 * a * b * s.powf(2.0 - p) / (p - 2.0) + 2.0 * (a + b) * s.powf(1.0 - p) / (p - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(rel: f64, max_terms: usize) -> SeriesTolerance {
        SeriesTolerance::new(1e-300, rel, max_terms).unwrap()
    }

    #[test]
    fn zero_term_converges_to_zero() {
        let r = lattice_sum(|_, _| 0.0, &SeriesTolerance::default(), true);
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn gaussian_lattice_matches_nested_sum() {
        let term = |n: i64, l: i64| (-((n * n + l * l) as f64)).exp();
        let r = lattice_sum(term, &tol(1e-15, 100), false);
        assert!(r.converged);
        let mut oracle = 0.0;
        for n in -40i64..=40 {
            for l in -40i64..=40 {
                oracle += term(n, l);
            }
        }
        assert!((r.value - oracle).abs() < 1e-12, "{} vs {oracle}", r.value);
        // (Σ_k e^{-k²})² with the one-dimensional theta sum
        let theta: f64 = (-40i64..=40).map(|k| (-((k * k) as f64)).exp()).sum();
        assert!((r.value - theta * theta).abs() < 1e-12);
    }

    #[test]
    fn omit_origin_drops_exactly_one_term() {
        let term = |n: i64, l: i64| (-((n * n + 2 * l * l) as f64)).exp();
        let with = lattice_sum(term, &tol(1e-15, 100), false);
        let without = lattice_sum(term, &tol(1e-15, 100), true);
        assert!((with.value - without.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn strided_shells_agree_with_square_shells() {
        let term = |n: i64, l: i64| (-(((n as f64) / 5.0).powi(2) + (l * l) as f64)).exp();
        let square = lattice_sum(term, &tol(1e-15, 1000), false);
        let strided = lattice_sum_with(
            term,
            &tol(1e-15, 1000),
            false,
            LatticeOptions {
                n_stride: 5,
                ..Default::default()
            },
        );
        assert!(square.converged && strided.converged);
        assert!((square.value - strided.value).abs() < 1e-13);
        assert!(strided.terms_used < square.terms_used);
    }

    #[test]
    fn power_law_bound_is_honest() {
        // Σ' 1/(n² + l²)^{3/2}: bound |term| <= s^{-3} on shell s.
        let term = |n: i64, l: i64| {
            if n == 0 && l == 0 {
                0.0
            } else {
                1.0 / (((n * n + l * l) as f64).powf(1.5))
            }
        };
        let decay = Decay::Power {
            exponent: 3.0,
            amplitude: 1.0,
        };
        let opts = LatticeOptions {
            decay,
            ..Default::default()
        };
        let short = lattice_sum_with(term, &tol(1e-3, 64), true, opts);
        assert!(!short.converged);
        let long = lattice_sum_with(term, &tol(1e-3, 128), true, opts);
        // doubling the shell budget moves the value by less than the reported bound
        assert!((long.value - short.value).abs() < short.tail_bound);
        assert!(long.value > short.value);
    }

    #[test]
    fn shell_order_is_deterministic() {
        let term = |n: i64, l: i64| ((n as f64) * 0.3 + (l as f64) * 0.7).cos() / (1.0 + (n * n + l * l) as f64).powi(3);
        let a = lattice_sum(term, &tol(1e-14, 5000), true);
        let b = lattice_sum(term, &tol(1e-14, 5000), true);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.terms_used, b.terms_used);
    }

    #[test]
    fn geometric_series_bound() {
        let t = SeriesTolerance::default();
        let r = series_sum(0, |k| 0.5f64.powi(k as i32), |k| 0.5f64.powi(k as i32), 2f64.ln(), &t);
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!(r.tail_bound <= t.threshold(r.value));
    }

    #[test]
    fn series_budget_exhaustion_is_flagged() {
        let t = tol(1e-15, 10);
        let r = series_sum(1, |k| 0.9f64.powi(k as i32), |k| 0.9f64.powi(k as i32), -(0.9f64.ln()), &t);
        assert!(!r.converged);
        assert_eq!(r.terms_used, 10);
    }
}
