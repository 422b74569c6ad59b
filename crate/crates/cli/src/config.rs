//! Run configuration and grid syntax.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Potential,
    Kinetic,
    Profile,
    Mass,
    Sweep,
    Scaling,
    Stability,
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Scalar,
    Fermion,
    Ym,
}

/// A set of sample points.
///
/// Text forms: `F` (one point), `lo:hi:count` (inclusive, linear),
/// `log:lo:hi:count` (inclusive, geometric) and `a,b,c` (explicit list).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Grid {
    Linear { lo: f64, hi: f64, count: usize },
    Log { lo: f64, hi: f64, count: usize },
    List { values: Vec<f64> },
}

impl Grid {
    pub fn single(x: f64) -> Self {
        Grid::List { values: vec![x] }
    }

    pub fn linear(lo: f64, hi: f64, count: usize) -> Self {
        Grid::Linear { lo, hi, count }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::List { values } => values.clone(),
            Grid::Linear { lo, hi, count } => spaced(*lo, *hi, *count, |a, b, t| a + (b - a) * t),
            Grid::Log { lo, hi, count } => spaced(*lo, *hi, *count, |a, b, t| (a.ln() + (b.ln() - a.ln()) * t).exp()),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::List { values } => values.len(),
            Grid::Linear { count, .. } | Grid::Log { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The value of a one-point grid.
    pub fn as_single(&self) -> Option<f64> {
        match self {
            Grid::List { values } if values.len() == 1 => Some(values[0]),
            Grid::Linear { lo, count: 1, .. } | Grid::Log { lo, count: 1, .. } => Some(*lo),
            _ => None,
        }
    }
}

/// Endpoints are reproduced exactly.
fn spaced(lo: f64, hi: f64, count: usize, at: impl Fn(f64, f64, f64) -> f64) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                if i == 0 {
                    lo
                } else if i == count - 1 {
                    hi
                } else {
                    at(lo, hi, i as f64 / (count - 1) as f64)
                }
            })
            .collect(),
    }
}

fn number(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if !x.is_finite() {
        return Err(format!("not finite: {s:?}"));
    }
    Ok(x)
}

fn count(s: &str) -> Result<usize, String> {
    let n: usize = s.trim().parse().map_err(|_| format!("not a point count: {s:?}"))?;
    if n == 0 {
        return Err("a grid needs at least one point".into());
    }
    Ok(n)
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] if x.contains(',') => Ok(Grid::List {
                values: x.split(',').map(number).collect::<Result<_, _>>()?,
            }),
            [x] => Ok(Grid::single(number(x)?)),
            [lo, hi, n] => Ok(Grid::Linear {
                lo: number(lo)?,
                hi: number(hi)?,
                count: count(n)?,
            }),
            ["log", lo, hi, n] => {
                let (lo, hi) = (number(lo)?, number(hi)?);
                if !(lo > 0.0 && hi > 0.0) {
                    return Err("logarithmic grids need positive endpoints".into());
                }
                Ok(Grid::Log { lo, hi, count: count(n)? })
            }
            _ => Err(format!("expected F, lo:hi:count, log:lo:hi:count or a,b,c; got {s:?}")),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::Linear { lo, hi, count } => write!(f, "{lo}:{hi}:{count}"),
            Grid::Log { lo, hi, count } => write!(f, "log:{lo}:{hi}:{count}"),
            Grid::List { values } => {
                let items: Vec<String> = values.iter().map(f64::to_string).collect();
                f.write_str(&items.join(","))
            }
        }
    }
}

/// Everything a run depends on. Echoed verbatim into JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub species: Vec<Species>,
    /// Mass of every scalar and fermion species; a grid for `scaling`.
    pub mu: Grid,
    pub tau: f64,
    pub lambda: Grid,
    /// Copies of every scalar and fermion species.
    pub copies: u32,
    pub phi: Option<Grid>,
    pub z: Option<Grid>,
    pub derivative_corrections: bool,
    /// Quadrature tolerance (absolute and relative) for kink masses.
    pub tol: f64,
    pub grid_points: usize,
    pub jobs: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Output is a pure function of the configuration.
    pub deterministic: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            species: vec![Species::Scalar],
            mu: Grid::single(0.0),
            tau: 0.0,
            lambda: Grid::single(0.01),
            copies: 1,
            phi: None,
            z: None,
            derivative_corrections: true,
            tol: 1e-10,
            grid_points: 1024,
            jobs: None,
            format: Format::Csv,
            out: None,
            deterministic: true,
        }
    }
}
