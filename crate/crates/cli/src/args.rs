use crate::config::{Command, Format, Grid, RunConfig, Species};
use clap::Parser;
use std::path::PathBuf;

/// One-loop Wilson-line kinks on R² × S¹.
#[derive(Debug, Parser)]
#[command(name = "kinkforge", version)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Matter content; repeat for several species.
    #[arg(long = "species", value_enum)]
    pub species: Vec<Species>,
    /// Mass μ = mL of every scalar and fermion (a grid for `scaling`).
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<Grid>,
    /// Temperature τ = TL.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// Coupling λ = e²L, a value or a grid.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<Grid>,
    /// Copies of every scalar and fermion.
    #[arg(long, default_value_t = 1)]
    pub copies: u32,
    /// Angles for `potential` and `kinetic`.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<Grid>,
    /// Output coordinates for `profile`; adaptive when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<Grid>,
    /// Drop the derivative corrections (κ ≡ 1).
    #[arg(long)]
    pub no_gamma: bool,
    /// Quadrature tolerance for kink masses.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Angles sampled by `stability`.
    #[arg(long, default_value_t = 1024)]
    pub grid_points: usize,
    /// Worker threads for sweeps.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Args {
    pub fn into_config(self) -> RunConfig {
        let mut c = RunConfig::new(self.command);
        if !self.species.is_empty() {
            c.species = self.species;
        }
        if let Some(mu) = self.mu {
            c.mu = mu;
        } else if self.command == Command::Scaling {
            c.mu = Grid::List {
                values: vec![0.4, 0.2, 0.1, 0.05],
            };
        }
        c.tau = self.tau.unwrap_or(if self.command == Command::Scaling { 20.0 } else { 0.0 });
        if let Some(lambda) = self.lambda {
            c.lambda = lambda;
        } else if self.command == Command::Sweep {
            c.lambda = Grid::Log {
                lo: 0.005,
                hi: 0.05,
                count: 10,
            };
        }
        c.copies = self.copies;
        c.phi = self.phi;
        c.z = self.z;
        c.derivative_corrections = !self.no_gamma;
        c.tol = self.tol;
        c.grid_points = self.grid_points;
        c.jobs = self.jobs;
        c.format = self.format;
        c.out = self.out;
        c
    }
}
