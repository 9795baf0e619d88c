//! `droplet-modes`: analytic oscillation modes of a viscous 2D droplet.
//!
//! Every command writes CSV or JSON to `--out` (stdout by default). Exit
//! codes: 0 success, 2 usage or bad parameters, 3 numerical failure, 4 I/O
//! or malformed input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "droplet-modes", version, about = "Linearized oscillation modes of a viscous 2D droplet")]
pub struct Cli {
    /// Fluid parameters as JSON (rho_d, eta_d, rho_a, eta_a, sigma_da, r0);
    /// water in air when omitted.
    #[arg(long, global = true)]
    pub params: Option<PathBuf>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ModeArgs {
    /// Wave number (≥ 2).
    #[arg(long)]
    pub k: u32,
    /// Orientation weight in [0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Relative amplitude.
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dispersion roots and coefficients, one CSV row per wave number.
    Modes {
        #[arg(long, default_value_t = 2)]
        k_min: u32,
        #[arg(long, default_value_t = 6)]
        k_max: u32,
        /// Coefficients in the scaled units A/1e-11, B/1e-4, E/1e(5k−7), F/1e(−5k−4); γ stays in 1/s.
        #[arg(long)]
        table1_units: bool,
    },
    /// Velocity and pressure on a square grid (CSV plus JSON sidecar with --out).
    Field {
        #[command(flatten)]
        mode: ModeArgs,
        /// Time [s] on the simulation clock; the analytic field is taken at t + t₀.
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Nodes per axis.
        #[arg(long, default_value_t = 65)]
        grid: usize,
        /// Side length [m] of the box [x0, x0+box] × [y0, y0+box].
        #[arg(long = "box", default_value_t = 50e-6)]
        side: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        y0: f64,
    },
    /// Interface radius, normal velocity and curvature over θ.
    Interface {
        #[command(flatten)]
        mode: ModeArgs,
        /// Time [s] on the simulation clock.
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Residuals of the governing equations and interface conditions (JSON).
    Residual {
        #[command(flatten)]
        mode: ModeArgs,
        /// Stencil step [m]; R₀/128 when omitted.
        #[arg(long)]
        h: Option<f64>,
        /// Bulk sample points per fluid.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 64)]
        theta_samples: usize,
    },
    /// Deviation of a simulated series from the analytic reference (JSON).
    Deviation {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, value_enum, default_value_t = RegionArg::Quarter)]
        region: RegionArg,
    },
    /// Mixture density and viscosity over a range of φ.
    Closures {
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        phi_min: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        phi_max: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        /// Λ in the Arrhenius mixing rule.
        #[arg(long, default_value_t = 1.0)]
        molar_ratio: f64,
    },
    /// Relative determinant over a box of nondimensional γ̃.
    Detscan {
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        re_range: (f64, f64),
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        im_range: (f64, f64),
        /// Points per axis.
        #[arg(long, default_value_t = 41)]
        resolution: usize,
    },
    /// Vertex of the log-log parabola through three (mobility, dev) points.
    FitMobility {
        /// `m,dev`; give exactly three.
        #[arg(long = "point", value_parser = parse_range, num_args = 1, required = true)]
        points: Vec<(f64, f64)>,
    },
}

#[derive(clap::ValueEnum, Debug, Clone, Copy)]
pub enum RegionArg {
    Quarter,
    Full,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok((p(a)?, p(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = commands::init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
