use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use droplet_modes::closures::{density, viscosity};
use droplet_modes::deviation::{dev_metric, fit_optimal_mobility, ingest, AnalyticReference, Region};
use droplet_modes::error::Error;
use droplet_modes::exec::Execution;
use droplet_modes::fields::{
    curvature_first_order, format_float, interface_radius, interface_velocity, sample_snapshot, Grid,
};
use droplet_modes::modes::{det_scan, solve_modes, FluidPair, ModalSolution, ModeSpec, Table1Values};
use droplet_modes::residual::residual_report;
use serde::Serialize;

use crate::{Cli, Command, ModeArgs, RegionArg};

const THREADS_VAR: &str = "DROPLET_MODES_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 4,
            CliError::Core(e) if e.is_numeric() || matches!(e, Error::Domain(_)) => 3,
            CliError::Core(e) if e.is_io() || matches!(e, Error::GridMismatch(_) | Error::Series(_)) => 4,
            CliError::Core(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Caps the global rayon pool at `DROPLET_MODES_THREADS`.
pub fn init_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("{THREADS_VAR} must be a positive integer, got `{v}`"))?;
    if n == 0 {
        return Err(format!("{THREADS_VAR} must be positive"));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    Ok(())
}

fn load_fluids(path: Option<&Path>) -> Result<FluidPair> {
    let Some(path) = path else { return Ok(FluidPair::water_in_air()) };
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Malformed { path: path.to_path_buf(), reason: e.to_string() }.into())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source }),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

struct Table(csv::Writer<Vec<u8>>);

impl Table {
    fn new(header: &[&str]) -> Self {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        Table(w)
    }

    fn row(&mut self, fields: impl IntoIterator<Item = String>) {
        self.0.write_record(fields).expect("in-memory write");
    }

    fn finish(self) -> String {
        String::from_utf8(self.0.into_inner().expect("in-memory flush")).expect("ASCII output")
    }
}

fn solve_one(args: &ModeArgs, fp: &FluidPair) -> Result<(ModeSpec, ModalSolution)> {
    let ms = ModeSpec::new(args.k, args.beta, args.delta)?;
    if !ms.is_small_amplitude() {
        eprintln!("warning: delta = {} is outside the small-amplitude regime (> 0.1)", ms.delta);
    }
    let sol = solve_modes(&[args.k], fp, Execution::default()).remove(0)?;
    Ok((ms, sol))
}

pub fn run(cli: &Cli) -> Result<()> {
    let fp = load_fluids(cli.params.as_deref())?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Modes { k_min, k_max, table1_units } => {
            if k_min > k_max {
                return Err(CliError::Usage(format!("--k-min {k_min} exceeds --k-max {k_max}")));
            }
            if *k_min < 2 {
                return Err(CliError::Usage(format!("--k-min must be ≥ 2, got {k_min}")));
            }
            let ks: Vec<u32> = (*k_min..=*k_max).collect();
            let sols = solve_modes(&ks, &fp, Execution::default()).into_iter().collect::<std::result::Result<Vec<_>, _>>()?;
            emit(out, &modes_csv(&sols, *table1_units))
        }
        Command::Field { mode, t, grid, side, x0, y0 } => {
            let (ms, sol) = solve_one(mode, &fp)?;
            if *grid < 2 {
                return Err(CliError::Usage("--grid needs at least 2 nodes".into()));
            }
            let h = side / (*grid - 1) as f64;
            let g = Grid::new(*x0, *y0, h, h, *grid, *grid)?;
            let mut snap = sample_snapshot(&ms, &sol, &fp, &g, t + sol.phase_offset(), Execution::default())?;
            snap.t = *t;
            match out {
                Some(path) => {
                    snap.write_with_meta(path, Some(ms), Some(fp))?;
                    Ok(())
                }
                None => emit(None, &snap.to_csv_string()?),
            }
        }
        Command::Interface { mode, t, samples } => {
            let (ms, sol) = solve_one(mode, &fp)?;
            if *samples == 0 {
                return Err(CliError::Usage("--samples must be positive".into()));
            }
            let tt = t + sol.phase_offset();
            let mut tab = Table::new(&["theta", "radius", "normal_velocity", "curvature"]);
            for i in 0..*samples {
                let th = std::f64::consts::TAU * i as f64 / *samples as f64;
                tab.row(
                    [th, interface_radius(&ms, &sol, th, tt), interface_velocity(&ms, &sol, th, tt), curvature_first_order(&ms, &sol, th, tt)]
                        .map(format_float),
                );
            }
            emit(out, &tab.finish())
        }
        Command::Residual { mode, h, samples, theta_samples } => {
            let (ms, sol) = solve_one(mode, &fp)?;
            let h = h.unwrap_or(fp.r0 / 128.0);
            let report = residual_report(&ms, &sol, &fp, h, *samples, *theta_samples, Execution::default())?;
            emit(out, &to_json(&report))
        }
        Command::Deviation { manifest, region } => {
            let series = ingest(manifest)?;
            let m = series.manifest().expect("ingested series carries its manifest").clone();
            if !m.mode.is_small_amplitude() {
                eprintln!("warning: delta = {} is outside the small-amplitude regime (> 0.1)", m.mode.delta);
            }
            let sol = solve_modes(&[m.mode.k], &m.fluids, Execution::default()).remove(0)?;
            let reference = AnalyticReference::new(&m.mode, &sol, &m.fluids);
            let region = match region {
                RegionArg::Quarter => Region::Quarter,
                RegionArg::Full => Region::Full,
            };
            emit(out, &to_json(&dev_metric(&series, &reference, region)?))
        }
        Command::Closures { phi_min, phi_max, steps, molar_ratio } => {
            if *steps < 2 || !(phi_min < phi_max) {
                return Err(CliError::Usage("need --phi-min < --phi-max and --steps ≥ 2".into()));
            }
            let mut tab = Table::new(&["phi", "rho", "eta"]);
            for i in 0..*steps {
                let phi = phi_min + (phi_max - phi_min) * i as f64 / (*steps - 1) as f64;
                tab.row([phi, density(&fp, phi), viscosity(&fp, phi, *molar_ratio)?].map(format_float));
            }
            emit(out, &tab.finish())
        }
        Command::Detscan { k, re_range, im_range, resolution } => {
            if *k < 2 {
                return Err(CliError::Usage(format!("--k must be ≥ 2, got {k}")));
            }
            let pts = det_scan(*k, &fp.scales(), *re_range, *im_range, *resolution, *resolution, Execution::default())?;
            let mut tab = Table::new(&["gamma_re", "gamma_im", "relative_det"]);
            for p in pts {
                tab.row([p.gamma_nd.re, p.gamma_nd.im, p.relative_det].map(format_float));
            }
            emit(out, &tab.finish())
        }
        Command::FitMobility { points } => {
            let pts: [(f64, f64); 3] = points
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Usage(format!("expected exactly 3 --point values, got {}", points.len())))?;
            emit(out, &to_json(&fit_optimal_mobility(&pts)?))
        }
    }
}

fn modes_csv(sols: &[ModalSolution], table1_units: bool) -> String {
    let mut header = vec!["k".to_string()];
    for name in ["gamma", "m_d", "m_a", "a", "b", "e", "f"] {
        header.push(format!("{name}_re"));
        header.push(format!("{name}_im"));
    }
    header.push("det_residual".into());
    let mut tab = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for s in sols {
        let (a, b, e, f) = if table1_units {
            let t = Table1Values::from_solution(s);
            (t.a, t.b, t.e, t.f)
        } else {
            (s.coeff_a, s.coeff_b, s.coeff_e, s.coeff_f)
        };
        let mut row = vec![s.k.to_string()];
        for z in [s.gamma, s.m_d, s.m_a, a, b, e, f] {
            row.push(format_float(z.re));
            row.push(format_float(z.im));
        }
        row.push(format_float(s.det_residual));
        tab.row(row);
    }
    tab.finish()
}
