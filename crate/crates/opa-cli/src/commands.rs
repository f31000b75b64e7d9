//! Subcommand dispatch: argument handling, config loading, computation, and
//! file output. Exit codes: 0 success, 1 configuration error, 2 numerical
//! failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;

use opa_core::scan::{auto_qgrid, scan_angle, ScanSpec};
use opa_core::{
    build_tpa, decompose, fwhm, gaussian_seed, output_photon_number, overlaps, schmidt_number,
    Error, C64, DEFAULT_TRUNCATION,
};

use crate::config::{parse_config, Format, RunConfig};
use crate::driver::run_map;
use crate::output;

#[derive(Debug, Parser)]
#[command(name = "opa", version, about = "Multimode phase-sensitive optical parametric amplifier simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Configuration file (flat key = value document); defaults used if omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides OUTPUT_DIR and the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output file format (overrides the config).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Grid point count (overrides the config's grid.n_points).
    #[arg(long, global = true)]
    grid_size: Option<usize>,
    /// Suppress the summary line.
    #[arg(long, global = true)]
    quiet: bool,
    /// Evaluate map points across threads (identical output either way).
    #[arg(long, global = true)]
    parallel: bool,
}

#[derive(Debug, clap::Subcommand)]
enum Cmd {
    /// Write the two-photon amplitude kernel.
    Tpa,
    /// Write the Schmidt weights and leading modes.
    Schmidt,
    /// Evaluate one seeded amplification point.
    Amplify,
    /// Visibility versus seed central angle at fixed divergence.
    Scan,
    /// Visibility map over divergence and central angle.
    Map,
}

/// Error classified by exit code.
enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) => m,
        }
    }
}

/// Core errors raised while building inputs are configuration problems;
/// errors raised mid-computation are numerical failures.
fn config_err(e: Error) -> CliError {
    CliError::Config(e.to_string())
}

fn numerical_err(e: Error) -> CliError {
    CliError::Numerical(e.to_string())
}

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read config file {}: {e}", path.display()))
            })?;
            parse_config(&text).map_err(|e| {
                CliError::Config(format!("config file {}: {e}", path.display()))
            })?
        }
        None => RunConfig::default(),
    };
    if let Some(n) = cli.grid_size {
        if n < opa_core::grid::MIN_POINTS {
            return Err(CliError::Config(format!("--grid-size {n} is too small")));
        }
        cfg.grid_n_points = Some(n);
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    Ok(cfg)
}

fn out_dir(cli: &Cli, cfg: &RunConfig) -> PathBuf {
    if let Some(d) = &cli.out {
        return d.clone();
    }
    if let Ok(d) = std::env::var("OUTPUT_DIR") {
        if !d.is_empty() {
            return PathBuf::from(d);
        }
    }
    cfg.output_dir
        .as_ref()
        .map_or_else(|| PathBuf::from("."), PathBuf::from)
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let dir = out_dir(cli, &cfg);
    let physics = cfg.physics();
    physics.validate().map_err(config_err)?;

    let summary = match cli.cmd {
        Cmd::Tpa => {
            let grid = auto_qgrid(&physics, None, &cfg.grid_spec()).map_err(config_err)?;
            let f = build_tpa(&physics, &grid).map_err(numerical_err)?;
            let (name, text) = match cfg.format {
                Format::Csv => ("tpa.csv", output::tpa_csv(&f)),
                Format::Json => ("tpa.json", output::tpa_json(&cfg, &f)),
            };
            let path = write_out(&dir, name, &text)?;
            format!(
                "tpa: {n}x{n} kernel, q_max {q} rad/m -> {p}",
                n = grid.len(),
                q = grid.q_max(),
                p = path.display()
            )
        }
        Cmd::Schmidt => {
            let grid = auto_qgrid(&physics, None, &cfg.grid_spec()).map_err(config_err)?;
            let f = build_tpa(&physics, &grid).map_err(numerical_err)?;
            let d = decompose(&f, physics.gain, DEFAULT_TRUNCATION).map_err(numerical_err)?;
            let (name, text) = match cfg.format {
                Format::Csv => ("schmidt.csv", output::schmidt_csv(&d, &grid, cfg.modes)),
                Format::Json => ("schmidt.json", output::schmidt_json(&cfg, &d, &grid, cfg.modes)),
            };
            let path = write_out(&dir, name, &text)?;
            format!(
                "schmidt: {m} modes retained, K = {k} -> {p}",
                m = d.mode_count(),
                k = schmidt_number(&d),
                p = path.display()
            )
        }
        Cmd::Amplify => {
            let divergence = cfg.divergence_mrad * 1e-3;
            let grid =
                auto_qgrid(&physics, Some(divergence), &cfg.grid_spec()).map_err(config_err)?;
            let f = build_tpa(&physics, &grid).map_err(numerical_err)?;
            let d = decompose(&f, physics.gain, DEFAULT_TRUNCATION).map_err(numerical_err)?;
            let q0 = cfg.central_angle_mrad * 1e-3 * physics.wavenumber();
            let seed = gaussian_seed(
                &grid,
                divergence,
                q0,
                physics.seed_wavelength,
                C64::new(1.0, 0.0),
            )
            .map_err(config_err)?;
            let ov = overlaps(&seed, &d).map_err(numerical_err)?;
            let r = output_photon_number(&ov, &d, seed.alpha()).map_err(numerical_err)?;
            let (name, text) = match cfg.format {
                Format::Csv => ("amplify.csv", output::amplify_csv(&r)),
                Format::Json => ("amplify.json", output::amplify_json(&cfg, &r)),
            };
            let path = write_out(&dir, name, &text)?;
            format!(
                "amplify: visibility {v}, n_max {hi}, n_min {lo} -> {p}",
                v = r.visibility,
                hi = r.n_max,
                lo = r.n_min,
                p = path.display()
            )
        }
        Cmd::Scan => {
            let divergence = cfg.divergence_mrad * 1e-3;
            let results = scan_angle(divergence, &cfg.angles(), &physics, &cfg.grid_spec())
                .map_err(numerical_err)?;
            let vis: Vec<f64> = results.iter().map(|r| r.visibility).collect();
            // the curve is symmetric in the central angle, so a sweep that
            // starts at zero is mirrored about it before width extraction
            let width = if cfg.angles_mrad[0] == 0.0 && vis.len() > 2 {
                let mut xs: Vec<f64> = cfg.angles_mrad.iter().skip(1).rev().map(|a| -a).collect();
                xs.extend(cfg.angles_mrad.iter().copied());
                let mut ys: Vec<f64> = vis.iter().skip(1).rev().copied().collect();
                ys.extend(vis.iter().copied());
                fwhm(&xs, &ys).ok()
            } else {
                fwhm(&cfg.angles_mrad, &vis).ok()
            };
            let (name, text) = match cfg.format {
                Format::Csv => ("scan.csv", output::scan_csv(&cfg.angles_mrad, &results)),
                Format::Json => (
                    "scan.json",
                    output::scan_json(&cfg, &cfg.angles_mrad, &results, width),
                ),
            };
            let path = write_out(&dir, name, &text)?;
            match width {
                Some(w) => format!(
                    "scan: divergence {d} mrad, FWHM {w} mrad over {n} angles -> {p}",
                    d = cfg.divergence_mrad,
                    n = results.len(),
                    p = path.display()
                ),
                None => format!(
                    "scan: divergence {d} mrad, no half-max crossing over {n} angles -> {p}",
                    d = cfg.divergence_mrad,
                    n = results.len(),
                    p = path.display()
                ),
            }
        }
        Cmd::Map => {
            let spec = ScanSpec {
                divergences: cfg.divergences(),
                central_angles: cfg.angles(),
                cfg: physics,
                grid: cfg.grid_spec(),
                truncation: DEFAULT_TRUNCATION,
            };
            let map = run_map(&spec, cli.parallel).map_err(numerical_err)?;
            let (name, text) = match cfg.format {
                Format::Csv => ("map.csv", output::map_csv(&map)),
                Format::Json => ("map.json", output::map_json(&cfg, &map)),
            };
            let path = write_out(&dir, name, &text)?;
            format!(
                "map: {r}x{c} points on a {n}-point grid -> {p}",
                r = map.divergences.len(),
                c = map.central_angles.len(),
                n = map.grid.len(),
                p = path.display()
            )
        }
    };
    if !cli.quiet {
        println!("{summary}");
    }
    Ok(())
}
