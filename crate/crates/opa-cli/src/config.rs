//! Flat key-value run configuration with dotted sections and unit-suffixed
//! keys (`*_nm`, `*_mm`, `*_um`, `*_mrad`); values are stored in the document
//! units so that serialization round-trips exactly, and converted to SI when
//! the physics objects are built.

use std::fmt::Write as _;

use opa_core::scan::{lin_spaced, log_spaced};
use opa_core::{CrystalPumpConfig, GridSpec, PhaseMatchingModel};

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Effective run configuration; every field has a default matching the
/// reference experimental setup (800 nm seed, 2 mm crystal, 240 um pump
/// waist, G = 3.2).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed_wavelength_nm: f64,
    pub crystal_length_mm: f64,
    pub pump_fwhm_um: f64,
    pub gain: f64,
    pub phase_matching: PhaseMatchingModel,
    /// `None` means automatic sizing from the physics.
    pub grid_n_points: Option<usize>,
    /// rad/m; `None` means three phase-matching bandwidths.
    pub grid_q_max: Option<f64>,
    /// Seed divergence for `scan` and `amplify`.
    pub divergence_mrad: f64,
    /// Seed central angle for `amplify`.
    pub central_angle_mrad: f64,
    /// Central-angle axis for `scan` and `map`.
    pub angles_mrad: Vec<f64>,
    /// Divergence axis for `map`.
    pub divergences_mrad: Vec<f64>,
    /// Phase samples of the explicit scan cross-check.
    pub phase_points: usize,
    /// Number of leading Schmidt modes dumped by `schmidt`.
    pub modes: usize,
    pub output_dir: Option<String>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed_wavelength_nm: 800.0,
            crystal_length_mm: 2.0,
            pump_fwhm_um: 240.0,
            gain: 3.2,
            phase_matching: PhaseMatchingModel::Sinc,
            grid_n_points: None,
            grid_q_max: None,
            divergence_mrad: 3.8,
            central_angle_mrad: 0.0,
            angles_mrad: lin_spaced(0.0, 10.0, 41),
            divergences_mrad: log_spaced(0.05, 10.0, 31),
            phase_points: 64,
            modes: 10,
            output_dir: None,
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    /// Physics parameters in SI units.
    pub fn physics(&self) -> CrystalPumpConfig {
        CrystalPumpConfig {
            seed_wavelength: self.seed_wavelength_nm * 1e-9,
            crystal_length: self.crystal_length_mm * 1e-3,
            pump_fwhm: self.pump_fwhm_um * 1e-6,
            gain: self.gain,
            phase_matching: self.phase_matching,
        }
    }

    pub fn grid_spec(&self) -> GridSpec {
        GridSpec {
            n_points: self.grid_n_points,
            q_max: self.grid_q_max,
        }
    }

    pub fn angles(&self) -> Vec<f64> {
        self.angles_mrad.iter().map(|a| a * 1e-3).collect()
    }

    pub fn divergences(&self) -> Vec<f64> {
        self.divergences_mrad.iter().map(|a| a * 1e-3).collect()
    }

    /// Serialize back to the flat document; `parse_config` of the result
    /// reproduces every effective value exactly.
    pub fn to_document(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "physics.seed_wavelength_nm = {}", self.seed_wavelength_nm);
        let _ = writeln!(s, "physics.crystal_length_mm = {}", self.crystal_length_mm);
        let _ = writeln!(s, "physics.pump_fwhm_um = {}", self.pump_fwhm_um);
        let _ = writeln!(s, "physics.gain = {}", self.gain);
        let _ = writeln!(
            s,
            "physics.phase_matching = {}",
            match self.phase_matching {
                PhaseMatchingModel::Sinc => "sinc",
                PhaseMatchingModel::GaussianApprox => "gaussian",
            }
        );
        let _ = writeln!(
            s,
            "grid.n_points = {}",
            self.grid_n_points
                .map_or("auto".into(), |n| n.to_string())
        );
        let _ = writeln!(
            s,
            "grid.q_max = {}",
            self.grid_q_max.map_or("auto".into(), |q| q.to_string())
        );
        let _ = writeln!(s, "scan.divergence_mrad = {}", self.divergence_mrad);
        let _ = writeln!(s, "scan.central_angle_mrad = {}", self.central_angle_mrad);
        let _ = writeln!(s, "scan.angles_mrad = {}", join(&self.angles_mrad));
        let _ = writeln!(s, "scan.divergences_mrad = {}", join(&self.divergences_mrad));
        let _ = writeln!(s, "scan.phase_points = {}", self.phase_points);
        let _ = writeln!(s, "schmidt.modes = {}", self.modes);
        if let Some(dir) = &self.output_dir {
            let _ = writeln!(s, "output.dir = {dir}");
        }
        let _ = writeln!(s, "output.format = {}", self.format.name());
        s
    }

    /// The effective configuration as a JSON object for output envelopes.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "physics.seed_wavelength_nm": self.seed_wavelength_nm,
            "physics.crystal_length_mm": self.crystal_length_mm,
            "physics.pump_fwhm_um": self.pump_fwhm_um,
            "physics.gain": self.gain,
            "physics.phase_matching": match self.phase_matching {
                PhaseMatchingModel::Sinc => "sinc",
                PhaseMatchingModel::GaussianApprox => "gaussian",
            },
            "grid.n_points": self.grid_n_points,
            "grid.q_max": self.grid_q_max,
            "scan.divergence_mrad": self.divergence_mrad,
            "scan.central_angle_mrad": self.central_angle_mrad,
            "scan.angles_mrad": self.angles_mrad,
            "scan.divergences_mrad": self.divergences_mrad,
            "scan.phase_points": self.phase_points,
            "schmidt.modes": self.modes,
            "output.format": self.format.name(),
        })
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// A configuration document problem: parse errors carry the line, validation
/// errors carry the offending key.
#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct ConfigError {
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, msg: impl Into<String>) -> Self {
        Self {
            message: format!("line {line}: {}", msg.into()),
        }
    }

    fn key(line: usize, key: &str, msg: impl Into<String>) -> Self {
        Self {
            message: format!("line {line}: key \"{key}\": {}", msg.into()),
        }
    }
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    v.parse::<f64>()
        .map_err(|_| ConfigError::key(line, key, format!("expected a number, got \"{v}\"")))
}

fn parse_usize(line: usize, key: &str, v: &str) -> Result<usize, ConfigError> {
    v.parse::<usize>()
        .map_err(|_| ConfigError::key(line, key, format!("expected a nonnegative integer, got \"{v}\"")))
}

fn require(ok: bool, line: usize, key: &str, msg: &str) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::key(line, key, msg))
    }
}

/// Axis value lists accept `lo:hi:n` (linear), `log:lo:hi:n` (logarithmic),
/// or an explicit comma-separated list.
fn parse_axis(line: usize, key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    let parts: Vec<&str> = v.split(':').map(str::trim).collect();
    let values = match parts.as_slice() {
        [list] => list
            .split(',')
            .map(|x| parse_f64(line, key, x.trim()))
            .collect::<Result<Vec<_>, _>>()?,
        [lo, hi, n] => {
            let (lo, hi) = (parse_f64(line, key, lo)?, parse_f64(line, key, hi)?);
            lin_spaced(lo, hi, parse_usize(line, key, n)?)
        }
        [tag, lo, hi, n] if *tag == "log" => {
            let (lo, hi) = (parse_f64(line, key, lo)?, parse_f64(line, key, hi)?);
            require(lo > 0.0, line, key, "log range needs positive endpoints")?;
            log_spaced(lo, hi, parse_usize(line, key, n)?)
        }
        _ => {
            return Err(ConfigError::key(
                line,
                key,
                "expected \"lo:hi:n\", \"log:lo:hi:n\", or a comma-separated list",
            ))
        }
    };
    require(!values.is_empty(), line, key, "axis is empty")?;
    require(
        values.windows(2).all(|w| w[1] > w[0]),
        line,
        key,
        "axis values must be strictly increasing",
    )?;
    Ok(values)
}

/// Parse a configuration document; omitted keys keep their defaults. Keys may
/// be written with or without their section prefix (`physics.gain` or
/// `gain`); unknown keys are rejected by name.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::at(line, format!("expected \"key = value\", got \"{content}\"")));
        };
        let (key, v) = (key.trim(), value.trim());
        if v.is_empty() {
            return Err(ConfigError::key(line, key, "empty value"));
        }

        // canonical names carry the section; the bare suffix is accepted too
        let canonical = match key {
            "physics.seed_wavelength_nm" | "seed_wavelength_nm" => "physics.seed_wavelength_nm",
            "physics.crystal_length_mm" | "crystal_length_mm" => "physics.crystal_length_mm",
            "physics.pump_fwhm_um" | "pump_fwhm_um" => "physics.pump_fwhm_um",
            "physics.gain" | "gain" => "physics.gain",
            "physics.phase_matching" | "phase_matching" => "physics.phase_matching",
            "grid.n_points" | "n_points" => "grid.n_points",
            "grid.q_max" | "q_max" => "grid.q_max",
            "scan.divergence_mrad" | "divergence_mrad" => "scan.divergence_mrad",
            "scan.central_angle_mrad" | "central_angle_mrad" => "scan.central_angle_mrad",
            "scan.angles_mrad" | "angles_mrad" => "scan.angles_mrad",
            "scan.divergences_mrad" | "divergences_mrad" => "scan.divergences_mrad",
            "scan.phase_points" | "phase_points" => "scan.phase_points",
            "schmidt.modes" | "modes" => "schmidt.modes",
            "output.dir" | "dir" => "output.dir",
            "output.format" | "format" => "output.format",
            _ => return Err(ConfigError::key(line, key, "unknown key")),
        };
        if seen.iter().any(|k| k == canonical) {
            return Err(ConfigError::key(line, key, "duplicate key"));
        }
        seen.push(canonical.to_string());

        match canonical {
            "physics.seed_wavelength_nm" => {
                let x = parse_f64(line, key, v)?;
                require(x > 0.0 && x.is_finite(), line, key, "wavelength must be positive")?;
                cfg.seed_wavelength_nm = x;
            }
            "physics.crystal_length_mm" => {
                let x = parse_f64(line, key, v)?;
                require(x > 0.0 && x.is_finite(), line, key, "crystal length must be positive")?;
                cfg.crystal_length_mm = x;
            }
            "physics.pump_fwhm_um" => {
                let x = parse_f64(line, key, v)?;
                require(x > 0.0 && x.is_finite(), line, key, "pump width must be positive")?;
                cfg.pump_fwhm_um = x;
            }
            "physics.gain" => {
                let x = parse_f64(line, key, v)?;
                require(x >= 0.0 && x.is_finite(), line, key, "gain must be nonnegative")?;
                cfg.gain = x;
            }
            "physics.phase_matching" => {
                cfg.phase_matching = match v {
                    "sinc" => PhaseMatchingModel::Sinc,
                    "gaussian" => PhaseMatchingModel::GaussianApprox,
                    _ => {
                        return Err(ConfigError::key(
                            line,
                            key,
                            format!("expected \"sinc\" or \"gaussian\", got \"{v}\""),
                        ))
                    }
                };
            }
            "grid.n_points" => {
                cfg.grid_n_points = if v == "auto" {
                    None
                } else {
                    let n = parse_usize(line, key, v)?;
                    require(n >= opa_core::grid::MIN_POINTS, line, key, "grid too small")?;
                    Some(n)
                };
            }
            "grid.q_max" => {
                cfg.grid_q_max = if v == "auto" {
                    None
                } else {
                    let q = parse_f64(line, key, v)?;
                    require(q > 0.0 && q.is_finite(), line, key, "q_max must be positive")?;
                    Some(q)
                };
            }
            "scan.divergence_mrad" => {
                let x = parse_f64(line, key, v)?;
                require(x > 0.0 && x.is_finite(), line, key, "divergence must be positive")?;
                cfg.divergence_mrad = x;
            }
            "scan.central_angle_mrad" => {
                let x = parse_f64(line, key, v)?;
                require(x.is_finite(), line, key, "central angle must be finite")?;
                cfg.central_angle_mrad = x;
            }
            "scan.angles_mrad" => cfg.angles_mrad = parse_axis(line, key, v)?,
            "scan.divergences_mrad" => {
                let d = parse_axis(line, key, v)?;
                require(d[0] > 0.0, line, key, "divergences must be positive")?;
                cfg.divergences_mrad = d;
            }
            "scan.phase_points" => {
                let n = parse_usize(line, key, v)?;
                require(n >= 8, line, key, "need at least 8 phase samples")?;
                cfg.phase_points = n;
            }
            "schmidt.modes" => {
                let n = parse_usize(line, key, v)?;
                require(n >= 1, line, key, "need at least one mode")?;
                cfg.modes = n;
            }
            "output.dir" => cfg.output_dir = Some(v.to_string()),
            "output.format" => {
                cfg.format = match v {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => {
                        return Err(ConfigError::key(
                            line,
                            key,
                            format!("expected \"csv\" or \"json\", got \"{v}\""),
                        ))
                    }
                };
            }
            _ => unreachable!(),
        }
    }
    Ok(cfg)
}
