//! Parameter sweeps: visibility versus seed central angle at fixed
//! divergence, and the 2-D divergence x central-angle visibility map, plus
//! FWHM extraction for the resulting curves.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::QGrid;
use crate::schmidt::{decompose, SchmidtDecomposition, DEFAULT_TRUNCATION};
use crate::seed::{gaussian_seed, overlaps};
use crate::tpa::{build_tpa, phase_matching_bandwidth, CrystalPumpConfig};

/// Grid sizing for a scan; `None` fields are derived from the physics and
/// the smallest seed divergence in play.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GridSpec {
    pub n_points: Option<usize>,
    pub q_max: Option<f64>,
}

/// Baseline point count when nothing finer is required.
pub const DEFAULT_N_POINTS: usize = 257;

/// Cap on automatic grid refinement.
const MAX_AUTO_POINTS: usize = 8193;

/// Wavevector grid for a scan: extent defaults to three phase-matching
/// bandwidths, and the sampling is refined until both the kernel
/// antidiagonal width (pump spectral width) and the narrowest seed are
/// resolved. The point count is kept odd so `q = 0` stays on the grid.
pub fn auto_qgrid(
    cfg: &CrystalPumpConfig,
    min_divergence: Option<f64>,
    spec: &GridSpec,
) -> Result<QGrid> {
    cfg.validate()?;
    let q_max = spec.q_max.unwrap_or(3.0 * phase_matching_bandwidth(cfg));
    let n = match spec.n_points {
        Some(n) => n,
        None => {
            // pump spectral width 1/sigma_p sets the kernel's antidiagonal scale
            let mut dq_target: f64 = 1.0 / (3.0 * cfg.pump_sigma());
            if let Some(theta) = min_divergence {
                if !(theta > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "seed divergence must be positive, got {theta}"
                    )));
                }
                dq_target = dq_target.min(theta * cfg.wavenumber() / 2.5);
            }
            let mut n = 2 * libm::ceil(q_max / dq_target) as usize + 1;
            if n < DEFAULT_N_POINTS {
                n = DEFAULT_N_POINTS;
            }
            if n > MAX_AUTO_POINTS {
                n = MAX_AUTO_POINTS;
            }
            n
        }
    };
    QGrid::new(n, q_max)
}

/// Visibility statistics of one scan point.
#[derive(Debug, Clone, Copy)]
pub struct VisibilityResult {
    /// Seed central angle, rad.
    pub central_angle: f64,
    pub visibility: f64,
    pub n_max: f64,
    pub n_min: f64,
}

/// Shared state of a sweep: the kernel decomposition is seed-independent, so
/// it is computed once per physics configuration and reused for every point.
#[derive(Debug, Clone)]
pub struct MapContext {
    cfg: CrystalPumpConfig,
    grid: QGrid,
    decomposition: SchmidtDecomposition,
}

impl MapContext {
    /// Build the kernel and decompose it once for a sweep whose smallest
    /// seed divergence is `min_divergence`.
    pub fn prepare(
        cfg: &CrystalPumpConfig,
        grid_spec: &GridSpec,
        min_divergence: Option<f64>,
        truncation: f64,
    ) -> Result<Self> {
        let grid = auto_qgrid(cfg, min_divergence, grid_spec)?;
        let f = build_tpa(cfg, &grid)?;
        let decomposition = decompose(&f, cfg.gain, truncation)?;
        Ok(Self {
            cfg: *cfg,
            grid,
            decomposition,
        })
    }

    pub fn grid(&self) -> &QGrid {
        &self.grid
    }

    pub fn decomposition(&self) -> &SchmidtDecomposition {
        &self.decomposition
    }

    pub fn config(&self) -> &CrystalPumpConfig {
        &self.cfg
    }

    /// Evaluate one (divergence, central angle) point. Visibility does not
    /// depend on the seed intensity, so a unit coherent amplitude is used.
    pub fn eval(&self, divergence: f64, central_angle: f64) -> Result<VisibilityResult> {
        let attach = |e: Error| Error::ScanPoint {
            angle_mrad: central_angle * 1e3,
            source: Box::new(e),
        };
        let q0 = central_angle * self.cfg.wavenumber();
        let seed = gaussian_seed(
            &self.grid,
            divergence,
            q0,
            self.cfg.seed_wavelength,
            C64::new(1.0, 0.0),
        )
        .map_err(attach)?;
        let ov = overlaps(&seed, &self.decomposition).map_err(attach)?;
        let r = crate::amplifier::output_photon_number(&ov, &self.decomposition, seed.alpha())
            .map_err(attach)?;
        Ok(VisibilityResult {
            central_angle,
            visibility: r.visibility,
            n_max: r.n_max,
            n_min: r.n_min,
        })
    }
}

fn check_axis_values(name: &str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidArgument(format!("{name} array is empty")));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(format!(
            "{name} array must be strictly increasing"
        )));
    }
    Ok(())
}

/// Visibility versus central angle at a fixed divergence; one decomposition
/// is computed and reused across all angles.
pub fn scan_angle(
    divergence: f64,
    central_angles: &[f64],
    cfg: &CrystalPumpConfig,
    grid_spec: &GridSpec,
) -> Result<Vec<VisibilityResult>> {
    check_axis_values("central angle", central_angles)?;
    let ctx = MapContext::prepare(cfg, grid_spec, Some(divergence), DEFAULT_TRUNCATION)?;
    central_angles
        .iter()
        .map(|&a| ctx.eval(divergence, a))
        .collect()
}

/// Full specification of a 2-D visibility map sweep.
#[derive(Debug, Clone)]
pub struct ScanSpec {
    /// Seed divergences (rows), rad, strictly increasing.
    pub divergences: Vec<f64>,
    /// Seed central angles (columns), rad, strictly increasing.
    pub central_angles: Vec<f64>,
    pub cfg: CrystalPumpConfig,
    pub grid: GridSpec,
    pub truncation: f64,
}

impl ScanSpec {
    pub fn with_defaults(cfg: CrystalPumpConfig) -> Self {
        Self {
            divergences: log_spaced(0.05e-3, 10e-3, 31),
            central_angles: lin_spaced(0.0, 10e-3, 41),
            cfg,
            grid: GridSpec::default(),
            truncation: DEFAULT_TRUNCATION,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_axis_values("divergence", &self.divergences)?;
        check_axis_values("central angle", &self.central_angles)?;
        if self.divergences[0] <= 0.0 {
            return Err(Error::InvalidArgument(
                "divergences must be positive".into(),
            ));
        }
        self.cfg.validate()
    }
}

pub fn lin_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64)
        .collect()
}

pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1).max(1) as f64).exp())
        .collect()
}

/// Visibility over a divergence x central-angle sweep, rows indexed by
/// divergence, columns by central angle; row-major storage.
#[derive(Debug, Clone)]
pub struct VisibilityMap {
    pub divergences: Vec<f64>,
    pub central_angles: Vec<f64>,
    /// Row-major `divergences.len() x central_angles.len()` visibilities.
    pub values: Vec<f64>,
    /// The grid the decomposition was computed on.
    pub grid: QGrid,
    pub cfg: CrystalPumpConfig,
}

impl VisibilityMap {
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.central_angles.len() + col]
    }
}

/// Assemble a full visibility map sequentially. Results are written by
/// pre-assigned index, so any parallel driver that evaluates the same points
/// with [`MapContext::eval`] produces an identical map.
pub fn scan_map(spec: &ScanSpec) -> Result<VisibilityMap> {
    spec.validate()?;
    let ctx = MapContext::prepare(
        &spec.cfg,
        &spec.grid,
        spec.divergences.first().copied(),
        spec.truncation,
    )?;
    let cols = spec.central_angles.len();
    let mut values = alloc::vec![0.0; spec.divergences.len() * cols];
    for (i, &theta) in spec.divergences.iter().enumerate() {
        for (j, &angle) in spec.central_angles.iter().enumerate() {
            values[i * cols + j] = ctx.eval(theta, angle)?.visibility;
        }
    }
    Ok(VisibilityMap {
        divergences: spec.divergences.clone(),
        central_angles: spec.central_angles.clone(),
        values,
        grid: *ctx.grid(),
        cfg: spec.cfg,
    })
}

/// Linear-interpolated full width at half maximum of a sampled curve, with a
/// zero baseline.
///
/// Requires at least five points and a unique interior maximum; fails with
/// [`Error::NoCrossing`] when the curve never falls below half maximum on
/// either side.
pub fn fwhm(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch(format!(
            "xs has {} points, ys has {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 5 {
        return Err(Error::InvalidArgument(format!(
            "need at least 5 points for a FWHM, got {}",
            xs.len()
        )));
    }
    check_axis_values("xs", xs)?;
    let mut peak = 0usize;
    for (j, &y) in ys.iter().enumerate() {
        if y > ys[peak] {
            peak = j;
        }
    }
    if peak == 0 || peak == ys.len() - 1 {
        return Err(Error::InvalidArgument(
            "curve maximum sits on the boundary".into(),
        ));
    }
    if ys.iter().enumerate().any(|(j, &y)| j != peak && y == ys[peak]) {
        return Err(Error::InvalidArgument(
            "curve maximum is not unique".into(),
        ));
    }
    let half = 0.5 * ys[peak];
    let cross = |a: usize, b: usize| {
        let t = (half - ys[a]) / (ys[b] - ys[a]);
        xs[a] + t * (xs[b] - xs[a])
    };
    let mut left = None;
    for j in (0..peak).rev() {
        if ys[j] <= half {
            left = Some(cross(j, j + 1));
            break;
        }
    }
    let mut right = None;
    for j in (peak + 1)..ys.len() {
        if ys[j] <= half {
            right = Some(cross(j, j - 1));
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => Ok(r - l),
        _ => Err(Error::NoCrossing(
            "curve never falls below half maximum inside the sampled range".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fwhm_triangle() {
        let w = fwhm(&[0.0, 0.5, 1.0, 1.5, 2.0], &[0.0, 0.5, 1.0, 0.5, 0.0]).unwrap();
        assert!((w - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fwhm_gaussian() {
        let sigma = 0.7;
        let xs = lin_spaced(-4.0, 4.0, 201);
        let ys: Vec<f64> = xs.iter().map(|x| (-x * x / (2.0 * sigma * sigma)).exp()).collect();
        let w = fwhm(&xs, &ys).unwrap();
        let expect = 2.0 * (2.0f64.ln() * 2.0).sqrt() * sigma;
        assert!((w - expect).abs() < 0.01 * expect);
    }

    #[test]
    fn fwhm_error_paths() {
        // boundary maximum
        assert!(fwhm(&[0.0, 1.0, 2.0, 3.0, 4.0], &[1.0, 0.8, 0.6, 0.4, 0.2]).is_err());
        // never crosses half max
        assert!(matches!(
            fwhm(&[0.0, 1.0, 2.0, 3.0, 4.0], &[0.9, 0.95, 1.0, 0.95, 0.9]),
            Err(Error::NoCrossing(_))
        ));
        // too few points
        assert!(fwhm(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0]).is_err());
        // duplicate maximum
        assert!(fwhm(&[0.0, 1.0, 2.0, 3.0, 4.0], &[0.0, 1.0, 1.0, 0.5, 0.0]).is_err());
        // unsorted xs
        assert!(fwhm(&[0.0, 2.0, 1.0, 3.0, 4.0], &[0.0, 0.5, 1.0, 0.5, 0.0]).is_err());
    }

    #[test]
    fn angle_sign_symmetry() {
        let cfg = CrystalPumpConfig::default();
        let spec = GridSpec {
            n_points: Some(257),
            q_max: None,
        };
        let ctx = MapContext::prepare(&cfg, &spec, Some(3.8e-3), DEFAULT_TRUNCATION).unwrap();
        for a in [1e-3, 2.5e-3, 5e-3] {
            let plus = ctx.eval(3.8e-3, a).unwrap();
            let minus = ctx.eval(3.8e-3, -a).unwrap();
            assert!((plus.visibility - minus.visibility).abs() < 1e-12);
            assert!((plus.n_max - minus.n_max).abs() < 1e-9 * plus.n_max);
        }
    }

    #[test]
    fn single_row_map_matches_scan_angle() {
        let cfg = CrystalPumpConfig::default();
        let angles = lin_spaced(0.0, 6e-3, 7);
        let grid = GridSpec {
            n_points: Some(257),
            q_max: None,
        };
        let row = scan_angle(3.8e-3, &angles, &cfg, &grid).unwrap();
        let spec = ScanSpec {
            divergences: alloc::vec![3.8e-3],
            central_angles: angles.clone(),
            cfg,
            grid,
            truncation: DEFAULT_TRUNCATION,
        };
        let map = scan_map(&spec).unwrap();
        for (j, r) in row.iter().enumerate() {
            assert_eq!(map.value(0, j), r.visibility);
        }
    }

    #[test]
    fn deterministic_repetition() {
        let cfg = CrystalPumpConfig::default();
        let spec = ScanSpec {
            divergences: alloc::vec![0.5e-3, 2e-3],
            central_angles: lin_spaced(0.0, 4e-3, 5),
            cfg,
            grid: GridSpec::default(),
            truncation: DEFAULT_TRUNCATION,
        };
        let a = scan_map(&spec).unwrap();
        let b = scan_map(&spec).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn auto_grid_refines_for_narrow_seeds() {
        let cfg = CrystalPumpConfig::default();
        let coarse = auto_qgrid(&cfg, Some(3.8e-3), &GridSpec::default()).unwrap();
        let fine = auto_qgrid(&cfg, Some(0.13e-3), &GridSpec::default()).unwrap();
        assert!(fine.len() > coarse.len());
        assert!(fine.contains_zero() && coarse.contains_zero());
        // narrowest seed resolved: at least two samples across its FWHM
        assert!(0.13e-3 * cfg.wavenumber() >= 2.0 * fine.step());
        let manual = auto_qgrid(
            &cfg,
            Some(0.13e-3),
            &GridSpec {
                n_points: Some(129),
                q_max: Some(1.0e5),
            },
        )
        .unwrap();
        assert_eq!(manual.len(), 129);
        assert_eq!(manual.q_max(), 1.0e5);
    }

    #[test]
    fn invalid_specs_rejected() {
        let cfg = CrystalPumpConfig::default();
        let mut spec = ScanSpec::with_defaults(cfg);
        spec.divergences = alloc::vec![];
        assert!(scan_map(&spec).is_err());
        let mut spec = ScanSpec::with_defaults(cfg);
        spec.central_angles = alloc::vec![0.0, 2.0e-3, 1.0e-3];
        assert!(spec.validate().is_err());
        // offending angle identified when the seed leaves the grid
        let ctx = MapContext::prepare(
            &cfg,
            &GridSpec {
                n_points: Some(257),
                q_max: None,
            },
            Some(3.8e-3),
            DEFAULT_TRUNCATION,
        )
        .unwrap();
        let far_out = ctx.grid().q_max() / cfg.wavenumber() * 1.5;
        match ctx.eval(3.8e-3, far_out) {
            Err(Error::ScanPoint { angle_mrad, .. }) => {
                assert!((angle_mrad - far_out * 1e3).abs() < 1e-12)
            }
            other => panic!("expected ScanPoint error, got {other:?}"),
        }
    }
}
