//! Far-field two-photon amplitude of collinear degenerate type-I parametric
//! down-conversion, built from the crystal and pump parameters, plus the
//! idealized delta kernel used in limit tests.

use alloc::format;
use core::f64::consts::PI;

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::{QGrid, RGrid};

/// Amplitude of `sinc(x) = sin(x)/x` at its half-maximum, `sinc(x) = 1/2`.
const SINC_HALF_POINT: f64 = 1.895_494_267_033_980_9;

/// Intensity FWHM to amplitude-Gaussian sigma: `σ = FWHM / (2 sqrt(2 ln 2))`.
pub fn fwhm_to_sigma(fwhm: f64) -> f64 {
    fwhm / (2.0 * (2.0 * core::f64::consts::LN_2).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMatchingModel {
    /// Exact longitudinal phase-matching factor `sinc(L (q_s² + q_i²) / 4k)`.
    Sinc,
    /// Gaussian matched to the sinc at its amplitude FWHM.
    GaussianApprox,
}

/// Physical parameters of the crystal, pump and seed wavelength.
///
/// Defaults are the experimental configuration: 800 nm seed, 2 mm BBO,
/// 240 um pump intensity FWHM, parametric gain G = 3.2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalPumpConfig {
    /// Seed (signal/idler) wavelength, m.
    pub seed_wavelength: f64,
    /// Crystal length L, m.
    pub crystal_length: f64,
    /// Pump intensity FWHM at the waist, m.
    pub pump_fwhm: f64,
    /// Dimensionless parametric gain G.
    pub gain: f64,
    pub phase_matching: PhaseMatchingModel,
}

impl Default for CrystalPumpConfig {
    fn default() -> Self {
        Self {
            seed_wavelength: 800e-9,
            crystal_length: 2e-3,
            pump_fwhm: 240e-6,
            gain: 3.2,
            phase_matching: PhaseMatchingModel::Sinc,
        }
    }
}

impl CrystalPumpConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("seed_wavelength", self.seed_wavelength),
            ("crystal_length", self.crystal_length),
            ("pump_fwhm", self.pump_fwhm),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.gain >= 0.0) || !self.gain.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "gain must be nonnegative, got {}",
                self.gain
            )));
        }
        Ok(())
    }

    /// Seed wavenumber `k = 2π / λ`, rad/m.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.seed_wavelength
    }

    /// Gaussian sigma of the pump *field* profile, the spatial width entering
    /// the angular envelope `exp[-σ_p² (q_s + q_i)² / 2]`; m. The field sigma
    /// is √2 times the intensity sigma implied by the intensity FWHM.
    pub fn pump_sigma(&self) -> f64 {
        2f64.sqrt() * fwhm_to_sigma(self.pump_fwhm)
    }
}

/// First zero of the collinear sinc argument along the antidiagonal
/// `q_s = -q_i = q`: `q_pm = sqrt(2π k / L)`, rad/m.
pub fn phase_matching_bandwidth(cfg: &CrystalPumpConfig) -> f64 {
    (2.0 * PI * cfg.wavenumber() / cfg.crystal_length).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Far(QGrid),
    Near(RGrid),
}

impl Domain {
    pub fn len(&self) -> usize {
        match self {
            Domain::Far(g) => g.len(),
            Domain::Near(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sample spacing of the underlying axis.
    pub fn step(&self) -> f64 {
        match self {
            Domain::Far(g) => g.step(),
            Domain::Near(g) => g.step(),
        }
    }

    pub fn sample(&self, j: usize) -> f64 {
        match self {
            Domain::Far(g) => g.sample(j),
            Domain::Near(g) => g.sample(j),
        }
    }
}

/// Complex two-photon amplitude `F(x_s, x_i)` sampled on a square grid; entry
/// `(j, k)` is `F(x_j, x_k)`, with `x` a wavevector (far field) or position
/// (near field).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonAmplitude {
    domain: Domain,
    values: DMatrix<C64>,
}

impl TwoPhotonAmplitude {
    /// Wrap raw values; the matrix must be square and match the grid size.
    pub fn from_values(domain: Domain, values: DMatrix<C64>) -> Result<Self> {
        if values.nrows() != domain.len() || values.ncols() != domain.len() {
            return Err(Error::DimensionMismatch(format!(
                "amplitude is {}x{}, grid has {} points",
                values.nrows(),
                values.ncols(),
                domain.len()
            )));
        }
        Ok(Self { domain, values })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn values(&self) -> &DMatrix<C64> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Squared norm under the Riemann measure: `Σ |F_jk|² Δx²`.
    pub fn norm_sq(&self) -> f64 {
        let w = self.domain.step() * self.domain.step();
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * w
    }

    /// Rescale to unit norm under the Riemann measure.
    pub fn normalize(&mut self) -> Result<()> {
        let n2 = self.norm_sq();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::NumericalFailure(format!(
                "cannot normalize amplitude with squared norm {n2}"
            )));
        }
        let s = C64::new(1.0 / n2.sqrt(), 0.0);
        self.values *= s;
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation from exchange symmetry, `max |F_jk - F_kj|`.
    pub fn exchange_asymmetry(&self) -> f64 {
        let n = self.len();
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in (j + 1)..n {
                worst = worst.max((self.values[(j, k)] - self.values[(k, j)]).norm());
            }
        }
        worst
    }

    /// Largest deviation from inversion symmetry,
    /// `max |F(-x_s, -x_i) - F(x_s, x_i)|`.
    pub fn inversion_asymmetry(&self) -> f64 {
        let n = self.len();
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in 0..n {
                worst =
                    worst.max((self.values[(j, k)] - self.values[(n - 1 - j, n - 1 - k)]).norm());
            }
        }
        worst
    }
}

/// Far-field TPA for collinear degenerate type-I PDC:
/// pump envelope `exp[-σ_p² (q_s + q_i)² / 2]` times the longitudinal
/// phase-matching factor, normalized to unit norm.
pub fn build_tpa(cfg: &CrystalPumpConfig, grid: &QGrid) -> Result<TwoPhotonAmplitude> {
    cfg.validate()?;
    let q_pm = phase_matching_bandwidth(cfg);
    if grid.q_max() < 2.0 * q_pm {
        log::warn!(
            "grid extent {:.3e} rad/m is below twice the phase-matching bandwidth {:.3e} rad/m; \
             the kernel will be truncated",
            grid.q_max(),
            q_pm
        );
    }
    let k = cfg.wavenumber();
    let sp = cfg.pump_sigma();
    let l4k = cfg.crystal_length / (4.0 * k);
    // Gaussian exp(-a x^2) matching sinc(x) at the amplitude half maximum.
    let alpha_g = core::f64::consts::LN_2 / (SINC_HALF_POINT * SINC_HALF_POINT);
    let n = grid.len();
    let mut m = DMatrix::<C64>::zeros(n, n);
    for j in 0..n {
        let qs = grid.sample(j);
        // fill both triangles from one evaluation so F_jk == F_kj bit-exactly
        for kx in j..n {
            let qi = grid.sample(kx);
            let sum = qs + qi;
            let pump = (-0.5 * sp * sp * sum * sum).exp();
            let x = l4k * (qs * qs + qi * qi);
            let pm = match cfg.phase_matching {
                PhaseMatchingModel::Sinc => sinc(x),
                PhaseMatchingModel::GaussianApprox => (-alpha_g * x * x).exp(),
            };
            let v = C64::new(pump * pm, 0.0);
            m[(j, kx)] = v;
            m[(kx, j)] = v;
        }
    }
    let mut f = TwoPhotonAmplitude::from_values(Domain::Far(*grid), m)?;
    f.normalize()?;
    Ok(f)
}

/// Discrete antidiagonal kernel `F(q_s, q_i) = δ_{q_i, -q_s} / Δq`,
/// normalized; its Schmidt modes pair each `+q` with `-q`.
pub fn build_delta_tpa(grid: &QGrid) -> TwoPhotonAmplitude {
    let n = grid.len();
    let mut m = DMatrix::<C64>::zeros(n, n);
    let v = C64::new(1.0 / grid.step(), 0.0);
    for j in 0..n {
        m[(j, n - 1 - j)] = v;
    }
    let mut f = TwoPhotonAmplitude::from_values(Domain::Far(*grid), m)
        .expect("matrix built from the grid size");
    f.normalize().expect("delta kernel has nonzero norm");
    f
}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}
