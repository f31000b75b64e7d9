//! Coherent Gaussian seed spectra and their overlap integrals with Schmidt
//! modes.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DVector;
#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::QGrid;
use crate::schmidt::SchmidtDecomposition;
use crate::tpa::{fwhm_to_sigma, Domain};

/// Largest seed-mass fraction allowed to fall outside the grid.
const MAX_CLIPPED_FRACTION: f64 = 0.01;

/// Normalized complex seed amplitude profile `f(q)` on a wavevector grid.
///
/// The divergence θ is the intensity FWHM of the angular spectrum `|f(q/k)|²`
/// and `q₀` the central transverse wavevector (central angle `q₀/k`). The
/// coherent amplitude α carries the seed intensity `|α|²` and phase `arg α`.
#[derive(Debug, Clone)]
pub struct SeedSpectrum {
    grid: QGrid,
    amplitude: DVector<C64>,
    divergence: f64,
    central_wavevector: f64,
    alpha: C64,
}

impl SeedSpectrum {
    pub fn grid(&self) -> &QGrid {
        &self.grid
    }

    /// `f(q)` samples, normalized so `Σ |f|² Δq = 1`.
    pub fn amplitude(&self) -> &DVector<C64> {
        &self.amplitude
    }

    /// Intensity-FWHM divergence, rad.
    pub fn divergence(&self) -> f64 {
        self.divergence
    }

    /// Central transverse wavevector q₀, rad/m.
    pub fn central_wavevector(&self) -> f64 {
        self.central_wavevector
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn photon_number(&self) -> f64 {
        self.alpha.norm_sqr()
    }
}

/// Gaussian seed spectrum centered at `q0` whose intensity FWHM in angle is
/// `theta`, for optical wavelength `lambda`.
///
/// Fails when the Gaussian is unresolved on the grid (fewer than ~2 samples
/// across the intensity FWHM) or clipped (more than 1% of its mass outside
/// the grid extent).
pub fn gaussian_seed(
    grid: &QGrid,
    theta: f64,
    q0: f64,
    lambda: f64,
    alpha: C64,
) -> Result<SeedSpectrum> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "seed divergence must be positive, got {theta}"
        )));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "wavelength must be positive, got {lambda}"
        )));
    }
    if q0.abs() >= grid.q_max() {
        return Err(Error::InvalidArgument(format!(
            "central wavevector {q0} rad/m lies outside the grid extent {} rad/m",
            grid.q_max()
        )));
    }
    let k = 2.0 * core::f64::consts::PI / lambda;
    let fwhm_q = theta * k;
    let dq = grid.step();
    if fwhm_q < 2.0 * dq {
        return Err(Error::InvalidArgument(format!(
            "seed divergence {:.4} mrad is unresolved: intensity FWHM spans {:.2} samples, \
             need at least 2 (refine the grid)",
            theta * 1e3,
            fwhm_q / dq
        )));
    }
    let sigma = fwhm_to_sigma(fwhm_q);
    // mass fraction of |f|^2 outside [-q_max, q_max]
    let tail = 0.5
        * (libm::erfc((grid.q_max() - q0) / (core::f64::consts::SQRT_2 * sigma))
            + libm::erfc((grid.q_max() + q0) / (core::f64::consts::SQRT_2 * sigma)));
    if tail > MAX_CLIPPED_FRACTION {
        return Err(Error::InvalidArgument(format!(
            "seed at q0 = {q0:.4e} rad/m with divergence {:.4} mrad is clipped: {:.2}% of its \
             mass falls outside the grid",
            theta * 1e3,
            tail * 1e2
        )));
    }
    let n = grid.len();
    let mut amp = DVector::from_fn(n, |j, _| {
        let d = grid.sample(j) - q0;
        C64::new((-d * d / (4.0 * sigma * sigma)).exp(), 0.0)
    });
    let norm = (amp.iter().map(|v| v.norm_sqr()).sum::<f64>() * dq).sqrt();
    amp /= C64::new(norm, 0.0);
    Ok(SeedSpectrum {
        grid: *grid,
        amplitude: amp,
        divergence: theta,
        central_wavevector: q0,
        alpha,
    })
}

impl SeedSpectrum {
    /// Seed with an arbitrary spectral profile; the amplitude is normalized
    /// to `Σ |f|² Δq = 1`. The recorded central wavevector is the intensity-
    /// weighted mean; no divergence is defined for raw spectra (NaN).
    pub fn from_amplitude(grid: QGrid, amplitude: DVector<C64>, alpha: C64) -> Result<Self> {
        if amplitude.len() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "amplitude has {} samples, grid has {}",
                amplitude.len(),
                grid.len()
            )));
        }
        let dq = grid.step();
        let norm_sq = amplitude.iter().map(|v| v.norm_sqr()).sum::<f64>() * dq;
        if !(norm_sq > 0.0) || !norm_sq.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "seed amplitude has squared norm {norm_sq}"
            )));
        }
        let amp = amplitude / C64::new(norm_sq.sqrt(), 0.0);
        let q0 = amp
            .iter()
            .enumerate()
            .map(|(j, v)| grid.sample(j) * v.norm_sqr())
            .sum::<f64>()
            * dq;
        Ok(Self {
            grid,
            amplitude: amp,
            divergence: f64::NAN,
            central_wavevector: q0,
            alpha,
        })
    }
}

/// Seed overlap integrals with the signal and idler Schmidt modes:
/// `β_m = ∫ f*(q) U_m(q) dq` and `β'_m = ∫ f*(q) V_m(q) dq`.
#[derive(Debug, Clone)]
pub struct OverlapSet {
    pub beta: Vec<C64>,
    pub beta_prime: Vec<C64>,
}

impl OverlapSet {
    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    /// `Σ |β_m|²`; bounded by 1 (Bessel).
    pub fn beta_mass(&self) -> f64 {
        self.beta.iter().map(|b| b.norm_sqr()).sum()
    }

    pub fn beta_prime_mass(&self) -> f64 {
        self.beta_prime.iter().map(|b| b.norm_sqr()).sum()
    }
}

/// Riemann-sum overlap integrals of a seed with every retained mode.
pub fn overlaps(seed: &SeedSpectrum, d: &SchmidtDecomposition) -> Result<OverlapSet> {
    let dgrid = match d.domain() {
        Domain::Far(g) => g,
        Domain::Near(_) => {
            return Err(Error::GridMismatch(
                "seed spectra live on wavevector grids; decomposition is near-field".into(),
            ))
        }
    };
    if dgrid != seed.grid() {
        return Err(Error::GridMismatch(format!(
            "seed grid ({} pts, q_max {:.6e}) differs from decomposition grid ({} pts, q_max {:.6e})",
            seed.grid().len(),
            seed.grid().q_max(),
            dgrid.len(),
            dgrid.q_max()
        )));
    }
    let n = seed.grid().len();
    let dq = C64::new(seed.grid().step(), 0.0);
    let mut beta = Vec::with_capacity(d.mode_count());
    let mut beta_prime = Vec::with_capacity(d.mode_count());
    for m in 0..d.mode_count() {
        let mut bs = C64::new(0.0, 0.0);
        let mut bi = C64::new(0.0, 0.0);
        for j in 0..n {
            let fc = seed.amplitude()[j].conj();
            bs += fc * d.signal_modes()[(j, m)];
            bi += fc * d.idler_modes()[(j, m)];
        }
        beta.push(bs * dq);
        beta_prime.push(bi * dq);
    }
    Ok(OverlapSet { beta, beta_prime })
}
