//! Uniform transverse-coordinate grids in the far field (wavevector) and the
//! near field (position), including the Fourier-conjugate pairing between the
//! two.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 8;

/// Uniform 1-D transverse-wavevector grid, symmetric about `q = 0`.
///
/// Samples are `q_j = (j - (n-1)/2) Δq` with `Δq = 2 q_max / (n-1)`, so the
/// endpoints satisfy `q_0 = -q_{n-1}` exactly and an odd point count puts
/// `q = 0` on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QGrid {
    n_points: usize,
    q_max: f64,
}

/// Uniform 1-D transverse-position grid, structurally identical to [`QGrid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RGrid {
    n_points: usize,
    rho_max: f64,
}

fn check_axis(n_points: usize, half_extent: f64, what: &str) -> Result<()> {
    if n_points < MIN_POINTS {
        return Err(Error::InvalidArgument(format!(
            "{what}: n_points = {n_points}, need at least {MIN_POINTS}"
        )));
    }
    if !(half_extent > 0.0) || !half_extent.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "{what}: half extent must be positive and finite, got {half_extent}"
        )));
    }
    Ok(())
}

// Exactly antisymmetric sampling: sample(n-1-j) == -sample(j) bit for bit.
#[inline]
fn axis_sample(j: usize, n: usize, step: f64) -> f64 {
    (2 * j as i64 - (n as i64 - 1)) as f64 * (0.5 * step)
}

impl QGrid {
    /// Build a wavevector grid with `n_points` samples on `[-q_max, q_max]`.
    pub fn new(n_points: usize, q_max: f64) -> Result<Self> {
        check_axis(n_points, q_max, "QGrid")?;
        Ok(Self { n_points, q_max })
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    /// Sample spacing `Δq = 2 q_max / (n-1)`.
    pub fn step(&self) -> f64 {
        2.0 * self.q_max / (self.n_points - 1) as f64
    }

    /// `q_j`, antisymmetric under `j -> n-1-j`.
    pub fn sample(&self, j: usize) -> f64 {
        debug_assert!(j < self.n_points);
        axis_sample(j, self.n_points, self.step())
    }

    pub fn samples(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.sample(j)).collect()
    }

    /// True when `q = 0` is on the grid (odd point count).
    pub fn contains_zero(&self) -> bool {
        self.n_points % 2 == 1
    }

    /// Position grid conjugate to this one under the discrete transform used
    /// by [`crate::fourier::far_to_near`]: `Δρ Δq = 2π / n`.
    pub fn conjugate(&self) -> RGrid {
        let d_rho = 2.0 * PI / (self.n_points as f64 * self.step());
        RGrid {
            n_points: self.n_points,
            rho_max: 0.5 * d_rho * (self.n_points - 1) as f64,
        }
    }
}

impl RGrid {
    /// Build a position grid with `n_points` samples on `[-rho_max, rho_max]`.
    pub fn new(n_points: usize, rho_max: f64) -> Result<Self> {
        check_axis(n_points, rho_max, "RGrid")?;
        Ok(Self { n_points, rho_max })
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    pub fn step(&self) -> f64 {
        2.0 * self.rho_max / (self.n_points - 1) as f64
    }

    pub fn sample(&self, j: usize) -> f64 {
        debug_assert!(j < self.n_points);
        axis_sample(j, self.n_points, self.step())
    }

    pub fn samples(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.sample(j)).collect()
    }

    /// Wavevector grid conjugate to this one (inverse of [`QGrid::conjugate`]).
    pub fn conjugate(&self) -> QGrid {
        let dq = 2.0 * PI / (self.n_points as f64 * self.step());
        QGrid {
            n_points: self.n_points,
            q_max: 0.5 * dq * (self.n_points - 1) as f64,
        }
    }
}

/// See [`QGrid::new`].
pub fn make_qgrid(n_points: usize, q_max: f64) -> Result<QGrid> {
    QGrid::new(n_points, q_max)
}
