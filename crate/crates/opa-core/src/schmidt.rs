//! Schmidt decomposition of a two-photon amplitude via complex-symmetric
//! (Takagi) factorization.
//!
//! The amplitude is exchange-symmetric for degenerate type-I kernels, so a
//! single mode family `T_m` with `F = Σ_m √λ_m T_m(x_s) T_m(x_i)` exists.
//! The factorization is carried out on top of a standard symmetric
//! eigendecomposition (real kernels) or singular-value decomposition (complex
//! kernels) with post-hoc phase alignment. Inversion-symmetric kernels are
//! block-diagonalized by parity first, which both halves the dense-solver
//! cost and resolves degenerate weight clusters deterministically into
//! even/odd parity combinations.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tpa::{Domain, TwoPhotonAmplitude};

/// Retain modes until the summed weight reaches this fraction.
pub const DEFAULT_TRUNCATION: f64 = 0.999;

/// Relative weight gap below which two modes count as degenerate; inside a
/// cluster even-parity modes are listed first.
const DEGENERACY_GAP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    /// Kernel had no inversion symmetry to classify against.
    Mixed,
}

/// Ordered Schmidt weights, paired signal/idler modes and per-mode gains.
///
/// Modes are stored as matrix columns on the decomposition grid and are
/// orthonormal under the Riemann inner product `Σ_j a*_j b_j Δx`. Weights
/// include the Riemann measure, so they sum to 1 for a normalized amplitude.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    domain: Domain,
    weights: Vec<f64>,
    signal_modes: DMatrix<C64>,
    idler_modes: DMatrix<C64>,
    gains: Vec<f64>,
    parities: Vec<Parity>,
    pump_gain: f64,
    truncation_residual: f64,
}

impl SchmidtDecomposition {
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Nonincreasing Schmidt weights λ_m of the retained modes.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Signal modes U_m, one column per retained mode.
    pub fn signal_modes(&self) -> &DMatrix<C64> {
        &self.signal_modes
    }

    /// Idler modes V_m; same modulus as U_m pointwise, phase fixed so that
    /// `√λ_m U_m ⊗ V_m` reconstructs the amplitude.
    pub fn idler_modes(&self) -> &DMatrix<C64> {
        &self.idler_modes
    }

    /// Per-mode gains `G_m = G √λ_m`.
    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    /// The overall parametric gain G the per-mode gains were derived from.
    pub fn pump_gain(&self) -> f64 {
        self.pump_gain
    }

    /// `1 - Σ_retained λ_m`.
    pub fn truncation_residual(&self) -> f64 {
        self.truncation_residual
    }

    pub fn mode_count(&self) -> usize {
        self.weights.len()
    }

    /// Residual `‖F - Σ √λ U ⊗ V‖` under the Riemann measure.
    pub fn reconstruction_residual(&self, f: &TwoPhotonAmplitude) -> f64 {
        let n = self.domain.len();
        let dx = self.domain.step();
        let mut err = 0.0f64;
        for j in 0..n {
            for k in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for m in 0..self.mode_count() {
                    acc += C64::new(self.weights[m].sqrt(), 0.0)
                        * self.signal_modes[(j, m)]
                        * self.idler_modes[(k, m)];
                }
                err += (f.values()[(j, k)] - acc).norm_sqr();
            }
        }
        (err * dx * dx).sqrt()
    }
}

struct ModeEntry {
    weight: f64,
    takagi: DVector<C64>,
    parity: Parity,
}

/// Takagi-factorize a dense complex-symmetric block. Returns per-mode
/// singular values and ℓ²-normalized Takagi vectors `t` with
/// `B = Σ s t tᵀ`.
fn takagi_block(block: DMatrix<C64>) -> Result<Vec<(f64, DVector<C64>)>> {
    let n = block.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let max_abs = block.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let is_real = block.iter().map(|v| v.im.abs()).fold(0.0, f64::max) <= 1e-13 * max_abs;
    let mut out = Vec::with_capacity(n);
    if is_real {
        let real = block.map(|v| v.re);
        let eig = real.symmetric_eigen();
        for m in 0..n {
            let e = eig.eigenvalues[m];
            let v = eig.eigenvectors.column(m);
            // negative eigenvalue branch picks up a factor i so that
            // s (i v)(i v)^T = e v v^T
            let t = if e >= 0.0 {
                DVector::from_fn(n, |j, _| C64::new(v[j], 0.0))
            } else {
                DVector::from_fn(n, |j, _| C64::new(0.0, v[j]))
            };
            out.push((e.abs(), t));
        }
    } else {
        let svd = block
            .try_svd(true, true, f64::EPSILON, 0)
            .ok_or_else(|| Error::NumericalFailure("SVD did not converge".into()))?;
        let u = svd.u.as_ref().expect("u requested");
        let vt = svd.v_t.as_ref().expect("v_t requested");
        for m in 0..n {
            let s = svd.singular_values[m];
            let um = u.column(m);
            // right singular vector v_m is the conjugate of row m of v_t
            // phase alignment: t = u e^{i phi/2}, phi = arg <u*, v>
            let mut c = C64::new(0.0, 0.0);
            for j in 0..n {
                c += um[j] * vt[(m, j)].conj();
            }
            let phi = c.arg();
            let rot = C64::from_polar(1.0, -0.5 * phi);
            out.push((s, DVector::from_fn(n, |j, _| um[j] * rot)));
        }
    }
    Ok(out)
}

/// Index pairs of the parity reduction for an `n`-point symmetric grid.
fn parity_sizes(n: usize) -> (usize, usize) {
    // even block gets the center sample when n is odd
    ((n + 1) / 2, n / 2)
}

fn parity_block(values: &DMatrix<C64>, scale: f64, parity: Parity, n: usize) -> DMatrix<C64> {
    let pairs = n / 2;
    let (ne, _) = parity_sizes(n);
    let size = if parity == Parity::Even { ne } else { n - ne };
    let sgn = if parity == Parity::Even { 1.0 } else { -1.0 };
    let s = C64::new(scale, 0.0);
    DMatrix::from_fn(size, size, |a, b| {
        if a < pairs && b < pairs {
            (values[(a, b)] + values[(a, n - 1 - b)] * sgn) * s
        } else if a < pairs {
            // b is the center sample (even block only)
            values[(a, pairs)] * C64::new(scale * 2f64.sqrt(), 0.0)
        } else if b < pairs {
            values[(pairs, b)] * C64::new(scale * 2f64.sqrt(), 0.0)
        } else {
            values[(pairs, pairs)] * s
        }
    })
}

/// Embed a parity-block vector back onto the full grid.
fn embed_parity(t: &DVector<C64>, parity: Parity, n: usize) -> DVector<C64> {
    let pairs = n / 2;
    let inv_sqrt2 = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    let sgn = if parity == Parity::Even { 1.0 } else { -1.0 };
    let mut full = DVector::from_element(n, C64::new(0.0, 0.0));
    for a in 0..pairs {
        let half = t[a] * inv_sqrt2;
        full[a] = half;
        full[n - 1 - a] = half * C64::new(sgn, 0.0);
    }
    if parity == Parity::Even && n % 2 == 1 {
        full[pairs] = t[pairs];
    }
    full
}

/// Compute the Schmidt decomposition of a normalized exchange-symmetric
/// two-photon amplitude.
///
/// `gain` is the overall parametric gain G; per-mode gains are `G √λ_m`.
/// Modes are retained until their summed weight reaches `truncation`
/// (see [`DEFAULT_TRUNCATION`]); pass 1.0 to keep the full basis.
pub fn decompose(
    f: &TwoPhotonAmplitude,
    gain: f64,
    truncation: f64,
) -> Result<SchmidtDecomposition> {
    if !(truncation > 0.0 && truncation <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "truncation must lie in (0, 1], got {truncation}"
        )));
    }
    if !(gain >= 0.0) || !gain.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "gain must be nonnegative, got {gain}"
        )));
    }
    let norm = f.norm_sq();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidArgument(format!(
            "amplitude must be normalized before decomposition (squared norm {norm})"
        )));
    }
    let max_abs = f.max_abs();
    if f.exchange_asymmetry() > 1e-8 * max_abs {
        return Err(Error::InvalidArgument(
            "amplitude is not exchange-symmetric; Takagi factorization needs F(x_s, x_i) = F(x_i, x_s)"
                .into(),
        ));
    }

    let n = f.len();
    let dx = f.domain().step();
    let inversion_symmetric = f.inversion_asymmetry() <= 1e-12 * max_abs;

    let mut entries: Vec<ModeEntry> = Vec::with_capacity(n);
    if inversion_symmetric {
        for parity in [Parity::Even, Parity::Odd] {
            let block = parity_block(f.values(), dx, parity, n);
            for (s, t) in takagi_block(block)? {
                entries.push(ModeEntry {
                    weight: s * s,
                    takagi: embed_parity(&t, parity, n),
                    parity,
                });
            }
        }
    } else {
        let scaled = f.values() * C64::new(dx, 0.0);
        for (s, t) in takagi_block(scaled)? {
            entries.push(ModeEntry {
                weight: s * s,
                takagi: t,
                parity: Parity::Mixed,
            });
        }
    }

    // descending weight; then, inside each degenerate cluster, even parity
    // first (parity-block order is already deterministic otherwise)
    entries.sort_by(|a, b| b.weight.partial_cmp(&a.weight).expect("finite weights"));
    let rank = |p: Parity| match p {
        Parity::Even => 0u8,
        Parity::Odd => 1,
        Parity::Mixed => 2,
    };
    let mut lo = 0;
    while lo < entries.len() {
        let mut hi = lo + 1;
        while hi < entries.len() {
            let (a, b) = (entries[hi - 1].weight, entries[hi].weight);
            if (a - b).abs() <= DEGENERACY_GAP * a.abs().max(b.abs()) {
                hi += 1;
            } else {
                break;
            }
        }
        entries[lo..hi].sort_by_key(|e| rank(e.parity));
        lo = hi;
    }

    let mut kept = entries.len();
    if truncation < 1.0 {
        let mut acc = 0.0;
        for (m, e) in entries.iter().enumerate() {
            acc += e.weight;
            if acc >= truncation {
                kept = m + 1;
                break;
            }
        }
    }
    entries.truncate(kept);

    let retained: f64 = entries.iter().map(|e| e.weight).sum();
    let inv_sqrt_dx = 1.0 / dx.sqrt();
    let mut signal = DMatrix::<C64>::zeros(n, kept);
    let mut idler = DMatrix::<C64>::zeros(n, kept);
    let mut weights = Vec::with_capacity(kept);
    let mut gains = Vec::with_capacity(kept);
    let mut parities = Vec::with_capacity(kept);
    for (m, e) in entries.iter().enumerate() {
        // phase convention: largest-modulus sample of U real and positive,
        // ties at the lowest index; V carries the opposite rotation so the
        // product U V is unchanged
        let mut peak = 0usize;
        let mut best = -1.0f64;
        for j in 0..n {
            let a = e.takagi[j].norm();
            if a > best * (1.0 + 1e-12) {
                best = a;
                peak = j;
            }
        }
        let phi = e.takagi[peak].arg();
        let fwd = C64::from_polar(inv_sqrt_dx, -phi);
        let bwd = C64::from_polar(inv_sqrt_dx, phi);
        for j in 0..n {
            signal[(j, m)] = e.takagi[j] * fwd;
            idler[(j, m)] = e.takagi[j] * bwd;
        }
        weights.push(e.weight);
        gains.push(gain * e.weight.sqrt());
        parities.push(e.parity);
    }

    Ok(SchmidtDecomposition {
        domain: *f.domain(),
        weights,
        signal_modes: signal,
        idler_modes: idler,
        gains,
        parities,
        pump_gain: gain,
        truncation_residual: 1.0 - retained,
    })
}

#[cfg(test)]
impl SchmidtDecomposition {
    pub(crate) fn set_gains_for_tests(&mut self, gains: &[f64]) {
        assert_eq!(gains.len(), self.mode_count());
        self.gains = gains.to_vec();
    }
}

/// Effective mode number `K = (Σλ)² / Σλ²` over the retained modes.
pub fn schmidt_number(d: &SchmidtDecomposition) -> f64 {
    let s: f64 = d.weights.iter().sum();
    let s2: f64 = d.weights.iter().map(|w| w * w).sum();
    s * s / s2
}
