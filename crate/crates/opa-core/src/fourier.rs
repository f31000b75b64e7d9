//! Fourier pairing between the far-field and near-field representations of a
//! two-photon amplitude.
//!
//! Forward (far to near) kernel is `e^{+i q ρ}`:
//!
//! ```text
//! F_near(ρ_s, ρ_i) = (1/2π) ∬ dq_s dq_i F_far(q_s, q_i) e^{i(q_s ρ_s + q_i ρ_i)}
//! ```
//!
//! discretized as Riemann sums on the conjugate grid pair with
//! `Δρ Δq = 2π/n`, which makes the discrete transform exactly unitary under
//! the Riemann measure (Parseval holds to rounding) and exactly invertible.


use core::f64::consts::PI;

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tpa::{Domain, TwoPhotonAmplitude};

/// One-dimensional transform matrix `E_{jm} = w e^{±i q_m ρ_j}`.
fn transform_matrix(
    out_samples: &[f64],
    in_samples: &[f64],
    weight: f64,
    sign: f64,
) -> DMatrix<C64> {
    let n = out_samples.len();
    DMatrix::from_fn(n, n, |j, m| {
        let phase = sign * in_samples[m] * out_samples[j];
        C64::new(weight * phase.cos(), weight * phase.sin())
    })
}

/// Transform a far-field amplitude to the near field on the conjugate grid.
pub fn far_to_near(f_far: &TwoPhotonAmplitude) -> Result<TwoPhotonAmplitude> {
    let qgrid = match f_far.domain() {
        Domain::Far(g) => *g,
        Domain::Near(_) => {
            return Err(Error::InvalidArgument(
                "far_to_near needs a far-field amplitude".into(),
            ))
        }
    };
    let rgrid = qgrid.conjugate();
    let e = transform_matrix(
        &rgrid.samples(),
        &qgrid.samples(),
        qgrid.step() / (2.0 * PI).sqrt(),
        1.0,
    );
    let near = &e * f_far.values() * e.transpose();
    TwoPhotonAmplitude::from_values(Domain::Near(rgrid), near)
}

/// Transform a near-field amplitude back to the far field; exact inverse of
/// [`far_to_near`] up to rounding.
pub fn near_to_far(f_near: &TwoPhotonAmplitude) -> Result<TwoPhotonAmplitude> {
    let rgrid = match f_near.domain() {
        Domain::Near(g) => *g,
        Domain::Far(_) => {
            return Err(Error::InvalidArgument(
                "near_to_far needs a near-field amplitude".into(),
            ))
        }
    };
    let qgrid = rgrid.conjugate();
    let e = transform_matrix(
        &qgrid.samples(),
        &rgrid.samples(),
        rgrid.step() / (2.0 * PI).sqrt(),
        -1.0,
    );
    let far = &e * f_near.values() * e.transpose();
    TwoPhotonAmplitude::from_values(Domain::Far(qgrid), far)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_qgrid;
    use crate::tpa::build_delta_tpa;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_far(n: usize, seed: u64) -> TwoPhotonAmplitude {
        let grid = make_qgrid(n, 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = DMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        TwoPhotonAmplitude::from_values(Domain::Far(grid), m).unwrap()
    }

    #[test]
    fn delta_far_becomes_diagonal_near() {
        let grid = make_qgrid(33, 4.0).unwrap();
        let f = build_delta_tpa(&grid);
        let near = far_to_near(&f).unwrap();
        let n = 33;
        let off_diag_max = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .filter(|(j, k)| j != k)
            .map(|(j, k)| near.values()[(j, k)].norm())
            .fold(0.0f64, f64::max);
        let diag_min = (0..n)
            .map(|j| near.values()[(j, j)].norm())
            .fold(f64::INFINITY, f64::min);
        assert!(diag_min > 1e3 * off_diag_max);
    }

    #[test]
    fn zeros_map_to_zeros() {
        let grid = make_qgrid(16, 2.0).unwrap();
        let f = TwoPhotonAmplitude::from_values(
            Domain::Far(grid),
            DMatrix::zeros(16, 16),
        )
        .unwrap();
        let near = far_to_near(&f).unwrap();
        assert!(near.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn parseval_and_round_trip() {
        for seed in 0..4 {
            let f = random_far(31, seed);
            let near = far_to_near(&f).unwrap();
            let n_far = f.norm_sq();
            let n_near = near.norm_sq();
            assert!((n_far - n_near).abs() < 1e-10 * n_far);
            let back = near_to_far(&near).unwrap();
            let mut err = 0.0f64;
            for (a, b) in back.values().iter().zip(f.values().iter()) {
                err = err.max((a - b).norm());
            }
            assert!(err < 1e-10 * f.max_abs());
        }
    }

    #[test]
    fn exchange_symmetry_preserved() {
        let f = random_far(25, 7);
        let sym = TwoPhotonAmplitude::from_values(
            *f.domain(),
            (f.values() + f.values().transpose()) * C64::new(0.5, 0.0),
        )
        .unwrap();
        let near = far_to_near(&sym).unwrap();
        assert!(near.exchange_asymmetry() < 1e-12 * near.max_abs());
    }

    #[test]
    fn wrong_domain_rejected() {
        let f = random_far(16, 1);
        let near = far_to_near(&f).unwrap();
        assert!(far_to_near(&near).is_err());
        assert!(near_to_far(&f).is_err());
    }

    /// Separable Gaussian far-field amplitude against a brute-force quadrature
    /// of the double integral, and against the analytic reciprocal-width
    /// Gaussian.
    #[test]
    fn gaussian_matches_quadrature_oracle() {
        let n = 33;
        // wide grid so the Gaussians are fully resolved on both sides
        let grid = make_qgrid(n, 8.0).unwrap();
        let (sig_p, sig_m) = (1.0f64, 0.45f64);
        let m = DMatrix::from_fn(n, n, |j, k| {
            let (qs, qi) = (grid.sample(j), grid.sample(k));
            let (u, v) = (qs + qi, qs - qi);
            C64::new(
                (-u * u / (4.0 * sig_p * sig_p) - v * v / (4.0 * sig_m * sig_m)).exp(),
                0.0,
            )
        });
        let f = TwoPhotonAmplitude::from_values(Domain::Far(grid), m).unwrap();
        let near = far_to_near(&f).unwrap();
        let rgrid = grid.conjugate();

        // independent quadrature of the double integral
        let dq = grid.step();
        for &(j, k) in &[(16usize, 16usize), (10, 20), (5, 16), (22, 9)] {
            let (rs, ri) = (rgrid.sample(j), rgrid.sample(k));
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    let ph = grid.sample(a) * rs + grid.sample(b) * ri;
                    acc += f.values()[(a, b)] * C64::new(ph.cos(), ph.sin());
                }
            }
            acc *= C64::new(dq * dq / (2.0 * core::f64::consts::PI), 0.0);
            assert!((near.values()[(j, k)] - acc).norm() < 1e-12);
        }

        // analytic: widths invert, 1/(2 sigma) in each rotated coordinate
        let peak = near.values()[(16, 16)].norm();
        for &(j, k) in &[(18usize, 18usize), (14, 18), (16, 12)] {
            let (rs, ri) = (rgrid.sample(j), rgrid.sample(k));
            let (u, v) = (rs + ri, rs - ri);
            let expect =
                peak * (-u * u * sig_p * sig_p / 4.0 - v * v * sig_m * sig_m / 4.0).exp();
            assert!((near.values()[(j, k)].norm() - expect).abs() < 1e-6 * peak);
        }
    }
}
