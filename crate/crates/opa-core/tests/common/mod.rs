//! Shared helpers for integration tests: an independent singular-value
//! oracle and kernel builders that bypass the library construction paths.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Singular values of a complex matrix by one-sided cyclic Jacobi, sorted in
/// descending order. Written from scratch so it shares no code with the
/// decompositions used by the library.
pub fn jacobi_singular_values(a: &DMatrix<C64>) -> Vec<f64> {
    let mut m = a.clone_owned();
    let (rows, n) = (m.nrows(), m.ncols());
    let tol = 1e-14;
    for _ in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mut app = 0.0f64;
                let mut aqq = 0.0f64;
                let mut apq = C64::new(0.0, 0.0);
                for i in 0..rows {
                    let (x, y) = (m[(i, p)], m[(i, q)]);
                    app += x.norm_sqr();
                    aqq += y.norm_sqr();
                    apq += x.conj() * y;
                }
                let scale = (app * aqq).sqrt();
                if scale == 0.0 || apq.norm() <= tol * scale {
                    continue;
                }
                off = off.max(apq.norm() / scale);
                // de-phase column q so the 2x2 Gram block is real symmetric,
                // then apply the classic real Jacobi rotation
                let r = apq.norm();
                let ph = C64::from_polar(1.0, -apq.arg());
                let tau = (aqq - app) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..rows {
                    let x = m[(i, p)];
                    let y = m[(i, q)] * ph;
                    m[(i, p)] = x * C64::new(cs, 0.0) - y * C64::new(sn, 0.0);
                    m[(i, q)] = x * C64::new(sn, 0.0) + y * C64::new(cs, 0.0);
                }
            }
        }
        if off < tol {
            break;
        }
    }
    let mut s: Vec<f64> = (0..n).map(|c| m.column(c).norm()).collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Schmidt weights (normalized to unit sum) implied by a sampled kernel,
/// straight from the Jacobi oracle.
pub fn oracle_weights(a: &DMatrix<C64>) -> Vec<f64> {
    let s = jacobi_singular_values(a);
    let total: f64 = s.iter().map(|x| x * x).sum();
    s.iter().map(|x| x * x / total).collect()
}
