//! CSV and JSON serialization of computation results. Floats are written
//! with their shortest round-trip representation, so identical inputs yield
//! byte-identical files.

use std::fmt::Write as _;

use opa_core::{PhaseScanResult, QGrid, SchmidtDecomposition, TwoPhotonAmplitude, VisibilityMap, VisibilityResult};

use crate::config::RunConfig;

/// `{schema_version, config, data}` envelope shared by all JSON outputs;
/// serde_json orders object keys deterministically.
pub fn envelope(cfg: &RunConfig, data: serde_json::Value) -> String {
    let doc = serde_json::json!({
        "schema_version": 1,
        "config": cfg.to_json(),
        "data": data,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn tpa_csv(f: &TwoPhotonAmplitude) -> String {
    let n = f.len();
    let mut s = String::from("q_s,q_i,re_f,im_f\n");
    for j in 0..n {
        for k in 0..n {
            let v = f.values()[(j, k)];
            let _ = writeln!(
                s,
                "{},{},{},{}",
                f.domain().sample(j),
                f.domain().sample(k),
                v.re,
                v.im
            );
        }
    }
    s
}

pub fn tpa_json(cfg: &RunConfig, f: &TwoPhotonAmplitude) -> String {
    let n = f.len();
    let q: Vec<f64> = (0..n).map(|j| f.domain().sample(j)).collect();
    let re: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|k| f.values()[(j, k)].re).collect())
        .collect();
    let im: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|k| f.values()[(j, k)].im).collect())
        .collect();
    envelope(cfg, serde_json::json!({ "q": q, "re": re, "im": im }))
}

fn parity_name(p: opa_core::Parity) -> &'static str {
    match p {
        opa_core::Parity::Even => "even",
        opa_core::Parity::Odd => "odd",
        opa_core::Parity::Mixed => "mixed",
    }
}

/// Weights table plus the leading `modes` signal modes sampled on the grid.
pub fn schmidt_csv(d: &SchmidtDecomposition, grid: &QGrid, modes: usize) -> String {
    let m_count = modes.min(d.mode_count());
    let mut s = String::from("mode,weight,gain,parity\n");
    for m in 0..d.mode_count() {
        let _ = writeln!(
            s,
            "{m},{},{},{}",
            d.weights()[m],
            d.gains()[m],
            parity_name(d.parities()[m])
        );
    }
    s.push('\n');
    let mut header = String::from("q");
    for m in 0..m_count {
        let _ = write!(header, ",u{m}_re,u{m}_im");
    }
    s.push_str(&header);
    s.push('\n');
    for j in 0..grid.len() {
        let _ = write!(s, "{}", grid.sample(j));
        for m in 0..m_count {
            let v = d.signal_modes()[(j, m)];
            let _ = write!(s, ",{},{}", v.re, v.im);
        }
        s.push('\n');
    }
    s
}

pub fn schmidt_json(
    cfg: &RunConfig,
    d: &SchmidtDecomposition,
    grid: &QGrid,
    modes: usize,
) -> String {
    let m_count = modes.min(d.mode_count());
    let modes_re: Vec<Vec<f64>> = (0..m_count)
        .map(|m| (0..grid.len()).map(|j| d.signal_modes()[(j, m)].re).collect())
        .collect();
    let modes_im: Vec<Vec<f64>> = (0..m_count)
        .map(|m| (0..grid.len()).map(|j| d.signal_modes()[(j, m)].im).collect())
        .collect();
    envelope(
        cfg,
        serde_json::json!({
            "weights": d.weights(),
            "gains": d.gains(),
            "parities": d.parities().iter().map(|&p| parity_name(p)).collect::<Vec<_>>(),
            "schmidt_number": opa_core::schmidt_number(d),
            "truncation_residual": d.truncation_residual(),
            "q": grid.samples(),
            "signal_modes_re": modes_re,
            "signal_modes_im": modes_im,
        }),
    )
}

pub fn amplify_csv(r: &PhaseScanResult) -> String {
    format!(
        "a,c_abs,visibility,n_max,n_min,optimal_phase\n{},{},{},{},{},{}\n",
        r.a,
        r.c.norm(),
        r.visibility,
        r.n_max,
        r.n_min,
        r.optimal_phase
    )
}

pub fn amplify_json(cfg: &RunConfig, r: &PhaseScanResult) -> String {
    envelope(
        cfg,
        serde_json::json!({
            "a": r.a,
            "c_abs": r.c.norm(),
            "visibility": r.visibility,
            "n_max": r.n_max,
            "n_min": r.n_min,
            "optimal_phase": r.optimal_phase,
        }),
    )
}

pub fn scan_csv(angles_mrad: &[f64], results: &[VisibilityResult]) -> String {
    let mut s = String::from("central_angle_mrad,visibility,n_max,n_min\n");
    for (a, r) in angles_mrad.iter().zip(results.iter()) {
        let _ = writeln!(s, "{a},{},{},{}", r.visibility, r.n_max, r.n_min);
    }
    s
}

pub fn scan_json(
    cfg: &RunConfig,
    angles_mrad: &[f64],
    results: &[VisibilityResult],
    fwhm_mrad: Option<f64>,
) -> String {
    envelope(
        cfg,
        serde_json::json!({
            "central_angle_mrad": angles_mrad,
            "visibility": results.iter().map(|r| r.visibility).collect::<Vec<_>>(),
            "n_max": results.iter().map(|r| r.n_max).collect::<Vec<_>>(),
            "n_min": results.iter().map(|r| r.n_min).collect::<Vec<_>>(),
            "fwhm_mrad": fwhm_mrad,
        }),
    )
}

/// Matrix layout: first row is the central-angle axis (mrad), first column
/// the divergence axis (mrad), both sharing an empty corner cell.
pub fn map_csv(map: &VisibilityMap) -> String {
    let mut s = String::new();
    for a in &map.central_angles {
        let _ = write!(s, ",{}", a * 1e3);
    }
    s.push('\n');
    for (row, d) in map.divergences.iter().enumerate() {
        let _ = write!(s, "{}", d * 1e3);
        for col in 0..map.central_angles.len() {
            let _ = write!(s, ",{}", map.value(row, col));
        }
        s.push('\n');
    }
    s
}

pub fn map_json(cfg: &RunConfig, map: &VisibilityMap) -> String {
    let rows: Vec<Vec<f64>> = (0..map.divergences.len())
        .map(|r| (0..map.central_angles.len()).map(|c| map.value(r, c)).collect())
        .collect();
    envelope(
        cfg,
        serde_json::json!({
            "divergences_mrad": map.divergences.iter().map(|d| d * 1e3).collect::<Vec<_>>(),
            "central_angles_mrad": map.central_angles.iter().map(|a| a * 1e3).collect::<Vec<_>>(),
            "visibility": rows,
        }),
    )
}
