//! Parallel evaluation of the visibility map. Points are assigned to slots
//! by index before evaluation, so the result is identical to the sequential
//! driver regardless of scheduling.

use rayon::prelude::*;

use opa_core::scan::{scan_map, MapContext, ScanSpec, VisibilityMap};
use opa_core::Error;

/// Evaluate a map spec, optionally across threads; bitwise identical to
/// [`scan_map`] either way.
pub fn run_map(spec: &ScanSpec, parallel: bool) -> Result<VisibilityMap, Error> {
    if !parallel {
        return scan_map(spec);
    }
    spec.validate()?;
    let ctx = MapContext::prepare(
        &spec.cfg,
        &spec.grid,
        spec.divergences.first().copied(),
        spec.truncation,
    )?;
    let cols = spec.central_angles.len();
    let values: Vec<f64> = (0..spec.divergences.len() * cols)
        .into_par_iter()
        .map(|idx| {
            let (row, col) = (idx / cols, idx % cols);
            ctx.eval(spec.divergences[row], spec.central_angles[col])
                .map(|r| r.visibility)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VisibilityMap {
        divergences: spec.divergences.clone(),
        central_angles: spec.central_angles.clone(),
        values,
        grid: *ctx.grid(),
        cfg: spec.cfg,
    })
}
