//! Positivity of `v_t` beyond `sqrt(8 a t)` for a half-line solution driven by a growing
//! boundary value, on both the right and the mirrored left half-line.

use std::sync::Arc;

use kpplab::analysis::prop91_verify;
use kpplab::grid::{Grid, GridFunction, Side};
use kpplab::kernels::{t0_threshold, HalfLineParams};

fn main() -> kpplab::Result<()> {
    let pp = HalfLineParams::new(1.0, 1.0)?;
    let t0 = t0_threshold(&pp)?;
    let times: Vec<f64> = (0..20).map(|k| t0 * (1.0 + 2.0 * k as f64 / 19.0)).collect();
    let right = Grid::interval(0.0, 2000, 0.02)?;
    let v0 = GridFunction::from_fn(right, |x| if (1.0..=2.0).contains(&x[0]) { 1.0 } else { 0.0 });
    let left = Grid::interval(-40.0, 2000, 0.02)?;
    let v0_left = GridFunction::new(left, v0.values().iter().rev().copied().collect())?;
    for (data, side) in [(&v0, Side::Right), (&v0_left, Side::Left)] {
        let v = prop91_verify(&pp, data, Arc::new(|t: f64| 1.0 - (-t).exp()), &times, side, 0.5)?;
        println!(
            "{side:?}: {} samples, {} violations, min v_t {:.3e}, min w_t {:.3e}",
            v.samples,
            v.violations.len(),
            v.min_rhs,
            v.closed_form_min
        );
    }
    Ok(())
}
