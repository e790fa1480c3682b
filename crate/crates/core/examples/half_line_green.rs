//! Reflected Green function of `v_t = a v_xx + rate v` on the half-line: quadrature against a
//! PDE solve, and the sign scan of its time derivative.

use kpplab::grid::{Grid, GridFunction, Side};
use kpplab::kernels::{green_dt_scan, half_line_green, halfline_quadrature, t0_threshold, GreenScanSpec, HalfLineParams};
use kpplab::solver::solve_half_line;

fn main() -> kpplab::Result<()> {
    let pp = HalfLineParams::new(1.0, 1.0)?;
    println!("G(1, 1, 1) without growth = {:.10}", half_line_green(&HalfLineParams::new(1.0, 0.0)?, 1.0, 1.0, 1.0));
    println!("t0 = {:.9}", t0_threshold(&pp)?);

    let grid = Grid::interval(0.0, 2000, 0.02)?;
    let v0 = GridFunction::from_fn(grid, |x| if (1.0..=2.0).contains(&x[0]) { 1.0 } else { 0.0 });
    let w = halfline_quadrature(&pp, &v0, 0.5)?;
    let v = solve_half_line(1.0, 1.0, &v0, Side::Right, |_| 0.0, &[0.5])?;
    let gap = v[0].values().iter().zip(w.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("quadrature vs solver, relative max gap {:.3e}", gap / w.max());

    let scan = green_dt_scan(&GreenScanSpec::default())?;
    println!("G_t scan: {} samples, {} non-positive", scan.points, scan.violations.len());
    Ok(())
}
