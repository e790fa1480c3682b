//! Fit the constant of the two-sided Gaussian bound for the fundamental solution of
//! `p_t = (a(x) p_x)_x` with an oscillating diffusivity.

use kpplab::grid::Grid;
use kpplab::kernels::{fit_aronson_k, AronsonWindow, DEFAULT_KERNEL_FLOOR};
use kpplab::model::CoefficientField;
use kpplab::solver::fundamental_solution;

fn main() -> kpplab::Result<()> {
    let grid = Grid::centered(1, 40.0, 0.05)?;
    let times = [0.5, 1.0, 2.0, 4.0];
    for amplitude in [0.0, 0.25, 0.5] {
        let coeff = CoefficientField::sinusoidal(1.0, amplitude, 5.0);
        let kernels = fundamental_solution(&coeff, &times, &[0.0], &grid)?;
        for radius in [10.0, 5.0] {
            let window = AronsonWindow { times: times.to_vec(), radius, floor: DEFAULT_KERNEL_FLOOR };
            let fit = fit_aronson_k(&kernels, &[0.0], &window)?;
            println!(
                "amplitude {amplitude:<4} |x| <= {radius:<4}: K = {:.3}, normalised K = {:.3}, tightest {:?} bound at t = {}",
                fit.k, fit.k_normalized, fit.witness.bound, fit.witness.t
            );
        }
    }
    Ok(())
}
