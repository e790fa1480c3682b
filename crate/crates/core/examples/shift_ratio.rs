//! `p(tau + 1, x; 0) >= sigma p(tau, x; 0)`: constant-coefficient exactness, the smallest
//! passing shift, and a scan over the gradient amplitude of the diffusivity.

use kpplab::kernels::{check_prop61, constant_shift_ratio, scan_gradient_amplitude, smallest_passing_tau, RatioWindow};
use kpplab::model::CoefficientField;

fn main() -> kpplab::Result<()> {
    let window = RatioWindow::new(40.0, 0.05, 15.0);
    for (tau, sigma) in [(4.0, 0.8), (1.0, 0.99), (4.3, 0.9), (4.2, 0.9)] {
        let r = check_prop61(&CoefficientField::constant(1.0), tau, sigma, &window)?;
        println!(
            "tau {tau} sigma {sigma}: min ratio {:.6} (closed form {:.6}) -> {}",
            r.min_ratio,
            constant_shift_ratio(tau, 1),
            if r.pass { "pass" } else { "fail" }
        );
    }
    println!("smallest passing tau for sigma = 0.9: {:.6}", smallest_passing_tau(0.9, 1));
    let scan = scan_gradient_amplitude(&[0.05, 0.1, 0.2, 0.4, 0.8], 5.0, 4.0, 0.8, &window)?;
    for (amp, ratio, pass) in &scan.results {
        println!("amplitude {amp}: min ratio {ratio:.5} pass {pass}");
    }
    println!("largest passing amplitude: {:?}", scan.largest_passing);
    Ok(())
}
