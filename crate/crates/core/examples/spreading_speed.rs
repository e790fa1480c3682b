//! Fit the invasion speed of a homogeneous Fisher-KPP front and compare with `2 sqrt(a rate)`.

use kpplab::analysis::spreading_speed;
use kpplab::grid::Side;
use kpplab::model::Problem;
use kpplab::solver::{solve, SolverConfig};

fn main() -> kpplab::Result<()> {
    for diffusivity in [1.0, 2.0] {
        let p = Problem::homogeneous_kpp(1, 200.0, diffusivity, 1.0)?;
        let cfg = SolverConfig::new(0.1, 60.0).with_comb(1.0);
        let traj = solve(&p, &cfg)?;
        for level in [0.3, 0.5, 0.7] {
            let fit = spreading_speed(&traj, level, (30.0, 60.0), Side::Right)?;
            println!(
                "a = {diffusivity}  level {level}: speed {:.4} (classical {:.4})",
                fit.speed,
                2.0 * diffusivity.sqrt()
            );
        }
    }
    Ok(())
}
