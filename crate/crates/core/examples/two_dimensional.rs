//! Two-dimensional invasion in a periodic medium: observed area and centre-line front
//! positions over time.

use kpplab::analysis::level_position;
use kpplab::grid::Side;
use kpplab::model::{CoefficientField, InitialCondition, Problem, Reaction};
use kpplab::solver::{solve, SolverConfig};
use kpplab::tumor::{observed_size, total_mass};

fn main() -> kpplab::Result<()> {
    let p = Problem::new(
        2,
        30.0,
        CoefficientField::sinusoidal(1.0, 0.3, 3.0),
        Reaction::logistic(1.0),
        InitialCondition::Gaussian { amplitude: 1.0, decay: 1.0 },
    )?;
    let traj = solve(&p, &SolverConfig::new(0.25, 6.0).with_comb(1.0))?;
    for s in &traj.snapshots {
        let right = level_position(&s.u, 0.5, Side::Right).ok();
        println!(
            "t {:.1}: area {:>8.3}  mass {:>8.3}  right front {:?}",
            s.t,
            observed_size(&s.u, 0.5),
            total_mass(&s.u),
            right
        );
    }
    Ok(())
}
