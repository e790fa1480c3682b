//! Compare the explicit reference scheme with implicit-diffusion time stepping at larger steps.

use kpplab::analysis::spreading_speed;
use kpplab::grid::Side;
use kpplab::model::Problem;
use kpplab::solver::{solve, Scheme, SolverConfig};

fn main() -> kpplab::Result<()> {
    let p = Problem::homogeneous_kpp(1, 150.0, 1.0, 1.0)?;
    let explicit = SolverConfig::new(0.1, 50.0).with_comb(1.0);
    let imex = explicit.clone().with_scheme(Scheme::ImexDiffusionImplicit).with_dt(0.02);
    for (name, cfg) in [("explicit", explicit), ("imex", imex)] {
        let start = std::time::Instant::now();
        let traj = solve(&p, &cfg)?;
        let fit = spreading_speed(&traj, 0.5, (25.0, 50.0), Side::Right)?;
        println!("{name:<9} speed {:.4}  in {:.2?}", fit.speed, start.elapsed());
    }
    Ok(())
}
