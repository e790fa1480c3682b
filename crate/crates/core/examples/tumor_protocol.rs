//! Treat an invading population at a fixed time and track observed size against total mass,
//! then sweep the treatment strength and imaging threshold.

use kpplab::model::Problem;
use kpplab::solver::SolverConfig;
use kpplab::tumor::{run_protocol, treatment_sweep, TreatmentEvent, TreatmentSchedule};

fn main() -> kpplab::Result<()> {
    let p = Problem::homogeneous_kpp(1, 60.0, 1.0, 1.0)?;
    let cfg = SolverConfig::new(0.1, 8.0).with_comb(0.5);
    let sched = TreatmentSchedule::new(vec![TreatmentEvent { t: 4.0, beta: 0.5 }], 0.3)?;
    let run = run_protocol(&p, &sched, &cfg)?;
    for r in &run.records {
        println!("t {:>5.2}  S {:>8.4}  mass {:>8.4}  flag {:>2}", r.t, r.size, r.mass, r.event_flag);
    }
    let e = &run.events[0];
    println!("boundary after treatment {:?}, min u_t(t-) there {:.4}", e.boundary, e.boundary_rhs_min);

    let rows = treatment_sweep(&p, &cfg, &[0.3, 0.6, 0.9], &[0.2, 0.5], &[2.0, 4.0])?;
    println!("beta sigma t0  dS dmass boundary_rhs_min");
    for r in rows {
        println!("{:<4} {:<5} {:<3} {:>2} {:>5} {:.4}", r.beta, r.sigma, r.t0, r.ds_sign, r.dmass_sign, r.boundary_rhs_min);
    }
    Ok(())
}
