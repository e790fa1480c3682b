//! Run the hypothesis validator on a few problems, including a user-supplied reaction.

use kpplab::model::{validate_problem, CoefficientField, InitialCondition, Nonlinearity, Problem, Reaction};

fn main() -> kpplab::Result<()> {
    let problems = [
        ("homogeneous logistic", Problem::homogeneous_kpp(1, 50.0, 1.0, 1.0)?),
        ("piecewise KPP", Problem::piecewise_kpp(50.0, 0.5, 1.0, 0.3, 10.0, 1.0)?),
        (
            "weak Allee",
            Problem::new(
                1,
                50.0,
                CoefficientField::constant(1.0),
                Reaction::Separable { base: 1.0, amplitude: 0.0, scale: 1.0, shape: Nonlinearity::WeakAllee },
                InitialCondition::bump(1.0, 1.0),
            )?,
        ),
        (
            "custom, ratio condition broken",
            Problem::new(
                1,
                50.0,
                CoefficientField::sinusoidal(1.0, 0.5, 2.0),
                Reaction::custom(|_x: &[f64], s: f64| s * (1.0 - s) * (1.0 + 10.0 * (1.0 - s) * (1.0 - s)), None),
                InitialCondition::Gaussian { amplitude: 0.5, decay: 1.0 },
            )?,
        ),
    ];
    for (name, p) in &problems {
        let r = validate_problem(p, 64)?;
        println!("{name}: nu = {:.3}, Lipschitz = {:.3}, mu = {:.3}", r.nu, r.lipschitz, r.mu);
        for (h, v) in &r.verdicts {
            println!("  {:<30} {:?} {}", h.label(), v.status, v.note);
        }
    }
    Ok(())
}
