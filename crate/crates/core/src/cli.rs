//! Command-line front end: `run`, `verify` and `sweep`.
//!
//! Exit codes: 0 success, 1 verification failure or other error, 2 configuration error,
//! 3 numerical abort.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::analysis::{estimate_tau_star, spreading_speed, theorem1_report, theorem2_report, GlobalPositivity, MonotonicityCertificate, SpeedFit};
use crate::config::{set_numeric, RunConfig};
use crate::error::{Error, Result};
use crate::grid::Side;
use crate::model::{validate_problem, HypothesisReport};
use crate::report::{self, num, CertificateParts};
use crate::solver::{solve, Trajectory};
use crate::tumor::{run_protocol, ProtocolRun};
use crate::verify::{run_suite, Overrides};

#[derive(Debug, Parser)]
#[command(name = "kpplab", version, about = "Reaction-diffusion front simulations and certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a configured problem and write trajectory, curves and certificate.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite from its pinned configuration.
    Verify {
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Shift override (kernel-mono).
        #[arg(long)]
        tau: Option<f64>,
        /// Ratio override (kernel-mono).
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Run the cross product of numeric config values in parallel; one CSV row per run.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// `dotted.key=v1,v2,...`; repeatable.
        #[arg(long)]
        axis: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_numerical() => 3,
        Error::Config(_) | Error::InvalidInput(_) | Error::MalformedReaction { .. } | Error::TrivialInitialCondition => 2,
        Error::Io(_) => 2,
        _ => 1,
    }
}

/// Everything computed for one configured run.
pub struct RunOutcome {
    pub trajectory: Trajectory,
    pub hypotheses: HypothesisReport,
    pub monotonicity: MonotonicityCertificate,
    /// `(level, side, fit)` for each level when a speed window is configured.
    pub speeds: Vec<(f64, Side, SpeedFit)>,
    pub global: Option<GlobalPositivity>,
    pub protocol: Option<ProtocolRun>,
    pub warnings: Vec<String>,
}

pub fn execute(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let p = cfg.problem()?;
    let hypotheses = validate_problem(&p, 64)?;
    let scfg = cfg.solver_config();
    let trajectory = solve(&p, &scfg)?;
    let mut warnings = trajectory.warnings.clone();
    let a = &cfg.analysis;
    let mut monotonicity = theorem1_report(&trajectory, &a.eps, None)?;
    if let Some(floor) = a.tau_floor {
        match estimate_tau_star(&trajectory, floor) {
            Ok(t) => monotonicity.tau_star = Some(t),
            Err(e) => warnings.push(format!("tau_star not estimated: {e}")),
        }
    }
    let mut speeds = Vec::new();
    if let Some(w) = a.speed_window {
        for &level in &a.levels {
            for side in [Side::Left, Side::Right] {
                match spreading_speed(&trajectory, level, (w[0], w[1]), side) {
                    Ok(fit) => speeds.push((level, side, fit)),
                    Err(e) => warnings.push(format!("speed at level {level} on the {side:?} side: {e}")),
                }
            }
        }
    }
    let global = if a.theorem2 { Some(theorem2_report(&trajectory)?) } else { None };
    let protocol = cfg.tumor.as_ref().map(|s| run_protocol(&p, s, &scfg)).transpose()?;
    Ok(RunOutcome { trajectory, hypotheses, monotonicity, speeds, global, protocol, warnings })
}

pub fn write_outputs(o: &RunOutcome, cfg: &RunConfig, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    report::write_trajectory(&dir.join("trajectory.csv"), &o.trajectory, cfg.output.time_stride, cfg.output.space_stride)?;
    report::write_inf_rhs(&dir.join("inf_rhs.csv"), &o.monotonicity)?;
    report::write_t_eps(&dir.join("t_eps.csv"), &o.monotonicity)?;
    for (level, side, fit) in &o.speeds {
        if *side == Side::Right {
            report::write_level_positions(&dir.join(format!("level_pos_{level}.csv")), fit)?;
        }
    }
    if let Some(run) = &o.protocol {
        report::write_protocol(&dir.join("protocol.csv"), run)?;
    }
    let parts = CertificateParts {
        hypotheses: Some(&o.hypotheses),
        monotonicity: Some(&o.monotonicity),
        speeds: o.speeds.iter().map(|(l, s, f)| (*l, *s, f)).collect(),
        global: o.global.as_ref(),
        protocol: o.protocol.as_ref(),
        warnings: &o.warnings,
    };
    report::write_text(&dir.join("certificate.txt"), &report::format_certificate(&parts))
}

pub fn cmd_run(config: &Path, out: Option<&Path>) -> Result<PathBuf> {
    let cfg = RunConfig::from_path(config)?;
    let dir = out.map(Path::to_path_buf).or_else(|| cfg.output.dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let outcome = execute(&cfg)?;
    write_outputs(&outcome, &cfg, &dir)?;
    Ok(dir)
}

/// Parse `key=v1,v2,...`.
pub fn parse_axis(spec: &str) -> Result<(String, Vec<f64>)> {
    let (key, values) = spec.split_once('=').ok_or_else(|| Error::Config(format!("axis `{spec}` must look like key=v1,v2")))?;
    let values = values
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Config(format!("axis `{key}` has non-numeric value `{v}`"))))
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() || key.is_empty() {
        return Err(Error::Config(format!("axis `{spec}` is empty")));
    }
    Ok((key.to_string(), values))
}

fn cross_product(axes: &[(String, Vec<f64>)]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, (_, values)| {
        acc.iter().flat_map(|prefix| values.iter().map(move |&v| [prefix.clone(), vec![v]].concat())).collect()
    })
}

/// Column names of a sweep table.
pub fn sweep_header(axes: &[(String, Vec<f64>)]) -> Vec<String> {
    let mut h: Vec<String> = axes.iter().map(|a| a.0.clone()).collect();
    h.extend(["speed", "T_eps", "S_after", "dS_sign", "dmass_sign", "boundary_rhs_min"].map(String::from));
    h
}

fn sweep_row(outcome: &RunOutcome, values: &[f64]) -> Vec<String> {
    let mut row: Vec<String> = values.iter().map(|&v| num(v)).collect();
    let speed = outcome.speeds.iter().find(|s| s.1 == Side::Right).map_or(f64::NAN, |s| s.2.speed);
    row.push(num(speed));
    row.push(num(outcome.monotonicity.eps.first().and_then(|c| c.t_eps).unwrap_or(f64::INFINITY)));
    match &outcome.protocol {
        Some(run) if !run.events.is_empty() => {
            let at = run.records.iter().position(|r| r.event_flag == 1).expect("event recorded");
            let after = run.records[at];
            let next = run.records.get(at + 1).copied().unwrap_or(after);
            let sign = |d: f64| (if d > 0.0 { 1 } else if d < 0.0 { -1 } else { 0 }).to_string();
            row.push(num(after.size));
            row.push(sign(next.size - after.size));
            row.push(sign(next.mass - after.mass));
            row.push(num(run.events[0].boundary_rhs_min));
        }
        _ => row.extend(["nan", "", "", "nan"].map(String::from)),
    }
    row
}

/// Run the sweep and return the CSV table.
pub fn cmd_sweep(config: &Path, axes: &[(String, Vec<f64>)], out: Option<&Path>) -> Result<String> {
    let text = std::fs::read_to_string(config)?;
    let base: toml::Value = toml::from_str(&text).map_err(|e| Error::Config(e.message().to_string()))?;
    RunConfig::from_value(base.clone())?;
    let combos = cross_product(axes);
    let configs = combos
        .iter()
        .map(|values| {
            let mut v = base.clone();
            for ((key, _), &x) in axes.iter().zip(values) {
                set_numeric(&mut v, key, x)?;
            }
            RunConfig::from_value(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = configs
        .par_iter()
        .zip(&combos)
        .map(|(cfg, values)| execute(cfg).map(|o| sweep_row(&o, values)))
        .collect::<Result<Vec<_>>>()?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(sweep_header(axes))?;
    for row in &rows {
        w.write_record(row)?;
    }
    let table = String::from_utf8(w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?).expect("csv is utf-8");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        report::write_text(&dir.join("sweep.csv"), &table)?;
    }
    Ok(table)
}

/// Dispatch a parsed command line and return the process exit code.
pub fn dispatch(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Run { config, out } => cmd_run(&config, out.as_deref()).map(|dir| {
            println!("wrote {}", dir.display());
            0
        }),
        Command::Verify { suite, out, tau, sigma } => run_suite(&suite, out.as_deref(), Overrides { tau, sigma }).map(|r| {
            for line in r.lines() {
                println!("{line}");
            }
            println!("suite {} {} in {:.1} s", r.suite, if r.pass() { "passed" } else { "FAILED" }, r.seconds);
            i32::from(!r.pass())
        }),
        Command::Sweep { config, axis, out } => axis
            .iter()
            .map(|a| parse_axis(a))
            .collect::<Result<Vec<_>>>()
            .and_then(|axes| cmd_sweep(&config, &axes, out.as_deref()))
            .map(|table| {
                let _ = std::io::stdout().write_all(table.as_bytes());
                0
            }),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })
}
