//! CSV and text artifacts. Floats are written with 17 significant digits, LF line endings.

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::analysis::{GlobalPositivity, MonotonicityCertificate, SpeedFit};
use crate::error::Result;
use crate::grid::Side;
use crate::kernels::{for_each_green_sample, GreenScanSpec, ShiftRatioReport};
use crate::model::{HypothesisReport, Status};
use crate::solver::Trajectory;
use crate::tumor::{ProtocolRun, TreatmentSweepRow};

/// 17 significant digits.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?)
}

/// `t,x[,y],u,rhs` for every `time_stride`-th snapshot and `space_stride`-th node per axis.
pub fn write_trajectory(path: &Path, traj: &Trajectory, time_stride: usize, space_stride: usize) -> Result<()> {
    let mut w = writer(path)?;
    let g = traj.grid();
    let dim = g.dim();
    if dim == 1 {
        w.write_record(["t", "x", "u", "rhs"])?;
    } else {
        w.write_record(["t", "x", "y", "u", "rhs"])?;
    }
    let n = g.nodes();
    for s in traj.snapshots.iter().step_by(time_stride.max(1)) {
        for k in 0..g.len() {
            let (i, j) = if dim == 1 { (k, 0) } else { (k / n, k % n) };
            if i % space_stride != 0 || j % space_stride != 0 {
                continue;
            }
            let x = g.point(k);
            let mut row = vec![num(s.t), num(x[0])];
            if dim == 2 {
                row.push(num(x[1]));
            }
            row.push(num(s.values()[k]));
            row.push(num(s.rhs[k]));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_inf_rhs(path: &Path, cert: &MonotonicityCertificate) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "inf_rhs"])?;
    for &(t, v) in &cert.inf_rhs {
        w.write_record([num(t), num(v)])?;
    }
    w.flush()?;
    Ok(())
}

/// `eps,T_eps`; `inf` when no certified time exists.
pub fn write_t_eps(path: &Path, cert: &MonotonicityCertificate) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["eps", "T_eps"])?;
    for c in &cert.eps {
        w.write_record([num(c.eps), num(c.t_eps.unwrap_or(f64::INFINITY))])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_level_positions(path: &Path, fit: &SpeedFit) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "level_pos"])?;
    for &(t, x) in &fit.points {
        w.write_record([num(t), num(x)])?;
    }
    w.flush()?;
    Ok(())
}

/// `a,lambda,t,x,y,G,G_t` for every sample of the scan.
pub fn write_green_scan(path: &Path, spec: &GreenScanSpec) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["a", "lambda", "t", "x", "y", "G", "G_t"])?;
    let mut failure = None;
    for_each_green_sample(spec, |s| {
        if failure.is_none() {
            if let Err(e) = w.write_record([s.a, s.lambda, s.t, s.x, s.y, s.g, s.g_t].map(num)) {
                failure = Some(e);
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    w.flush()?;
    Ok(())
}

/// `tau,sigma,x,ratio` along the first axis.
pub fn write_ratio_profile(path: &Path, report: &ShiftRatioReport) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["tau", "sigma", "x", "ratio"])?;
    for &(x, r) in &report.profile {
        w.write_record([num(report.tau), num(report.sigma), num(x), num(r)])?;
    }
    w.flush()?;
    Ok(())
}

/// `t,S,mass,event_flag`.
pub fn write_protocol(path: &Path, run: &ProtocolRun) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "S", "mass", "event_flag"])?;
    for r in &run.records {
        w.write_record([num(r.t), num(r.size), num(r.mass), r.event_flag.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `beta,sigma,t0,dS_sign,dmass_sign,boundary_rhs_min`.
pub fn write_treatment_sweep(path: &Path, rows: &[TreatmentSweepRow]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["beta", "sigma", "t0", "dS_sign", "dmass_sign", "boundary_rhs_min"])?;
    for r in rows {
        w.write_record([
            num(r.beta),
            num(r.sigma),
            num(r.t0),
            r.ds_sign.to_string(),
            r.dmass_sign.to_string(),
            num(r.boundary_rhs_min),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Everything that goes into `certificate.txt`.
#[derive(Default)]
pub struct CertificateParts<'a> {
    pub hypotheses: Option<&'a HypothesisReport>,
    pub monotonicity: Option<&'a MonotonicityCertificate>,
    pub speeds: Vec<(f64, Side, &'a SpeedFit)>,
    pub global: Option<&'a GlobalPositivity>,
    pub protocol: Option<&'a ProtocolRun>,
    pub warnings: &'a [String],
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Unchecked => "unchecked",
    }
}

pub fn format_certificate(parts: &CertificateParts) -> String {
    let mut out = String::new();
    let o = &mut out;
    if let Some(h) = parts.hypotheses {
        let _ = writeln!(o, "[hypotheses]");
        let _ = writeln!(o, "nu = {}\nlipschitz = {}\nmu = {}\ns0 = {}", num(h.nu), num(h.lipschitz), num(h.mu), num(h.s0));
        for (hyp, v) in &h.verdicts {
            let _ = write!(o, "{} = {}", hyp.label(), status(v.status));
            if let Some((x, s)) = &v.witness {
                let _ = write!(o, " (witness x = {x:?}, s = {})", num(*s));
            }
            if !v.note.is_empty() {
                let _ = write!(o, " # {}", v.note);
            }
            let _ = writeln!(o);
        }
        let _ = writeln!(o);
    }
    if let Some(m) = parts.monotonicity {
        let _ = writeln!(o, "[monotonicity]");
        let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), num);
        let _ = writeln!(o, "t_mono = {}", opt(m.t_mono));
        if let Some(ts) = &m.tau_star {
            let _ = writeln!(o, "tau_star = {} (comb step {}, {} points)", num(ts.tau), num(ts.comb_step), ts.comb_points);
        }
        for c in &m.eps {
            let _ = writeln!(
                o,
                "T_eps[{}] = {} ; checked on {} snapshots ; min rhs = {}",
                num(c.eps),
                opt(c.t_eps),
                c.checked.len(),
                num(c.min_rhs)
            );
        }
        let _ = writeln!(o, "tail |inf rhs| = {}", num(m.tail_inf_rhs));
        let _ = writeln!(o);
    }
    for (level, side, fit) in &parts.speeds {
        let _ = writeln!(o, "[speed level = {} side = {:?}]", num(*level), side);
        let _ = writeln!(o, "speed = {}\npoints = {}\n", num(fit.speed), fit.points.len());
    }
    if let Some(g) = parts.global {
        let _ = writeln!(o, "[global positivity]");
        let _ = writeln!(o, "tails: minus a = {} rate = {} ; plus a = {} rate = {} ; radius = {}",
            num(g.minus.diffusivity), num(g.minus.rate), num(g.plus.diffusivity), num(g.plus.rate), num(g.radius));
        let _ = writeln!(o, "tau_global = {} ; checked on {} snapshots", g.tau_global.map_or("none".into(), num), g.checked.len());
        if let Some(h) = &g.harnack {
            let _ = writeln!(o, "harnack T0 = {} ; C = {} over {} samples", num(h.t_shift), num(h.c), h.samples);
        }
        let _ = writeln!(o);
    }
    if let Some(p) = parts.protocol {
        let _ = writeln!(o, "[treatment protocol sigma = {}]", num(p.sigma));
        for e in &p.events {
            let _ = writeln!(
                o,
                "event t = {} beta = {} : S {} -> {} ; mass {} -> {} ; boundary points {} ; min rhs(t-) on boundary = {}{}",
                num(e.t), num(e.beta), num(e.size_before), num(e.size_after), num(e.mass_before), num(e.mass_after),
                e.boundary.len(), num(e.boundary_rhs_min), if e.grazing { " ; GRAZING" } else { "" }
            );
        }
        let _ = writeln!(o);
    }
    if !parts.warnings.is_empty() {
        let _ = writeln!(o, "[warnings]");
        for w in parts.warnings {
            let _ = writeln!(o, "{w}");
        }
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, 2.0819767, 1e-300, -5.5e12] {
            let s = num(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(f64::INFINITY), "inf");
    }
}
