//! Batch front end: read a job file, lift the curve, write artifacts.
//!
//! Exit codes: 0 for a verified lift (or a passing check), 2 when the engine
//! certifies an obstruction, 1 for everything else.

pub mod job;
pub mod render;

use std::fmt::Write;
use std::path::Path;

use orbitlift::catalog;
use orbitlift::invariant::{membership_test, Membership, Point};
use orbitlift::lift::{
    center_intervals, condition_check, global_lift, local_lift_logged, residual, section_lift_logged, LiftCurve,
    LiftReport, Mode, Verdict,
};
use orbitlift::rat;
use orbitlift::rep::{Group, Section};
use orbitlift::Rational;
use thiserror::Error;

pub use job::{JobSpec, Outputs, SampleSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Engine(#[from] orbitlift::Error),
    #[error("{source}")]
    Lift { source: orbitlift::Error, log: Vec<String> },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(e) | CliError::Lift { source: e, .. } if e.is_obstruction() => 2,
            _ => 1,
        }
    }
}

/// What a command printed and how it should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub message: String,
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Analytic => "analytic",
        Mode::Smooth => "smooth",
    }
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    let p = dir.join(name);
    std::fs::write(&p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
}

fn jet_var(center: &Rational) -> String {
    if center == &Rational::from_integer(0.into()) {
        "t".into()
    } else if center < &Rational::from_integer(0.into()) {
        format!("(t + {})", rat::display(&-center.clone()))
    } else {
        format!("(t - {})", rat::display(center))
    }
}

fn eval_poly(coeffs: &[Rational], t: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::from_integer(0.into()), |acc, c| acc * t + c)
}

/// Reports, intervals, lifts and gluing notes of a run.
type Pieces = (Vec<LiftReport>, Vec<(Rational, Rational)>, Vec<LiftCurve>, Vec<String>);

/// Run `lift` and write `lift.jets`, `report.txt` and `samples.csv` into `out`.
pub fn run_lift(spec: &JobSpec, out: &Path) -> Result<Outcome, CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let c = spec.orbit_curve()?;
    let mut report = String::new();
    render::report_header(&mut report, &spec.rep.name, mode_name(spec.mode), spec.order);
    let mut log = Vec::new();

    let result: orbitlift::Result<Pieces> =
        if spec.interval.len() == 1 {
            let t0 = &spec.interval[0];
            let r = if spec.rep.section.is_some() {
                section_lift_logged(&c, spec.mode, t0, &mut log)
            } else {
                local_lift_logged(&c, spec.mode, t0, &mut log)
            };
            r.map(|r| {
                let lift = r.lift.clone();
                (vec![r], center_intervals(&spec.interval), vec![lift], Vec::new())
            })
        } else {
            global_lift(&c, spec.mode, &spec.interval, &mut log).map(|g| {
                let notes = g
                    .glued
                    .elements
                    .iter()
                    .zip(&g.glued.exact)
                    .enumerate()
                    .map(|(k, (m, exact))| {
                        let kind = if *exact { "exact" } else { "numeric" };
                        format!("piece {} aligned by {} ({kind})", k + 1, m.to_string().lines().collect::<Vec<_>>().join("; "))
                    })
                    .collect();
                let intervals = g.glued.pieces.iter().map(|p| p.interval.clone()).collect();
                let lifts = g.glued.pieces.iter().map(|p| p.lift.clone()).collect();
                (g.reports, intervals, lifts, notes)
            })
        };

    let (reports, intervals, lifts, notes) = match result {
        Ok(v) => v,
        Err(e) => {
            let log: Vec<String> = log.iter().map(ToString::to_string).collect();
            writeln!(report, "error: {e}").unwrap();
            writeln!(report, "branch log:").unwrap();
            for s in &log {
                writeln!(report, "  {s}").unwrap();
            }
            write_file(out, "report.txt", &report)?;
            return Err(CliError::Lift { source: e, log });
        }
    };

    let mut jets = String::new();
    for (k, (lift, iv)) in lifts.iter().zip(&intervals).enumerate() {
        writeln!(
            jets,
            "# piece {} center {} on [{}, {}] order {}",
            k + 1,
            rat::display(&lift.center),
            rat::display(&iv.0),
            rat::display(&iv.1),
            lift.order()
        )
        .unwrap();
        jets.push_str(&render::jets_text(lift, &jet_var(&lift.center)));
    }
    if spec.outputs.jets {
        write_file(out, "lift.jets", &jets)?;
    }

    for (k, r) in reports.iter().enumerate() {
        if reports.len() > 1 {
            writeln!(report, "piece {}", k + 1).unwrap();
        }
        render::lift_report_text(&mut report, r);
        let at = c.at(&r.lift.center, spec.order)?;
        if spec.outputs.residuals {
            // residuals are taken for the lift as reported, i.e. after gluing
            let lift = lifts.get(k).unwrap_or(&r.lift);
            let lift = LiftCurve { center: rat::int(0), ..lift.clone() };
            render::residual_text(&mut report, &residual(&lift, &at)?);
        }
        if spec.outputs.membership {
            let m = membership_test(&spec.rep, &Point::Rational(at.value_at_zero()), 0.0);
            writeln!(report, "membership at t={}: {}", rat::display(&r.lift.center), membership_text(&m)).unwrap();
        }
        if let Some(rank) = spec.outputs.conditions {
            report.push_str(&render::conditions_text(&condition_check(&at, rank)?));
        }
    }
    for n in &notes {
        writeln!(report, "{n}").unwrap();
    }

    let verified = reports.iter().map(|r| r.verified_order).min().flatten();
    if let Some(s) = &spec.outputs.samples {
        let (lo, hi) = s.range.clone().unwrap_or_else(|| (intervals[0].0.clone(), intervals[intervals.len() - 1].1.clone()));
        let points = render::sample_points(s.count, &lo, &hi);
        // nearest center, the earlier piece on ties
        let pick = |t: &Rational| -> &LiftCurve {
            let dist = |l: &LiftCurve| num::Signed::abs(&(t - &l.center));
            lifts.iter().fold(&lifts[0], |best, l| if dist(l) < dist(best) { l } else { best })
        };
        let polys = c.polynomials().expect("job curves are polynomial");
        let target = |t: &Rational| polys.iter().map(|p| eval_poly(p, t)).collect();
        let csv = render::emit_samples(&points, pick, target, s.digits, verified)?;
        write_file(out, "samples.csv", &csv)?;
    }

    let ok = reports.iter().all(LiftReport::is_verified);
    writeln!(report, "status {}", if ok { "verified" } else { "not verified" }).unwrap();
    write_file(out, "report.txt", &report)?;
    let message = match verified {
        Some(k) if ok => format!("lift verified to order {k}"),
        Some(k) => format!("lift verified only to order {k} of {}", spec.order),
        None => "lift does not match the curve".to_string(),
    };
    Ok(Outcome { code: if ok { 0 } else { 1 }, message })
}

fn membership_text(m: &orbitlift::Result<Membership>) -> String {
    match m {
        Ok(Membership::Inside) => "inside".into(),
        Ok(Membership::Boundary) => "boundary".into(),
        Ok(Membership::Outside(w)) => format!("outside ({w:?})"),
        Err(e) => format!("undecided ({e})"),
    }
}

pub fn run_membership(spec: &JobSpec, t0: &Rational) -> Result<Outcome, CliError> {
    let y: Vec<Rational> = spec.curve.iter().map(|p| eval_poly(p, t0)).collect();
    let shown: Vec<String> = y.iter().map(rat::display).collect();
    let m = membership_test(&spec.rep, &Point::Rational(y), 0.0)?;
    let code = if matches!(m, Membership::Outside(_)) { 2 } else { 0 };
    Ok(Outcome {
        code,
        message: format!("c({}) = ({}) is {}", rat::display(t0), shown.join(", "), membership_text(&Ok(m))),
    })
}

/// Condition report at the first center. Exit 0 only on a pass.
pub fn run_conditions(spec: &JobSpec, rank: usize) -> Result<Outcome, CliError> {
    let c = spec.orbit_curve()?.at(&spec.interval[0], spec.order)?;
    let r = condition_check(&c, rank)?;
    let code = if r.verdict == Verdict::Pass { 0 } else { 2 };
    Ok(Outcome { code, message: render::conditions_text(&r).trim_end().to_string() })
}

pub fn catalog_list() -> Outcome {
    Outcome { code: 0, message: catalog::list().join("\n") }
}

pub fn catalog_show(name: &str) -> Result<Outcome, CliError> {
    let rep = catalog::load(name)?;
    let mut s = String::new();
    writeln!(s, "name {}", rep.name).unwrap();
    writeln!(s, "dim {}", rep.dim).unwrap();
    let metric: Vec<String> = rep.metric.iter().map(rat::display).collect();
    writeln!(s, "metric ({})", metric.join(", ")).unwrap();
    match &rep.group {
        Group::Finite { elements } => writeln!(s, "group finite, {} elements", elements.len()).unwrap(),
        Group::Continuous { family, tangents, .. } => {
            writeln!(s, "group {family}, {} tangent generator(s)", tangents.len()).unwrap()
        }
    }
    for (i, (p, d)) in rep.sigma.iter().zip(&rep.degrees).enumerate() {
        writeln!(s, "sigma{} = {p} (degree {d})", i + 1).unwrap();
    }
    let section = match &rep.section {
        Some(Section::Whole) => "whole space".to_string(),
        Some(Section::Subspace(sd)) => format!("{}-dimensional, Weyl system {}", sd.basis.len(), sd.rep.name),
        None => "none".to_string(),
    };
    writeln!(s, "section {section}").unwrap();
    write!(s, "notes {}", rep.notes).unwrap();
    Ok(Outcome { code: 0, message: s })
}
