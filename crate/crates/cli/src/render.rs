//! Text artifacts: jets, reports and sample tables.

use std::fmt::Write;

use num::{Signed, Zero};
use orbitlift::lift::{ConditionReport, LiftCurve, LiftReport};
use orbitlift::rat::{self, int};
use orbitlift::{Jet, Rational};

/// One line per component, each a polynomial in `var` with exact coefficients.
pub fn jets_text(lift: &LiftCurve, var: &str) -> String {
    let mut out = String::new();
    for j in &lift.components {
        writeln!(out, "{}", j.to_poly_string(var)).unwrap();
    }
    out
}

pub fn conditions_text(r: &ConditionReport) -> String {
    let mut out = String::new();
    writeln!(out, "conditions at rank {}: {:?}", r.rank, r.verdict).unwrap();
    let show = |m: &orbitlift::lift::MinorOrder| {
        let ix = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
        let v = match m.vanishing.exact() {
            Some(k) => format!("vanishes to order {k}"),
            None => "flat to truncation".to_string(),
        };
        format!("rows {} cols {}: {v}", ix(&m.rows), ix(&m.cols))
    };
    match &r.witness {
        Some(w) => writeln!(out, "witness {}", show(w)).unwrap(),
        None => writeln!(out, "witness none").unwrap(),
    }
    let nonflat = r.above_rank.iter().filter(|m| !m.vanishing.is_flat()).count();
    writeln!(out, "larger minors: {} checked, {} not flat", r.above_rank.len(), nonflat).unwrap();
    for m in r.above_rank.iter().filter(|m| !m.vanishing.is_flat()) {
        writeln!(out, "  {}", show(m)).unwrap();
    }
    out
}

pub fn report_header(out: &mut String, rep: &str, mode: &str, requested: usize) {
    writeln!(out, "representation {rep}").unwrap();
    writeln!(out, "mode {mode}").unwrap();
    writeln!(out, "requested order {requested}").unwrap();
}

pub fn lift_report_text(out: &mut String, r: &LiftReport) {
    writeln!(out, "center {}", rat::display(&r.lift.center)).unwrap();
    match r.verified_order {
        Some(k) => writeln!(out, "verified order {k}").unwrap(),
        None => writeln!(out, "verified order none").unwrap(),
    }
    if r.approximate {
        writeln!(out, "approximate preimage: verified at tolerance").unwrap();
    }
    writeln!(out, "branch log:").unwrap();
    for s in &r.branch_log {
        writeln!(out, "  {s}").unwrap();
    }
}

pub fn residual_text(out: &mut String, res: &[Jet]) {
    writeln!(out, "residual sigma(lift) - c:").unwrap();
    for (i, j) in res.iter().enumerate() {
        let first = j.order_of_vanishing().exact();
        let note = match first {
            Some(k) => format!("first nonzero at t^{k}"),
            None => format!("zero through t^{}", j.order()),
        };
        writeln!(out, "  c{}: {note}", i + 1).unwrap();
    }
}

/// Sample points: `count` evenly spaced rationals on `[lo, hi]`, or the
/// midpoint when `count` is 1.
pub fn sample_points(count: usize, lo: &Rational, hi: &Rational) -> Vec<Rational> {
    match count {
        0 => Vec::new(),
        1 => vec![(lo + hi) / int(2)],
        _ => (0..count).map(|i| lo + (hi - lo) * Rational::new(i.into(), (count - 1).into())).collect(),
    }
}

/// Rows `(t, x_1(t), …, x_dim(t), residual)`. `lift_at` picks the lift used
/// at each point; `target` evaluates the input curve exactly.
pub fn emit_samples<'a>(
    points: &[Rational],
    lift_at: impl Fn(&Rational) -> &'a LiftCurve,
    target: impl Fn(&Rational) -> Vec<Rational>,
    digits: usize,
    verified_order: Option<usize>,
) -> orbitlift::Result<String> {
    let mut out = String::new();
    let Some(first) = points.first() else {
        return Ok(out);
    };
    let dim = lift_at(first).components.len();
    let mut header = vec!["t".to_string()];
    header.extend((1..=dim).map(|i| format!("x{i}")));
    header.push("residual".into());
    writeln!(out, "{}", header.join(",")).unwrap();
    let mut nonzero = 0;
    for t in points {
        let lift = lift_at(t);
        let v = lift.eval_at(t);
        let y = lift.rep.eval_sigma(&v)?;
        let c = target(t);
        let res = y.iter().zip(&c).map(|(a, b)| (a - b).abs()).max().unwrap_or_else(Rational::zero);
        if !res.is_zero() {
            nonzero += 1;
        }
        let mut row = vec![rat::to_decimal(t, digits)];
        row.extend(v.iter().map(|x| rat::to_decimal(x, digits)));
        row.push(rat::to_decimal(&res, digits));
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    if nonzero > 0 {
        let ord = verified_order.map(|k| k.to_string()).unwrap_or_else(|| "none".into());
        writeln!(
            out,
            "# residual nonzero at {nonzero} of {} rows: jets are truncated and valid through order {ord} only",
            points.len()
        )
        .unwrap();
    }
    Ok(out)
}
