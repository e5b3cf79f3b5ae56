//! Lifting orbit-space curves: the recursive local driver, verification,
//! gluing and the supporting checks.

mod conditions;
mod curve;
mod glue;
mod gram_schmidt;
mod multiplicity;
mod orthogonal;
mod regular;
mod slice;
mod verify;

use std::fmt;
use std::sync::Arc;

use num::Zero;

pub use conditions::{certified_rank, condition_check, ConditionReport, MinorOrder, Verdict};
pub use curve::{LiftCurve, OrbitCurve};
pub use glue::{glue, jet_distance, GluedLift, Piece};
pub use gram_schmidt::{gram_schmidt_flat, inner as jet_inner, wedge};
pub use multiplicity::{desingularize, min_vanishing, multiplicity_check};
pub use orthogonal::{orthogonality_check, OrthogonalityReport};
pub use regular::{local_lift_regular, normal_complement};
pub use slice::{embed_jacobian, solve_slice_coordinates, symmetric_slice};
pub use verify::{residual, verify_lift, verify_lift_approx};

use crate::catalog;
use crate::error::{Error, Result};
use crate::invariant::{membership_test, Membership, Point};
use crate::jet::Jet;
use crate::rat::{self, Rational};
use crate::rep::{Preimage, Representation, Section, SliceData};
use crate::roots;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Analytic,
    Smooth,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReportMode {
    Analytic,
    Smooth { rank: usize },
}

/// One decision taken by the driver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Recentered { t0: Rational },
    OrderRaised { order: usize },
    ZeroLift { rep: String },
    FixedSplit { rep: String, fixed_dim: usize },
    /// Blow-up by `t^r` at the origin of the orbit space.
    Desingularized { rep: String, r: usize },
    /// Implicit function solve at a regular preimage.
    Regular { rep: String },
    /// Reduction to the isotropy representation at a singular preimage.
    Slice { rep: String, base_point: Vec<Rational>, blocks: Vec<String> },
    Section { rep: String },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Recentered { t0 } => write!(f, "recenter t0={}", rat::display(t0)),
            Step::OrderRaised { order } => write!(f, "raise input order to {order}"),
            Step::ZeroLift { rep } => write!(f, "zero lift [{rep}]"),
            Step::FixedSplit { rep, fixed_dim } => write!(f, "split fixed subspace dim={fixed_dim} [{rep}]"),
            Step::Desingularized { rep, r } => write!(f, "step3 desingularize r={r} [{rep}]"),
            Step::Regular { rep } => write!(f, "step1 regular [{rep}]"),
            Step::Slice { rep, base_point, blocks } => {
                let v: Vec<String> = base_point.iter().map(rat::display).collect();
                write!(f, "step2 slice at ({}) blocks={} [{rep}]", v.join(", "), blocks.join("+"))
            }
            Step::Section { rep } => write!(f, "section route [{rep}]"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LiftReport {
    pub lift: LiftCurve,
    pub requested_order: usize,
    /// `None` when not even the constant terms match.
    pub verified_order: Option<usize>,
    pub branch_log: Vec<Step>,
    pub mode: ReportMode,
    /// Some preimage was irrational and verification used a tolerance.
    pub approximate: bool,
}

impl LiftReport {
    pub fn is_verified(&self) -> bool {
        self.verified_order.is_some_and(|k| k >= self.requested_order)
    }
}

/// Tolerance for irrational preimage points.
pub const POINT_TOL: (i64, i64) = (1, 1_000_000_000_000);
/// Verification tolerance when a preimage was approximate.
pub const APPROX_VERIFY_TOL: f64 = 1e-9;
const MAX_ORDER_ATTEMPTS: usize = 8;

struct Ctx<'a> {
    mode: Mode,
    tol: Rational,
    log: &'a mut Vec<Step>,
    approximate: bool,
    max_depth: usize,
}

/// Lift `c` around `t0`. See [`local_lift_logged`] for the steps taken on failure.
pub fn local_lift(c: &OrbitCurve, mode: Mode, t0: &Rational) -> Result<LiftReport> {
    local_lift_logged(c, mode, t0, &mut Vec::new())
}

/// As [`local_lift`], recording steps into `log` even when an error is returned.
pub fn local_lift_logged(c: &OrbitCurve, mode: Mode, t0: &Rational, log: &mut Vec<Step>) -> Result<LiftReport> {
    let rep = c.rep.clone();
    let target = c.order();
    if !t0.is_zero() {
        log.push(Step::Recentered { t0: t0.clone() });
    }
    let cc = c.at(t0, target)?;
    let zero_report = |log: &mut Vec<Step>| {
        log.push(Step::ZeroLift { rep: rep.name.clone() });
        LiftReport {
            lift: LiftCurve::new(rep.clone(), vec![Jet::zero(target); rep.dim], t0.clone()),
            requested_order: target,
            verified_order: Some(target),
            branch_log: log.clone(),
            mode: match mode {
                Mode::Analytic => ReportMode::Analytic,
                Mode::Smooth => ReportMode::Smooth { rank: 0 },
            },
            approximate: false,
        }
    };
    if cc.is_zero() {
        return Ok(zero_report(log));
    }
    match membership_test(&rep, &Point::Rational(cc.value_at_zero()), 0.0) {
        Ok(Membership::Outside(w)) => {
            return Err(Error::OutsideOrbitSpace(format!("c({}) fails {:?}", rat::display(t0), w)));
        }
        Ok(_) | Err(Error::RewriterUnavailable(_)) => {}
        Err(e) => return Err(e),
    }
    let (budget, report_mode) = match mode {
        Mode::Analytic => (None, ReportMode::Analytic),
        Mode::Smooth => {
            let r = certified_rank(&rep, &cc.components)?.ok_or_else(|| {
                Error::FlatnessObstruction("every minor of B̃ is flat to truncation along the curve".into())
            })?;
            let report = condition_check(&cc, r)?;
            if report.verdict != Verdict::Pass {
                return Err(Error::FlatnessObstruction(format!("rank {r} conditions not certified")));
            }
            (Some(r), ReportMode::Smooth { rank: r })
        }
    };

    let mut order_in = target;
    let mut attempt = 0;
    let (lift, approximate) = loop {
        attempt += 1;
        let src = cc.at(&Rational::zero(), order_in)?;
        let mut ctx = Ctx { mode, tol: rat::frac(POINT_TOL.0, POINT_TOL.1), log: &mut *log, approximate: false, max_depth: rep.max_depth };
        let outcome = lift_at_zero(&rep, &src.components, &mut ctx, 0, budget);
        let approximate = ctx.approximate;
        let mut outcome_lift = None;
        let short = match outcome {
            Ok(l) => {
                let got = l.iter().map(Jet::order).min().unwrap_or(0);
                if got >= target {
                    break (l, approximate);
                }
                outcome_lift = Some(l);
                Error::OrderExhausted { needed: target, available: got }
            }
            Err(e @ Error::OrderExhausted { .. }) => e,
            Err(e) => return Err(e),
        };
        if !cc.is_polynomial() {
            // jets cannot be extended; report the order actually reached
            match (outcome_lift, short) {
                (Some(l), _) => break (l, approximate),
                (None, e) => return Err(e),
            }
        }
        if attempt >= MAX_ORDER_ATTEMPTS {
            return Err(short);
        }
        let deficit = match short {
            Error::OrderExhausted { needed, available } if needed > available => needed - available,
            _ => target.max(1),
        };
        order_in += deficit.max(target.max(1) / 2).max(1);
        log.push(Step::OrderRaised { order: order_in });
    };
    let lift = LiftCurve::new(rep.clone(), lift, Rational::zero()).truncate(target);
    let verified = if approximate {
        verify_lift_approx(&lift, &cc, APPROX_VERIFY_TOL)?
    } else {
        verify_lift(&lift, &cc)?
    };
    let lift = LiftCurve { center: t0.clone(), ..lift };
    Ok(LiftReport {
        lift,
        requested_order: target,
        verified_order: verified,
        branch_log: log.clone(),
        mode: report_mode,
        approximate,
    })
}

fn zeros(n: usize, order: usize) -> Vec<Jet> {
    vec![Jet::zero(order); n]
}

fn jets_order(c: &[Jet]) -> usize {
    c.iter().map(Jet::order).min().unwrap_or(0)
}

/// Lift a curve given by jets at `t = 0`. `budget` is the certified rank in smooth mode.
fn lift_at_zero(rep: &Arc<Representation>, c: &[Jet], ctx: &mut Ctx, depth: usize, budget: Option<usize>) -> Result<Vec<Jet>> {
    let order = jets_order(c);
    if depth > ctx.max_depth {
        return Err(Error::RecursionLimit(ctx.max_depth));
    }
    let split = rep.split()?;
    let m = split.fixed_dim();
    if c.iter().all(Jet::is_zero) {
        if ctx.mode == Mode::Smooth && budget.is_some_and(|b| b != m) {
            return Err(Error::FlatnessObstruction(format!("curve in {} is flat to truncation", rep.name)));
        }
        ctx.log.push(Step::ZeroLift { rep: rep.name.clone() });
        return Ok(zeros(rep.dim, order));
    }
    let alpha: Vec<Jet> = (0..m)
        .map(|a| {
            split.linear.iter().enumerate().fold(Jet::zero(order), |acc, (b, &i)| {
                let w = &split.l_inv[(a, b)];
                if w.is_zero() { acc } else { &acc + &c[i].scale(w) }
            })
        })
        .collect();
    let red = split.reduced_or(rep).clone();
    let c1: Vec<Jet> = if split.is_identity() {
        c.to_vec()
    } else {
        ctx.log.push(Step::FixedSplit { rep: rep.name.clone(), fixed_dim: m });
        split.to_reduced.iter().map(|q| q.eval_at_jets(c)).collect::<Result<_>>()?
    };
    let fixed_part = |u: &[Jet], ord: usize| split.assemble(&alpha, u, rep.dim, ord);
    if red.dim == 0 {
        return Ok(fixed_part(&[], order));
    }
    if !multiplicity::constant_is_zero(&c1) {
        return step12(rep, c, ctx, depth, budget);
    }
    if c1.iter().all(Jet::is_zero) {
        if ctx.mode == Mode::Smooth && budget != Some(m) {
            return Err(Error::FlatnessObstruction(format!(
                "curve in the complement of the fixed subspace of {} is flat to truncation",
                rep.name
            )));
        }
        ctx.log.push(Step::ZeroLift { rep: red.name.clone() });
        return Ok(fixed_part(&zeros(red.dim, order), order));
    }
    let curve = OrbitCurve::new(red.clone(), c1)?;
    let (r, cr) = desingularize(&curve)?;
    if r == 0 || cr.components[0].constant_term().is_zero() {
        let m1 = cr.components[0].order_of_vanishing().exact().unwrap_or(0) + 2 * r;
        return Err(Error::InconsistentCurve { order: m1 });
    }
    ctx.log.push(Step::Desingularized { rep: red.name.clone(), r });
    let chat: Vec<Jet> = if split.is_identity() {
        cr.components
    } else {
        let ord = cr.order();
        let args: Vec<Jet> = zeros(m, ord).into_iter().chain(cr.components).collect();
        split.from_reduced.iter().map(|q| q.eval_at_jets(&args)).collect::<Result<_>>()?
    };
    let w = step12(rep, &chat, ctx, depth, budget)?;
    let lifted: Vec<Jet> = w.iter().map(|j| j.shift_up(r)).collect();
    let ord = jets_order(&lifted).min(order);
    let base = fixed_part(&zeros(red.dim, ord), ord);
    Ok(base.iter().zip(&lifted).map(|(a, b)| a + b).collect())
}

/// Steps 1 and 2 for a curve whose value at zero has a nonzero component off the fixed subspace.
fn step12(rep: &Arc<Representation>, c: &[Jet], ctx: &mut Ctx, depth: usize, budget: Option<usize>) -> Result<Vec<Jet>> {
    if rep.preimage == Preimage::Symmetric {
        return symmetric_step(rep, c, ctx, depth, budget);
    }
    let y0: Vec<Rational> = c.iter().map(|j| j.constant_term().clone()).collect();
    let (v0, exact) = rep.preimage(&y0, &ctx.tol)?;
    ctx.approximate |= !exact;
    let rank = rep.jacobian_at(&v0)?.rank();
    if rank >= rep.codim_regular() {
        ctx.log.push(Step::Regular { rep: rep.name.clone() });
        return regular::lift_regular_jets(rep, c, &v0, exact);
    }
    let slice = rep
        .slices
        .iter()
        .find(|s| s.base_point == v0)
        .ok_or_else(|| Error::SliceUnavailable(format!("({}) in {}", show(&v0), rep.name)))?;
    lift_through_slice(rep, c, slice, ctx, depth, budget, exact)
}

fn show(v: &[Rational]) -> String {
    v.iter().map(rat::display).collect::<Vec<_>>().join(", ")
}

fn lift_through_slice(
    rep: &Representation,
    c: &[Jet],
    slice: &SliceData,
    ctx: &mut Ctx,
    depth: usize,
    budget: Option<usize>,
    exact: bool,
) -> Result<Vec<Jet>> {
    ctx.log.push(Step::Slice {
        rep: rep.name.clone(),
        base_point: slice.base_point.clone(),
        blocks: slice.blocks.iter().map(|b| b.rep.name.clone()).collect(),
    });
    let tau = solve_slice_coordinates(c, slice, exact)?;
    let mut z = Vec::with_capacity(slice.normal_dim());
    let mut off = 0;
    let mut ranks = 0;
    for b in &slice.blocks {
        let tb = &tau[off..off + b.rep.n()];
        off += b.rep.n();
        let bb = match ctx.mode {
            Mode::Smooth => Some(conditions::require_rank(&b.rep, tb)?),
            Mode::Analytic => None,
        };
        ranks += bb.unwrap_or(0);
        z.extend(lift_at_zero(&b.rep, tb, ctx, depth + 1, bb)?);
    }
    if ctx.mode == Mode::Smooth && budget != Some(ranks) {
        return Err(Error::FlatnessObstruction(format!(
            "slice blocks certify rank {ranks} but the curve has rank {}",
            budget.unwrap_or(0)
        )));
    }
    let order = jets_order(&z).min(jets_order(c));
    Ok(slice::assemble_from_slice(slice, &z, order))
}

/// Steps 1 and 2 through the ambient permutation representation.
fn symmetric_step(rep: &Arc<Representation>, c: &[Jet], ctx: &mut Ctx, depth: usize, budget: Option<usize>) -> Result<Vec<Jet>> {
    let scheme = rep.symmetric_scheme().ok_or_else(|| Error::PreimageUnavailable(rep.name.clone()))?;
    let k = scheme.ambient;
    let e: Vec<Jet> = scheme.elementary.iter().map(|q| q.eval_at_jets(c)).collect::<Result<_>>()?;
    let mut p = vec![Rational::zero(); k + 1];
    p[k] = rat::one();
    for (i, ei) in e.iter().enumerate() {
        p[k - 1 - i] = crate::rewrite::alternating_sign(i + 1) * ei.constant_term();
    }
    let found = roots::real_roots(&p, &ctx.tol);
    let count: usize = found.iter().map(|r| r.multiplicity).sum();
    if count != k {
        return Err(Error::OutsideOrbitSpace(format!("only {count} of {k} roots are real")));
    }
    let exact = found.iter().all(|r| r.exact);
    ctx.approximate |= !exact;
    let full = catalog::sym_full(k);
    let ambient_budget = budget.map(|b| b + (k - rep.dim));
    let x = if found.iter().all(|r| r.multiplicity == 1) {
        let v0: Vec<Rational> = found.iter().map(|r| r.value.clone()).collect();
        ctx.log.push(Step::Regular { rep: full.name.clone() });
        regular::lift_regular_jets(&full, &e, &v0, exact)?
    } else {
        let clusters: Vec<(Rational, usize)> = found.iter().map(|r| (r.value.clone(), r.multiplicity)).collect();
        let slice = symmetric_slice(&clusters, catalog::sym_full);
        lift_through_slice(&full, &e, &slice, ctx, depth, ambient_budget, exact)?
    };
    let order = jets_order(&x);
    Ok((0..rep.dim)
        .map(|i| {
            (0..k).fold(Jet::zero(order), |acc, j| {
                let w = &scheme.project[(i, j)];
                if w.is_zero() { acc } else { &acc + &x[j].scale(w) }
            })
        })
        .collect())
}

/// Lift through the section: solve over the Weyl system, then embed.
pub fn section_lift(c: &OrbitCurve, mode: Mode, t0: &Rational) -> Result<LiftReport> {
    section_lift_logged(c, mode, t0, &mut Vec::new())
}

pub fn section_lift_logged(c: &OrbitCurve, mode: Mode, t0: &Rational, log: &mut Vec<Step>) -> Result<LiftReport> {
    let routed = catalog::section_lift_route(c)?;
    if Arc::ptr_eq(&routed.rep, &c.rep) {
        return local_lift_logged(c, mode, t0, log);
    }
    log.push(Step::Section { rep: routed.rep.name.clone() });
    let mut rep_w = local_lift_logged(&routed, mode, t0, log)?;
    rep_w.lift = embed_section(&rep_w.lift, &c.rep)?;
    let cc = c.at(t0, c.order())?;
    let at_zero = LiftCurve { center: Rational::zero(), ..rep_w.lift.clone() };
    rep_w.verified_order = if rep_w.approximate {
        verify_lift_approx(&at_zero, &cc, APPROX_VERIFY_TOL)?
    } else {
        verify_lift(&at_zero, &cc)?
    };
    Ok(rep_w)
}

/// Map a lift in section coordinates into `V`.
pub fn embed_section(lift: &LiftCurve, rep: &Arc<Representation>) -> Result<LiftCurve> {
    let Some(Section::Subspace(sd)) = &rep.section else {
        return Ok(lift.clone());
    };
    let order = lift.order();
    let comps = (0..rep.dim)
        .map(|k| {
            sd.basis.iter().zip(&lift.components).fold(Jet::zero(order), |acc, (b, s)| {
                if b[k].is_zero() { acc } else { &acc + &s.scale(&b[k]) }
            })
        })
        .collect();
    Ok(LiftCurve { components: comps, rep: rep.clone(), center: lift.center.clone() })
}

/// Local lifts at every center, glued on the overlaps of `[c_{k-1}, c_{k+1}]`.
#[derive(Clone, Debug)]
pub struct GlobalLift {
    pub reports: Vec<LiftReport>,
    pub glued: GluedLift,
}

/// Intervals `[c_{k-1}, c_{k+1}]` around sorted centers, half a gap past the ends.
pub fn center_intervals(centers: &[Rational]) -> Vec<(Rational, Rational)> {
    let n = centers.len();
    if n == 1 {
        return vec![(&centers[0] - rat::one(), &centers[0] + rat::one())];
    }
    let half = |a: &Rational, b: &Rational| (b - a) / rat::int(2);
    (0..n)
        .map(|k| {
            let lo = if k == 0 { &centers[0] - half(&centers[0], &centers[1]) } else { centers[k - 1].clone() };
            let hi = if k + 1 == n { &centers[n - 1] + half(&centers[n - 2], &centers[n - 1]) } else { centers[k + 1].clone() };
            (lo, hi)
        })
        .collect()
}

/// Lift at each center and glue. Section entries lift and glue over the Weyl
/// system before embedding.
pub fn global_lift(c: &OrbitCurve, mode: Mode, centers: &[Rational], log: &mut Vec<Step>) -> Result<GlobalLift> {
    let mut centers = centers.to_vec();
    if centers.is_empty() {
        centers.push(Rational::zero());
    }
    centers.sort();
    centers.dedup();
    let routed = match &c.rep.section {
        Some(Section::Subspace(_)) => catalog::section_lift_route(c)?,
        _ => c.clone(),
    };
    let via_section = !Arc::ptr_eq(&routed.rep, &c.rep);
    if via_section {
        log.push(Step::Section { rep: routed.rep.name.clone() });
    }
    let mut reports = Vec::with_capacity(centers.len());
    for t0 in &centers {
        let mut piece_log = Vec::new();
        let res = local_lift_logged(&routed, mode, t0, &mut piece_log);
        log.extend(piece_log);
        reports.push(res?);
    }
    let pieces: Vec<Piece> = center_intervals(&centers)
        .into_iter()
        .zip(&reports)
        .map(|(interval, r)| Piece { interval, lift: r.lift.clone() })
        .collect();
    let mut glued = glue(&pieces, &routed.rep)?;
    if via_section {
        for p in glued.pieces.iter_mut() {
            p.lift = embed_section(&p.lift, &c.rep)?;
        }
        for (r, t0) in reports.iter_mut().zip(&centers) {
            r.lift = embed_section(&r.lift, &c.rep)?;
            let cc = c.at(t0, c.order())?;
            let at_zero = LiftCurve { center: Rational::zero(), ..r.lift.clone() };
            r.verified_order =
                if r.approximate { verify_lift_approx(&at_zero, &cc, APPROX_VERIFY_TOL)? } else { verify_lift(&at_zero, &cc)? };
        }
    }
    Ok(GlobalLift { reports, glued })
}
