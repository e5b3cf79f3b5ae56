//! Rank conditions for smooth lifts, read off the minors of `B̃` along a curve.

use crate::error::{Error, Result};
use crate::invariant::{delta_tilde, subsets};
use crate::jet::{Flatness, Jet};
use crate::rep::Representation;

use super::curve::OrbitCurve;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Truncation hides whether a size-`r` minor is nonzero.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorOrder {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub vanishing: Flatness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub rank: usize,
    pub verdict: Verdict,
    /// Every minor of size `r`.
    pub at_rank: Vec<MinorOrder>,
    /// Every minor of size greater than `r`.
    pub above_rank: Vec<MinorOrder>,
    /// A size-`r` minor of minimal order of vanishing.
    pub witness: Option<MinorOrder>,
}

fn minors_of_size(rep: &Representation, c: &[Jet], s: usize) -> Result<Vec<MinorOrder>> {
    let n = rep.n();
    let mut out = Vec::new();
    for rows in subsets(n, s) {
        for cols in subsets(n, s) {
            if rows > cols {
                continue;
            }
            let q = delta_tilde(rep, &rows, &cols)?;
            let vanishing = q.eval_at_jets(c)?.order_of_vanishing();
            out.push(MinorOrder { rows: rows.clone(), cols, vanishing });
        }
    }
    Ok(out)
}

/// Check that all minors of size `> r` vanish identically along `c` while
/// some minor of size `r` does not. Index pairs are unordered since `B̃` is
/// symmetric.
pub fn condition_check(c: &OrbitCurve, r: usize) -> Result<ConditionReport> {
    let rep = &c.rep;
    let n = rep.n();
    let at_rank = if r == 0 || r > n { Vec::new() } else { minors_of_size(rep, &c.components, r)? };
    let mut above_rank = Vec::new();
    for s in (r + 1)..=n {
        above_rank.extend(minors_of_size(rep, &c.components, s)?);
    }
    let witness = at_rank
        .iter()
        .filter(|m| m.vanishing.exact().is_some())
        .min_by_key(|m| m.vanishing.exact())
        .cloned();
    let verdict = if r > n || above_rank.iter().any(|m| !m.vanishing.is_flat()) {
        Verdict::Fail
    } else if r > 0 && witness.is_some() {
        Verdict::Pass
    } else {
        Verdict::Unknown
    };
    Ok(ConditionReport { rank: r, verdict, at_rank, above_rank, witness })
}

/// Largest `s` with a minor of size `s` that is not flat along `c`.
pub fn certified_rank(rep: &Representation, c: &[Jet]) -> Result<Option<usize>> {
    for s in (1..=rep.n()).rev() {
        if minors_of_size(rep, c, s)?.iter().any(|m| !m.vanishing.is_flat()) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Certified rank of an orbit curve, an obstruction if none exists.
pub(crate) fn require_rank(rep: &Representation, c: &[Jet]) -> Result<usize> {
    let r = certified_rank(rep, c)?;
    if r.is_none() && c.iter().all(Jet::is_zero) {
        return Ok(0);
    }
    r.ok_or_else(|| {
        Error::FlatnessObstruction(format!("every minor of B̃ is flat to truncation along the curve in {}", rep.name))
    })
}
