//! Orders of vanishing along curves through the origin of the orbit space.

use num::Zero;

use crate::error::{Error, Result};
use crate::jet::{Flatness, Jet};

use super::curve::OrbitCurve;

fn check_convention(c: &OrbitCurve) -> Result<()> {
    let rep = &c.rep;
    if rep.n() == 0 || rep.degrees[0] != 2 || rep.sigma[0] != rep.norm_poly() {
        return Err(Error::ConventionViolation(format!("{}: first generator is not the norm", rep.name)));
    }
    if rep.degrees.contains(&1) {
        return Err(Error::ConventionViolation(format!("{}: has a nonzero fixed subspace", rep.name)));
    }
    Ok(())
}

/// Whether `m(c_1) ≥ 2r`. When it holds, every component is checked for
/// `m(c_i) ≥ r d_i`; a violation means the curve leaves the orbit space.
pub fn multiplicity_check(c: &OrbitCurve, r: usize) -> Result<bool> {
    check_convention(c)?;
    let holds = match c.components[0].order_of_vanishing() {
        Flatness::Exact(m) => m >= 2 * r,
        Flatness::FlatToTruncation => {
            if 2 * r > c.order() {
                return Err(Error::FlatComponent { needed: 2 * r });
            }
            true
        }
    };
    if holds {
        for (i, (comp, &d)) in c.components.iter().zip(&c.rep.degrees).enumerate() {
            if let Flatness::Exact(m) = comp.order_of_vanishing() {
                let expected = r * d as usize;
                if m < expected {
                    return Err(Error::InternalInconsistency { component: i + 1, found: m, expected });
                }
            }
        }
    }
    Ok(holds)
}

/// Replace `c` by `ĉ_i(t) = t^{-r d_i} c_i(t)` with `r = ⌊m(c_1)/2⌋`. Returns
/// `(0, c)` when `m(c_1) < 2`.
pub fn desingularize(c: &OrbitCurve) -> Result<(usize, OrbitCurve)> {
    check_convention(c)?;
    let m = match c.components[0].order_of_vanishing() {
        Flatness::Exact(m) => m,
        Flatness::FlatToTruncation => {
            return match c.components.iter().position(|j| !j.is_zero()) {
                Some(i) => Err(Error::FlatCurve { component: i + 1 }),
                None => Err(Error::AllFlat),
            };
        }
    };
    if m < 2 {
        return Ok((0, c.clone()));
    }
    let r = m / 2;
    let comps = shift_components(&c.components, &c.rep.degrees, r)?;
    Ok((r, OrbitCurve::new(c.rep.clone(), comps)?))
}

/// `t^{-r d_i} c_i`, with inconsistency reported per component.
pub(crate) fn shift_components(comps: &[Jet], degrees: &[u32], r: usize) -> Result<Vec<Jet>> {
    comps
        .iter()
        .zip(degrees)
        .enumerate()
        .map(|(i, (j, &d))| {
            let k = r * d as usize;
            j.shift_down(k).map_err(|e| match e {
                Error::NonDivisible { index, .. } => Error::InternalInconsistency { component: i + 1, found: index, expected: k },
                other => other,
            })
        })
        .collect()
}

/// Smallest order of vanishing among the components, `None` when all are flat.
pub fn min_vanishing(comps: &[Jet]) -> Option<usize> {
    comps.iter().filter_map(|j| j.order_of_vanishing().exact()).min()
}

pub(crate) fn constant_is_zero(comps: &[Jet]) -> bool {
    comps.iter().all(|j| j.constant_term().is_zero())
}
