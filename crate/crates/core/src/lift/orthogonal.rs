use crate::error::Result;
use crate::jet::Jet;
use crate::rat::{self, Rational};
use crate::rep::Group;

use super::curve::LiftCurve;

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalityReport {
    /// `(t, ⟨c̄'(t), ξ_i c̄(t)⟩ for each tangent generator)`.
    pub samples: Vec<(Rational, Vec<f64>)>,
    pub orthogonal: bool,
    /// Finite groups have no orbit directions, so the check holds trivially.
    pub vacuous: bool,
}

/// Evaluate `⟨c̄'(t), ξ c̄(t)⟩` at the sample parameters (absolute, not
/// relative to the lift center). Values are computed exactly on the stored
/// jets and reported as floats.
pub fn orthogonality_check(lift: &LiftCurve, samples: &[Rational], tol: f64) -> Result<OrthogonalityReport> {
    let rep = &lift.rep;
    let Group::Continuous { tangents, .. } = &rep.group else {
        return Ok(OrthogonalityReport { samples: Vec::new(), orthogonal: true, vacuous: true });
    };
    let deriv: Vec<Jet> = lift.components.iter().map(Jet::derivative).collect();
    let mut out = Vec::new();
    let mut orthogonal = true;
    for t in samples {
        let s = t - &lift.center;
        let v: Vec<Rational> = lift.components.iter().map(|j| j.eval_at(&s)).collect();
        let dv: Vec<Rational> = deriv.iter().map(|j| j.eval_at(&s)).collect();
        let vals: Vec<f64> = tangents
            .iter()
            .map(|xi| rat::to_f64(&rep.inner(&dv, &xi.mul_vec(&v))))
            .collect();
        if vals.iter().any(|x| x.abs() > tol) {
            orthogonal = false;
        }
        out.push((t.clone(), vals));
    }
    Ok(OrthogonalityReport { samples: out, orthogonal, vacuous: false })
}
