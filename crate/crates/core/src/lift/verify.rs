use num::Zero;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::rat::{self, Rational};

use super::curve::{LiftCurve, OrbitCurve};

/// Largest `k` with `σ∘c̄ − c ≡ 0` through `t^k`; `None` when even the constant terms differ.
pub fn verify_lift(lift: &LiftCurve, c: &OrbitCurve) -> Result<Option<usize>> {
    let diff = residual(lift, c)?;
    Ok(agreement(&diff, |q| q.is_zero()))
}

/// Same as [`verify_lift`] with coefficients below `tol` counted as zero.
pub fn verify_lift_approx(lift: &LiftCurve, c: &OrbitCurve, tol: f64) -> Result<Option<usize>> {
    let diff = residual(lift, c)?;
    Ok(agreement(&diff, |q| rat::to_f64(q).abs() <= tol))
}

/// `σ∘c̄ − c` at the common order.
pub fn residual(lift: &LiftCurve, c: &OrbitCurve) -> Result<Vec<Jet>> {
    if c.rep.n() != lift.rep.n() {
        return Err(Error::DimensionMismatch { expected: c.rep.n(), got: lift.rep.n() });
    }
    let s = lift.sigma()?;
    Ok(s.iter().zip(&c.components).map(|(a, b)| a - b).collect())
}

fn agreement(diff: &[Jet], is_zero: impl Fn(&Rational) -> bool) -> Option<usize> {
    let order = diff.iter().map(Jet::order).min().unwrap_or(0);
    let first_bad = (0..=order).find(|&k| diff.iter().any(|j| !is_zero(j.coeff(k))));
    match first_bad {
        None => Some(order),
        Some(0) => None,
        Some(k) => Some(k - 1),
    }
}
