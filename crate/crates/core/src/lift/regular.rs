//! Lifting through regular points with the implicit function theorem.

use std::sync::Arc;

use num::Zero;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg::{self, Matrix};
use crate::rat::Rational;
use crate::rep::Representation;

use super::curve::{LiftCurve, OrbitCurve};

/// Basis of the metric complement of the orbit tangent at `v`.
pub fn normal_complement(rep: &Representation, v: &[Rational]) -> Vec<Vec<Rational>> {
    let tangents: Vec<Vec<Rational>> =
        rep.tangent_vectors(v).into_iter().filter(|t| t.iter().any(|c| !c.is_zero())).collect();
    if tangents.is_empty() {
        return Matrix::identity(rep.dim).to_rows();
    }
    let rows: Vec<Vec<Rational>> =
        tangents.iter().map(|t| t.iter().zip(&rep.metric).map(|(a, w)| a * w).collect()).collect();
    let ns = Matrix::from_rows(rows).expect("rectangular").nullspace();
    linalg::orthogonalize(&ns, &rep.metric)
}

/// Least-squares solution through the normal equations.
fn least_squares(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let at = a.transpose();
    at.mul(a).ok()?.solve(&at.mul_vec(b))
}

/// Order-by-order solution of `σ(v0 + N z(t)) = c(t)` with `z(0) = 0`, where
/// `Dσ(v0) N` is injective. With `exact = false` the base point is only
/// approximate and each order is solved in the least-squares sense.
pub(crate) fn solve_affine(
    rep: &Representation,
    c: &[Jet],
    v0: &[Rational],
    basis: &[Vec<Rational>],
    exact: bool,
) -> Result<Vec<Jet>> {
    let order = c.iter().map(Jet::order).min().unwrap_or(0);
    let d = rep.dim;
    let q = basis.len();
    let jac = rep.jacobian_at(v0)?;
    let jn = jac.mul(&Matrix::from_columns(d, basis))?;
    let rank = jn.rank();
    if rank < q {
        return Err(Error::SingularPoint { rank, needed: q });
    }
    if exact && rep.eval_sigma(v0)? != c.iter().map(|j| j.constant_term().clone()).collect::<Vec<_>>() {
        return Err(Error::InconsistentCurve { order: 0 });
    }
    let mut coeffs: Vec<Vec<Rational>> = v0.iter().map(|x| vec![x.clone()]).collect();
    for k in 1..=order {
        for cs in coeffs.iter_mut() {
            cs.push(Rational::zero());
        }
        let v: Vec<Jet> = coeffs.iter().map(|cs| Jet::new(cs.clone())).collect();
        let s = rep.sigma_at_jets(&v)?;
        let residual: Vec<Rational> = c.iter().zip(&s).map(|(a, b)| a.coeff(k) - b.coeff(k)).collect();
        let z = match jn.solve(&residual) {
            Some(z) => z,
            None if !exact => least_squares(&jn, &residual).ok_or(Error::InconsistentCurve { order: k })?,
            None => return Err(Error::InconsistentCurve { order: k }),
        };
        for (a, b) in z.iter().zip(basis) {
            if a.is_zero() {
                continue;
            }
            for i in 0..d {
                coeffs[i][k] += a * &b[i];
            }
        }
    }
    Ok(coeffs.into_iter().map(Jet::new).collect())
}

/// Lift through a regular preimage `v0` of `c(0)`.
pub fn local_lift_regular(c: &OrbitCurve, v0: &[Rational]) -> Result<LiftCurve> {
    lift_regular_jets(&c.rep, &c.components, v0, true).map(|comps| LiftCurve::new(c.rep.clone(), comps, Rational::zero()))
}

pub(crate) fn lift_regular_jets(rep: &Arc<Representation>, c: &[Jet], v0: &[Rational], exact: bool) -> Result<Vec<Jet>> {
    if v0.len() != rep.dim {
        return Err(Error::DimensionMismatch { expected: rep.dim, got: v0.len() });
    }
    let rank = rep.jacobian_at(v0)?.rank();
    if rank < rep.codim_regular() {
        return Err(Error::SingularPoint { rank, needed: rep.codim_regular() });
    }
    let basis = normal_complement(rep, v0);
    solve_affine(rep, c, v0, &basis, exact)
}
