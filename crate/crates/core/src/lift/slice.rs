//! Local models `σ(v + N z) = l(τ(z))` at singular points.

use std::sync::Arc;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg::Matrix;
use crate::poly::MultiPoly;
use crate::rat::{self, Rational};
use crate::rep::{Representation, SliceBlock, SliceData};
use crate::rewrite::alternating_sign;

/// Slice of the permutation representation of `S_k` at a point with the given
/// clusters `(value, size)`, values non-increasing. The normal space is all of
/// `R^k`, blocks are the permutation representations of the clusters and `l`
/// expands `Π_j Q_j(x − a_j)` where `Q_j` has the block elementary values as
/// signed coefficients.
pub fn symmetric_slice(clusters: &[(Rational, usize)], full: impl Fn(usize) -> Arc<Representation>) -> SliceData {
    let k: usize = clusters.iter().map(|c| c.1).sum();
    let base_point: Vec<Rational> =
        clusters.iter().flat_map(|(a, m)| std::iter::repeat_n(a.clone(), *m)).collect();
    let mut blocks = Vec::new();
    let mut offset = 0;
    for (_, m) in clusters {
        blocks.push(SliceBlock { rep: full(*m), offset });
        offset += m;
    }
    // univariate polynomial in x, coefficients (ascending) over the τ variables
    let nt = k;
    let mut prod: Vec<MultiPoly> = vec![MultiPoly::one(nt)];
    for ((a, m), b) in clusters.iter().zip(&blocks) {
        // Q(z) = Σ_i (-1)^i τ_i z^{m-i}, τ_0 = 1, then z = x - a
        let mut q: Vec<MultiPoly> = vec![MultiPoly::zero(nt); m + 1];
        for i in 0..=*m {
            let coef = if i == 0 { MultiPoly::one(nt) } else { MultiPoly::var(nt, b.offset + i - 1) };
            let coef = coef.scale(&alternating_sign(i));
            // (x - a)^{m-i} = Σ_p binom(m-i, p) x^p (-a)^{m-i-p}
            let e = m - i;
            for (p, qp) in q.iter_mut().enumerate().take(e + 1) {
                let c = binom(e, p) * num::pow(-a.clone(), e - p);
                *qp = &*qp + &coef.scale(&c);
            }
        }
        prod = poly_mul(&prod, &q, nt);
    }
    // l_i = (-1)^i coefficient of x^{k-i}
    let embed_l = (1..=k).map(|i| prod[k - i].scale(&alternating_sign(i))).collect();
    SliceData { base_point, normal_basis: Matrix::identity(k).to_rows(), blocks, embed_l }
}

fn binom(n: usize, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * rat::int((n - i) as i64) / rat::int((i + 1) as i64);
    }
    acc
}

fn poly_mul(a: &[MultiPoly], b: &[MultiPoly], nt: usize) -> Vec<MultiPoly> {
    let mut out = vec![MultiPoly::zero(nt); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if !x.is_zero() && !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

/// Jacobian of `l` at `τ = 0`.
pub fn embed_jacobian(slice: &SliceData) -> Result<Matrix> {
    let nt = slice.tau_len();
    let zero = vec![Rational::zero(); nt];
    let mut j = Matrix::zeros(slice.embed_l.len(), nt);
    for (i, l) in slice.embed_l.iter().enumerate() {
        for k in 0..nt {
            j[(i, k)] = l.partial(k)?.eval(&zero)?;
        }
    }
    Ok(j)
}

/// Solve `l(τ(t)) = c(t)` with `τ(0) = 0` order by order. `exact = false`
/// tolerates an approximate base point.
pub fn solve_slice_coordinates(c: &[Jet], slice: &SliceData, exact: bool) -> Result<Vec<Jet>> {
    let nt = slice.tau_len();
    let order = c.iter().map(Jet::order).min().unwrap_or(0);
    let jac = embed_jacobian(slice)?;
    let rank = jac.rank();
    if rank < nt {
        return Err(Error::SliceDegenerate { rank, needed: nt });
    }
    let zero = vec![Rational::zero(); nt];
    if exact {
        for (l, cj) in slice.embed_l.iter().zip(c) {
            if l.eval(&zero)? != *cj.constant_term() {
                return Err(Error::InconsistentCurve { order: 0 });
            }
        }
    }
    let mut coeffs: Vec<Vec<Rational>> = vec![vec![Rational::zero()]; nt];
    for k in 1..=order {
        for cs in coeffs.iter_mut() {
            cs.push(Rational::zero());
        }
        let tau: Vec<Jet> = coeffs.iter().map(|cs| Jet::new(cs.clone())).collect();
        let residual: Vec<Rational> = slice
            .embed_l
            .iter()
            .zip(c)
            .map(|(l, cj)| Ok(cj.coeff(k) - l.eval_at_jets(&tau)?.coeff(k)))
            .collect::<Result<_>>()?;
        let z = match jac.solve(&residual) {
            Some(z) => z,
            None if !exact => {
                let at = jac.transpose();
                at.mul(&jac)?.solve(&at.mul_vec(&residual)).ok_or(Error::InconsistentCurve { order: k })?
            }
            None => return Err(Error::InconsistentCurve { order: k }),
        };
        for (cs, zi) in coeffs.iter_mut().zip(z) {
            cs[k] = zi;
        }
    }
    Ok(coeffs.into_iter().map(Jet::new).collect())
}

/// `v + N z` from normal coordinates.
pub fn assemble_from_slice(slice: &SliceData, z: &[Jet], order: usize) -> Vec<Jet> {
    let d = slice.base_point.len();
    (0..d)
        .map(|i| {
            let mut acc = Jet::constant(slice.base_point[i].clone(), order);
            for (zk, b) in z.iter().zip(&slice.normal_basis) {
                if !b[i].is_zero() {
                    acc = &acc + &zk.scale(&b[i]);
                }
            }
            acc
        })
        .collect()
}
