//! Orthogonalising jet vectors without dividing by series that vanish at zero.

use crate::error::{Error, Result};
use crate::invariant::subsets;
use crate::jet::Jet;

use super::multiplicity::min_vanishing;

/// Euclidean inner product of jet vectors.
pub fn inner(a: &[Jet], b: &[Jet]) -> Jet {
    let order = a.iter().chain(b).map(Jet::order).min().unwrap_or(0);
    a.iter().zip(b).fold(Jet::zero(order), |acc, (x, y)| &acc + &(x * y))
}

fn jet_det(m: &[Vec<Jet>], order: usize) -> Jet {
    fn go(m: &[Vec<Jet>], row: usize, cols: &[usize], order: usize) -> Jet {
        if cols.is_empty() {
            return Jet::one(order);
        }
        let mut acc = Jet::zero(order);
        for (pos, &c) in cols.iter().enumerate() {
            if m[row][c].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = &m[row][c] * &go(m, row + 1, &rest, order);
            acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
    let cols: Vec<usize> = (0..m.len()).collect();
    go(m, 0, &cols, order)
}

/// Coordinates of `x_1 ∧ … ∧ x_k`: every `k × k` minor of the matrix with
/// columns `x_i`, indexed by the increasing row subsets.
pub fn wedge(xs: &[Vec<Jet>]) -> Vec<Jet> {
    let k = xs.len();
    let dim = xs.first().map_or(0, Vec::len);
    let order = xs.iter().flatten().map(Jet::order).min().unwrap_or(0);
    subsets(dim, k)
        .into_iter()
        .map(|rows| {
            let m: Vec<Vec<Jet>> = rows.iter().map(|&r| xs.iter().map(|x| x[r].clone()).collect()).collect();
            jet_det(&m, order)
        })
        .collect()
}

/// `x̄_1 = x_1`, `x̄_{k+1} = x_{k+1} − Σ_{i≤k} ⟨y_i, x_{k+1}⟩ ⟨y_i, y_i⟩⁻¹ y_i`
/// with `x̄_i = t^{n_i} y_i` and `y_i(0) ≠ 0`. The outputs are pairwise
/// orthogonal and span the same flags of wedges as the inputs.
pub fn gram_schmidt_flat(xs: &[Vec<Jet>]) -> Result<Vec<Vec<Jet>>> {
    for (i, x) in xs.iter().enumerate() {
        if x.iter().all(Jet::is_zero) {
            return Err(Error::FlatVector(i + 1));
        }
    }
    if !xs.is_empty() && wedge(xs).iter().all(Jet::is_zero) {
        return Err(Error::FlatWedge);
    }
    let mut bars: Vec<Vec<Jet>> = Vec::with_capacity(xs.len());
    let mut ys: Vec<(Vec<Jet>, Jet)> = Vec::with_capacity(xs.len());
    for (i, x) in xs.iter().enumerate() {
        let mut bar = x.clone();
        for (y, inv) in &ys {
            let coef = &inner(y, x) * inv;
            bar = bar.iter().zip(y).map(|(b, yc)| b - &(&coef * yc)).collect();
        }
        let n = min_vanishing(&bar).ok_or(Error::FlatVector(i + 1))?;
        let y: Vec<Jet> = bar.iter().map(|j| j.shift_down(n)).collect::<Result<_>>()?;
        let inv = inner(&y, &y).inverse()?;
        bars.push(bar);
        ys.push((y, inv));
    }
    Ok(bars)
}
