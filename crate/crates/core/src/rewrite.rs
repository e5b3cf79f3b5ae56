//! Expressing invariant polynomials in terms of a generator system.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{Exponent, MultiPoly};
use crate::rat::Rational;

/// A polynomial over the generator coordinates `y_1 … y_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorExpression {
    pub poly: MultiPoly,
}

#[derive(Clone, Debug)]
pub enum Rewriter {
    /// No scheme; every request fails.
    None,
    Symmetric(SymmetricScheme),
    Tables(TableScheme),
}

/// Invariants of a representation that embeds linearly and equivariantly into
/// the permutation representation of `S_k` on `R^k`.
#[derive(Clone, Debug)]
pub struct SymmetricScheme {
    pub ambient: usize,
    /// `v = project · x`, a `dim × ambient` matrix.
    pub project: Matrix,
    /// `x = embed · v`, an `ambient × dim` matrix.
    pub embed: Matrix,
    /// `e_k` restricted to the representation, written over the generators.
    pub elementary: Vec<MultiPoly>,
}

/// Tabulated pairs `(p over x, q over y)` with `q∘σ = p`. Anything not in the
/// table is solved in the graded span of generator monomials.
#[derive(Clone, Debug, Default)]
pub struct TableScheme {
    pub entries: Vec<(MultiPoly, MultiPoly)>,
}

impl Rewriter {
    /// Find `q` with `q∘σ = p`. The caller is responsible for invariance and
    /// for verifying the result.
    pub fn rewrite(&self, p: &MultiPoly, sigma: &[MultiPoly], degrees: &[u32]) -> Result<MultiPoly> {
        let n = sigma.len();
        if p.is_constant() {
            return Ok(MultiPoly::constant(n, p.constant_term()));
        }
        match self {
            Rewriter::None => Err(Error::RewriterUnavailable(p.to_string())),
            Rewriter::Symmetric(s) => s.rewrite(p),
            Rewriter::Tables(t) => {
                for (i, s) in sigma.iter().enumerate() {
                    if let Some(l) = proportion(p, s) {
                        return Ok(MultiPoly::var(n, i).scale(&l));
                    }
                }
                for (src, q) in &t.entries {
                    if let Some(l) = proportion(p, src) {
                        return Ok(q.scale(&l));
                    }
                }
                graded_solve(p, sigma, degrees)
            }
        }
    }
}

/// `Some(λ)` with `p = λ q`, when it exists.
fn proportion(p: &MultiPoly, q: &MultiPoly) -> Option<Rational> {
    if q.is_zero() || p.num_terms() != q.num_terms() {
        return None;
    }
    let (e, c) = q.leading_term()?;
    let l = p.coeff(e) / c;
    (q.scale(&l) == *p).then_some(l)
}

impl SymmetricScheme {
    pub fn rewrite(&self, p: &MultiPoly) -> Result<MultiPoly> {
        let rows = self.project.to_rows();
        let amb = p.linear_substitute(&rows)?;
        let q = elementary_elimination(&amb)?;
        q.compose(&self.elementary)
    }
}

/// Elementary symmetric polynomials `e_1 … e_k` over `k` variables.
pub fn elementary_symmetric(k: usize) -> Vec<MultiPoly> {
    // coefficients of Π (1 + x_i s)
    let mut acc = vec![MultiPoly::one(k)];
    for i in 0..k {
        let xi = MultiPoly::var(k, i);
        let mut next = acc.clone();
        next.push(MultiPoly::zero(k));
        for j in 0..acc.len() {
            next[j + 1] = &next[j + 1] + &(&acc[j] * &xi);
        }
        acc = next;
    }
    acc.remove(0);
    acc
}

/// Write a symmetric polynomial in `k` variables over `e_1 … e_k` by repeatedly
/// cancelling the lexicographic leading term.
pub fn elementary_elimination(f: &MultiPoly) -> Result<MultiPoly> {
    let k = f.nvars();
    let e = elementary_symmetric(k);
    let mut cache: HashMap<Exponent, MultiPoly> = HashMap::new();
    let mut rest = f.clone();
    let mut out = MultiPoly::zero(k);
    let mut guard = 0usize;
    while let Some((a, c)) = rest.leading_term().map(|(a, c)| (a.clone(), c.clone())) {
        if a.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotInvariant(format!("leading monomial {a:?} is not a partition")));
        }
        let beta: Exponent = (0..k).map(|i| a[i] - a.get(i + 1).copied().unwrap_or(0)).collect();
        let prod = cache
            .entry(beta.clone())
            .or_insert_with(|| {
                beta.iter()
                    .enumerate()
                    .fold(MultiPoly::one(k), |acc, (i, &b)| &acc * &e[i].pow(b))
            })
            .clone();
        rest = &rest - &prod.scale(&c);
        out = &out + &MultiPoly::monomial(k, beta, c);
        guard += 1;
        if guard > 1_000_000 {
            return Err(Error::NotInvariant("elimination did not terminate".into()));
        }
    }
    Ok(out)
}

/// Solve `p = Σ q_α σ^α` over generator monomials of matching weighted degree.
fn graded_solve(p: &MultiPoly, sigma: &[MultiPoly], degrees: &[u32]) -> Result<MultiPoly> {
    let n = sigma.len();
    let mut by_degree: BTreeMap<u32, MultiPoly> = BTreeMap::new();
    for (e, c) in p.terms() {
        let d: u32 = e.iter().sum();
        let slot = by_degree.entry(d).or_insert_with(|| MultiPoly::zero(p.nvars()));
        *slot = &*slot + &MultiPoly::monomial(p.nvars(), e.clone(), c.clone());
    }
    let mut out = MultiPoly::zero(n);
    let mut cache: HashMap<Exponent, MultiPoly> = HashMap::new();
    for (d, part) in by_degree {
        let alphas = weighted_compositions(degrees, d);
        if alphas.is_empty() {
            return Err(Error::RewriterUnavailable(format!("no generator monomial of degree {d}")));
        }
        let cols: Vec<MultiPoly> = alphas
            .iter()
            .map(|a| {
                cache
                    .entry(a.clone())
                    .or_insert_with(|| {
                        a.iter()
                            .enumerate()
                            .fold(MultiPoly::one(p.nvars()), |acc, (i, &k)| &acc * &sigma[i].pow(k))
                    })
                    .clone()
            })
            .collect();
        let monos: BTreeSet<Exponent> = cols
            .iter()
            .flat_map(|c| c.terms().map(|(e, _)| e.clone()))
            .chain(part.terms().map(|(e, _)| e.clone()))
            .collect();
        let monos: Vec<Exponent> = monos.into_iter().collect();
        let mut a = Matrix::zeros(monos.len(), cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, m) in monos.iter().enumerate() {
                a[(i, j)] = c.coeff(m);
            }
        }
        let b: Vec<Rational> = monos.iter().map(|m| part.coeff(m)).collect();
        let x = a.solve(&b).ok_or_else(|| {
            Error::RewriterUnavailable(format!("degree {d} part is outside the generator span"))
        })?;
        for (alpha, xi) in alphas.into_iter().zip(x) {
            if !xi.is_zero() {
                out = &out + &MultiPoly::monomial(n, alpha, xi);
            }
        }
    }
    Ok(out)
}

/// All exponent vectors `α` with `Σ α_i d_i = total`.
pub fn weighted_compositions(degrees: &[u32], total: u32) -> Vec<Exponent> {
    fn go(degrees: &[u32], i: usize, left: u32, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if i == degrees.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = degrees[i].max(1);
        for k in 0..=left / d {
            cur[i] = k;
            go(degrees, i + 1, left - k * d, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if degrees.contains(&0) {
        return out;
    }
    go(degrees, 0, total, &mut vec![0; degrees.len()], &mut out);
    out
}

/// Symmetric scheme of the permutation representation itself.
pub fn symmetric_full(k: usize) -> SymmetricScheme {
    SymmetricScheme {
        ambient: k,
        project: Matrix::identity(k),
        embed: Matrix::identity(k),
        elementary: (0..k).map(|i| MultiPoly::var(k, i)).collect(),
    }
}

/// `(-1)^k`.
pub fn alternating_sign(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}
