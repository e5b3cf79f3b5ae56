//! Gram matrix of the generator differentials, its minors, and the
//! semidefiniteness description of the orbit space.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::MultiPoly;
use crate::rat::{self, Rational};
use crate::rep::Representation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramData {
    /// `entries[i][j] = ⟨dσ_i, dσ_j⟩`.
    pub entries: Vec<Vec<MultiPoly>>,
}

pub fn gram_matrix(rep: &Representation) -> GramData {
    let grads: Vec<Vec<MultiPoly>> = rep.sigma.iter().map(MultiPoly::gradient).collect();
    let n = rep.n();
    let mut entries = vec![vec![MultiPoly::zero(rep.dim); n]; n];
    for i in 0..n {
        for j in i..n {
            let mut acc = MultiPoly::zero(rep.dim);
            for ((gi, gj), w) in grads[i].iter().zip(&grads[j]).zip(&rep.metric) {
                acc = &acc + &(gi * gj).scale(&w.recip());
            }
            entries[j][i] = acc.clone();
            entries[i][j] = acc;
        }
    }
    GramData { entries }
}

/// All increasing `s`-subsets of `0..n`.
pub fn subsets(n: usize, s: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < s - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if s <= n {
        go(0, n, s, &mut Vec::new(), &mut out);
    }
    out
}

/// Determinant of a square matrix of polynomials by Laplace expansion.
pub fn poly_det(m: &[Vec<MultiPoly>], nvars: usize) -> MultiPoly {
    fn go(m: &[Vec<MultiPoly>], row: usize, cols: &[usize], nvars: usize) -> MultiPoly {
        if cols.is_empty() {
            return MultiPoly::one(nvars);
        }
        let mut acc = MultiPoly::zero(nvars);
        for (pos, &c) in cols.iter().enumerate() {
            if m[row][c].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = &m[row][c] * &go(m, row + 1, &rest, nvars);
            acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
    let cols: Vec<usize> = (0..m.len()).collect();
    go(m, 0, &cols, nvars)
}

fn check_indices(rows: &[usize], cols: &[usize], n: usize) -> Result<()> {
    if rows.len() != cols.len() {
        return Err(Error::ShapeMismatch(format!("{} rows and {} columns", rows.len(), cols.len())));
    }
    for idx in [rows, cols] {
        if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, nvars: n });
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ShapeMismatch("index sets must be strictly increasing".into()));
        }
    }
    Ok(())
}

/// `Δ_I^J = det(B_{I,J})` over `V`, expanded as
/// `Σ_K det(∂σ_I/∂x_K) det(∂σ_J/∂x_K) / Π_{k∈K} w_k`. Indices are 0-based.
pub fn delta_minor(rep: &Representation, rows: &[usize], cols: &[usize]) -> Result<MultiPoly> {
    check_indices(rows, cols, rep.n())?;
    let s = rows.len();
    let d = rep.dim;
    let jac: Vec<Vec<MultiPoly>> = rep.sigma.iter().map(MultiPoly::gradient).collect();
    let mut acc = MultiPoly::zero(d);
    for k in subsets(d, s) {
        let pick = |idx: &[usize]| -> Vec<Vec<MultiPoly>> {
            idx.iter().map(|&i| k.iter().map(|&c| jac[i][c].clone()).collect()).collect()
        };
        let a = poly_det(&pick(rows), d);
        if a.is_zero() {
            continue;
        }
        let b = poly_det(&pick(cols), d);
        let w: Rational = k.iter().map(|&c| rep.metric[c].clone()).product();
        acc = &acc + &(&a * &b).scale(&w.recip());
    }
    if let Some(deg) = acc.homogeneous_degree() {
        let expected: u32 = rows.iter().chain(cols).map(|&i| rep.degrees[i]).sum::<u32>() - 2 * s as u32;
        assert_eq!(deg, expected, "delta minor degree");
    }
    Ok(acc)
}

/// `Δ̃_I^J` over the generators, cached per representation.
pub fn delta_tilde(rep: &Representation, rows: &[usize], cols: &[usize]) -> Result<MultiPoly> {
    let key = (rows.to_vec(), cols.to_vec());
    if let Some(q) = rep.delta_cache.lock().expect("cache lock").get(&key) {
        return Ok(q.clone());
    }
    let delta = delta_minor(rep, rows, cols)?;
    let q = rep.rewrite_in_generators(&delta)?.poly;
    rep.delta_cache.lock().expect("cache lock").insert(key, q.clone());
    Ok(q)
}

/// `B̃` over the generators.
pub fn b_tilde(rep: &Representation) -> Result<Vec<Vec<MultiPoly>>> {
    let n = rep.n();
    (0..n).map(|i| (0..n).map(|j| delta_tilde(rep, &[i.min(j)], &[i.max(j)])).collect()).collect()
}

/// `Σ_K det A_K det B_K` over the `s`-column subsets, which equals `det(A Bᵀ)`.
pub fn cauchy_binet(a: &Matrix, b: &Matrix) -> Result<Rational> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let s = a.rows();
    let rows: Vec<usize> = (0..s).collect();
    let mut acc = Rational::zero();
    for k in subsets(a.cols(), s) {
        let da = a.select(&rows, &k).det()?;
        if da.is_zero() {
            continue;
        }
        acc += da * b.select(&rows, &k).det()?;
    }
    Ok(acc)
}

/// A point of the target space, exact or floating.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Rational(Vec<Rational>),
    Float(Vec<f64>),
}

impl Point {
    pub fn len(&self) -> usize {
        match self {
            Point::Rational(v) => v.len(),
            Point::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn eval_point(p: &MultiPoly, y: &Point) -> Result<f64> {
    match y {
        Point::Rational(v) => Ok(rat::to_f64(&p.eval(v)?)),
        Point::Float(v) => p.eval_f64(v),
    }
}

pub fn check_relations(rep: &Representation, y: &Point, tol: f64) -> bool {
    rep.relations.iter().all(|r| match y {
        Point::Rational(v) => r.eval(v).is_ok_and(|x| x.is_zero()),
        Point::Float(_) => eval_point(r, y).is_ok_and(|x| x.abs() <= tol),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Index of a relation that does not vanish.
    Relation(usize),
    /// A principal minor of `B̃(y)` that is negative.
    NegativeMinor { indices: Vec<usize>, value: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    Inside,
    Outside(Witness),
    /// Floating input whose smallest principal minor is negative but within tolerance.
    Boundary,
}

/// Decide `y ∈ σ(V)` through `B̃(y) ⪰ 0` on every principal minor plus the relations.
/// Rational points are decided exactly and `tol` is ignored.
pub fn membership_test(rep: &Representation, y: &Point, tol: f64) -> Result<Membership> {
    if y.len() != rep.n() {
        return Err(Error::DimensionMismatch { expected: rep.n(), got: y.len() });
    }
    for (i, r) in rep.relations.iter().enumerate() {
        let ok = match y {
            Point::Rational(v) => r.eval(v)?.is_zero(),
            Point::Float(_) => eval_point(r, y)?.abs() <= tol,
        };
        if !ok {
            return Ok(Membership::Outside(Witness::Relation(i)));
        }
    }
    let bt = b_tilde(rep)?;
    let n = rep.n();
    match y {
        Point::Rational(v) => {
            let mut b = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    b[(i, j)] = bt[i][j].eval(v)?;
                }
            }
            for s in 1..=n {
                for idx in subsets(n, s) {
                    let m = b.select(&idx, &idx).det()?;
                    if m.is_negative() {
                        return Ok(Membership::Outside(Witness::NegativeMinor {
                            indices: idx,
                            value: rat::to_f64(&m),
                        }));
                    }
                }
            }
            Ok(Membership::Inside)
        }
        Point::Float(v) => {
            let b: Vec<Vec<f64>> = bt
                .iter()
                .map(|row| row.iter().map(|q| q.eval_f64(v)).collect::<Result<_>>())
                .collect::<Result<_>>()?;
            let mut boundary = false;
            for s in 1..=n {
                for idx in subsets(n, s) {
                    let m = det_f64(&idx.iter().map(|&i| idx.iter().map(|&j| b[i][j]).collect()).collect::<Vec<Vec<f64>>>());
                    if m < -tol {
                        return Ok(Membership::Outside(Witness::NegativeMinor { indices: idx, value: m }));
                    }
                    if m < 0.0 {
                        boundary = true;
                    }
                }
            }
            Ok(if boundary { Membership::Boundary } else { Membership::Inside })
        }
    }
}

fn det_f64(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            let (top, rest) = a.split_at_mut(i);
            for (x, y) in rest[0][c..n].iter_mut().zip(&top[c][c..n]) {
                *x -= f * y;
            }
        }
    }
    det
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanReport {
    pub gradient_rank: usize,
    /// Dimension of the isotropy-fixed part of the normal space.
    pub fixed_normal_dim: usize,
    pub isotropy_order: usize,
    pub agrees: bool,
}

/// Compare the span of the generator gradients at `v` with the isotropy-fixed
/// normal directions. Finite groups only; the normal space is all of `V`.
pub fn gradient_span_check(rep: &Representation, v: &[Rational]) -> Result<SpanReport> {
    let crate::rep::Group::Finite { elements } = &rep.group else {
        return Err(Error::NotFinite);
    };
    let gradient_rank = rep.jacobian_at(v)?.rank();
    let stab: Vec<&Matrix> = elements.iter().filter(|g| g.mul_vec(v) == v).collect();
    let id = Matrix::identity(rep.dim);
    let rows: Vec<Vec<Rational>> = stab.iter().flat_map(|g| g.sub(&id).to_rows()).collect();
    let fixed_normal_dim = if rows.is_empty() {
        rep.dim
    } else {
        rep.dim - Matrix::from_rows(rows).expect("square").rank()
    };
    Ok(SpanReport {
        gradient_rank,
        fixed_normal_dim,
        isotropy_order: stab.len(),
        agrees: gradient_rank == fixed_normal_dim,
    })
}
