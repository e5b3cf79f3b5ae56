//! Matching local lifts on overlapping intervals by group elements.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg::Matrix;
use crate::rat::{self, Rational};
use crate::rep::{Group, Representation};

use super::curve::LiftCurve;

#[derive(Clone, Debug)]
pub struct Piece {
    /// Closed parameter interval on which the lift is used.
    pub interval: (Rational, Rational),
    pub lift: LiftCurve,
}

#[derive(Clone, Debug)]
pub struct GluedLift {
    /// Input pieces after alignment.
    pub pieces: Vec<Piece>,
    /// The element applied to each input piece; the first is the identity.
    pub elements: Vec<Matrix>,
    /// Whether each alignment was decided on exact jets.
    pub exact: Vec<bool>,
}

impl GluedLift {
    /// The aligned piece whose interval contains `t`, first match wins.
    pub fn piece_at(&self, t: &Rational) -> Option<&Piece> {
        self.pieces.iter().find(|p| &p.interval.0 <= t && t <= &p.interval.1)
    }
}

const NUMERIC_TOL: f64 = 1e-6;

/// Align consecutive pieces: on each overlap, find `g` with `g · (piece k)`
/// equal to the already aligned piece `k − 1` at the overlap midpoint. Finite
/// groups enumerate their elements; the circle family uses the rotation that
/// takes one leading coefficient to the other.
pub fn glue(pieces: &[Piece], rep: &Representation) -> Result<GluedLift> {
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    let mut elements = Vec::with_capacity(pieces.len());
    let mut exact = Vec::with_capacity(pieces.len());
    for (k, p) in pieces.iter().enumerate() {
        if k == 0 {
            out.push(p.clone());
            elements.push(Matrix::identity(rep.dim));
            exact.push(true);
            continue;
        }
        let prev = &out[k - 1];
        let lo = (&prev.interval.0).max(&p.interval.0).clone();
        let hi = (&prev.interval.1).min(&p.interval.1).clone();
        if lo > hi {
            return Err(Error::NoOverlap(k - 1, k));
        }
        let mid = (&lo + &hi) / rat::int(2);
        let target = prev.lift.recentered(&mid);
        let cand = p.lift.recentered(&mid);
        let order = target.order().min(cand.order());
        let target = target.truncate(order);
        let cand = cand.truncate(order);
        let (g, was_exact) = match &rep.group {
            Group::Finite { elements } => match_finite(elements, &target, &cand).ok_or(Error::NoMatchingElement(k))?,
            Group::Continuous { family, tangents, .. } if family == "circle" && tangents.len() == 1 => {
                match_circle(&tangents[0], rep, &target, &cand, k)?
            }
            Group::Continuous { .. } => return Err(Error::NotFinite),
        };
        out.push(Piece { interval: p.interval.clone(), lift: p.lift.apply(&g) });
        elements.push(g);
        exact.push(was_exact);
    }
    Ok(GluedLift { pieces: out, elements, exact })
}

fn match_finite(elements: &[Matrix], target: &LiftCurve, cand: &LiftCurve) -> Option<(Matrix, bool)> {
    if let Some(g) = elements.iter().find(|g| cand.apply(g).components == target.components) {
        return Some((g.clone(), true));
    }
    // recentred truncated series only agree approximately; compare low coefficients
    let depth = target.order().min(2);
    let err = |g: &Matrix| -> f64 {
        let moved = cand.apply(g);
        moved
            .components
            .iter()
            .zip(&target.components)
            .flat_map(|(a, b)| {
                (0..=depth).map(move |i| {
                    let x = rat::to_f64(a.coeff(i));
                    let y = rat::to_f64(b.coeff(i));
                    (x - y).abs() / (1.0 + y.abs())
                })
            })
            .fold(0.0, f64::max)
    };
    elements
        .iter()
        .map(|g| (g, err(g)))
        .filter(|(_, e)| *e <= NUMERIC_TOL)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(g, _)| (g.clone(), false))
}

/// First coefficient vector of the lift that is not zero.
fn leading_vector(l: &LiftCurve) -> Option<Vec<Rational>> {
    (0..=l.order())
        .map(|i| l.components.iter().map(|j| j.coeff(i).clone()).collect::<Vec<_>>())
        .find(|v| v.iter().any(|c| !c.is_zero()))
}

fn match_circle(j: &Matrix, rep: &Representation, target: &LiftCurve, cand: &LiftCurve, k: usize) -> Result<(Matrix, bool)> {
    let id = Matrix::identity(rep.dim);
    if j.mul(j)?.add(&id) != Matrix::zeros(rep.dim, rep.dim) {
        return Err(Error::NotFinite);
    }
    let (Some(a), Some(b)) = (leading_vector(cand), leading_vector(target)) else {
        return Err(Error::FlatOverlap(k));
    };
    let dot = rep.inner(&a, &b);
    let cross = rep.inner(&j.mul_vec(&a), &b);
    let scale2 = rep.inner(&a, &a) * rep.inner(&b, &b);
    let rotation = |c: &Rational, s: &Rational| id_scaled(rep.dim, c).add(&scaled(j, s));
    if let Some(norm) = rat::sqrt_exact(&scale2) {
        let (c, s) = (&dot / &norm, &cross / &norm);
        let g = rotation(&c, &s);
        if cand.apply(&g).components == target.components {
            return Ok((g, true));
        }
    }
    // rational point on the unit circle close to the angle
    let theta = rat::to_f64(&cross).atan2(rat::to_f64(&dot));
    let (flip, theta) = if theta.abs() > std::f64::consts::FRAC_PI_2 {
        (true, theta - std::f64::consts::PI * theta.signum())
    } else {
        (false, theta)
    };
    let half = (theta / 2.0).tan();
    let eps = 1e-12;
    let u = rat::simplest_between(&f64_to_rational(half - eps), &f64_to_rational(half + eps));
    let den = Rational::one() + &u * &u;
    let c = (Rational::one() - &u * &u) / &den;
    let s = (&u * rat::int(2)) / &den;
    let mut g = rotation(&c, &s);
    if flip {
        g = scaled(&g, &-Rational::one());
    }
    let exact = cand.apply(&g).components == target.components;
    Ok((g, exact))
}

fn id_scaled(n: usize, c: &Rational) -> Matrix {
    Matrix::diagonal(&vec![c.clone(); n])
}

fn scaled(m: &Matrix, s: &Rational) -> Matrix {
    let rows: Vec<Vec<Rational>> = m.to_rows().into_iter().map(|r| r.into_iter().map(|x| x * s).collect()).collect();
    Matrix::from_rows(rows).expect("rectangular")
}

fn f64_to_rational(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

/// Largest absolute difference between two jets' coefficients, as a float.
pub fn jet_distance(a: &[Jet], b: &[Jet]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| {
            let n = x.order().min(y.order());
            (0..=n).map(move |i| rat::to_f64(&(x.coeff(i) - y.coeff(i)).abs()))
        })
        .fold(0.0, f64::max)
}
