use std::sync::Arc;

use num::Zero;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg::Matrix;
use crate::rat::Rational;
use crate::rep::Representation;

/// A curve in the orbit space, one jet per generator.
#[derive(Clone, Debug)]
pub struct OrbitCurve {
    pub components: Vec<Jet>,
    pub rep: Arc<Representation>,
    /// Full polynomial coefficients when the curve is known to be polynomial.
    source: Option<Vec<Vec<Rational>>>,
}

impl OrbitCurve {
    /// Jets are cut to their common order.
    pub fn new(rep: Arc<Representation>, components: Vec<Jet>) -> Result<Self> {
        if components.len() != rep.n() {
            return Err(Error::DimensionMismatch { expected: rep.n(), got: components.len() });
        }
        let order = components.iter().map(Jet::order).min().unwrap_or(0);
        let components = components.iter().map(|j| j.truncate(order)).collect();
        Ok(OrbitCurve { components, rep, source: None })
    }

    /// Polynomial components given by ascending coefficients, viewed at `order`.
    pub fn from_polynomials(rep: Arc<Representation>, coeffs: Vec<Vec<Rational>>, order: usize) -> Result<Self> {
        if coeffs.len() != rep.n() {
            return Err(Error::DimensionMismatch { expected: rep.n(), got: coeffs.len() });
        }
        let components = coeffs.iter().map(|c| Jet::from_poly(c, order)).collect();
        Ok(OrbitCurve { components, rep, source: Some(coeffs) })
    }

    pub fn order(&self) -> usize {
        self.components.first().map_or(0, Jet::order)
    }

    pub fn is_polynomial(&self) -> bool {
        self.source.is_some()
    }

    pub fn polynomials(&self) -> Option<&[Vec<Rational>]> {
        self.source.as_deref()
    }

    /// Identically zero: exactly for polynomial curves, otherwise to truncation.
    pub fn is_zero(&self) -> bool {
        match &self.source {
            Some(src) => src.iter().all(|c| c.iter().all(Zero::is_zero)),
            None => self.components.iter().all(Jet::is_zero),
        }
    }

    pub fn value_at_zero(&self) -> Vec<Rational> {
        self.components.iter().map(|j| j.constant_term().clone()).collect()
    }

    /// The curve `s ↦ c(t0 + s)` at the given order. Exact for polynomial
    /// curves; jets can only be truncated, and re-expanding them away from
    /// zero is exact only when their stored polynomial is the curve.
    pub fn at(&self, t0: &Rational, order: usize) -> Result<OrbitCurve> {
        match &self.source {
            Some(src) => {
                let components = src
                    .iter()
                    .map(|c| {
                        let len = c.len().max(1);
                        Jet::from_poly(c, len - 1).recenter(t0).coeffs().to_vec()
                    })
                    .map(|c| Jet::from_poly(&c, order))
                    .collect();
                Ok(OrbitCurve { components, rep: self.rep.clone(), source: self.source.clone().map(|s| shift_all(&s, t0)) })
            }
            None => {
                if order > self.order() {
                    return Err(Error::OrderExhausted { needed: order, available: self.order() });
                }
                let components = self.components.iter().map(|j| j.recenter(t0).truncate(order)).collect();
                Ok(OrbitCurve { components, rep: self.rep.clone(), source: None })
            }
        }
    }

    /// Same components read against another representation with the same generator count.
    pub fn reinterpret(&self, rep: Arc<Representation>) -> Result<OrbitCurve> {
        if rep.n() != self.rep.n() {
            return Err(Error::DimensionMismatch { expected: self.rep.n(), got: rep.n() });
        }
        Ok(OrbitCurve { components: self.components.clone(), rep, source: self.source.clone() })
    }
}

fn shift_all(src: &[Vec<Rational>], t0: &Rational) -> Vec<Vec<Rational>> {
    src.iter()
        .map(|c| {
            let len = c.len().max(1);
            Jet::from_poly(c, len - 1).recenter(t0).coeffs().to_vec()
        })
        .collect()
}

/// A curve in `V`, expanded around `center`.
#[derive(Clone, Debug)]
pub struct LiftCurve {
    pub components: Vec<Jet>,
    pub rep: Arc<Representation>,
    pub center: Rational,
}

impl LiftCurve {
    pub fn new(rep: Arc<Representation>, components: Vec<Jet>, center: Rational) -> Self {
        let order = components.iter().map(Jet::order).min().unwrap_or(0);
        let components = components.iter().map(|j| j.truncate(order)).collect();
        LiftCurve { components, rep, center }
    }

    pub fn order(&self) -> usize {
        self.components.first().map_or(0, Jet::order)
    }

    /// `g · c̄` for a linear map `g`.
    pub fn apply(&self, g: &Matrix) -> LiftCurve {
        let order = self.order();
        let comps = (0..g.rows())
            .map(|i| {
                (0..g.cols()).fold(Jet::zero(order), |acc, j| {
                    if g[(i, j)].is_zero() {
                        acc
                    } else {
                        &acc + &self.components[j].scale(&g[(i, j)])
                    }
                })
            })
            .collect();
        LiftCurve { components: comps, rep: self.rep.clone(), center: self.center.clone() }
    }

    /// Re-expand around another parameter value (see [`Jet::recenter`]).
    pub fn recentered(&self, t: &Rational) -> LiftCurve {
        let shift = t - &self.center;
        LiftCurve {
            components: self.components.iter().map(|j| j.recenter(&shift)).collect(),
            rep: self.rep.clone(),
            center: t.clone(),
        }
    }

    pub fn sigma(&self) -> Result<Vec<Jet>> {
        self.rep.sigma_at_jets(&self.components)
    }

    pub fn truncate(&self, order: usize) -> LiftCurve {
        LiftCurve {
            components: self.components.iter().map(|j| j.truncate(order)).collect(),
            rep: self.rep.clone(),
            center: self.center.clone(),
        }
    }

    pub fn eval_f64(&self, t: f64) -> Vec<f64> {
        let s = t - crate::rat::to_f64(&self.center);
        self.components.iter().map(|j| j.eval_f64(s)).collect()
    }

    pub fn eval_at(&self, t: &Rational) -> Vec<Rational> {
        let s = t - &self.center;
        self.components.iter().map(|j| j.eval_at(&s)).collect()
    }
}
