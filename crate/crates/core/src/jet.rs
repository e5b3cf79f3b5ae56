//! Truncated power series in one variable `t` with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{self, Rational};

/// A jet `a_0 + a_1 t + ... + a_N t^N` known up to its truncation order `N`.
///
/// Binary operations truncate to the smaller of the two orders, so a result
/// never claims coefficients that its inputs did not determine.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Jet {
    coeffs: Vec<Rational>,
}

/// Order of vanishing of a jet at `t = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flatness {
    Exact(usize),
    FlatToTruncation,
}

impl Flatness {
    pub fn exact(self) -> Option<usize> {
        match self {
            Flatness::Exact(m) => Some(m),
            Flatness::FlatToTruncation => None,
        }
    }

    pub fn is_flat(self) -> bool {
        self == Flatness::FlatToTruncation
    }
}

impl Jet {
    /// Builds a jet from its coefficients; the truncation order is `len - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the constant coefficient");
        Jet { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Jet::new(coeffs.iter().map(|&c| rat::int(c)).collect())
    }

    /// Jet of a polynomial given by ascending coefficients, padded or cut to `order`.
    pub fn from_poly(coeffs: &[Rational], order: usize) -> Self {
        let mut c: Vec<Rational> = coeffs.iter().take(order + 1).cloned().collect();
        c.resize(order + 1, Rational::zero());
        Jet { coeffs: c }
    }

    pub fn zero(order: usize) -> Self {
        Jet { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut j = Jet::zero(order);
        j.coeffs[0] = c;
        j
    }

    pub fn one(order: usize) -> Self {
        Jet::constant(Rational::one(), order)
    }

    /// `c * t^k`, which is the zero jet when `k > order`.
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut j = Jet::zero(order);
        if k <= order {
            j.coeffs[k] = c;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let order = order.min(self.order());
        Jet { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, c: &Rational) -> Jet {
        Jet { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Index of the first nonzero coefficient, or flat when all stored ones vanish.
    pub fn order_of_vanishing(&self) -> Flatness {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(m) => Flatness::Exact(m),
            None => Flatness::FlatToTruncation,
        }
    }

    /// Divides by `t^k`; the first `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Jet> {
        if k > self.order() {
            return Err(Error::OrderExhausted { needed: k, available: self.order() });
        }
        if let Some(index) = self.coeffs[..k].iter().position(|c| !c.is_zero()) {
            return Err(Error::NonDivisible { shift: k, index });
        }
        Ok(Jet { coeffs: self.coeffs[k..].to_vec() })
    }

    /// Multiplies by `t^k`. The product is known to order `N + k`.
    pub fn shift_up(&self, k: usize) -> Jet {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Jet { coeffs }
    }

    /// Weighted rescaling of a generator value: `t^(r*d) * a(t)`.
    pub fn scale_parameter(&self, r: usize, weight: usize) -> Jet {
        self.shift_up(r * weight)
    }

    /// Horner evaluation of the stored truncation.
    pub fn eval_at(&self, t0: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t0 + c;
        }
        acc
    }

    pub fn eval_f64(&self, t0: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t0 + rat::to_f64(c))
    }

    /// Formal derivative, known to one order less. An order-0 jet gives the
    /// zero jet of order 0.
    pub fn derivative(&self) -> Jet {
        if self.order() == 0 {
            return Jet::zero(0);
        }
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat::int(k as i64))
                .collect(),
        }
    }

    /// Re-expands the stored polynomial around `t = t0`. Exact whenever the
    /// underlying curve is a polynomial of degree at most the truncation order.
    pub fn recenter(&self, t0: &Rational) -> Jet {
        if t0.is_zero() {
            return self.clone();
        }
        // repeated synthetic division (Taylor shift)
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n - 1).rev() {
                let add = &c[k + 1] * t0;
                c[k] += add;
            }
        }
        Jet { coeffs: c }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Jet> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = a0.recip();
        let n = self.order();
        let mut b = vec![Rational::zero(); n + 1];
        b[0] = inv0.clone();
        for k in 1..=n {
            let mut s = Rational::zero();
            for j in 1..=k {
                s += &self.coeffs[j] * &b[k - j];
            }
            b[k] = -s * &inv0;
        }
        Ok(Jet { coeffs: b })
    }

    pub fn pow(&self, e: u32) -> Jet {
        let mut acc = Jet::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Renders the jet as a polynomial in `var`.
    pub fn to_poly_string(&self, var: &str) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                out.push_str(&rat::display(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", rat::display(&a), mono));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(t^{})", self.to_poly_string("t"), self.order() + 1)
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let n = self.order().min(rhs.order());
        Jet { coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let n = self.order().min(rhs.order());
        Jet { coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Jet { coeffs }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};
    use proptest::prelude::*;

    fn j(c: &[i64]) -> Jet {
        Jet::from_ints(c)
    }

    #[test]
    fn add_cancels_and_truncates() {
        assert_eq!(&j(&[1, 1]) + &j(&[2, -1]), j(&[3, 0]));
        let a = j(&[4, -2, 7]);
        assert_eq!(&a + &Jet::zero(2), a);
        // t^2 (order 5) + t^3 (order 2) -> t^2 at order 2
        let t2 = Jet::monomial(int(1), 2, 5);
        let t3 = Jet::monomial(int(1), 3, 2);
        assert_eq!(&t2 + &t3, j(&[0, 0, 1]));
    }

    #[test]
    fn mul_cases() {
        assert_eq!(&j(&[1, 1, 0]) * &j(&[1, -1, 0]), j(&[1, 0, -1]));
        let t2 = Jet::monomial(int(1), 2, 4);
        let t3 = Jet::monomial(int(1), 3, 4);
        assert!((&t2 * &t3).is_zero());
        assert_eq!((&t2 * &t3).order(), 4);
        let a = j(&[3, 1, 4, 1]);
        assert_eq!(&a * &Jet::one(3), a);
    }

    #[test]
    fn vanishing_order() {
        let a = &Jet::monomial(int(1), 3, 6) * &j(&[2, 1, 0, 0, 0, 0, 0]);
        assert_eq!(a.order_of_vanishing(), Flatness::Exact(3));
        assert_eq!(Jet::zero(8).order_of_vanishing(), Flatness::FlatToTruncation);
        assert_eq!(j(&[5, 1]).order_of_vanishing(), Flatness::Exact(0));
    }

    #[test]
    fn shift_down_cases() {
        assert_eq!(j(&[0, 0, 1, 0, 1]).shift_down(2).unwrap(), j(&[1, 0, 1]));
        assert_eq!(
            j(&[0, 1, 0]).shift_down(2),
            Err(Error::NonDivisible { shift: 2, index: 1 })
        );
        let a = j(&[2, 3]);
        assert_eq!(a.shift_down(0).unwrap(), a);
        assert!(matches!(a.shift_down(3), Err(Error::OrderExhausted { .. })));
    }

    #[test]
    fn scale_parameter_cases() {
        assert_eq!(Jet::one(0).scale_parameter(1, 2), j(&[0, 0, 1]));
        assert_eq!(j(&[1, 1]).scale_parameter(2, 1), j(&[0, 0, 1, 1]));
        assert!(Jet::zero(1).scale_parameter(3, 2).is_zero());
    }

    #[test]
    fn evaluation() {
        assert_eq!(j(&[1, 2]).eval_at(&int(3)), int(7));
        let a = j(&[9, 2, 5]);
        assert_eq!(a.eval_at(&int(0)), int(9));
        assert_eq!(j(&[0, 0, 1]).eval_at(&frac(1, 2)), frac(1, 4));
    }

    #[test]
    fn inverse_and_recenter() {
        let a = j(&[1, -1, 0, 0, 0]);
        assert_eq!(a.inverse().unwrap(), j(&[1, 1, 1, 1, 1]));
        assert_eq!(j(&[0, 1]).inverse(), Err(Error::NotInvertible));
        // (1 + t)^2 around t = 1 is 4 + 4s + s^2
        assert_eq!(j(&[1, 2, 1]).recenter(&int(1)), j(&[4, 4, 1]));
    }

    #[test]
    fn rendering() {
        assert_eq!(Jet::new(vec![int(1), frac(1, 2), frac(-1, 8)]).to_poly_string("t"), "1 + 1/2*t - 1/8*t^2");
        assert_eq!(j(&[0, -1]).to_poly_string("t"), "-t");
        assert_eq!(Jet::zero(3).to_poly_string("t"), "0");
    }

    fn arb_jet(order: usize) -> impl Strategy<Value = Jet> {
        prop::collection::vec((-20i64..20, 1i64..6), order + 1).prop_map(|cs| {
            Jet::new(cs.into_iter().map(|(n, d)| frac(n, d)).collect())
        })
    }

    fn arb_shifted(order: usize) -> impl Strategy<Value = Jet> {
        (0usize..4, arb_jet(order)).prop_map(move |(k, a)| a.shift_up(k).truncate(order))
    }

    proptest! {
        #[test]
        fn vanishing_orders_add_under_products(a in arb_shifted(8), b in arb_shifted(8)) {
            if let (Flatness::Exact(m), Flatness::Exact(n)) = (a.order_of_vanishing(), b.order_of_vanishing()) {
                if m + n <= 8 {
                    prop_assert_eq!((&a * &b).order_of_vanishing(), Flatness::Exact(m + n));
                }
            }
        }

        #[test]
        fn shift_down_undoes_scaling(a in arb_jet(6), r in 1usize..4, d in 1usize..4) {
            prop_assert_eq!(a.scale_parameter(r, d).shift_down(r * d).unwrap(), a);
        }

        #[test]
        fn ring_laws(a in arb_jet(5), b in arb_jet(5), c in arb_jet(5)) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }
    }
}
