//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::rat::{self, Rational};

pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(nvars, Rational::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiPoly::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exp: Exponent, c: Rational) -> Self {
        assert_eq!(exp.len(), nvars);
        let mut p = MultiPoly::zero(nvars);
        p.add_term(exp, c);
        p
    }

    /// Linear form `Σ a_i x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = MultiPoly::zero(n);
        for (i, a) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, a.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = MultiPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars])
    }

    /// Lexicographically largest monomial.
    pub fn leading_term(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, exp: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// `Some(d)` when every term has total degree `d`; the zero polynomial has no degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(self.nvars);
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

    pub fn partial(&self, j: usize) -> Result<MultiPoly> {
        if j >= self.nvars {
            return Err(Error::IndexOutOfRange { index: j, nvars: self.nvars });
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[j] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[j] -= 1;
            out.add_term(f, c * Rational::from_integer(e[j].into()));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.nvars).map(|j| self.partial(j).expect("index in range")).collect()
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        self.check_len(x.len())?;
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    term *= num::pow(xi.clone(), k as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(x).fold(rat::to_f64(c), |acc, (&k, xi)| acc * xi.powi(k as i32))
            })
            .sum())
    }

    /// Substitute jets for the variables. The result has the minimum order of the inputs.
    pub fn eval_at_jets(&self, v: &[Jet]) -> Result<Jet> {
        self.check_len(v.len())?;
        let order = v.iter().map(Jet::order).min().unwrap_or(0);
        let v: Vec<Jet> = v.iter().map(|j| j.truncate(order)).collect();
        let mut powers = PowerCache::new(&v, |j| j.clone(), || Jet::one(order), |a, b| a * b);
        let mut total = Jet::zero(order);
        for (e, c) in &self.terms {
            let mut term = Jet::constant(c.clone(), order);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * powers.get(i, k);
                }
            }
            total = &total + &term;
        }
        Ok(total)
    }

    /// Substitute polynomials for the variables: `self(q_1, …, q_nvars)`.
    pub fn compose(&self, q: &[MultiPoly]) -> Result<MultiPoly> {
        self.check_len(q.len())?;
        let target = q.first().map_or(0, MultiPoly::nvars);
        if let Some(bad) = q.iter().find(|p| p.nvars != target) {
            return Err(Error::DimensionMismatch { expected: target, got: bad.nvars });
        }
        let mut powers =
            PowerCache::new(q, |p| p.clone(), || MultiPoly::one(target), |a, b| a * b);
        let mut total = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * powers.get(i, k);
                }
            }
            total = &total + &term;
        }
        Ok(total)
    }

    /// Pull back along the linear map `x = A z`, `A` given by rows.
    pub fn linear_substitute(&self, rows: &[Vec<Rational>]) -> Result<MultiPoly> {
        let forms: Vec<MultiPoly> = rows.iter().map(|r| MultiPoly::linear(r)).collect();
        self.compose(&forms)
    }

    /// Same terms viewed in a larger or reindexed variable set: variable `i`
    /// becomes variable `map[i]` of `nvars`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> MultiPoly {
        assert_eq!(map.len(), self.nvars);
        let mut out = MultiPoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] += k;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Coefficients in `t^k` after substituting `x = point + t·dir`; index `k` is the degree.
    pub fn along_line(&self, point: &[Rational], dir: &[Rational]) -> Result<Vec<Rational>> {
        let d = self.total_degree().unwrap_or(0) as usize;
        let v: Vec<Jet> = point
            .iter()
            .zip(dir)
            .map(|(p, q)| Jet::from_poly(&[p.clone(), q.clone()], d))
            .collect();
        Ok(self.eval_at_jets(&v)?.coeffs().to_vec())
    }

    /// Parse from text over the given variable names. Accepts `+ - * / ^ ( )`,
    /// integer literals and division by constants.
    pub fn parse(src: &str, vars: &[&str]) -> Result<MultiPoly> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0, vars };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("unexpected trailing input in `{src}`")));
        }
        Ok(out)
    }

    /// Render with the given variable names, highest lexicographic terms first.
    pub fn to_string_with(&self, vars: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { vars[i].to_string() } else { format!("{}^{}", vars[i], k) })
                .collect();
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&rat::display(&a));
            } else {
                if !a.is_one() {
                    out.push_str(&rat::display(&a));
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

/// Memoised powers `v_i^k` for substitution.
struct PowerCache<'a, T, F> {
    base: &'a [T],
    cache: Vec<Vec<T>>,
    mul: F,
}

impl<'a, T, F: Fn(&T, &T) -> T> PowerCache<'a, T, F> {
    fn new(base: &'a [T], clone: impl Fn(&T) -> T, one: impl Fn() -> T, mul: F) -> Self {
        let cache = base.iter().map(|b| vec![one(), clone(b)]).collect();
        PowerCache { base, cache, mul }
    }

    fn get(&mut self, i: usize, k: u32) -> &T {
        let k = k as usize;
        while self.cache[i].len() <= k {
            let next = (self.mul)(self.cache[i].last().unwrap(), &self.base[i]);
            self.cache[i].push(next);
        }
        &self.cache[i][k]
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, o.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, o.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, o.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (e, a) in &self.terms {
            for (f, b) in &o.terms {
                let g: Exponent = e.iter().zip(f).map(|(x, y)| x + y).collect();
                out.add_term(g, a * b);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, o: MultiPoly) -> MultiPoly {
                (&self).$m(&o)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, o: &MultiPoly) -> MultiPoly {
                (&self).$m(o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.to_string_with(&refs))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i] == '.' || chars[i] == 'e' || chars[i] == 'E') {
                return Err(Error::Parse("decimal literals are not accepted; write p/q".into()));
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(rat::parse(&s)?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let n = self.vars.len();
        let mut acc = match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                -self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == '+' { &acc + &t } else { &acc - &t };
        }
        debug_assert_eq!(acc.nvars, n);
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let f = self.power()?;
            if op == '*' {
                acc = &acc * &f;
            } else {
                if !f.is_constant() || f.is_zero() {
                    return Err(Error::Parse("division only by nonzero constants".into()));
                }
                acc = acc.scale(&f.constant_term().recip());
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some(Tok::Num(k)) if k.is_integer() => {
                    let k = k.to_integer();
                    let e: u32 = k.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Parse("exponent must be a non-negative integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let n = self.vars.len();
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(n, q))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                Ok(MultiPoly::var(n, i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};
    use proptest::prelude::*;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s, &["x1", "x2", "x3"]).unwrap()
    }

    #[test]
    fn partial_derivatives() {
        assert_eq!(p("x1^2 + x2").partial(0).unwrap(), p("2*x1"));
        assert!(p("x1^2").partial(1).unwrap().is_zero());
        assert_eq!(p("x1*x2").partial(0).unwrap(), p("x2"));
        assert_eq!(p("x1").partial(3), Err(Error::IndexOutOfRange { index: 3, nvars: 3 }));
    }

    #[test]
    fn jets_substitution() {
        let q = MultiPoly::parse("x1*x2", &["x1", "x2"]).unwrap();
        let v = [Jet::from_ints(&[0, 1, 0]), Jet::from_ints(&[1, -1, 0])];
        assert_eq!(q.eval_at_jets(&v).unwrap(), Jet::from_ints(&[0, 1, -1]));
        let five = MultiPoly::constant(2, int(5));
        assert_eq!(five.eval_at_jets(&v).unwrap(), Jet::from_ints(&[5, 0, 0]));
        assert!(matches!(q.eval_at_jets(&v[..1]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pythagoras_on_truncated_trig() {
        // cos t = 1 - t^2/2 + t^4/24, sin t = t - t^3/6
        let cos = Jet::new(vec![int(1), int(0), frac(-1, 2), int(0), frac(1, 24)]);
        let sin = Jet::new(vec![int(0), int(1), int(0), frac(-1, 6), int(0)]);
        let q = MultiPoly::parse("x^2 + y^2", &["x", "y"]).unwrap();
        assert_eq!(q.eval_at_jets(&[cos, sin]).unwrap(), Jet::one(4));
    }

    #[test]
    fn parse_and_print() {
        let q = p("(x1 + x2)^2 - 2*x1*x2 + 1/2");
        assert_eq!(q, p("x1^2 + x2^2 + 1/2"));
        assert_eq!(q.to_string_with(&["a", "b", "c"]), "a^2 + b^2 + 1/2");
        assert_eq!(p("-x3 + 3*x1").to_string(), "3*x1 - x3");
        assert!(MultiPoly::parse("0.5*x1", &["x1"]).is_err());
        assert!(MultiPoly::parse("x1/x1", &["x1"]).is_err());
    }

    #[test]
    fn compose_and_homogeneity() {
        let e = p("x1^2*x2");
        let q = e.compose(&[p("x1 + x2"), p("x3")]);
        assert!(q.is_err());
        let q = MultiPoly::parse("y1^2 - 2*y2", &["y1", "y2"])
            .unwrap()
            .compose(&[p("x1 + x2"), p("x1*x2")])
            .unwrap();
        assert_eq!(q, p("x1^2 + x2^2"));
        assert_eq!(q.homogeneous_degree(), Some(2));
        assert!(!p("x1 + x2^2").is_homogeneous());
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..6), 0..6).prop_map(|ts| {
            MultiPoly::from_terms(3, ts.into_iter().map(|((a, b, c), k)| (vec![a, b, c], int(k))))
        })
    }

    fn arb_jets() -> impl Strategy<Value = Vec<Jet>> {
        proptest::collection::vec(proptest::collection::vec(-4i64..5, 6), 3)
            .prop_map(|v| v.iter().map(|c| Jet::from_ints(c)).collect())
    }

    proptest! {
        #[test]
        fn mixed_partials_commute(q in arb_poly(), i in 0usize..3, j in 0usize..3) {
            let a = q.partial(i).unwrap().partial(j).unwrap();
            let b = q.partial(j).unwrap().partial(i).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn jet_evaluation_is_multiplicative(a in arb_poly(), b in arb_poly(), v in arb_jets()) {
            let lhs = (&a * &b).eval_at_jets(&v).unwrap();
            let rhs = &a.eval_at_jets(&v).unwrap() * &b.eval_at_jets(&v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn parse_roundtrips_display(q in arb_poly()) {
            let shown = q.to_string();
            prop_assert_eq!(MultiPoly::parse(&shown, &["x1", "x2", "x3"]).unwrap(), q);
        }
    }
}
