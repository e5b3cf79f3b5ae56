//! Real roots of univariate rational polynomials.
//!
//! Polynomials are ascending coefficient vectors. Roots are isolated with
//! Sturm sequences on the square-free parts, then either identified as exact
//! rationals or approximated by the simplest rational in a narrow interval.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::rat::{self, Rational};

pub type UniPoly = Vec<Rational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    pub value: Rational,
    pub multiplicity: usize,
    /// The value is the root itself rather than an approximation.
    pub exact: bool,
}

pub fn trim(mut p: UniPoly) -> UniPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &[Rational]) -> UniPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rational::from_integer(k.into()))
        .collect()
}

pub fn mul(a: &[Rational], b: &[Rational]) -> UniPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on a zero divisor.
pub fn div_rem(a: &[Rational], b: &[Rational]) -> (UniPoly, UniPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    let lead = &b[db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let f = &r[dr] / lead;
        for (k, c) in b.iter().enumerate().take(db + 1) {
            let v = &f * c;
            r[dr - db + k] -= v;
        }
        q[dr - db] = f;
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(p: &[Rational]) -> UniPoly {
    let p = trim(p.to_vec());
    match p.last() {
        Some(l) => {
            let l = l.clone();
            p.iter().map(|c| c / &l).collect()
        }
        None => p,
    }
}

pub fn gcd(a: &[Rational], b: &[Rational]) -> UniPoly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

/// Yun's square-free factorisation: `p = c · Π f_i^i`, returned as `(f_i, i)`
/// with non-constant monic `f_i`.
pub fn square_free(p: &[Rational]) -> Vec<(UniPoly, usize)> {
    let p = monic(p);
    if degree(&p).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let dp = derivative(&p);
    let a0 = gcd(&p, &dp);
    let mut b = div_rem(&p, &a0).0;
    let mut c = div_rem(&dp, &a0).0;
    let mut d: UniPoly = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut i = 1;
    loop {
        let a = gcd(&b, &d);
        if degree(&a).unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = div_rem(&b, &a).0;
        if degree(&b).unwrap_or(0) == 0 {
            break;
        }
        c = div_rem(&d, &a).0;
        d = sub(&c, &derivative(&b));
        i += 1;
    }
    out
}

fn sub(a: &[Rational], b: &[Rational]) -> UniPoly {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    trim((0..n).map(|k| a.get(k).unwrap_or(&z) - b.get(k).unwrap_or(&z)).collect())
}

fn sturm_sequence(p: &[Rational]) -> Vec<UniPoly> {
    let mut seq = vec![trim(p.to_vec()), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let (_, r) = div_rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes(seq: &[UniPoly], x: &Rational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|q| eval(q, x))
        .filter(|v| !v.is_zero())
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Bound on the absolute value of every root (Cauchy).
fn root_bound(p: &[Rational]) -> Rational {
    let d = degree(p).expect("nonzero polynomial");
    let lead = p[d].abs();
    let m = p[..d].iter().map(|c| c.abs() / &lead).max().unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// Disjoint intervals `(lo, hi]` each holding exactly one root of the
/// square-free polynomial `p`, in increasing order.
fn isolate(p: &[Rational]) -> Vec<(Rational, Rational)> {
    let seq = sturm_sequence(p);
    let b = root_bound(p);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
        match n {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / Rational::from_integer(2.into());
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort();
    out
}

/// Shrink an isolating interval `(lo, hi]` of a square-free `p` below `width`.
/// Returns an exact root if bisection lands on it.
#[allow(clippy::result_large_err)]
fn refine(p: &[Rational], mut lo: Rational, mut hi: Rational, width: &Rational) -> Result<Rational, (Rational, Rational)> {
    if eval(p, &hi).is_zero() {
        return Ok(hi);
    }
    let two = Rational::from_integer(2.into());
    let s_hi = eval(p, &hi).is_positive();
    while &(&hi - &lo) >= width {
        let mid = (&lo + &hi) / &two;
        let v = eval(p, &mid);
        if v.is_zero() {
            return Ok(mid);
        }
        if v.is_positive() == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err((lo, hi))
}

/// Leading coefficient of the primitive integer multiple of `p`.
fn integral_leading(p: &[Rational]) -> BigInt {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let d = degree(p).unwrap();
    (&ints[d] / g).abs()
}

/// All real roots with multiplicity, sorted non-increasing. Irrational roots
/// come back as the simplest rational within `tol` of the root.
pub fn real_roots(p: &[Rational], tol: &Rational) -> Vec<RealRoot> {
    let mut out = Vec::new();
    for (f, mult) in square_free(p) {
        let an = integral_leading(&f);
        let separation = Rational::new(BigInt::one(), &an * &an + BigInt::one());
        let width = if &separation < tol { separation.clone() } else { tol.clone() };
        for (lo, hi) in isolate(&f) {
            match refine(&f, lo, hi, &width) {
                Ok(x) => out.push(RealRoot { value: x, multiplicity: mult, exact: true }),
                Err((lo, hi)) => {
                    let guess = rat::simplest_between(&lo, &hi);
                    let exact = eval(&f, &guess).is_zero();
                    let value = if exact {
                        guess
                    } else {
                        let (lo, hi) = match refine(&f, lo, hi, tol) {
                            Ok(x) => (x.clone(), x),
                            Err(iv) => iv,
                        };
                        rat::simplest_between(&lo, &hi)
                    };
                    out.push(RealRoot { value, multiplicity: mult, exact });
                }
            }
        }
    }
    out.sort_by(|a, b| b.value.cmp(&a.value));
    out
}

/// Number of real roots counted with multiplicity.
pub fn count_real_roots(p: &[Rational]) -> usize {
    square_free(p).iter().map(|(f, m)| isolate(f).len() * m).sum()
}

/// Ascending coefficients of `Π (x - r_i)`.
pub fn from_roots(roots: &[Rational]) -> UniPoly {
    roots.iter().fold(vec![Rational::one()], |acc, r| mul(&acc, &[-r.clone(), Rational::one()]))
}
