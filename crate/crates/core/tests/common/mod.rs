#![allow(dead_code)]

use orbitlift::rat::{frac, int};
use orbitlift::{Jet, Rational};
use proptest::prelude::*;

/// Coefficients of `Π (X − x_i(t))` expanded directly, read off as
/// `e_i = (−1)^i [X^{k−i}]`.
pub fn elementary_of_roots(xs: &[Jet]) -> Vec<Jet> {
    let order = xs.iter().map(Jet::order).min().unwrap_or(0);
    // ascending powers of X
    let mut poly: Vec<Jet> = vec![Jet::one(order)];
    for x in xs {
        let mut next = vec![Jet::zero(order); poly.len() + 1];
        for (p, c) in poly.iter().enumerate() {
            next[p + 1] = &next[p + 1] + c;
            next[p] = &next[p] - &(c * x);
        }
        poly = next;
    }
    let k = xs.len();
    (1..=k)
        .map(|i| {
            let c = poly[k - i].clone();
            if i % 2 == 1 { -c } else { c }
        })
        .collect()
}

pub fn poly_jet(coeffs: &[i64], den: i64, order: usize) -> Jet {
    let c: Vec<Rational> = coeffs.iter().map(|&a| frac(a, den)).collect();
    Jet::from_poly(&c, order)
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..7, 1i64..4).prop_map(|(a, b)| frac(a, b))
}

pub fn rational_vec(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(small_rational(), n)
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Whether `a` is a coordinate permutation of `b` as exact jets.
pub fn is_permutation_of(a: &[Jet], b: &[Jet]) -> bool {
    a.len() == b.len() && permutations(a.len()).iter().any(|p| p.iter().enumerate().all(|(i, &j)| a[i] == b[j]))
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}
