mod common;

use std::sync::Arc;

use common::{ints, rational_vec};
use orbitlift::catalog;
use orbitlift::invariant::{
    cauchy_binet, check_relations, delta_minor, delta_tilde, gradient_span_check, gram_matrix, membership_test, subsets,
    Membership, Point, Witness,
};
use orbitlift::rat::{frac, int};
use orbitlift::rep::{Group, Preimage, RepSpec, Representation};
use orbitlift::rewrite::{Rewriter, TableScheme};
use orbitlift::{Error, Matrix, MultiPoly, Rational};
use proptest::prelude::*;

fn px(src: &str, vars: &[&str]) -> MultiPoly {
    MultiPoly::parse(src, vars).unwrap()
}

fn bare_rep(name: &str, sigma: Vec<MultiPoly>, degrees: Vec<u32>, dim: usize, elements: Vec<Matrix>) -> Arc<Representation> {
    Arc::new(Representation::new(RepSpec {
        name: name.into(),
        dim,
        metric: vec![int(1); dim],
        group: Group::Finite { elements },
        sigma,
        degrees,
        relations: Vec::new(),
        rewriter: Rewriter::Tables(TableScheme::default()),
        preimage: Preimage::None,
        section: None,
        slices: Vec::new(),
        max_depth: 1,
        notes: String::new(),
    }))
}

#[test]
fn gram_entries_of_small_entries() {
    let z2 = catalog::load("z2_line").unwrap();
    assert_eq!(gram_matrix(&z2).entries[0][0], px("4*x^2", &["x"]));
    let circle = catalog::load("circle_scalar").unwrap();
    assert_eq!(gram_matrix(&circle).entries[0][0], px("4*x^2 + 4*y^2", &["x", "y"]));
    let s2 = catalog::load("sym_2").unwrap();
    let g = gram_matrix(&s2).entries;
    let v = ["x1", "x2"];
    assert_eq!(g[0][0], px("2", &v));
    assert_eq!(g[0][1], px("x1 + x2", &v));
    assert_eq!(g[1][0], px("x1 + x2", &v));
    // e1^2 - 2 e2
    assert_eq!(g[1][1], px("(x1 + x2)^2 - 2*x1*x2", &v));
}

#[test]
fn first_minor_is_four_times_the_norm() {
    for name in ["z2_line", "circle_scalar", "sym_2_reduced", "sym_3_reduced", "sym_4_reduced"] {
        let rep = catalog::load(name).unwrap();
        assert_eq!(delta_minor(&rep, &[0], &[0]).unwrap(), rep.sigma[0].scale(&int(4)), "{name}");
        assert_eq!(gram_matrix(&rep).entries[0][0], rep.sigma[0].scale(&int(4)), "{name}");
        let dt = delta_tilde(&rep, &[0], &[0]).unwrap();
        assert_eq!(dt, MultiPoly::var(rep.n(), 0).scale(&int(4)), "{name}");
    }
}

#[test]
fn full_minor_of_two_variable_symmetric_group() {
    let s2 = catalog::load("sym_2").unwrap();
    let g = gram_matrix(&s2).entries;
    let direct = &(&g[0][0] * &g[1][1]) - &(&g[0][1] * &g[1][0]);
    assert_eq!(delta_minor(&s2, &[0, 1], &[0, 1]).unwrap(), direct);
    // the discriminant
    assert_eq!(direct, px("(x1 - x2)^2", &["x1", "x2"]));
}

#[test]
fn cauchy_binet_examples() {
    let a = Matrix::from_int_rows(&[&[1, 2]]);
    let b = Matrix::from_int_rows(&[&[3, 4]]);
    assert_eq!(cauchy_binet(&a, &b).unwrap(), int(11));
    let e = Matrix::from_int_rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
    assert_eq!(cauchy_binet(&e, &e).unwrap(), int(1));
    let bad = Matrix::from_int_rows(&[&[1, 2, 3]]);
    assert!(matches!(cauchy_binet(&a, &bad), Err(Error::ShapeMismatch(_))));
}

#[test]
fn membership_examples() {
    let z2 = catalog::load("z2_line").unwrap();
    assert!(matches!(
        membership_test(&z2, &Point::Rational(ints(&[-1])), 0.0).unwrap(),
        Membership::Outside(Witness::NegativeMinor { .. })
    ));
    assert_eq!(membership_test(&z2, &Point::Rational(ints(&[0])), 0.0).unwrap(), Membership::Inside);
    let s2 = catalog::load("sym_2").unwrap();
    assert_eq!(membership_test(&s2, &Point::Rational(ints(&[3, 2])), 0.0).unwrap(), Membership::Inside);
    // complex conjugate roots: x^2 + 1
    assert!(matches!(membership_test(&s2, &Point::Rational(ints(&[0, 1])), 0.0).unwrap(), Membership::Outside(_)));
    // floating input near the boundary
    assert_eq!(membership_test(&z2, &Point::Float(vec![-1e-14]), 1e-12).unwrap(), Membership::Boundary);
    assert!(matches!(membership_test(&z2, &Point::Float(vec![-0.5]), 1e-12).unwrap(), Membership::Outside(_)));
}

#[test]
fn relations_are_checked() {
    let v = ["x"];
    let mut spec_rep = bare_rep(
        "powers",
        vec![px("x^2", &v), px("x^4", &v), px("x^6", &v)],
        vec![2, 4, 6],
        1,
        vec![Matrix::from_int_rows(&[&[1]]), Matrix::from_int_rows(&[&[-1]])],
    );
    let rel = px("y2^2 - y1*y3", &["y1", "y2", "y3"]);
    Arc::get_mut(&mut spec_rep).unwrap().relations.push(rel);
    assert!(check_relations(&spec_rep, &Point::Rational(ints(&[1, 2, 4])), 0.0));
    assert!(!check_relations(&spec_rep, &Point::Rational(ints(&[1, 2, 5])), 0.0));
    let s3 = catalog::load("sym_3").unwrap();
    assert!(check_relations(&s3, &Point::Rational(ints(&[7, -1, 100])), 0.0));
}

#[test]
fn rewriting_examples() {
    let s2 = catalog::load("sym_2").unwrap();
    let q = s2.rewrite_in_generators(&px("x1^2 + x2^2", &["x1", "x2"])).unwrap();
    assert_eq!(q.poly, px("y1^2 - 2*y2", &["y1", "y2"]));
    let z2 = catalog::load("z2_line").unwrap();
    assert_eq!(z2.rewrite_in_generators(&px("x^2", &["x"])).unwrap().poly, MultiPoly::var(1, 0));
    let s3 = catalog::load("sym_3").unwrap();
    assert_eq!(s3.rewrite_in_generators(&s3.sigma[2]).unwrap().poly, MultiPoly::var(3, 2));
    assert!(matches!(s3.rewrite_in_generators(&px("x1", &["x1", "x2", "x3"])), Err(Error::NotInvariant(_))));
}

#[test]
fn split_of_two_point_permutations() {
    let s2 = catalog::load("sym_2").unwrap();
    let split = s2.split().unwrap();
    assert_eq!(split.fixed_basis, vec![ints(&[1, 1])]);
    assert_eq!(split.perp_basis, vec![ints(&[1, -1])]);
    let red = split.reduced.as_ref().unwrap();
    assert_eq!(red.dim, 1);
    assert_eq!(red.sigma, vec![px("2*u^2", &["u"])]);
    // e1 = 2m, e2 = m^2 - u^2 with m = y1/2 and ỹ = 2u^2
    let yv = ["y", "w"];
    assert_eq!(split.from_reduced, vec![px("y", &yv), px("y^2/4 - w/2", &yv)]);
    assert_eq!(split.to_reduced, vec![px("y1^2/2 - 2*y2", &["y1", "y2"])]);
}

#[test]
fn identity_and_trivial_splits() {
    let z2 = catalog::load("z2_line").unwrap();
    assert!(z2.split().unwrap().is_identity());
    let trivial = bare_rep("trivial", vec![px("x", &["x"])], vec![1], 1, vec![Matrix::identity(1)]);
    let split = trivial.split().unwrap();
    assert_eq!(split.fixed_dim(), 1);
    assert_eq!(split.reduced.as_ref().unwrap().dim, 0);
}

#[test]
fn gradient_span_examples() {
    let s2 = catalog::load("sym_2").unwrap();
    let r = gradient_span_check(&s2, &ints(&[2, 1])).unwrap();
    assert_eq!((r.gradient_rank, r.fixed_normal_dim, r.isotropy_order, r.agrees), (2, 2, 1, true));
    let r = gradient_span_check(&s2, &ints(&[3, 3])).unwrap();
    assert_eq!((r.gradient_rank, r.fixed_normal_dim, r.isotropy_order, r.agrees), (1, 1, 2, true));
    let z2 = catalog::load("z2_line").unwrap();
    let r = gradient_span_check(&z2, &ints(&[0])).unwrap();
    assert_eq!((r.gradient_rank, r.fixed_normal_dim, r.agrees), (0, 0, true));
    let circle = catalog::load("circle_scalar").unwrap();
    assert!(matches!(gradient_span_check(&circle, &ints(&[1, 0])), Err(Error::NotFinite)));
}

#[test]
fn index_errors() {
    let s2 = catalog::load("sym_2").unwrap();
    assert!(matches!(delta_minor(&s2, &[0, 2], &[0, 1]), Err(Error::IndexOutOfRange { .. })));
    assert!(matches!(delta_minor(&s2, &[0], &[0, 1]), Err(Error::ShapeMismatch(_))));
}

/// Direct `det(J W⁻¹ Jᵀ)_{I,J}` at a point.
fn numeric_minor(rep: &Representation, v: &[Rational], rows: &[usize], cols: &[usize]) -> Rational {
    let j = rep.jacobian_at(v).unwrap();
    let winv = Matrix::diagonal(&rep.metric.iter().map(|w| w.recip()).collect::<Vec<_>>());
    let b = j.mul(&winv).unwrap().mul(&j.transpose()).unwrap();
    b.select(rows, cols).det().unwrap()
}

const ENTRIES: &[&str] =
    &["sym_2", "sym_3", "sym_4", "sym_2_reduced", "sym_3_reduced", "z2_line", "circle_scalar", "o2_sym2"];

#[test]
fn minors_expand_back_for_every_entry() {
    for name in ENTRIES {
        let rep = catalog::load(name).unwrap();
        let n = rep.n();
        for s in 1..=n.min(3) {
            for rows in subsets(n, s) {
                for cols in subsets(n, s) {
                    let delta = delta_minor(&rep, &rows, &cols).unwrap();
                    let dt = delta_tilde(&rep, &rows, &cols).unwrap();
                    assert_eq!(dt.compose(&rep.sigma).unwrap(), delta, "{name} {rows:?} {cols:?}");
                    if let Some(d) = delta.homogeneous_degree() {
                        let want: u32 = rows.iter().chain(&cols).map(|&i| rep.degrees[i]).sum::<u32>() - 2 * s as u32;
                        assert_eq!(d, want);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn minor_polynomial_matches_numeric_determinant(idx in 0usize..ENTRIES.len(), raw in rational_vec(4)) {
        let rep = catalog::load(ENTRIES[idx]).unwrap();
        let v = &raw[..rep.dim];
        let n = rep.n();
        for s in 1..=n.min(2) {
            for rows in subsets(n, s) {
                for cols in subsets(n, s) {
                    let poly = delta_minor(&rep, &rows, &cols).unwrap();
                    prop_assert_eq!(poly.eval(v).unwrap(), numeric_minor(&rep, v, &rows, &cols));
                }
            }
        }
    }

    #[test]
    fn image_points_are_inside(idx in 0usize..ENTRIES.len(), raw in rational_vec(4)) {
        let rep = catalog::load(ENTRIES[idx]).unwrap();
        let y = rep.eval_sigma(&raw[..rep.dim]).unwrap();
        prop_assert_eq!(membership_test(&rep, &Point::Rational(y), 0.0).unwrap(), Membership::Inside);
    }

    #[test]
    fn cauchy_binet_on_random_generators(c in proptest::collection::vec(-3i64..4, 12), raw in rational_vec(3)) {
        // two cubic generators and one quadratic on R^3, no symmetry needed
        let v = ["x1", "x2", "x3"];
        let mk = |k: usize| format!("{}*x1^3 + {}*x1*x2*x3 + {}*x2^2*x3 + {}*x3^3", c[k], c[k + 1], c[k + 2], c[k + 3]);
        let sigma = vec![px(&format!("{}*x1^2 + x2*x3 + {}*x3^2", c[0], c[1]), &v), px(&mk(2), &v), px(&mk(6), &v)];
        let rep = bare_rep("random", sigma, vec![2, 3, 3], 3, vec![Matrix::identity(3)]);
        let rows = [0, 1];
        let cols = [1, 2];
        let delta = delta_minor(&rep, &rows, &cols).unwrap();
        prop_assert_eq!(delta.eval(&raw).unwrap(), numeric_minor(&rep, &raw, &rows, &cols));
        let delta = delta_minor(&rep, &[0, 1], &[0, 1]).unwrap();
        prop_assert_eq!(delta.eval(&raw).unwrap(), numeric_minor(&rep, &raw, &[0, 1], &[0, 1]));
    }

    #[test]
    fn random_cauchy_binet_pairs(a in proptest::collection::vec(-5i64..6, 8), b in proptest::collection::vec(-5i64..6, 8)) {
        let ma = Matrix::from_rows(a.chunks(4).map(|r| r.iter().map(|&x| frac(x, 2)).collect()).collect()).unwrap();
        let mb = Matrix::from_rows(b.chunks(4).map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap();
        let direct = ma.mul(&mb.transpose()).unwrap().det().unwrap();
        prop_assert_eq!(cauchy_binet(&ma, &mb).unwrap(), direct);
    }
}
