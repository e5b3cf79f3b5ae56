mod common;

use common::{elementary_of_roots, ints, is_permutation_of, poly_jet};
use orbitlift::catalog;
use orbitlift::invariant::delta_tilde;
use orbitlift::lift::{
    condition_check, desingularize, global_lift, gram_schmidt_flat, glue, jet_inner, local_lift, local_lift_regular,
    multiplicity_check, orthogonality_check, section_lift, verify_lift, wedge, LiftCurve, Mode, OrbitCurve, Piece,
    ReportMode, Step, Verdict,
};
use orbitlift::rat::{frac, int};
use orbitlift::{Error, Flatness, Jet, Matrix, Rational};

fn curve(name: &str, comps: Vec<Jet>) -> OrbitCurve {
    OrbitCurve::new(catalog::load(name).unwrap(), comps).unwrap()
}

fn poly_curve(name: &str, comps: &[&[i64]], order: usize) -> OrbitCurve {
    let coeffs = comps.iter().map(|c| ints(c)).collect();
    OrbitCurve::from_polynomials(catalog::load(name).unwrap(), coeffs, order).unwrap()
}

fn zero() -> Rational {
    int(0)
}

#[test]
fn multiplicity_examples() {
    let order = 8;
    assert!(multiplicity_check(&curve("z2_line", vec![poly_jet(&[0, 0, 0, 0, 1], 1, order)]), 2).unwrap());
    assert!(!multiplicity_check(&curve("z2_line", vec![poly_jet(&[0, 0, 1], 1, order)]), 2).unwrap());
    assert!(matches!(
        multiplicity_check(&curve("z2_line", vec![Jet::zero(3)]), 2),
        Err(Error::FlatComponent { needed: 4 })
    ));
    // the full permutation representation has a fixed line
    assert!(matches!(
        multiplicity_check(&curve("sym_2", vec![Jet::zero(3), Jet::zero(3)]), 1),
        Err(Error::ConventionViolation(_))
    ));
}

#[test]
fn multiplicity_on_a_scaled_reduced_curve() {
    let rep = catalog::load("sym_3_reduced").unwrap();
    let order = 10;
    // t·b(t) with b = (1 + t, 2 - t^2)
    let b = [poly_jet(&[1, 1], 1, order), poly_jet(&[2, 0, -1], 1, order)];
    let x: Vec<Jet> = b.iter().map(|j| j.shift_up(1).truncate(order)).collect();
    let c = OrbitCurve::new(rep.clone(), rep.sigma_at_jets(&x).unwrap()).unwrap();
    assert!(multiplicity_check(&c, 1).unwrap());
    for (comp, d) in c.components.iter().zip(&rep.degrees) {
        assert!(comp.order_of_vanishing().exact().unwrap() >= *d as usize);
    }
}

#[test]
fn multiplicity_inconsistency_is_reported() {
    // m(c1) = 2 but the cubic generator vanishes only to order 1
    let c = curve("sym_3_reduced", vec![poly_jet(&[0, 0, 1], 1, 6), poly_jet(&[0, 1], 1, 6)]);
    assert!(matches!(
        multiplicity_check(&c, 1),
        Err(Error::InternalInconsistency { component: 2, found: 1, expected: 3 })
    ));
}

#[test]
fn desingularize_examples() {
    let (r, cr) = desingularize(&curve("z2_line", vec![poly_jet(&[0, 0, 0, 0, 1], 1, 8)])).unwrap();
    assert_eq!(r, 2);
    assert_eq!(cr.components, vec![poly_jet(&[1], 1, 4)]);

    let rep = catalog::load("sym_2_reduced").unwrap();
    let b = vec![poly_jet(&[3, -1, 2], 1, 12)];
    let x = vec![b[0].shift_up(2).truncate(12)];
    let c = OrbitCurve::new(rep.clone(), rep.sigma_at_jets(&x).unwrap()).unwrap();
    let (r, cr) = desingularize(&c).unwrap();
    assert_eq!(r, 2);
    let expect = rep.sigma_at_jets(&b).unwrap();
    assert_eq!(cr.components[0], expect[0].truncate(cr.order()));
    // scaling back reproduces c
    let back: Vec<Jet> = cr.components.iter().zip(&rep.degrees).map(|(j, &d)| j.scale_parameter(r, d as usize)).collect();
    assert_eq!(back, c.components);

    let flat = curve("sym_3_reduced", vec![Jet::zero(5), poly_jet(&[0, 1], 1, 5)]);
    assert!(matches!(desingularize(&flat), Err(Error::FlatCurve { component: 2 })));
    assert!(matches!(desingularize(&curve("z2_line", vec![Jet::zero(5)])), Err(Error::AllFlat)));
    let (r, same) = desingularize(&curve("z2_line", vec![poly_jet(&[1, 1], 1, 5)])).unwrap();
    assert_eq!((r, same.components), (0, vec![poly_jet(&[1, 1], 1, 5)]));
}

#[test]
fn regular_lift_of_two_points() {
    let order = 10;
    let roots = [poly_jet(&[2, 1], 1, order), poly_jet(&[1, -1], 1, order)];
    let c = curve("sym_2", elementary_of_roots(&roots));
    let lift = local_lift_regular(&c, &ints(&[2, 1])).unwrap();
    assert_eq!(lift.components, roots.to_vec());
    assert_eq!(verify_lift(&lift, &c).unwrap(), Some(order));

    let c = curve("sym_2", vec![poly_jet(&[3], 1, order), poly_jet(&[2, 1], 1, order)]);
    let lift = local_lift_regular(&c, &ints(&[2, 1])).unwrap();
    assert_eq!(verify_lift(&lift, &c).unwrap(), Some(order));
}

#[test]
fn regular_lift_is_a_square_root() {
    let c = curve("z2_line", vec![poly_jet(&[1, 1], 1, 6)]);
    let lift = local_lift_regular(&c, &ints(&[1])).unwrap();
    let x = &lift.components[0];
    assert_eq!(&(x * x), &c.components[0]);
    assert_eq!(x.coeffs()[..3], [int(1), frac(1, 2), frac(-1, 8)]);
    assert!(matches!(local_lift_regular(&c, &ints(&[0])), Err(Error::SingularPoint { rank: 0, needed: 1 })));
}

#[test]
fn cluster_of_three_roots() {
    let order = 12;
    let roots = [poly_jet(&[1, 1], 1, order), poly_jet(&[1, -1], 1, order), poly_jet(&[2], 1, order)];
    let e = elementary_of_roots(&roots);
    let polys: Vec<Vec<Rational>> = e.iter().map(|j| j.coeffs()[..4].to_vec()).collect();
    let c = OrbitCurve::from_polynomials(catalog::load("sym_3").unwrap(), polys, order).unwrap();
    let report = local_lift(&c, Mode::Analytic, &zero()).unwrap();
    assert!(is_permutation_of(&report.lift.components, &roots));
    assert_eq!(report.verified_order, Some(order));
    assert!(report.branch_log.iter().any(|s| matches!(s, Step::Slice { .. })));
    assert!(report.branch_log.iter().any(|s| matches!(s, Step::OrderRaised { .. })));

    // jets alone lose one order through the double root
    let report = local_lift(&curve("sym_3", e), Mode::Analytic, &zero()).unwrap();
    assert_eq!(report.verified_order, Some(order - 1));
    assert!(!report.is_verified());
    let short: Vec<Jet> = roots.iter().map(|j| j.truncate(order - 1)).collect();
    assert!(is_permutation_of(&report.lift.components, &short));
}

#[test]
fn quadratic_has_a_linear_root() {
    let c = poly_curve("z2_line", &[&[0, 0, 1]], 6);
    let report = local_lift(&c, Mode::Analytic, &zero()).unwrap();
    let t = poly_jet(&[0, 1], 1, 6);
    assert!(report.lift.components[0] == t || report.lift.components[0] == -t);
    assert!(report.branch_log.iter().any(|s| matches!(s, Step::Desingularized { r: 1, .. })));
    assert!(report.is_verified());
}

#[test]
fn eigenvalue_curves_are_smooth() {
    let order = 8;
    let rep = catalog::load("o2_sym2").unwrap();
    let c = OrbitCurve::from_polynomials(rep, vec![ints(&[0]), ints(&[0, 0, 2])], order).unwrap();
    let t = poly_jet(&[0, 1], 1, order);
    let z = Jet::zero(order);
    for report in [local_lift(&c, Mode::Analytic, &zero()).unwrap(), section_lift(&c, Mode::Analytic, &zero()).unwrap()] {
        let l = &report.lift.components;
        assert!(*l == vec![t.clone(), z.clone(), -t.clone()] || *l == vec![-t.clone(), z.clone(), t.clone()]);
        assert_eq!(report.verified_order, Some(order));
    }
}

#[test]
fn section_route_examples() {
    let order = 8;
    let rep = catalog::load("o2_sym2").unwrap();
    // diag(1 + t, 1 - t)
    let c = OrbitCurve::from_polynomials(rep, vec![ints(&[2]), ints(&[2, 0, 2])], order).unwrap();
    let routed = catalog::section_lift_route(&c).unwrap();
    assert_eq!(routed.rep.name, "o2_sym2/diagonal");
    let report = section_lift(&c, Mode::Analytic, &zero()).unwrap();
    let a = poly_jet(&[1, 1], 1, order);
    let b = poly_jet(&[1, -1], 1, order);
    let l = &report.lift.components;
    assert!(*l == vec![a.clone(), Jet::zero(order), b.clone()] || *l == vec![b, Jet::zero(order), a]);

    let s3 = curve("sym_3", vec![Jet::zero(3); 3]);
    assert!(std::sync::Arc::ptr_eq(&catalog::section_lift_route(&s3).unwrap().rep, &s3.rep));

    let circle = catalog::load("circle_scalar").unwrap();
    let c = OrbitCurve::from_polynomials(circle, vec![ints(&[4, 4, 1])], order).unwrap();
    let routed = catalog::section_lift_route(&c).unwrap();
    assert_eq!(routed.rep.name, "z2_line");
    let report = section_lift(&c, Mode::Analytic, &zero()).unwrap();
    // radial lift (2 + t, 0) up to sign
    let r = poly_jet(&[2, 1], 1, order);
    assert!(report.lift.components == vec![r.clone(), Jet::zero(order)] || report.lift.components == vec![-r, Jet::zero(order)]);
}

#[test]
fn condition_reports() {
    let order = 8;
    let rep = catalog::load("sym_3_reduced").unwrap();
    let x = [poly_jet(&[1, 2], 1, order), poly_jet(&[3, 0, 1], 1, order)];
    let c = OrbitCurve::new(rep.clone(), rep.sigma_at_jets(&x).unwrap()).unwrap();
    let report = condition_check(&c, 2).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    assert!(report.witness.as_ref().unwrap().vanishing.exact().is_some());
    assert!(report.above_rank.is_empty());

    // roots (a, a, b): size-3 minors vanish identically
    let a = poly_jet(&[1, 1], 1, order);
    let b = poly_jet(&[3, 0, 2], 1, order);
    let c = curve("sym_3", elementary_of_roots(&[a.clone(), a, b]));
    let report = condition_check(&c, 2).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    assert!(!report.above_rank.is_empty());
    assert!(report.above_rank.iter().all(|m| m.vanishing == Flatness::FlatToTruncation));
    assert_eq!(condition_check(&c, 3).unwrap().verdict, Verdict::Unknown);
    assert_eq!(condition_check(&c, 1).unwrap().verdict, Verdict::Fail);

    let zero_curve = curve("sym_3_reduced", vec![Jet::zero(order); 2]);
    for r in 0..=2 {
        assert_eq!(condition_check(&zero_curve, r).unwrap().verdict, Verdict::Unknown);
    }
    // the fixed line keeps the first minor alive at the origin
    let origin = curve("sym_3", vec![Jet::zero(order); 3]);
    assert_eq!(condition_check(&origin, 1).unwrap().verdict, Verdict::Pass);
    assert_eq!(condition_check(&origin, 2).unwrap().verdict, Verdict::Unknown);

    let z = curve("z2_line", vec![poly_jet(&[0, 0, 1], 1, order)]);
    let report = condition_check(&z, 1).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    assert_eq!(report.witness.unwrap().vanishing, Flatness::Exact(2));
    let dt = delta_tilde(&z.rep, &[0], &[0]).unwrap();
    assert_eq!(dt.eval_at_jets(&z.components).unwrap(), poly_jet(&[0, 0, 4], 1, order));
}

fn piece(lo: i64, hi: i64, rep: &str, comps: Vec<Jet>) -> Piece {
    Piece { interval: (int(lo), int(hi)), lift: LiftCurve::new(catalog::load(rep).unwrap(), comps, int(0)) }
}

#[test]
fn glue_examples() {
    let order = 6;
    let x = vec![poly_jet(&[2, 1], 1, order), poly_jet(&[0, 1, 1], 1, order)];
    let swapped = vec![x[1].clone(), x[0].clone()];
    let s2 = catalog::load("sym_2").unwrap();
    let g = glue(&[piece(-1, 1, "sym_2", x.clone()), piece(0, 2, "sym_2", swapped)], &s2).unwrap();
    assert_eq!(g.elements[1], Matrix::from_int_rows(&[&[0, 1], &[1, 0]]));
    assert_eq!(g.pieces[1].lift.components, x);

    let g = glue(&[piece(-1, 1, "sym_2", x.clone()), piece(0, 2, "sym_2", x.clone())], &s2).unwrap();
    assert_eq!(g.elements[1], Matrix::identity(2));

    let z2 = catalog::load("z2_line").unwrap();
    let t = poly_jet(&[0, 1], 1, order);
    let g = glue(&[piece(0, 2, "z2_line", vec![t.clone()]), piece(1, 3, "z2_line", vec![-t.clone()])], &z2).unwrap();
    assert_eq!(g.elements[1], Matrix::from_int_rows(&[&[-1]]));
    assert_eq!(g.pieces[1].lift.components, vec![t.clone()]);

    assert!(matches!(
        glue(&[piece(0, 1, "z2_line", vec![t.clone()]), piece(2, 3, "z2_line", vec![t.clone()])], &z2),
        Err(Error::NoOverlap(0, 1))
    ));
    let other = poly_jet(&[5, 1], 1, order);
    assert!(matches!(
        glue(&[piece(0, 2, "z2_line", vec![t]), piece(1, 3, "z2_line", vec![other])], &z2),
        Err(Error::NoMatchingElement(1))
    ));
}

#[test]
fn circle_glue_rotates_and_refuses_flat_points() {
    let order = 4;
    let circle = catalog::load("circle_scalar").unwrap();
    let t = poly_jet(&[0, 1], 1, order);
    let z = Jet::zero(order);
    // radial lift along e1 and along e2
    let a = piece(0, 2, "circle_scalar", vec![t.clone(), z.clone()]);
    let b = piece(1, 3, "circle_scalar", vec![z.clone(), t.clone()]);
    let g = glue(&[a.clone(), b], &circle).unwrap();
    assert_eq!(g.pieces[1].lift.components, vec![t.clone(), z.clone()]);
    assert!(g.exact[1]);

    let flat = piece(-1, 1, "circle_scalar", vec![z.clone(), z.clone()]);
    let other = piece(-1, 1, "circle_scalar", vec![z.clone(), t.clone()]);
    assert!(matches!(glue(&[flat, other], &circle), Err(Error::FlatOverlap(1))));
}

#[test]
fn verify_examples() {
    let order = 6;
    let c = curve("z2_line", vec![poly_jet(&[0, 0, 1], 1, order)]);
    let rep = c.rep.clone();
    let t = poly_jet(&[0, 1], 1, order);
    assert_eq!(verify_lift(&LiftCurve::new(rep.clone(), vec![t.clone()], zero()), &c).unwrap(), Some(order));
    // squaring shifts the perturbation of t^6 up to t^7, beyond the order
    let bumped = poly_jet(&[0, 1, 0, 0, 0, 1], 1, order);
    assert_eq!(verify_lift(&LiftCurve::new(rep.clone(), vec![bumped], zero()), &c).unwrap(), Some(5));
    let c1 = curve("z2_line", vec![poly_jet(&[1], 1, order)]);
    assert_eq!(verify_lift(&LiftCurve::new(rep, vec![Jet::zero(order)], zero()), &c1).unwrap(), None);
}

#[test]
fn orthogonality_examples() {
    let order = 8;
    let s2 = catalog::load("sym_2").unwrap();
    let l = LiftCurve::new(s2, vec![poly_jet(&[0, 1], 1, order), Jet::zero(order)], zero());
    let r = orthogonality_check(&l, &[frac(1, 2)], 0.0).unwrap();
    assert!(r.vacuous && r.orthogonal);

    let circle = catalog::load("circle_scalar").unwrap();
    let radial = LiftCurve::new(circle.clone(), vec![poly_jet(&[0, 3], 5, order), poly_jet(&[0, 4], 5, order)], zero());
    let samples: Vec<Rational> = (-3..=3).map(|k| frac(k, 3)).collect();
    let r = orthogonality_check(&radial, &samples, 0.0).unwrap();
    assert!(r.orthogonal && !r.vacuous);
    assert!(r.samples.iter().all(|(_, v)| v.iter().all(|x| *x == 0.0)));

    // (t cos t, t sin t) as truncated series
    let tc = Jet::new(vec![int(0), int(1), int(0), frac(-1, 2), int(0), frac(1, 24), int(0), frac(-1, 720), int(0)]);
    let ts = Jet::new(vec![int(0), int(0), int(1), int(0), frac(-1, 6), int(0), frac(1, 120), int(0), frac(-1, 5040)]);
    let spiral = LiftCurve::new(circle, vec![tc, ts], zero());
    let c = spiral.sigma().unwrap();
    assert_eq!(c[0].truncate(3), poly_jet(&[0, 0, 1], 1, 3));
    let r = orthogonality_check(&spiral, &[frac(1, 2)], 1e-9).unwrap();
    assert!(!r.orthogonal);
    assert!((r.samples[0].1[0] - 0.25).abs() < 1e-3);
}

#[test]
fn gram_schmidt_examples() {
    let order = 6;
    let t = poly_jet(&[0, 1], 1, order);
    let t2 = poly_jet(&[0, 0, 1], 1, order);
    let z = Jet::zero(order);
    let out = gram_schmidt_flat(&[vec![t.clone(), z.clone()], vec![t.clone(), t2.clone()]]).unwrap();
    assert_eq!(out[1][0].truncate(5), z.truncate(5));
    assert_eq!(out[1][1].truncate(5), t2.truncate(5));
    assert!(jet_inner(&out[0], &out[1]).is_zero());
    assert_eq!(wedge(&out)[0].truncate(5), wedge(&[vec![t.clone(), z.clone()], vec![t.clone(), t2.clone()]])[0].truncate(5));

    let ortho = vec![vec![t.clone(), z.clone()], vec![z.clone(), t2.clone()]];
    let out = gram_schmidt_flat(&ortho).unwrap();
    for (a, b) in out.iter().zip(&ortho) {
        let k = a[0].order();
        assert!(a.iter().zip(b).all(|(x, y)| *x == y.truncate(k)));
    }

    let same = vec![vec![t.clone(), t2.clone()], vec![t.clone(), t2.clone()]];
    assert!(matches!(gram_schmidt_flat(&same), Err(Error::FlatWedge)));
    assert!(matches!(gram_schmidt_flat(&[vec![z.clone(), z]]), Err(Error::FlatVector(1))));
}

#[test]
fn outside_and_smooth_obstructions() {
    let c = poly_curve("z2_line", &[&[-1, 1]], 4);
    assert!(matches!(local_lift(&c, Mode::Analytic, &zero()), Err(Error::OutsideOrbitSpace(_))));

    // t^20 looks flat at order 6
    let mut coeffs = vec![0i64; 21];
    coeffs[20] = 1;
    let c = poly_curve("z2_line", &[&coeffs], 6);
    assert!(matches!(local_lift(&c, Mode::Smooth, &zero()), Err(Error::FlatnessObstruction(_))));
    let report = local_lift(&c, Mode::Analytic, &zero()).unwrap();
    assert_eq!(report.verified_order, Some(6));

    let c = poly_curve("z2_line", &[&[0, 0, 1]], 6);
    let report = local_lift(&c, Mode::Smooth, &zero()).unwrap();
    assert_eq!(report.mode, ReportMode::Smooth { rank: 1 });
    assert!(report.is_verified());

    let zero_curve = poly_curve("sym_3", &[&[0], &[0], &[0]], 5);
    let report = local_lift(&zero_curve, Mode::Smooth, &zero()).unwrap();
    assert!(report.lift.components.iter().all(Jet::is_zero));
}

fn sym3_poly(roots: &[Jet], order: usize) -> OrbitCurve {
    let e = elementary_of_roots(roots);
    let polys = e.iter().map(|j| j.coeffs()[..4].to_vec()).collect();
    OrbitCurve::from_polynomials(catalog::load("sym_3").unwrap(), polys, order).unwrap()
}

#[test]
fn smooth_mode_through_clusters() {
    let order = 8;
    let roots = [poly_jet(&[1, 1], 1, order), poly_jet(&[1, -1], 1, order), poly_jet(&[2], 1, order)];
    let c = sym3_poly(&roots, order);
    let report = local_lift(&c, Mode::Smooth, &zero()).unwrap();
    assert_eq!(report.mode, ReportMode::Smooth { rank: 3 });
    assert!(is_permutation_of(&report.lift.components, &roots));

    // a persistent double root lowers the rank
    let roots = [poly_jet(&[1, 1], 1, order), poly_jet(&[1, 1], 1, order), poly_jet(&[2], 1, order)];
    let c = sym3_poly(&roots, order);
    let report = local_lift(&c, Mode::Smooth, &zero()).unwrap();
    assert_eq!(report.mode, ReportMode::Smooth { rank: 2 });
    assert!(is_permutation_of(&report.lift.components, &roots));
}

#[test]
fn glued_lift_across_a_collision() {
    let order = 10;
    let rep = catalog::load("sym_2").unwrap();
    // roots t and -t + 1 cross at t = 1/2
    let xs = [ints(&[0, 1]), ints(&[1, -1])];
    let e = elementary_of_roots(&[Jet::from_poly(&xs[0], 30), Jet::from_poly(&xs[1], 30)]);
    let polys: Vec<Vec<Rational>> = e.iter().map(|j| j.coeffs()[..3].to_vec()).collect();
    let c = OrbitCurve::from_polynomials(rep, polys, order).unwrap();
    let centers = [int(0), frac(1, 2), int(1)];
    let g = global_lift(&c, Mode::Analytic, &centers, &mut Vec::new()).unwrap();
    assert!(g.reports.iter().all(|r| r.is_verified()));
    // after alignment every piece is the same pair of lines
    let first = &g.glued.pieces[0].lift;
    for p in &g.glued.pieces[1..] {
        let here = first.recentered(&p.lift.center);
        assert_eq!(here.components, p.lift.components);
    }
}
