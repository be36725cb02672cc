use super::*;
use crate::builtin;
use crate::equivariant::AlphaLaurent;
use crate::toric::enumerate_degrees;

fn setup(manifold: &str, bundle: &str) -> (ToricManifold, WeightSample, BundleSpec) {
    let m = builtin::manifold(manifold).unwrap();
    let s = WeightSample::default_for(&m).unwrap();
    (m, s, builtin::bundle(bundle).unwrap())
}

fn expand(v: &AlphaRational) -> AlphaLaurent {
    v.alpha_expand(8).unwrap()
}

fn eps(c: i64) -> ScalarPoly {
    ScalarPoly::monomial(q(c), 0, 1)
}

fn lin(u: ScalarPoly, k: i64) -> AlphaPoly {
    AlphaPoly::linear(u, q(k))
}

#[test]
fn convex_factor_at_a_point() {
    let m = builtin::manifold("P4").unwrap();
    let s = WeightSample::from_ints(&[1, 4, 9, 16]);
    // H = D_1 restricts to ε at the cone {1,2,3,4}.
    let f = convex_factor(&[5], &CurveClass(vec![1]), true).unwrap();
    assert_eq!(f.len(), 6);
    let got = f.eval(&m, &s, 0, None);
    let mut want = AlphaPoly::one();
    for k in 0..=5 {
        want = want.mul(&lin(eps(5).add(&ScalarPoly::x()), -k));
    }
    assert_eq!(got, want);

    assert_eq!(convex_factor(&[5], &CurveClass(vec![0]), true).unwrap().len(), 1);

    let p1 = builtin::manifold("P1").unwrap();
    let s1 = WeightSample::from_ints(&[1]);
    let got = convex_factor(&[1], &CurveClass(vec![1]), false).unwrap().eval(&p1, &s1, 0, None);
    assert_eq!(got, lin(eps(1), 0).mul(&lin(eps(1), -1)));
    assert!(matches!(
        convex_factor(&[-1], &CurveClass(vec![1]), false),
        Err(EulerError::NegativePairing { .. })
    ));
}

#[test]
fn concave_factor_ranges() {
    assert!(concave_factor(&[-1], &CurveClass(vec![1]), false).unwrap().is_empty());
    let p2 = builtin::manifold("P2").unwrap();
    let s = WeightSample::from_ints(&[1, 4]);
    let got = concave_factor(&[-3], &CurveClass(vec![1]), false).unwrap().eval(&p2, &s, 0, None);
    assert_eq!(got, lin(eps(-3), 1).mul(&lin(eps(-3), 2)));
    assert_eq!(concave_factor(&[-2, -2], &CurveClass(vec![1, 0]), true).unwrap().len(), 1);
    assert!(matches!(
        concave_factor(&[1], &CurveClass(vec![1]), false),
        Err(EulerError::NonNegativePairing { .. })
    ));
}

#[test]
fn sigma_model_classes() {
    let (m, s, spec) = setup("P1", "conifold");
    let ed = EulerData::new(&m, &s, &spec);
    let e = ed.sigma_model_euler0(&CurveClass(vec![2]));
    // 2α²(ε − α)(ε − 2α) at p₁
    let want = AlphaPoly::constant(ScalarPoly::constant(q(2)))
        .mul(&AlphaPoly::alpha())
        .mul(&AlphaPoly::alpha())
        .mul(&lin(eps(1), -1))
        .mul(&lin(eps(1), -2));
    assert!(e.at(0).equals(&AlphaRational::from_poly(want)));

    let d = CurveClass(vec![2]);
    let r0 = ed.sigma_model_euler_r(&d, &CurveClass(vec![0])).unwrap();
    assert!(r0.equals(&ed.sigma_model_euler0(&d)));
    let rd = ed.sigma_model_euler_r(&d, &d).unwrap();
    assert!(rd.equals(&ed.sigma_model_euler0(&d).bar()));
    let r1 = ed.sigma_model_euler_r(&d, &CurveClass(vec![1])).unwrap();
    let one = ed.sigma_model_euler0(&CurveClass(vec![1]));
    assert!(r1.equals(&one.bar().mul(&one)));
    assert!(matches!(
        ed.sigma_model_euler_r(&d, &CurveClass(vec![3])),
        Err(EulerError::OrderViolation { .. })
    ));
}

#[test]
fn lifted_restriction_shifts_by_pairing() {
    let (m, s, spec) = setup("P1", "conifold");
    let ed = EulerData::new(&m, &s, &spec);
    let v = ed.lifted_restriction(&[1], &CurveClass(vec![2]));
    assert!(v.at(0).equals(&AlphaRational::from_poly(lin(eps(1), 2))));
    let unchanged = ed.lifted_restriction(&[1], &CurveClass(vec![0]));
    assert!(unchanged.at(0).equals(&AlphaRational::from_poly(lin(eps(1), 0))));
}

#[test]
fn hypergeometric_terms() {
    let (m, s, spec) = setup("P1", "conifold");
    let ed = EulerData::new(&m, &s, &spec);
    let b1 = ed.b(&CurveClass(vec![1])).unwrap();
    for (p, fp) in m.fixed_points().iter().enumerate() {
        let den = lin(s.weight(&fp.divisor_restrictions[0]), -1)
            .mul(&lin(s.weight(&fp.divisor_restrictions[1]), -1));
        let want = AlphaRational::new(AlphaPoly::one(), den).unwrap();
        assert!(b1.at(p).equals(&want));
    }

    let (m, s, spec) = setup("P4", "quintic");
    let ed = EulerData::new(&m, &s, &spec);
    let d1 = CurveClass(vec![1]);
    let omega = ed.omega().unwrap();
    let b1 = ed.b(&d1).unwrap();
    for p in 0..5 {
        let lead = expand(b1.at(p)).coeff(0);
        assert_eq!(lead, expand(omega.at(p)).coeff(0).scale(&q(120)));
    }
    assert!(ed.b(&CurveClass(vec![0])).unwrap().equals(&omega));
}

#[test]
fn euler_identity_and_negative_control() {
    let (m, s, spec) = setup("P4", "quintic");
    let ed = EulerData::new(&m, &s, &spec);
    let d = CurveClass(vec![2]);
    check_euler_identity(&ed, &d, &CurveClass(vec![1])).unwrap().unwrap();
    check_euler_identity(&ed, &d, &CurveClass(vec![0])).unwrap().unwrap();

    let edx = ed.with_formal_x();
    let corrupted = |deg: &CurveClass| {
        let mut f = edx.p_ratio(deg)?;
        if deg.total() == 2 {
            f.num.0.pop();
        }
        Ok(f)
    };
    let failure = check_euler_identity_with(&edx, &d, &CurveClass(vec![1]), corrupted)
        .unwrap()
        .unwrap_err();
    assert_eq!(failure.point, 0);
    assert_ne!(failure.lhs, failure.rhs);
}

#[test]
fn identity_holds_for_every_builtin() {
    for e in builtin::examples() {
        let (m, s, spec) = setup(&e.manifold, &e.bundle);
        let ed = EulerData::new(&m, &s, &spec);
        for d in enumerate_degrees(m.picard_rank(), 3) {
            for r in d.sub_classes() {
                assert!(
                    check_euler_identity(&ed, &d, &r).unwrap().is_ok(),
                    "{} d={d} r={r}",
                    e.name
                );
            }
        }
    }
}

#[test]
fn linking_checks() {
    let (m, s, spec) = setup("P4", "quintic");
    let ed = EulerData::new(&m, &s, &spec);
    for b in m.balloons() {
        for b in [b.clone(), b.reversed()] {
            let r = check_linking(&ed, &b, 1).unwrap();
            assert!(r.numerator_agrees);
            assert_eq!(r.pole_order, 1);
            assert!(!check_linking_with(&ed, &b, 1, true).unwrap().numerator_agrees);
        }
    }

    let (m, s, spec) = setup("P1", "conifold");
    let ed = EulerData::new(&m, &s, &spec);
    let r = check_linking(&ed, &m.balloons()[0], 2).unwrap();
    assert!(r.numerator_agrees);
    assert_eq!(r.pole_order, 1);
}

#[test]
fn higher_rank_concave_decays() {
    let (m, s, spec) = setup("P1", "conifold");
    let ed = EulerData::new(&m, &s, &spec);
    for d in enumerate_degrees(1, 4) {
        let b = ed.b(&d).unwrap();
        for v in b.values() {
            assert!(expand(v).top().unwrap() <= -2);
        }
    }
}

#[test]
fn homogeneity_matches_factor_count() {
    for e in builtin::examples() {
        let (m, s, spec) = setup(&e.manifold, &e.bundle);
        let ed = EulerData::new(&m, &s, &spec).with_formal_x();
        for d in enumerate_degrees(m.picard_rank(), 2) {
            let ratio = ed.b_ratio(&d).unwrap();
            for p in 0..ed.points() {
                let v = ratio.eval(&m, &s, p, None);
                assert_eq!(v.homogeneous_degree(), Some(ratio.degree()), "{} {d}", e.name);
            }
        }
    }
}

#[test]
fn product_rule_for_concatenated_specs() {
    let m = builtin::manifold("P1xP2xP2").unwrap();
    let s = WeightSample::default_for(&m).unwrap();
    let a = BundleSpec { convex: vec![vec![1, 3, 0]], ..Default::default() };
    let b = BundleSpec { convex: vec![vec![1, 0, 3]], ..Default::default() };
    let ab = a.concat(&b);
    let (ea, eb, eab) = (EulerData::new(&m, &s, &a), EulerData::new(&m, &s, &b), EulerData::new(&m, &s, &ab));
    for d in enumerate_degrees(3, 2) {
        assert!(eab.p(&d).unwrap().equals(&ea.p(&d).unwrap().mul(&eb.p(&d).unwrap())));
    }
    assert!(eab.omega().unwrap().equals(&ea.omega().unwrap().mul(&eb.omega().unwrap())));
}

#[test]
fn bundle_validation() {
    let (m, _, spec) = setup("P2", "local_P2");
    assert!(spec.validate(&m).unwrap().is_empty());
    assert_eq!(spec.s(2), 0);
    let bad = BundleSpec { concave: vec![vec![3]], ..Default::default() };
    assert!(bad.validate(&m).is_err());
    let fano = BundleSpec { convex: vec![vec![1]], ..Default::default() };
    assert_eq!(fano.validate(&m).unwrap().len(), 1);
}

#[test]
fn factorwise_expansion_matches_division() {
    for e in builtin::examples() {
        let (m, s, spec) = setup(&e.manifold, &e.bundle);
        let ed = EulerData::new(&m, &s, &spec).with_formal_x();
        for d in enumerate_degrees(m.picard_rank(), 2) {
            for ratio in [ed.b_ratio(&d).unwrap(), ed.beta_ratio(&d).unwrap()] {
                for p in 0..ed.points() {
                    let fast = ratio.expand(&m, &s, p, None, 6).unwrap();
                    let slow = expand(&ratio.eval(&m, &s, p, None)).truncate(-6);
                    assert_eq!(fast, slow, "{} d={d} p={p}", e.name);
                }
            }
        }
    }
}
