use trackalg::fixtures::{fixture_quadratic, m2, tc, Mutated, Mutation};
use trackalg::groupoid::Track;
use trackalg::laws::Budget;
use trackalg::linearity::{canonical_system, verify_linearity, LinearitySystem};
use trackalg::trackcat::{axiom_check, right_linearity_probe, Comp, TrackCategory};

#[test]
fn quadratic_model_axioms_hold() {
    let (q, g) = fixture_quadratic(2, 2).unwrap();
    let r = axiom_check(&q, &Budget::default());
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    let r = verify_linearity(&q, &g, &Budget::default());
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
}

#[test]
fn quadratic_model_is_not_right_linear() {
    let (q, _) = fixture_quadratic(2, 2).unwrap();
    let r = right_linearity_probe(&q, &Budget::default());
    assert!(!r.passed());
    let w = r.failures().next().unwrap().witness.clone().unwrap();
    assert!(!w.elements.is_empty());
}

#[test]
fn quadratic_model_over_f3() {
    let (q, g) = fixture_quadratic(3, 1).unwrap();
    assert!(axiom_check(&q, &Budget::default()).passed());
    assert!(verify_linearity(&q, &g, &Budget::default()).passed());
    assert!(!right_linearity_probe(&q, &Budget::default()).passed());
}

#[test]
fn canonical_tracks_match_closed_form() {
    let (q, g) = fixture_quadratic(2, 2).unwrap();
    let can = canonical_system(&q, &q, 1 << 20).unwrap();
    assert_eq!(can.max_multiplicity(), 1);
    for c in [Comp::new(0, 0, 0), Comp::new(0, 0, 1), Comp::new(1, 0, 0), Comp::new(1, 0, 1)] {
        for a in q.hom(c.b, c.c).c0().enumerate().unwrap() {
            for x in q.hom(c.a, c.b).c0().enumerate().unwrap() {
                for y in q.hom(c.a, c.b).c0().enumerate().unwrap().step_by(3) {
                    assert_eq!(can.gamma(&q, c, &a, &x, &y), g.gamma(&q, c, &a, &x, &y));
                }
            }
        }
    }
}

#[test]
fn twisted_tc_and_m2_are_valid() {
    let (t, g) = tc();
    assert!(verify_linearity(&t, &g, &Budget::default()).passed());
    assert!(axiom_check(&m2(), &Budget::default()).passed());
}

#[test]
fn mutated_lwhisk_is_caught() {
    let inner = m2();
    let bad = Mutated {
        inner,
        which: Mutation::Lwhisk,
        comp: Comp::new(0, 0, 0),
        left: vec![0, 1, 0],
        right: Track::new(vec![1, 0], vec![0, 0, 0]),
        delta: vec![0, 1],
    };
    let r = axiom_check(&bad, &Budget::default());
    assert!(!r.passed());
}
