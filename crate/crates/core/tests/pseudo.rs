use std::time::Instant;

use trackalg::algebra::Ring;
use trackalg::fixtures::io::shipped;
use trackalg::fixtures::{QuadraticGamma, QuadraticModel};
use trackalg::freecat::{LinComb, Word};
use trackalg::laws::{run_laws, Budget};
use trackalg::linearity::gamma_track;
use trackalg::pseudo::{
    build_pseudo_integral, build_pseudo_padic, check_coherence, condition_laws, first_divergence, uniqueness_probe, BuildOptions,
    Bounded, BuiltPseudo, Perturbed, PseudoError, PseudoFunctor, Uniqueness,
};
use trackalg::trackcat::{Comp, TrackCategory};

fn tc_pseudo<'a>(
    inst: &'a trackalg::fixtures::io::Instance,
    options: BuildOptions,
) -> BuiltPseudo<'a> {
    let (g, lifts) = inst.generating_graph().unwrap();
    build_pseudo_padic(inst.category(), inst.linearity(), g, lifts, 2, options, 4).unwrap()
}

fn word(p: &dyn PseudoFunctor, edges: Vec<usize>) -> Word {
    Word::from_edges(&p.source().graph, 0, edges).unwrap()
}

#[test]
fn tc_construction_is_coherent_on_short_words() {
    let inst = shipped("Tc").unwrap();
    let p = tc_pseudo(&inst, BuildOptions::default());
    let b = Bounded::default_for(p.source(), 2);
    let r = check_coherence(&p, &b, &Budget::default());
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
}

#[test]
fn tc_construction_is_not_strict() {
    let inst = shipped("Tc").unwrap();
    let p = tc_pseudo(&inst, BuildOptions::default());
    let b = Bounded::default_for(p.source(), 1);
    let nonzero = b.hom(0, 0).iter().any(|x| b.hom(0, 0).iter().any(|y| p.gamma(x, y) != vec![0]));
    assert!(nonzero);
}

#[test]
fn perturbed_gamma_fails_pasting() {
    let inst = shipped("Tc").unwrap();
    let p = tc_pseudo(&inst, BuildOptions::default());
    let x = p.source().edge(0);
    let y = x.add(&p.source().identity(0)).unwrap();
    let bad = Perturbed {
        inner: p,
        x: x.clone(),
        y,
        delta: vec![1],
    };
    let b = Bounded::default_for(bad.source(), 1);
    let r = check_coherence(&bad, &b, &Budget::default());
    let f = r.get("pseudo.pasting").unwrap();
    assert!(!f.passed);
    assert!(f.witness.as_ref().unwrap().detail.contains("x ="));
}

#[test]
fn lift_and_term_order_do_not_matter() {
    let inst = shipped("Tc").unwrap();
    let p = tc_pseudo(&inst, BuildOptions::default());
    let shifted = tc_pseudo(
        &inst,
        BuildOptions {
            lift_offset: 1,
            reverse_terms: false,
        },
    );
    let reversed = tc_pseudo(
        &inst,
        BuildOptions {
            lift_offset: 0,
            reverse_terms: true,
        },
    );
    let b = Bounded::default_for(p.source(), 2);
    assert!(matches!(first_divergence(&p, &shifted, &b), Uniqueness::Equal { .. }));
    let l = inst.linearity();
    let v = uniqueness_probe(&p, &reversed, l, &Bounded::default_for(p.source(), 1), &Budget::default()).unwrap();
    assert!(matches!(v, Uniqueness::Equal { .. }), "{v:?}");
}

#[test]
fn multiples_of_p_squared_and_p_act_trivially() {
    let inst = shipped("Tc").unwrap();
    let p = tc_pseudo(&inst, BuildOptions::default());
    let one = word(&p, vec![]);
    let x = word(&p, vec![0]);
    // Γ(w, 4·v) as a raw expansion, before reduction in the source ring
    for w in [&one, &x] {
        for v in [&one, &x] {
            assert_eq!(p.gamma_word_terms(w, 0, &[(v.clone(), 4)]), vec![0]);
            assert_eq!(p.gamma_word_terms(w, 0, &[(v.clone(), 1), (one.clone(), 3)]).len(), 1);
        }
    }
    let b = Bounded::default_for(p.source(), 2);
    for x in b.hom(0, 0) {
        for y in b.hom(0, 0) {
            assert_eq!(p.gamma(&x.scale(2), y), vec![0]);
        }
    }
}

#[test]
fn uniqueness_probe_rejects_broken_word_condition() {
    let inst = shipped("Tc").unwrap();
    let p = tc_pseudo(&inst, BuildOptions::default());
    let q = tc_pseudo(&inst, BuildOptions::default());
    let x = q.source().edge(0);
    let xx = x.after(&x).unwrap();
    let bad = Perturbed {
        inner: q,
        x: x.clone(),
        y: xx.clone(),
        delta: vec![1],
    };
    let b = Bounded::default_for(p.source(), 2);
    assert_eq!(
        first_divergence(&p, &bad, &b),
        Uniqueness::Diverges {
            what: "gamma".into(),
            x,
            y: Some(xx)
        }
    );
    let err = uniqueness_probe(&p, &bad, inst.linearity(), &b, &Budget::default()).unwrap_err();
    assert!(matches!(err, PseudoError::Condition { ref which, .. } if which == "second"), "{err}");
    let r = run_laws(&condition_laws(&bad, inst.linearity(), &b), 1, &Budget::default());
    assert!(!r.get("condition.words").unwrap().passed);
}

#[test]
fn quadratic_padic_construction_is_coherent() {
    let inst = shipped("Q2").unwrap();
    let (g, lifts) = inst.generating_graph().unwrap();
    let p = build_pseudo_padic(inst.category(), inst.linearity(), g, lifts, 2, BuildOptions::default(), 4).unwrap();
    let b = Bounded::new(p.source(), 1, vec![0, 1, 3]);
    let r = check_coherence(&p, &b, &Budget::default());
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
}

fn integral_q() -> (QuadraticModel, QuadraticGamma) {
    let q = QuadraticModel::new(4, 1).unwrap();
    (q.clone(), QuadraticGamma { model: q })
}

#[test]
fn integral_construction_on_non_torsion_model() {
    let (q, l) = integral_q();
    let inst = trackalg::fixtures::io::Instance::Quadratic {
        model: q.clone(),
        gamma: l.clone(),
        graph: Some(trackalg::fixtures::io::elementary_edges(&q)),
    };
    let (g, lifts) = inst.generating_graph().unwrap();
    assert!(matches!(
        build_pseudo_padic(&q, &l, g.clone(), lifts.clone(), 2, BuildOptions::default(), 4),
        Err(PseudoError::Torsion { .. })
    ));
    let p = build_pseudo_integral(&q, &l, g, lifts, BuildOptions::default(), 4).unwrap();
    assert_eq!(p.source().ring, Ring::Integers);
    let b = Bounded::new(p.source(), 1, vec![-2, -1, 0, 1, 3]);
    let r = check_coherence(&p, &b, &Budget::default());
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());

    let e = word(&p, vec![0]);
    let one = word(&p, vec![]);
    // 5y − 2y and 3y give the same track, for y a word and y = 1
    for y in [&e, &one] {
        let a = p.gamma_word_terms(&e, 0, &[(y.clone(), 5), (y.clone(), -2)]);
        let c = p.gamma_word_terms(&e, 0, &[(y.clone(), 3)]);
        assert_eq!(a, c);
    }
    // Γ(x, −y) is forced by Γ(x, y − y) = id with Γ(x, y) = id
    let (sx, sy) = (p.s_word(&e), p.s_word(&one));
    let g0 = q.hom(0, 0).c0();
    let sq = gamma_track(&q, &l, Comp::new(0, 0, 0), &sx, &sy, &g0.neg(&sy));
    let want = q.hom(0, 0).c1().neg(&sq.moore);
    let minus = LinComb::from_terms(Ring::Integers, 0, 0, vec![(one.clone(), -1)]);
    assert_eq!(p.gamma(&LinComb::word(Ring::Integers, e.clone()), &minus), want);
    // only words: Γ vanishes
    assert_eq!(p.gamma_word_terms(&e, 0, &[(e.clone(), 1)]), vec![0; q.hom(0, 0).c1().rank()]);
}

#[test]
fn tc_word_bound_three_exhaustive_under_a_minute() {
    let inst = shipped("Tc").unwrap();
    let p = tc_pseudo(&inst, BuildOptions::default());
    let b = Bounded::default_for(p.source(), 3);
    assert_eq!(b.hom(0, 0).len(), 256);
    let start = Instant::now();
    let r = check_coherence(&p, &b, &Budget::exhaustive(1 << 25));
    let pasting = r.get("pseudo.pasting").unwrap();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    assert_eq!(pasting.cases, 256 * 256 * 256);
    assert!(start.elapsed().as_secs() < 60, "{:?}", start.elapsed());
}
