use trackalg::fixtures::io::{shipped, Instance};
use trackalg::laws::Budget;
use trackalg::pseudo::{build_pseudo_padic, BuildOptions, Bounded, BuiltPseudo, PseudoFunctor, StrictPseudo};
use trackalg::strictify::{
    build_b, pair_form, strictify_pipeline, BSource, PipelineOptions, RelaxError, Relaxation, StrictifyError, TableSource,
};
use trackalg::trackcat::HomComplexes;

fn padic(inst: &Instance) -> BuiltPseudo<'_> {
    let (g, lifts) = inst.generating_graph().unwrap();
    build_pseudo_padic(inst.category(), inst.linearity(), g, lifts, 2, BuildOptions::default(), 4).unwrap()
}

#[test]
fn pair_zigzag_recovers_the_form() {
    let inst = shipped("Pair").unwrap();
    let t = inst.category();
    let src = TableSource { t, names: None };
    let rel = Relaxation::new(&src, 2).unwrap();
    let form = pair_form(t);
    let laws = trackalg::laws::run_laws(&form.laws(), 2, &Budget::default());
    assert!(laws.passed(), "{:?}", laws.failures().collect::<Vec<_>>());
    let r = rel.zigzag_report(&form);
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    assert!(r.get("zigzag.gp.gamma").unwrap().passed);
}

#[test]
fn pair_relaxation_has_every_short_word() {
    let inst = shipped("Pair").unwrap();
    let src = TableSource {
        t: inst.category(),
        names: None,
    };
    let rel = Relaxation::new(&src, 2).unwrap();
    // Hom(A,A): ∅, [1], [e], and four words of length two
    assert_eq!(rel.words(0, 0).len(), 7);
    assert_eq!(rel.hom(0, 0).c0().rank(), 7);
}

#[test]
fn relaxation_refuses_short_bound_and_nonlinear_source() {
    let inst = shipped("Pair").unwrap();
    let src = TableSource {
        t: inst.category(),
        names: None,
    };
    assert!(matches!(Relaxation::new(&src, 1), Err(RelaxError::BoundTooSmall(1))));
    let q2 = shipped("Q2").unwrap();
    let src = TableSource {
        t: q2.category(),
        names: None,
    };
    assert!(matches!(Relaxation::new(&src, 2), Err(RelaxError::NotBilinear(_))));
}

#[test]
fn b_laws_hold_for_tc() {
    let inst = shipped("Tc").unwrap();
    let p = padic(&inst);
    let bounded = Bounded::default_for(p.source(), 2);
    let built = build_b(&p, &bounded, &Budget::default()).unwrap();
    assert!(built.report.passed(), "{:?}", built.report.failures().collect::<Vec<_>>());
    assert!(built.sigma.h1_iso);
}

#[test]
fn b_rejects_cells_outside_pullback() {
    let inst = shipped("Tc").unwrap();
    let p = padic(&inst);
    let b = trackalg::strictify::StrictB::new(&p);
    let x = p.source().edge(0);
    let err = b.cell(vec![0], x).unwrap_err();
    assert!(matches!(err, StrictifyError::NotInPullback { .. }));
}

#[test]
fn strict_pseudo_gives_b_over_words() {
    let inst = shipped("M2").unwrap();
    let (g, lifts) = inst.generating_graph().unwrap();
    let lin = trackalg::freecat::Linearized::new(g, trackalg::algebra::Ring::Modular(2));
    let p = StrictPseudo {
        t: inst.category(),
        lin,
        lifts,
    };
    let bounded = Bounded::default_for(p.source(), 2);
    let built = build_b(&p, &bounded, &Budget::default()).unwrap();
    assert!(built.report.get("b.assoc.middle").unwrap().passed);
}

#[test]
fn tc_pipeline_dossier() {
    let inst = shipped("Tc").unwrap();
    let p = padic(&inst);
    let d = strictify_pipeline(&p, &PipelineOptions::default()).unwrap();
    assert!(d.coherence.passed());
    assert!(d.b_laws.passed());
    let z = d.zigzag.as_ref().unwrap();
    assert!(z.sigma_q.equivalence, "{:?}", z.sigma_q.failures);
    assert!(z.q_equivalence);
    // letters are words, so every Γ_w vanishes and G̃ is σQ̃
    assert!(z.g_is_sigma_q);
    let json = serde_json::to_string(&d).unwrap();
    assert_eq!(json, serde_json::to_string(&strictify_pipeline(&p, &PipelineOptions::default()).unwrap()).unwrap());
}

#[test]
fn b_source_letters_are_words() {
    let inst = shipped("Tc").unwrap();
    let p = padic(&inst);
    let src = BSource { p: &p, letter_bound: 1 };
    let rel = Relaxation::new(&src, 2).unwrap();
    assert_eq!(rel.words(0, 0).len(), 1 + 2 + 4);
}
