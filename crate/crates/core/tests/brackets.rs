use trackalg::brackets::{
    massey_product, random_problems, toda_bracket, transfer_check, BoundedB, BracketError, BracketProblem, MooreDg,
};
use trackalg::fixtures::io::{shipped, Instance};
use trackalg::laws::Budget;
use trackalg::pseudo::{build_pseudo_padic, BuildOptions, Bounded, BuiltPseudo, PseudoFunctor};
use trackalg::strictify::{build_b, StrictB};
use trackalg::trackcat::HomotopyCategory;

fn padic(inst: &Instance) -> BuiltPseudo<'_> {
    let (g, lifts) = inst.generating_graph().unwrap();
    build_pseudo_padic(inst.category(), inst.linearity(), g, lifts, 2, BuildOptions::default(), 4).unwrap()
}

fn x_bar(inst: &Instance) -> Vec<i64> {
    let h = HomotopyCategory::new(inst.category());
    // x is the second generator of Hom_0
    h.class_of(0, 0, &[0, 1, 0])
}

fn xxx(inst: &Instance) -> BracketProblem {
    let x = x_bar(inst);
    BracketProblem {
        objects: [0; 4],
        classes: [x.clone(), x.clone(), x],
    }
}

#[test]
fn m2_toda_is_the_nonzero_coset() {
    let inst = shipped("M2").unwrap();
    let t = inst.category();
    let toda = toda_bracket(t, &xxx(&inst)).unwrap();
    let h = HomotopyCategory::new(t);
    assert_eq!(h.homology(0, 0).h1.order(), 2);
    assert_eq!(toda.classes().into_iter().collect::<Vec<_>>(), vec![vec![1]]);
    assert!(toda.coset);
    let massey = massey_product(&MooreDg::new(t), &xxx(&inst)).unwrap();
    assert_eq!(toda.classes(), massey.classes());
}

#[test]
fn m2_massey_in_b_matches_toda() {
    let inst = shipped("M2").unwrap();
    let p = padic(&inst);
    let bounded = Bounded::default_for(p.source(), 2);
    let built = build_b(&p, &bounded, &Budget::default()).unwrap();
    assert!(built.sigma.h0_iso && built.sigma.h1_iso);
    let d = BoundedB::new(&built.b, &bounded);
    let problem = xxx(&inst);
    let massey = massey_product(&d, &problem).unwrap();
    let toda = toda_bracket(inst.category(), &problem).unwrap();
    assert!(!massey.elements.is_empty());
    assert_eq!(massey.classes(), toda.classes());
    let r = transfer_check(&d, &problem, true).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.equality, Some(true));
    assert!(r.representatives_checked > 0);
}

#[test]
fn zero_class_bracket_contains_zero() {
    let inst = shipped("M2").unwrap();
    let t = inst.category();
    let x = x_bar(&inst);
    let problem = BracketProblem {
        objects: [0; 4],
        classes: [x.clone(), vec![0, 0], x],
    };
    let toda = toda_bracket(t, &problem).unwrap();
    assert!(toda.classes().contains(&vec![0]));
    assert!(toda.coset);
}

#[test]
fn unit_fails_vanishing() {
    let inst = shipped("M2").unwrap();
    let h = HomotopyCategory::new(inst.category());
    let one = h.class_of(0, 0, &[1, 0, 0]);
    let problem = BracketProblem {
        objects: [0; 4],
        classes: [one.clone(), one.clone(), one],
    };
    assert_eq!(toda_bracket(inst.category(), &problem).unwrap_err(), BracketError::Vanishing(1, 2));
}

#[test]
fn trivial_h1_gives_zero_bracket() {
    let inst = shipped("Pair").unwrap();
    let t = inst.category();
    let h = HomotopyCategory::new(t);
    for problem in random_problems(&h, 2, 20, 7) {
        let o = problem.objects;
        if h.homology(o[3], o[0]).h1.order() == 1 {
            assert_eq!(toda_bracket(t, &problem).unwrap().classes().len(), 1);
        }
    }
}

#[test]
fn tc_transfer_inclusion_on_random_problems() {
    let inst = shipped("Tc").unwrap();
    let p = padic(&inst);
    let bounded = Bounded::default_for(p.source(), 2);
    let b = StrictB::new(&p);
    let d = BoundedB::new(&b, &bounded);
    let h = HomotopyCategory::new(inst.category());
    let problems = random_problems(&h, 1, 10, 3);
    assert_eq!(problems.len(), 10);
    for problem in &problems {
        let r = transfer_check(&d, problem, false).unwrap();
        assert!(r.representative_failure.is_none(), "{r:?}");
        assert!(r.inclusion, "{r:?}");
    }
}
