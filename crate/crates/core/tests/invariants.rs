use proptest::prelude::*;

use trackalg::algebra::{AbHom, Elem, FinAbGroup, Ring, TruncComplex1};
use trackalg::fixtures::io::shipped;
use trackalg::freecat::{LinComb, Word};
use trackalg::groupoid::{DenormGroupoid, Track};
use trackalg::pseudo::{build_pseudo_padic, BuildOptions, PseudoFunctor};
use trackalg::trackcat::Comp;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn group() -> impl Strategy<Value = FinAbGroup> {
    prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 6, 8, 9]), 1..=3)
        .prop_filter("order at most 64", |o| o.iter().product::<u64>() <= 64)
        .prop_map(|o| FinAbGroup::new(o).unwrap())
}

fn complex() -> impl Strategy<Value = TruncComplex1> {
    (group(), group()).prop_flat_map(|(c1, c0)| {
        let steps: Vec<(u64, u64)> = c0
            .orders()
            .iter()
            .flat_map(|&e| c1.orders().iter().map(move |&d| (gcd(d, e), e / gcd(d, e))))
            .collect();
        let entries: Vec<_> = steps.iter().map(|&(g, step)| (0..g).prop_map(move |k| (k * step) as i64)).collect();
        let (c1, c0) = (c1.clone(), c0.clone());
        entries.prop_map(move |flat| {
            let matrix = flat.chunks(c1.rank()).map(<[i64]>::to_vec).collect();
            TruncComplex1::new(AbHom::new(c1.clone(), c0.clone(), matrix).unwrap())
        })
    })
}

fn element(g: &FinAbGroup, seed: u128) -> Elem {
    g.element_at(seed % g.order())
}

proptest! {
    #[test]
    fn moore_of_denorm_is_identity(c in complex()) {
        prop_assert_eq!(DenormGroupoid::new(c.clone()).moore(), c);
    }

    #[test]
    fn euler_characteristic(c in complex()) {
        let h = c.homology();
        prop_assert_eq!(h.h0.order() * c.c1().order(), h.h1.order() * c.c0().order());
    }

    #[test]
    fn homology_structure_maps(c in complex(), s in any::<u128>(), k in any::<u128>()) {
        let h = c.homology();
        let x = element(c.c0(), s);
        let m = element(c.c1(), k);
        // boundaries project to zero, cycles come from H1
        prop_assert!(h.h0.is_zero(&h.class0(&c.boundary(&m))));
        let class = h.class0(&x);
        prop_assert_eq!(h.class0(&h.lift0(&class)), class);
        let z = h.embed1(&element(&h.h1, k));
        prop_assert!(c.c0().is_zero(&c.boundary(&z)));
        prop_assert_eq!(h.embed1(&h.class1(&z).unwrap()), z);
    }

    #[test]
    fn composition_is_associative_and_additive(c in complex(), s in prop::array::uniform6(any::<u128>())) {
        let g = DenormGroupoid::new(c.clone());
        let x = element(c.c0(), s[0]);
        let a = Track::new(element(c.c1(), s[1]), x);
        let b = Track::new(element(c.c1(), s[2]), g.source(&a));
        let d = Track::new(element(c.c1(), s[3]), g.source(&b));
        let left = g.compose(&g.compose(&a, &b).unwrap(), &d).unwrap();
        let right = g.compose(&a, &g.compose(&b, &d).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        // the sum of composable pairs is a composable pair (interchange)
        let a2 = Track::new(element(c.c1(), s[4]), element(c.c0(), s[5]));
        let b2 = Track::new(element(c.c1(), s[5]), g.source(&a2));
        let sum_then = g.compose(&g.add(&a, &a2), &g.add(&b, &b2)).unwrap();
        let then_sum = g.add(&g.compose(&a, &b).unwrap(), &g.compose(&a2, &b2).unwrap());
        prop_assert_eq!(sum_then, then_sum);
        prop_assert_eq!(g.add(&a, &g.neg(&a)), g.identity(&c.c0().zero()));
    }

    #[test]
    fn linear_combinations_compose_bilinearly(xs in prop::collection::vec((0usize..3, 0i64..4), 0..5),
                                              ys in prop::collection::vec((0usize..3, 0i64..4), 0..5),
                                              zs in prop::collection::vec((0usize..3, 0i64..4), 0..5)) {
        let inst = shipped("Tc").unwrap();
        let (g, _) = inst.generating_graph().unwrap();
        let comb = |v: &[(usize, i64)]| {
            let terms = v.iter().map(|&(n, c)| (Word::from_edges(&g, 0, vec![0; n]).unwrap(), c)).collect();
            LinComb::from_terms(Ring::Modular(4), 0, 0, terms)
        };
        let (x, y, z) = (comb(&xs), comb(&ys), comb(&zs));
        let lhs = x.add(&y).unwrap().after(&z).unwrap();
        let rhs = x.after(&z).unwrap().add(&y.after(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = z.after(&x.add(&y).unwrap()).unwrap();
        let rhs = z.after(&x).unwrap().add(&z.after(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(x.after(&y).unwrap().after(&z).unwrap(), x.after(&y.after(&z).unwrap()).unwrap());
    }

    #[test]
    fn pseudo_functor_tracks_have_the_right_ends(xs in prop::collection::vec((0usize..3, 0i64..4), 0..4),
                                                 ys in prop::collection::vec((0usize..3, 0i64..4), 0..4)) {
        let inst = shipped("Tc").unwrap();
        let (g, lifts) = inst.generating_graph().unwrap();
        let p = build_pseudo_padic(inst.category(), inst.linearity(), g, lifts, 2, BuildOptions::default(), 4).unwrap();
        let comb = |v: &[(usize, i64)]| {
            let terms = v
                .iter()
                .map(|&(n, c)| (Word::from_edges(&p.source().graph, 0, vec![0; n]).unwrap(), c))
                .collect();
            LinComb::from_terms(Ring::Modular(4), 0, 0, terms)
        };
        let (x, y) = (comb(&xs), comb(&ys));
        let t = p.target();
        let groupoid = t.groupoid(0, 0);
        let track = p.gamma_track(&x, &y);
        prop_assert_eq!(groupoid.source(&track), t.mu0(Comp::new(0, 0, 0), &p.s(&x), &p.s(&y)));
        prop_assert_eq!(p.s(&x.add(&y).unwrap()), t.hom(0, 0).c0().add(&p.s(&x), &p.s(&y)));
    }
}
