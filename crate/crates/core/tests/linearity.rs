use trackalg::fixtures::io::shipped;
use trackalg::laws::{run_laws, Budget, Mode};
use trackalg::linearity::{annihilating_prime, iterated_laws, verify_iterated, verify_linearity};

#[test]
fn tc_iterated_laws_exhaustive() {
    let inst = shipped("Tc").unwrap();
    let (t, l) = (inst.category(), inst.linearity());
    assert_eq!(annihilating_prime(t), Some(2));
    let r = verify_iterated(t, l, &Budget::default());
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    assert!(r.laws.iter().all(|x| x.mode == Mode::Exhaustive));
    assert!(r.get("iterated.gamma_p2").unwrap().passed);
}

#[test]
fn linearity_suites_pass_on_corpus() {
    for name in ["Tc", "M2", "Pair", "Q2"] {
        let inst = shipped(name).unwrap();
        let r = verify_linearity(inst.category(), inst.linearity(), &Budget::default());
        assert!(r.passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn quadratic_iterated_laws_sampled() {
    let inst = shipped("Q2").unwrap();
    let (t, l) = (inst.category(), inst.linearity());
    let budget = Budget {
        samples: 64,
        ..Budget::default()
    };
    let laws = iterated_laws(t, l, 3, 3, annihilating_prime(t));
    let r = run_laws(&laws, t.num_objects(), &budget);
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
}
