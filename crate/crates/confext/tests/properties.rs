mod common;

use common::*;
use confext::exactnum::{Rational, Scalar};
use confext::extsolver::{classify_vir_parametric, solve_ext};
use confext::liealg::{sl2, sl2_irrep, sl3, Representation};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

fn scalar_in(d: u64) -> impl Strategy<Value = Scalar> {
    (rational(), rational()).prop_map(move |(a, b)| Scalar::quadratic(a, b, d))
}

fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    prop_oneof![Just(0u64), Just(2), Just(19)].prop_flat_map(|d| (scalar_in(d), scalar_in(d), scalar_in(d)))
}

proptest! {
    #[test]
    fn scalar_field_axioms((a, b, c) in triple()) {
        prop_assert_eq!(field_axioms(&a, &b, &c), Ok(()));
    }

    #[test]
    fn scalar_display_parses_back((a, _, _) in triple()) {
        prop_assert_eq!(scalar_round_trip(&a), Ok(()));
    }

    #[test]
    fn closed_forms_agree_with_recursion(n in 5i64..=14, d in rational(), a2 in rational(), a3 in rational()) {
        let r = closed_forms_match(n, &Scalar::from(d), &Scalar::from(a2), &Scalar::from(a3));
        prop_assert_eq!(r, Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shift_preserves_vir_ext(gap in 0u32..=4, dbar in rational(), c in rational()) {
        let dbar = Scalar::from(dbar);
        let delta = &dbar + &Scalar::from(gap as i64);
        let p = problem("vir", &format!("M(0,{dbar})"), &format!("M(0,{delta})"));
        prop_assert_eq!(alpha_shift(&p, &Scalar::from(c)), Ok(()));
    }
}

fn reps() -> Vec<Representation> {
    let (a, b) = (sl2(), sl3());
    let mut v: Vec<Representation> = (0..5).map(|m| sl2_irrep(&a, m)).collect();
    for name in ["adj", "fund", "antifund", "triv"] {
        v.push(Representation::named(&b, name).unwrap());
    }
    v
}

#[test]
fn representations_respect_brackets() {
    for r in reps() {
        assert_eq!(representation_invariants(&r), Ok(()));
    }
}

const SAMPLES: [(&str, &str, &str); 9] = [
    ("vir", "C(-2/3)", "M(2/3,1)"),
    ("vir", "M(2/3,2)", "C(-2/3)"),
    ("vir", "M(0,0)", "M(0,1)"),
    ("vir", "M(1/3,-4)", "M(1/3,1)"),
    ("cur:sl2", "M(V3)", "M(V1)"),
    ("cur:sl2", "M(adj)", "C(0)"),
    ("vircur:sl2", "M(0,1/2,V1)", "M(0,3/2,V1)"),
    ("virab", "M(0,0,k=0)", "M(0,1,k=0)"),
    ("virab", "C(0)", "M(0,1,k=1)"),
];

#[test]
fn descriptors_and_coordinates_round_trip() {
    for (alg, sub, quot) in SAMPLES {
        let p = problem(alg, sub, quot);
        assert_eq!(descriptor_round_trip(alg, &p), Ok(()));
        let r = solve_ext(&p.with_probe(false)).unwrap();
        assert_eq!(coordinate_round_trip(&r), Ok(()));
        assert_eq!(coboundaries_are_cocycles(&r), Ok(()));
    }
}

#[test]
fn shift_preserves_module_ext() {
    for (alg, sub, quot) in SAMPLES {
        let p = problem(alg, sub, quot).with_probe(false);
        assert_eq!(alpha_shift(&p, &Scalar::frac(-3, 5)), Ok(()));
    }
}

/// Without a λ⁰ part no coboundary survives when U≇V, so these cocycles are
/// genuine and stop at total degree two.
#[test]
fn inequivalent_current_cocycles_stop_at_degree_two() {
    for (sub, quot) in [("M(V3)", "M(V1)"), ("M(V1)", "M(V3)"), ("M(V4)", "M(adj)"), ("M(adj)", "M(V4)")] {
        let r = solve_ext(&problem("cur:sl2", sub, quot).with_probe(false)).unwrap();
        let ans = &r.ansatz;
        let free = r.cocycles_avoiding(|c| ans.column_slot(c).1[1] == 0);
        assert!(!free.is_empty(), "{sub}/{quot}");
        for v in &free {
            let top = v.iter().map(|(c, _)| ans.column_slot(*c).1.iter().sum::<u16>()).max();
            assert!(top <= Some(2), "{sub}/{quot}: degree {top:?}");
        }
    }
}

/// Ext jumps from 0 to 1 exactly at the classified roots.
#[test]
fn classified_roots_are_jump_points() {
    for n in [6usize, 7] {
        let c = classify_vir_parametric(n).unwrap();
        assert!(!c.roots.is_empty());
        for dbar in c.roots.iter().cloned().chain([Scalar::frac(1, 3)]) {
            let delta = &dbar + &Scalar::from(n as i64 - 1);
            let p = problem("vir", &format!("M(0,{dbar})"), &format!("M(0,{delta})"));
            let e = solve_ext(&p.with_probe(false)).unwrap().ext_dim;
            assert_eq!(e, usize::from(c.roots.contains(&dbar)), "n={n} Δ̄={dbar}");
        }
    }
}
