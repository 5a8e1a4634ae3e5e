use super::*;
use crate::confmod::parse_algebra;
use crate::confmod::parse_descriptor;
use crate::extsolver::solve_ext;

fn problem(alg: &str, sub: &str, quot: &str) -> ExtProblem {
    let (a, ctx) = parse_algebra(alg).unwrap();
    let s = parse_descriptor(sub, &a, ctx.as_ref()).unwrap();
    let q = parse_descriptor(quot, &a, ctx.as_ref()).unwrap();
    ExtProblem::new(a, s, q).unwrap()
}

const SMALL: ModeWindow = ModeWindow { n: 4, p: 4, guard: 6 };

#[test]
fn zero_cocycle_reproduces_density_modes() {
    let p = problem("vir", "M(2/3,1/2)", "M(2/3,3)");
    let c = Cocycle::zero(1, 1, 1);
    let ma = expand_modes(&p, &c, SMALL);
    let (alpha, delta) = (Scalar::frac(2, 3), Scalar::int(3));
    for m in -3..=3 {
        for n in -4..=4 {
            let mut want = ModeVec::new();
            let k = &(&(&delta - &Scalar::one()) * &Scalar::int(m + 1)) - &Scalar::int(n);
            axpy(&mut want, &k, &unit(1, m + n));
            axpy(&mut want, &alpha, &unit(1, m + n + 1));
            assert_eq!(ma.get(&(0, m, 1, n)), Some(&want), "L_{m} v[{n}]");
        }
    }
}

#[test]
fn constant_correction_lands_one_index_up() {
    // f = 1 between equal weights: L_m u[p] picks up v'[m+p+1] (that is v'_[M+p] for L_[M]).
    let p = problem("vir", "M(0,1)", "M(0,1)");
    let mut c = Cocycle::zero(1, 1, 1);
    c.f[0][0][0] = MPoly::one();
    let ma = expand_modes(&p, &c, SMALL);
    let v = ma.get(&(0, 2, 1, 3)).unwrap();
    assert_eq!(v.get(&(0, 6)), Some(&Scalar::one()));
    assert!(verify_brackets(&ma, &SMALL).passed());
}

#[test]
fn sub_torsion_modes_are_residues() {
    let alpha = Scalar::frac(2, 3);
    let p = problem("vir", "C(-2/3)", "M(2/3,1)");
    let space = ModeSpace::from_problem(&p, &Cocycle::zero(1, 1, 1));
    for q in -6..4 {
        let want = residue_power(q, &alpha);
        assert_eq!(space.nf(0, q).get(&(0, -1)).cloned().unwrap_or_default(), want);
    }
}

#[test]
fn solved_cocycles_pass_and_mutants_fail() {
    for (alg, sub, quot) in [
        ("vir", "C(-1)", "M(1,1)"),
        ("vir", "M(1,1)", "C(-1)"),
        ("vir", "M(0,0)", "M(0,1)"),
        ("vir", "M(2/3,0)", "M(2/3,0)"),
        ("cur:sl2", "C(0)", "M(adj)"),
    ] {
        let p = problem(alg, sub, quot).with_probe(false);
        let r = solve_ext(&p).unwrap();
        assert!(r.ext_dim > 0, "{sub}/{quot}");
        for c in r.quotient_cocycles() {
            let ma = expand_modes(&p, &c, SMALL);
            let rep = verify_brackets(&ma, &SMALL);
            assert!(rep.passed(), "{sub}/{quot}: {}", rep.failed[0]);
            assert!(rep.checked > 0);
            let m = mutation_suite(&ma, &SMALL, 20);
            assert_eq!(m.caught, m.mutants, "{sub}/{quot}: {m:?}");
        }
    }
}

#[test]
fn non_cocycle_is_rejected() {
    let p = problem("vir", "C(-1)", "M(1,1)");
    let mut c = Cocycle::zero(1, 1, 1);
    c.f[0][0][0] = MPoly::monomial([0, 3, 0], Scalar::one());
    assert!(crate::extsolver::triviality_certificate(&p, &c).is_err());
    let ma = expand_modes(&p, &c, SMALL);
    assert!(!verify_brackets(&ma, &SMALL).passed());
}

#[test]
fn wrong_splitting_relation_is_rejected() {
    // ∂c = −c − 2v' is not compatible with the correction f = −1.
    let p = problem("vir", "M(1,1)", "C(-1)");
    let mut c = Cocycle::zero(1, 1, 1);
    c.f[0][0][0] = MPoly::constant(-Scalar::one());
    c.a[0][0] = MPoly::constant(Scalar::int(-2));
    let ma = expand_modes(&p, &c, SMALL);
    assert!(!verify_brackets(&ma, &SMALL).passed());
}

/// The degree-six cocycle with sub `M(0,0)` and quotient `M(0,5)`.
fn s7_weight5() -> MPoly {
    let mut f = MPoly::zero();
    f.add_assign(&MPoly::monomial([3, 3, 0], Scalar::one()));
    f.add_assign(&MPoly::monomial([2, 4, 0], Scalar::frac(-3, 2)));
    f.add_assign(&MPoly::monomial([1, 5, 0], Scalar::frac(3, 10)));
    f
}

fn realizations() -> Vec<Realization> {
    let mut out = Vec::new();
    for alpha in [Scalar::zero(), Scalar::frac(2, 3)] {
        out.push(Realization::VirDelta1 { alpha: alpha.clone() });
        out.push(Realization::VirDelta2 { alpha: alpha.clone() });
        out.push(Realization::ExactForms { alpha: alpha.clone() });
        out.push(Realization::AffineKm { lie: crate::liealg::sl2(), alpha: alpha.clone() });
        out.push(Realization::GeneralS7 {
            alpha: alpha.clone(),
            delta_bar: Scalar::zero(),
            delta: Scalar::int(5),
            f: s7_weight5(),
        });
    }
    out
}

#[test]
fn realizations_match_expansion() {
    for r in realizations() {
        let (p, c) = realization_partner(&r).unwrap();
        let model = realize(&r, SMALL).unwrap();
        let expanded = expand_modes(&p, &c, SMALL);
        let diff = compare_tables(&model, &expanded);
        assert!(diff.agrees(), "{}: {:?}", r.name(), &diff.mismatched[..diff.mismatched.len().min(3)]);
        assert!(verify_brackets(&model, &SMALL).passed(), "{}", r.name());
    }
}

#[test]
fn realization_names() {
    assert!(Realization::parse("affine-km:sl3", Scalar::zero()).is_ok());
    assert!(matches!(Realization::parse("nope", Scalar::zero()), Err(OracleError::UnknownRealization(_))));
}
