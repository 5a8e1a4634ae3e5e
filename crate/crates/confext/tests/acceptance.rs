//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any FAIL.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use confext::exactnum::{Rational, Scalar};
use confext::extsolver::tables::{section_table, SectionTable, Status, Witness};
use confext::extsolver::{classify_vir_parametric, solve_ext};
use confext::liealg::{sl2, sl2_irrep, sl3, Representation};
use confext::modeoracle::{
    compare_tables, expand_modes, mutation_suite, realization_partner, realize, verify_brackets, ModeWindow, Realization,
};
use confext::multipoly::MPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn table(section: u8) -> Result<SectionTable, String> {
    let t = section_table(section).map_err(|e| e.to_string())?;
    if let Some(r) = t.rows.iter().find(|r| r.status == Status::Fail) {
        return Err(format!("{}: expected {}, computed {}", r.label, r.expected, r.computed));
    }
    Ok(t)
}

fn summary(t: &SectionTable) -> String {
    format!("{} rows, {} reported", t.rows.len(), t.count(Status::Reported))
}

fn rand_q(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::frac(rng.gen_range(-30..=30), rng.gen_range(1..=9))
}

/// A rational pair (Δ, Δ̄) off every nonzero locus.
fn off_locus(rng: &mut ChaCha8Rng) -> (Scalar, Scalar) {
    loop {
        let dbar = rand_q(rng);
        let gap = match rng.gen_range(0..5) {
            0 => {
                let d = rng.gen_range(2..=7);
                let n = rng.gen_range(-20..=40);
                if n % d == 0 {
                    continue;
                }
                Scalar::frac(n, d)
            }
            1 => Scalar::one(),
            2 => Scalar::int(5),
            3 => Scalar::int(rng.gen_range(6..=8)),
            _ => Scalar::int(-rng.gen_range(1..=6)),
        };
        let bad = (gap == Scalar::one() && dbar.is_zero())
            || (gap == Scalar::int(5) && (dbar.is_zero() || dbar == Scalar::int(-4)));
        if !bad {
            return (&dbar + &gap, dbar);
        }
    }
}

fn c1() -> Outcome {
    let t = table(3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for i in 0..50 {
        let (delta, dbar) = off_locus(&mut rng);
        let alpha = if i % 2 == 0 { "0" } else { "2/3" };
        let p = problem("vir", &format!("M({alpha},{dbar})"), &format!("M({alpha},{delta})"));
        let e = solve_ext(&p).map_err(|e| e.to_string())?.ext_dim;
        if e != 0 {
            return Err(format!("off-locus ({delta},{dbar}) at α={alpha} gives {e}"));
        }
    }
    Ok(format!("{}, 50 random off-locus pairs give 0", summary(&t)))
}

fn c2() -> Outcome {
    let h = Scalar::quadratic(Rational::new(-5, 2), Rational::new(1, 2), 19);
    let mut want: Vec<Vec<Scalar>> = vec![vec![Scalar::int(-4), Scalar::zero()], vec![h.conj(), h]];
    want.extend((8..=20).map(|_| Vec::new()));
    for (n, w) in (6..=20).zip(want) {
        let c = classify_vir_parametric(n).map_err(|e| e.to_string())?;
        let mut got = c.roots.clone();
        got.sort_by_key(|s| s.to_string());
        let mut w = w;
        w.sort_by_key(|s| s.to_string());
        if got != w || c.identically_satisfiable {
            return Err(format!("degree {n}: roots {got:?}, expected {w:?}"));
        }
    }
    Ok("roots {0,-4} at 6, (-5±√19)/2 at 7, none for 8..20".into())
}

fn section(s: u8) -> Outcome {
    table(s).map(|t| summary(&t))
}

const WINDOW: ModeWindow = ModeWindow { n: 8, p: 8, guard: 10 };

fn s7_weight5() -> MPoly {
    let mut f = MPoly::zero();
    f.add_assign(&MPoly::monomial([3, 3, 0], Scalar::one()));
    f.add_assign(&MPoly::monomial([2, 4, 0], Scalar::frac(-3, 2)));
    f.add_assign(&MPoly::monomial([1, 5, 0], Scalar::frac(3, 10)));
    f
}

fn c6() -> Outcome {
    let mut witnesses: Vec<Witness> = Vec::new();
    for s in [2, 3, 4, 5] {
        witnesses.extend(section_table(s).map_err(|e| e.to_string())?.witnesses);
    }
    let (mut cocycles, mut checked, mut skipped, mut mutants, mut caught) = (0, 0, 0, 0, 0);
    for w in &witnesses {
        for c in &w.cocycles {
            let ma = expand_modes(&w.problem, c, WINDOW);
            let rep = verify_brackets(&ma, &WINDOW);
            if !rep.passed() {
                return Err(format!("{}: {}", w.label, rep.failed[0]));
            }
            let m = mutation_suite(&ma, &WINDOW, 12);
            cocycles += 1;
            checked += rep.checked;
            skipped += rep.skipped;
            mutants += m.mutants;
            caught += m.caught;
        }
    }
    let mut realizations = Vec::new();
    for alpha in [Scalar::zero(), Scalar::frac(2, 3)] {
        realizations.push(Realization::VirDelta1 { alpha: alpha.clone() });
        realizations.push(Realization::VirDelta2 { alpha: alpha.clone() });
        realizations.push(Realization::ExactForms { alpha: alpha.clone() });
        realizations.push(Realization::AffineKm { lie: sl2(), alpha: alpha.clone() });
        realizations.push(Realization::AffineKm { lie: sl3(), alpha: alpha.clone() });
        realizations.push(Realization::GeneralS7 { alpha, delta_bar: Scalar::zero(), delta: Scalar::int(5), f: s7_weight5() });
    }
    for r in &realizations {
        let (p, c) = realization_partner(r).map_err(|e| e.to_string())?;
        let model = realize(r, WINDOW).map_err(|e| e.to_string())?;
        if !compare_tables(&model, &expand_modes(&p, &c, WINDOW)).agrees() {
            return Err(format!("realization {} disagrees with the expansion", r.name()));
        }
        if !verify_brackets(&model, &WINDOW).passed() {
            return Err(format!("realization {} violates the brackets", r.name()));
        }
    }
    if caught * 100 < mutants * 95 {
        return Err(format!("mutants caught {caught}/{mutants}"));
    }
    Ok(format!(
        "{cocycles} cocycles, {checked} checks, {skipped} skipped, 0 failed; {} realizations agree; mutants caught {caught}/{mutants}",
        realizations.len()
    ))
}

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let q = |rng: &mut ChaCha8Rng| Rational::new(rng.gen_range(-40..=40), rng.gen_range(1..=12));
    for i in 0..300 {
        let d = [0u64, 2, 19][i % 3];
        let [a, b, c] = [0; 3].map(|_| Scalar::quadratic(q(&mut rng), q(&mut rng), d));
        field_axioms(&a, &b, &c)?;
        scalar_round_trip(&a)?;
    }
    let (g2, g3) = (sl2(), sl3());
    let mut reps: Vec<Representation> = (0..5).map(|m| sl2_irrep(&g2, m)).collect();
    reps.extend(["adj", "fund", "antifund", "triv"].map(|n| Representation::named(&g3, n).unwrap()));
    for r in &reps {
        representation_invariants(r)?;
    }
    for (alg, sub, quot) in [
        ("vir", "M(0,0)", "M(0,1)"),
        ("vir", "C(-2/3)", "M(2/3,1)"),
        ("vir", "M(1/3,-4)", "M(1/3,1)"),
        ("cur:sl2", "M(V3)", "M(V1)"),
        ("vircur:sl2", "M(0,1/2,V1)", "M(0,3/2,V1)"),
        ("virab", "M(0,0,k=0)", "M(0,1,k=0)"),
    ] {
        let p = problem(alg, sub, quot).with_probe(false);
        descriptor_round_trip(alg, &p)?;
        let r = solve_ext(&p).map_err(|e| e.to_string())?;
        coordinate_round_trip(&r)?;
        coboundaries_are_cocycles(&r)?;
        alpha_shift(&p, &rand_q(&mut rng))?;
    }
    for n in 5..=14 {
        for _ in 0..6 {
            let [d, a2, a3] = [0; 3].map(|_| Scalar::from(q(&mut rng)));
            closed_forms_match(n, &d, &a2, &a3)?;
        }
    }
    Ok(format!("field axioms, {} representations, round trips, shift invariance, recursion closed forms", reps.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Outcome); 7] = [
        ("C1", "density pairs over the Virasoro algebra", c1),
        ("C2", "parametric degree classification", c2),
        ("C3", "one-dimensional modules", || section(2)),
        ("C4", "current algebra modules", || section(4)),
        ("C5", "semidirect and abelian current modules", || section(5)),
        ("C6", "mode-algebra oracle", c6),
        ("C7", "property suites", c7),
    ];
    let mut failed = 0;
    for (key, name, run) in criteria {
        let t = Instant::now();
        let out = run();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS {key} {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {key} {name}: {msg} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
