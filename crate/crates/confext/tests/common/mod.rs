//! Independent oracles shared by the property suites and the acceptance harness.
#![allow(dead_code)]

use confext::confmod::{parse_algebra, parse_descriptor, Cocycle, ExtProblem};
use confext::exactnum::{ArithError, Scalar};
use confext::extsolver::{recursion_coeff, solve_ext, ExtResult};
use confext::liealg::Representation;
use confext::multipoly::linalg::rref;
use confext::multipoly::{MPoly, Var};

pub fn s(n: i64) -> Scalar {
    Scalar::int(n)
}

pub fn fr(n: i64, d: i64) -> Scalar {
    Scalar::frac(n, d)
}

fn prod(xs: &[Scalar]) -> Scalar {
    xs.iter().fold(Scalar::one(), |a, b| &a * b)
}

/// `(n−i)` for each listed `i`, times `(n − top + w·Δ̄)`.
fn chain(n: i64, from: i64, to: i64, top: i64, w: i64, dbar: &Scalar) -> Scalar {
    let mut xs: Vec<Scalar> = (from..=to).map(|i| s(n - i)).collect();
    xs.push(&s(n - top) + &(&s(w) * dbar));
    prod(&xs)
}

/// The printed closed forms for a₄…a₈ in terms of lower coefficients.
/// `a[k]` must hold a₀…a_{k−1}. Returns `None` outside the printed range.
pub fn closed_form(n: i64, k: usize, dbar: &Scalar, a: &[Scalar]) -> Option<Scalar> {
    let d = dbar;
    let t = |c: Scalar, x: Scalar, y: &Scalar| &(&c * &x) * y;
    let sum = |xs: Vec<Scalar>| xs.into_iter().fold(Scalar::zero(), |p, q| &p + &q);
    let v = match (k, n) {
        (4, n) if n >= 5 => sum(vec![
            t(fr(1, 12), chain(n, 2, 3, 4, 3, d), &a[2]),
            t(fr(-1, 4), chain(n, 3, 3, 4, 2, d), &a[3]),
        ]),
        (5, n) if n >= 6 => sum(vec![
            t(fr(1, 120), chain(n, 2, 4, 5, 4, d), &a[2]),
            t(fr(-1, 10), chain(n, 4, 4, 5, 2, d), &a[4]),
        ]),
        (6, 6) => {
            let r = &(&(&(&s(3) * &a[2]) + &a[3]) - &a[4]) - &(&s(3) * &a[5]);
            &(d * &r) * &fr(1, 32)
        }
        (6, n) if n >= 7 => {
            let r = sum(vec![
                t(fr(1, 40), chain(n, 2, 5, 6, 5, d), &a[2]),
                t(fr(1, 24), chain(n, 3, 5, 6, 4, d), &a[3]),
                t(fr(-1, 6), chain(n, 4, 5, 6, 3, d), &a[4]),
                t(fr(-3, 2), chain(n, 5, 5, 6, 2, d), &a[5]),
            ]);
            &r * &fr(1, 32)
        }
        (7, n) if n >= 8 => {
            let r = sum(vec![
                t(fr(1, 180), chain(n, 2, 6, 7, 6, d), &a[2]),
                t(fr(1, 60), chain(n, 3, 6, 7, 5, d), &a[3]),
                t(fr(-1, 3), chain(n, 5, 6, 7, 3, d), &a[5]),
                t(s(-2), chain(n, 6, 6, 7, 2, d), &a[6]),
            ]);
            &r * &fr(1, 84)
        }
        (8, 8) => {
            let c = [5, 3, 1, -1, -3, -5];
            let r = sum((0..6).map(|i| &s(c[i]) * &a[i + 2]).collect());
            &(d * &r) * &fr(1, 198)
        }
        (8, n) if n >= 9 => {
            let r = sum(vec![
                t(fr(1, 1008), chain(n, 2, 7, 8, 7, d), &a[2]),
                t(fr(1, 240), chain(n, 3, 7, 8, 6, d), &a[3]),
                t(fr(1, 120), chain(n, 4, 7, 8, 5, d), &a[4]),
                t(fr(-1, 24), chain(n, 5, 7, 8, 4, d), &a[5]),
                t(fr(-1, 2), chain(n, 6, 7, 8, 3, d), &a[6]),
                t(fr(-5, 2), chain(n, 7, 7, 8, 2, d), &a[7]),
            ]);
            &r * &fr(1, 198)
        }
        _ => return None,
    };
    Some(v)
}

pub fn problem(alg: &str, sub: &str, quot: &str) -> ExtProblem {
    let (a, ctx) = parse_algebra(alg).unwrap();
    let s = parse_descriptor(sub, &a, ctx.as_ref()).unwrap();
    let q = parse_descriptor(quot, &a, ctx.as_ref()).unwrap();
    ExtProblem::new(a, s, q).unwrap()
}

type Check = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Ring and field identities for three elements of one field.
pub fn field_axioms(a: &Scalar, b: &Scalar, c: &Scalar) -> Check {
    let ctx = || format!("a={a} b={b} c={c}");
    ensure(&(a + b) + c == a + &(b + c), || format!("additive associativity: {}", ctx()))?;
    ensure(&(a * b) * c == a * &(b * c), || format!("multiplicative associativity: {}", ctx()))?;
    ensure(a + b == b + a && a * b == b * a, || format!("commutativity: {}", ctx()))?;
    ensure(a * &(b + c) == &(a * b) + &(a * c), || format!("distributivity: {}", ctx()))?;
    ensure(&(a - a) == &Scalar::zero() && &(a * &Scalar::one()) == a, || format!("identities: {}", ctx()))?;
    ensure(&(a * b).norm() == &(&a.norm() * &b.norm()), || format!("norm is multiplicative: {}", ctx()))?;
    if !a.is_zero() {
        let inv = a.try_inv().map_err(|e| e.to_string())?;
        ensure((a * &inv).is_one(), || format!("inverse: {}", ctx()))?;
        let q = b.try_div(a).map_err(|e| e.to_string())?;
        ensure(&(&q * a) == b, || format!("division: {}", ctx()))?;
    }
    Ok(())
}

fn mmul(x: &[Vec<Scalar>], y: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = x.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(Scalar::zero(), |acc, t| &acc + &(&x[i][t] * &y[t][j]))).collect())
        .collect()
}

/// Jacobi identity from the structure constants, and `ρ([x,y]) = [ρx,ρy]` on basis pairs.
pub fn representation_invariants(rep: &Representation) -> Check {
    let g = &rep.algebra;
    let n = g.dim();
    let br = |i: usize, j: usize| -> Vec<Scalar> { (0..n).map(|k| g.structure_constant(i, j, k)).collect() };
    let lin = |v: &[Scalar], j: usize, left: bool| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); n];
        for (i, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let b = if left { br(i, j) } else { br(j, i) };
            for k in 0..n {
                out[k] = &out[k] + &(c * &b[k]);
            }
        }
        out
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let t1 = lin(&br(j, k), i, false);
                let t2 = lin(&br(k, i), j, false);
                let t3 = lin(&br(i, j), k, false);
                let ok = (0..n).all(|m| (&(&t1[m] + &t2[m]) + &t3[m]).is_zero());
                ensure(ok, || format!("{}: Jacobi fails at ({i},{j},{k})", g.name))?;
            }
            let d = rep.dim();
            let (x, y) = (rep.matrix(i), rep.matrix(j));
            let (xy, yx) = (mmul(x, y), mmul(y, x));
            let c = br(i, j);
            for r in 0..d {
                for s in 0..d {
                    let lhs = &xy[r][s] - &yx[r][s];
                    let rhs = (0..n).fold(Scalar::zero(), |acc, k| &acc + &(&c[k] * &rep.matrix(k)[r][s]));
                    ensure(lhs == rhs, || format!("{}: not a homomorphism at ({i},{j})", rep.name))?;
                }
            }
        }
    }
    Ok(())
}

pub fn scalar_round_trip(x: &Scalar) -> Check {
    let back: Scalar = x.to_string().parse().map_err(|e: ArithError| e.to_string())?;
    ensure(&back == x, || format!("{x} parsed back as {back}"))
}

/// Display then parse a descriptor of `p`; the problem must come back equal.
pub fn descriptor_round_trip(alg: &str, p: &ExtProblem) -> Check {
    let (a, ctx) = parse_algebra(alg).map_err(|e| e.to_string())?;
    for m in [&p.sub, &p.quot] {
        let back = parse_descriptor(&m.to_string(), &a, ctx.as_ref()).map_err(|e| e.to_string())?;
        ensure(&back == m, || format!("{m} parsed back as {back}"))?;
    }
    Ok(())
}

/// Coordinates of an evaluated quotient vector reproduce the vector.
pub fn coordinate_round_trip(r: &ExtResult) -> Check {
    for v in r.quotient_basis.iter().chain(&r.coboundary_basis) {
        let c = r.ansatz.evaluate(v);
        let back = r.ansatz.coordinates(&c)?;
        ensure(&back == v, || format!("coordinates changed for {}", r.problem.sub))?;
    }
    Ok(())
}

/// `p(∂ + c, λ)`.
fn shift_poly(p: &MPoly, c: &Scalar) -> MPoly {
    p.substitute(Var::D, &MPoly::linear(&[(Var::D, Scalar::one())], c.clone())).unwrap()
}

/// `∂ ↦ ∂ + c` applied to every polynomial of a cocycle.
pub fn shift_cocycle(c: &Cocycle, by: &Scalar) -> Cocycle {
    Cocycle {
        f: c.f.iter().map(|g| g.iter().map(|q| q.iter().map(|p| shift_poly(p, by)).collect()).collect()).collect(),
        a: c.a.iter().map(|q| q.iter().map(|p| shift_poly(p, by)).collect()).collect(),
    }
}

/// The shifted problem has the same Ext, and shifted representatives stay independent classes.
pub fn alpha_shift(p: &ExtProblem, by: &Scalar) -> Check {
    let r = solve_ext(p).map_err(|e| e.to_string())?;
    let q = p.shifted(by);
    let s = solve_ext(&q).map_err(|e| e.to_string())?;
    ensure(r.ext_dim == s.ext_dim, || format!("{} / {}: {} vs {} after shift {by}", p.sub, p.quot, r.ext_dim, s.ext_dim))?;
    let moved: Vec<Cocycle> = r.quotient_cocycles().iter().map(|c| shift_cocycle(c, by)).collect();
    let rank = s.class_rank(&moved).map_err(|e| format!("{} / {} shifted by {by}: {e}", p.sub, p.quot))?;
    ensure(rank == r.ext_dim, || format!("{} / {}: shifted classes have rank {rank}", p.sub, p.quot))
}

/// Every printed closed form agrees with the recursion on `a₂, a₃`.
pub fn closed_forms_match(n: i64, dbar: &Scalar, a2: &Scalar, a3: &Scalar) -> Check {
    let mut a = vec![Scalar::zero(), Scalar::zero(), a2.clone(), a3.clone()];
    for k in 4..=n.min(8) {
        let rec = recursion_coeff(n, dbar, k, a2, a3).map_err(|e| e.to_string())?;
        if let Some(c) = closed_form(n, k as usize, dbar, &a) {
            ensure(c == rec, || format!("n={n} k={k} Δ̄={dbar}: closed form {c}, recursion {rec}"))?;
        }
        a.push(rec);
    }
    Ok(())
}

/// Coboundaries lie in the cocycle span.
pub fn coboundaries_are_cocycles(r: &ExtResult) -> Check {
    let z = rref(r.cocycle_basis.clone(), r.ansatz.ncols);
    let bad = r.coboundary_basis.iter().position(|b| !z.reduce(b).is_empty());
    ensure(bad.is_none(), || format!("{} / {}: coboundary {bad:?} is not a cocycle", r.problem.sub, r.problem.quot))
}
