use std::collections::BTreeMap;

use super::{solve_ext, SolveError};
use crate::confmod::{ConfAlgebra, ExtProblem, ModuleDescriptor};
use crate::exactnum::{binomial, extract_roots, Rational, Scalar, UniPoly};
use crate::multipoly::Exp;

/// `p(Δ̄)·a₂ + q(Δ̄)·a₃`.
#[derive(Clone, Debug, Default, PartialEq)]
struct Lin {
    p: UniPoly,
    q: UniPoly,
}

impl Lin {
    fn add(&self, o: &Lin) -> Lin {
        Lin { p: self.p.add(&o.p), q: self.q.add(&o.q) }
    }
    fn scale(&self, r: &Rational) -> Lin {
        Lin { p: self.p.scale(r), q: self.q.scale(r) }
    }
    fn mulp(&self, u: &UniPoly) -> Lin {
        Lin { p: self.p.mul(u), q: self.q.mul(u) }
    }
    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }
}

fn dbar() -> UniPoly {
    UniPoly::x()
}

fn konst(r: i64) -> UniPoly {
    UniPoly::constant(Rational::from_int(r))
}

fn c(n: i64, k: i64) -> Rational {
    if k < 0 {
        Rational::zero()
    } else {
        binomial(n, k as u32)
    }
}

/// Right-hand side of the λ=μ recursion at index k (its left coefficient is `2^k − (k²−k+2)`).
fn rec_rhs(n: i64, k: i64, a: &[Lin]) -> Lin {
    let mut s = Lin::default();
    let mut t = Lin::default();
    for j in 0..k {
        let aj = &a[j as usize];
        s = s.add(&aj.scale(&(&Rational::from_int(n - j) * &c(n - j - 1, k - j))));
        t = t.add(&aj.scale(&(&Rational::from_int(n - j) * &c(n - j - 1, k - j - 1))));
        if j >= 1 {
            s = s.add(&aj.scale(&-(&Rational::from_int(j) * &c(n - j, k - j + 1))));
            t = t.add(&aj.scale(&-(&Rational::from_int(j - 1) * &c(n - j, k - j))));
        }
    }
    s.add(&t.mulp(&dbar()))
}

/// Right-hand side of the top-degree recursion at k = n.
fn top_rhs(n: i64, a: &[Lin]) -> Lin {
    let mut s = Lin::default();
    for j in 0..n {
        s = s.add(&a[j as usize].scale(&Rational::from_int(n - 2 * j + 1)));
    }
    s.mulp(&dbar())
}

fn lead_coeff(k: i64) -> Rational {
    Rational::from_int((1i64 << k) - (k * k - k + 2))
}

/// a₀..a_n in terms of (a₂, a₃) with a₀ = a₁ = 0 and Δ = Δ̄ + n − 1.
fn coefficients(n: i64) -> Vec<Lin> {
    let mut a = vec![Lin::default(); (n + 1) as usize];
    a[2].p = konst(1);
    a[3].q = konst(1);
    for k in 4..=n {
        let rhs = if k < n { rec_rhs(n, k, &a) } else { top_rhs(n, &a) };
        a[k as usize] = rhs.scale(&lead_coeff(k).recip().expect("nonzero for k >= 4"));
    }
    a
}

/// a_k from the recursions at a concrete Δ̄, starting from a₀ = a₁ = 0.
pub fn recursion_coeff(n: i64, dbar: &Scalar, k: i64, a2: &Scalar, a3: &Scalar) -> Result<Scalar, SolveError> {
    if n < 3 || k < 4 || k > n {
        return Err(SolveError::OutOfRange(format!("need 4 <= k <= n, got n = {n}, k = {k}")));
    }
    let a = coefficients(n);
    let lin = &a[k as usize];
    let p = lin.p.eval_scalar(dbar)?;
    let q = lin.q.eval_scalar(dbar)?;
    Ok(&(&p * a2) + &(&q * a3))
}

/// Equations forced by the recursion at k ≤ 3 and by the parity of
/// `(∂+(1−Δ)λ)f(∂,λ) + (∂+Δ̄λ)f(∂+λ,−λ)` in λ.
fn parity_entries(n: i64, a: &[Lin]) -> Vec<Lin> {
    let mut out = Vec::new();
    for k in 1..=3.min(n - 1) {
        out.push(rec_rhs(n, k, a));
    }
    if n == 3 {
        out.push(top_rhs(n, a));
    }
    // 1 − Δ = (2 − n) − Δ̄
    let one_minus_delta = konst(2 - n).sub(&dbar());
    for k in (1..=n).step_by(2) {
        let mut s = a[(k - 1) as usize].mulp(&one_minus_delta);
        let mut t = Lin::default();
        for j in 0..k {
            let sign = if j % 2 == 0 { Rational::one() } else { Rational::from_int(-1) };
            s = s.add(&a[j as usize].scale(&(&sign * &c(n - j, k - j))));
            t = t.add(&a[j as usize].scale(&(&sign * &c(n - j, k - j - 1))));
        }
        out.push(s.add(&t.mulp(&dbar())));
    }
    out
}

type LPoly = BTreeMap<Exp, Lin>;

fn push(p: &mut LPoly, e: Exp, v: Lin) {
    let slot = p.entry(e).or_default();
    *slot = slot.add(&v);
}

/// `Σ_i factor_i · var_i` times `p`; var 3 stands for the constant term.
fn times_linear(p: &LPoly, factors: &[(usize, UniPoly)]) -> LPoly {
    let mut out = LPoly::new();
    for (e, v) in p {
        for (var, u) in factors {
            let mut e2 = *e;
            if *var < 3 {
                e2[*var] += 1;
            }
            push(&mut out, e2, v.mulp(u));
        }
    }
    out
}

/// Every coefficient of the full functional equation for the homogeneous degree-n ansatz.
fn full_entries(n: i64, a: &[Lin]) -> Vec<Lin> {
    let nn = n as u16;
    let (mut f_lm, mut f_l, mut f_dl_m, mut f_m, mut f_dm_l) =
        (LPoly::new(), LPoly::new(), LPoly::new(), LPoly::new(), LPoly::new());
    for j in 0..=n {
        let aj = &a[j as usize];
        if aj.is_zero() {
            continue;
        }
        let (ju, dj) = (j as u16, (n - j) as u16);
        for t in 0..=j {
            push(&mut f_lm, [dj, t as u16, ju - t as u16], aj.scale(&c(j, t)));
        }
        push(&mut f_l, [dj, ju, 0], aj.clone());
        push(&mut f_m, [dj, 0, ju], aj.clone());
        for t in 0..=(n - j) {
            let bc = c(n - j, t);
            push(&mut f_dl_m, [dj - t as u16, t as u16, ju], aj.scale(&bc));
            push(&mut f_dm_l, [dj - t as u16, ju, t as u16], aj.scale(&bc));
        }
    }
    let _ = nn;
    let one = konst(1);
    let delta = dbar().add(&konst(n - 1));
    // (λ−μ)f(∂,λ+μ)
    let t1 = times_linear(&f_lm, &[(1, one.clone()), (2, konst(-1))]);
    // (∂+λ+Δμ)f(∂,λ)
    let t2 = times_linear(&f_l, &[(0, one.clone()), (1, one.clone()), (2, delta.clone())]);
    // (∂+Δ̄λ)f(∂+λ,μ)
    let t3 = times_linear(&f_dl_m, &[(0, one.clone()), (1, dbar())]);
    // (∂+μ+Δλ)f(∂,μ)
    let t4 = times_linear(&f_m, &[(0, one.clone()), (2, one.clone()), (1, delta)]);
    // (∂+Δ̄μ)f(∂+μ,λ)
    let t5 = times_linear(&f_dm_l, &[(0, one), (2, dbar())]);
    let mut total = LPoly::new();
    let m1 = Rational::from_int(-1);
    for (e, v) in t1.into_iter().chain(t4).chain(t5) {
        push(&mut total, e, v);
    }
    for (e, v) in t2.into_iter().chain(t3) {
        push(&mut total, e, v.scale(&m1));
    }
    total.into_values().filter(|v| !v.is_zero()).collect()
}

fn gcd_of(entries: &[Lin]) -> UniPoly {
    entries
        .iter()
        .flat_map(|l| [&l.p, &l.q])
        .fold(UniPoly::zero(), |g, e| g.gcd(e))
}

#[derive(Clone, Debug)]
pub struct ConditionPolys {
    pub n: usize,
    /// `a_k = p_k(Δ̄)·a₂ + q_k(Δ̄)·a₃`.
    pub coefficients: Vec<(UniPoly, UniPoly)>,
    /// Number of equations collected from the full functional equation.
    pub equations: usize,
    /// The (equations)×(a₂,a₃) matrix has rank ≤ 1 over ℚ(Δ̄).
    pub minors_vanish: bool,
    /// gcd from the low-k recursion and parity equations only.
    pub parity_condition: UniPoly,
    /// gcd of all equations; zero means every Δ̄ works.
    pub condition: UniPoly,
    pub identically_satisfiable: bool,
    /// Roots confirmed by a fixed-parameter solve.
    pub roots: Vec<Scalar>,
    /// Roots of `condition` that the fixed-parameter solve rejected.
    pub rejected: Vec<Scalar>,
    /// Unfactored part of `condition` (irreducible factors of degree ≥ 3).
    pub residual: UniPoly,
}

impl ConditionPolys {
    /// `condition` with coprime integer coefficients and positive leading term.
    pub fn condition_primitive(&self) -> UniPoly {
        self.condition.primitive_rational()
    }
}

/// Degree-n classification of Ext(M(0,Δ̄+n−1), M(0,Δ̄)) over symbolic Δ̄.
pub fn classify_vir_parametric(n: usize) -> Result<ConditionPolys, SolveError> {
    if n < 3 {
        return Err(SolveError::OutOfRange(format!("degree {n} < 3")));
    }
    let ni = n as i64;
    let a = coefficients(ni);
    let parity = parity_entries(ni, &a);
    let mut entries = parity.clone();
    let full = full_entries(ni, &a);
    let equations = full.len();
    entries.extend(full);
    let minors_vanish = match entries.iter().find(|e| !e.is_zero()) {
        None => true,
        Some(r0) => entries.iter().all(|e| e.p.mul(&r0.q).sub(&r0.p.mul(&e.q)).is_zero()),
    };
    let condition = gcd_of(&entries);
    let parity_condition = gcd_of(&parity);
    let identically_satisfiable = condition.is_zero();
    let mut roots = Vec::new();
    let mut rejected = Vec::new();
    let mut residual = UniPoly::zero();
    if !identically_satisfiable {
        let split = extract_roots(&condition)?;
        residual = split.residual.clone();
        let mut candidates: Vec<Scalar> = split.rational_root_set().into_iter().map(|r| Scalar::quadratic(r, Rational::zero(), 0)).collect();
        candidates.extend(split.quadratic_roots());
        for r in candidates {
            if verify_root(n, &r)? {
                roots.push(r);
            } else {
                rejected.push(r);
            }
        }
    }
    Ok(ConditionPolys {
        n,
        coefficients: a.into_iter().map(|l| (l.p, l.q)).collect(),
        equations,
        minors_vanish,
        parity_condition,
        condition,
        identically_satisfiable,
        roots,
        rejected,
        residual,
    })
}

/// Fixed-parameter check that Δ̄ = r gives a nontrivial degree-n extension.
pub(crate) fn verify_root(n: usize, r: &Scalar) -> Result<bool, SolveError> {
    let delta = r + &Scalar::int(n as i64 - 1);
    let p = ExtProblem::new(
        ConfAlgebra::Vir,
        ModuleDescriptor::VirMod { alpha: Scalar::zero(), delta: r.clone() },
        ModuleDescriptor::VirMod { alpha: Scalar::zero(), delta },
    )?
    .with_bounds(n as u16, n as u16)
    .with_probe(false);
    Ok(solve_ext(&p)?.ext_dim >= 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_recursion_step() {
        let q = |s: &str| s.parse::<Scalar>().unwrap();
        assert_eq!(recursion_coeff(6, &q("0"), 4, &q("1"), &q("0")).unwrap(), q("2"));
        assert_eq!(recursion_coeff(6, &q("0"), 4, &q("0"), &q("1")).unwrap(), q("-3/2"));
        assert!(recursion_coeff(6, &q("0"), 4, &q("0"), &q("0")).unwrap().is_zero());
        assert!(recursion_coeff(6, &q("0"), 3, &q("1"), &q("0")).is_err());
    }

    #[test]
    fn degree_six_condition() {
        let c = classify_vir_parametric(6).unwrap();
        assert!(c.minors_vanish);
        let mut r: Vec<String> = c.roots.iter().map(|s| s.to_string()).collect();
        r.sort();
        assert_eq!(r, vec!["-4", "0"]);
    }
}
