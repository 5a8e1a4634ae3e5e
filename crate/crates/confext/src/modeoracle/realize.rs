//! Explicit function-space models of specific extensions. Module modes are
//! Laurent monomials `t^p e^{−αt}` (times a density power), `L_m` acts as the
//! vector field `−t^{m+1} d/dt`, and the correction terms are residues.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::{residue_power, BasisKind, ModeAction, ModeKey, ModeSpace, ModeVec, ModeWindow, OracleError};
use crate::confmod::{Cocycle, ConfAlgebra, ExtProblem, ModuleDescriptor};
use crate::exactnum::{binomial, falling, Scalar};
use crate::liealg::{invariant_form, LieAlgebra};
use crate::multipoly::{MPoly, Var};

#[derive(Clone, Debug)]
pub enum Realization {
    /// Functions extended by `Res(h''·g)`: quotient `M(α,1)` over `C(−α)`.
    VirDelta1 { alpha: Scalar },
    /// Densities of weight −1 extended by `Res(h'''·g)`: `M(α,2)` over `C(−α)`.
    VirDelta2 { alpha: Scalar },
    /// One-forms modulo nothing: exact forms `M(α,1)` under the class of `t^{-1}dt`.
    ExactForms { alpha: Scalar },
    /// Loop module of the adjoint with the Killing residue cocycle.
    AffineKm { lie: Arc<LieAlgebra>, alpha: Scalar },
    /// Two density modules glued by a differential operator with symbol `f`.
    GeneralS7 { alpha: Scalar, delta_bar: Scalar, delta: Scalar, f: MPoly },
}

impl Realization {
    /// `vir-delta1`, `vir-delta2`, `exact-forms`, `affine-km:<lie>`.
    pub fn parse(name: &str, alpha: Scalar) -> Result<Self, OracleError> {
        Ok(match name {
            "vir-delta1" => Realization::VirDelta1 { alpha },
            "vir-delta2" => Realization::VirDelta2 { alpha },
            "exact-forms" => Realization::ExactForms { alpha },
            _ => match name.strip_prefix("affine-km:") {
                Some(l) => Realization::AffineKm {
                    lie: crate::liealg::builtin(l).map_err(|e| OracleError::BadParameters(name.into(), e.to_string()))?,
                    alpha,
                },
                None => return Err(OracleError::UnknownRealization(name.into())),
            },
        })
    }

    pub fn name(&self) -> String {
        match self {
            Realization::VirDelta1 { .. } => "vir-delta1".into(),
            Realization::VirDelta2 { .. } => "vir-delta2".into(),
            Realization::ExactForms { .. } => "exact-forms".into(),
            Realization::AffineKm { lie, .. } => format!("affine-km:{}", lie.name),
            Realization::GeneralS7 { .. } => "general-s7".into(),
        }
    }
}

fn bad(r: &Realization, e: impl ToString) -> OracleError {
    OracleError::BadParameters(r.name(), e.to_string())
}

fn lam(k: u16) -> MPoly {
    MPoly::monomial([0, k, 0], Scalar::one())
}

/// The λ-bracket data the realization is expected to reproduce.
pub fn realization_partner(r: &Realization) -> Result<(ExtProblem, Cocycle), OracleError> {
    let vir_over_c = |alpha: &Scalar, delta: i64, k: u16| -> Result<(ExtProblem, Cocycle), OracleError> {
        let p = ExtProblem::new(
            ConfAlgebra::Vir,
            ModuleDescriptor::OneDim { beta: -alpha.clone() },
            ModuleDescriptor::VirMod { alpha: alpha.clone(), delta: Scalar::int(delta) },
        )
        .map_err(|e| bad(r, e))?;
        let mut c = Cocycle::zero(1, 1, 1);
        c.f[0][0][0] = lam(k).neg();
        Ok((p, c))
    };
    match r {
        Realization::VirDelta1 { alpha } => vir_over_c(alpha, 1, 2),
        Realization::VirDelta2 { alpha } => vir_over_c(alpha, 2, 3),
        Realization::ExactForms { alpha } => {
            let p = ExtProblem::new(
                ConfAlgebra::Vir,
                ModuleDescriptor::VirMod { alpha: alpha.clone(), delta: Scalar::one() },
                ModuleDescriptor::OneDim { beta: -alpha.clone() },
            )
            .map_err(|e| bad(r, e))?;
            let mut c = Cocycle::zero(1, 1, 1);
            c.f[0][0][0] = MPoly::constant(-Scalar::one());
            c.a[0][0] = MPoly::constant(-Scalar::one());
            Ok((p, c))
        }
        Realization::AffineKm { lie, alpha } => {
            let kill = invariant_form(lie).map_err(|e| bad(r, e))?;
            let p = ExtProblem::new(
                ConfAlgebra::Cur(lie.clone()),
                ModuleDescriptor::OneDim { beta: -alpha.clone() },
                ModuleDescriptor::CurMod { rep: lie.adjoint() },
            )
            .map_err(|e| bad(r, e))?;
            let n = lie.dim();
            let mut c = Cocycle::zero(n, n, 1);
            for a in 0..n {
                for b in 0..n {
                    c.f[a][b][0] = lam(1).scale(&kill[a][b]);
                }
            }
            Ok((p, c))
        }
        Realization::GeneralS7 { alpha, delta_bar, delta, f } => {
            let p = ExtProblem::new(
                ConfAlgebra::Vir,
                ModuleDescriptor::VirMod { alpha: alpha.clone(), delta: delta_bar.clone() },
                ModuleDescriptor::VirMod { alpha: alpha.clone(), delta: delta.clone() },
            )
            .map_err(|e| bad(r, e))?;
            let shift = MPoly::linear(&[(Var::D, Scalar::one())], alpha.clone());
            let mut c = Cocycle::zero(1, 1, 1);
            c.f[0][0][0] = f.substitute(Var::D, &shift).map_err(|e| bad(r, e))?;
            Ok((p, c))
        }
    }
}

/// Finite Laurent series in `t`; an `e^{−αt}` factor is implicit where noted.
type Laurent = BTreeMap<i64, Scalar>;

fn add_to(f: &mut Laurent, k: i64, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = f.entry(k).or_default();
    *e = &*e + &c;
    if e.is_zero() {
        f.remove(&k);
    }
}

fn mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (i, x) in a {
        for (j, y) in b {
            add_to(&mut out, i + j, x * y);
        }
    }
    out
}

/// `(d/dt)^r` of `h = −t^{m+1}`.
fn h_deriv(m: i64, r: u32) -> Laurent {
    let mut out = Laurent::new();
    add_to(&mut out, m + 1 - r as i64, -Scalar::from(falling(m + 1, r)));
    out
}

/// `(d/dt)^j (t^n e^{−αt})`, with the exponential left implicit.
fn g_deriv(n: i64, alpha: &Scalar, j: u32) -> Laurent {
    let mut out = Laurent::new();
    let mut pow = Scalar::one();
    for l in 0..=j {
        let c = &(&Scalar::from(binomial(j as i64, l)) * &Scalar::from(falling(n, j - l))) * &pow;
        add_to(&mut out, n - (j - l) as i64, c);
        pow = &pow * &-alpha.clone();
    }
    out
}

/// `L_m` on `g·dt^w` with `g = t^n e^{−αt}`: `h·g' + w·h'·g`.
fn density_action(m: i64, n: i64, w: &Scalar, alpha: &Scalar) -> Laurent {
    let mut out = mul(&h_deriv(m, 0), &g_deriv(n, alpha, 1));
    for (k, c) in mul(&h_deriv(m, 1), &g_deriv(n, alpha, 0)) {
        add_to(&mut out, k, w * &c);
    }
    out
}

fn residue(f: &Laurent, alpha: &Scalar) -> Scalar {
    f.iter().fold(Scalar::zero(), |acc, (k, c)| &acc + &(c * &residue_power(*k, alpha)))
}

fn to_modes(f: &Laurent, x: usize) -> ModeVec {
    f.iter().map(|(k, c)| ((x, *k), c.clone())).collect()
}

fn push(v: &mut ModeVec, key: (usize, i64), c: Scalar) {
    if !c.is_zero() {
        let e = v.entry(key).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            v.remove(&key);
        }
    }
}

/// Splits the one-form `ω·e^{−αt}dt` into `d(F·e^{−αt}) + r·t^{−1}e^{−αt}dt`.
fn split_one_form(mut w: Laurent, alpha: &Scalar) -> (Laurent, Scalar) {
    let mut primitive = Laurent::new();
    // Positive powers: peel the top term.
    while let Some((&k, c)) = w.iter().next_back() {
        if k < 0 {
            break;
        }
        let c = c.clone();
        w.remove(&k);
        if alpha.is_zero() {
            add_to(&mut primitive, k + 1, c / Scalar::int(k + 1));
        } else {
            // t^k e dt = (k·t^{k−1} e dt − d(t^k e))/α
            let inv = Scalar::one() / alpha.clone();
            add_to(&mut primitive, k, -(&c * &inv));
            add_to(&mut w, k - 1, &(&c * &inv) * &Scalar::int(k));
        }
    }
    // Powers below −1: t^k e dt = (d(t^{k+1} e) + α·t^{k+1} e dt)/(k+1).
    while let Some((&k, c)) = w.iter().next() {
        if k >= -1 {
            break;
        }
        let c = c.clone() / Scalar::int(k + 1);
        w.remove(&k);
        add_to(&mut primitive, k + 1, c.clone());
        add_to(&mut w, k + 1, &c * alpha);
    }
    let r = w.get(&-1).cloned().unwrap_or_default();
    (primitive, r)
}

/// Builds the mode table directly from the function-space model.
pub fn realize(r: &Realization, w: ModeWindow) -> Result<ModeAction, OracleError> {
    let (problem, _) = realization_partner(r)?;
    let mut names = problem.sub.gen_names("'");
    names.extend(problem.quot.gen_names(""));
    let mr = w.mode_range();
    let reach = w.reach();
    let torsion = |beta: &Scalar| BasisKind::Torsion { beta: beta.clone(), pert: Vec::new() };
    let mut table: BTreeMap<ModeKey, ModeVec> = BTreeMap::new();
    let space = match r {
        Realization::VirDelta1 { alpha } | Realization::VirDelta2 { alpha } => {
            let (weight, order) = match r {
                Realization::VirDelta1 { .. } => (Scalar::zero(), 2),
                _ => (-Scalar::one(), 3),
            };
            let space = ModeSpace::new(names, vec![torsion(&-alpha.clone()), BasisKind::Free], 1);
            for m in -mr..=mr {
                table.insert((0, m, 0, -1), ModeVec::new());
                for n in -reach..=reach {
                    let mut v = to_modes(&density_action(m, n, &weight, alpha), 1);
                    push(&mut v, (0, -1), residue(&mul(&h_deriv(m, order), &g_deriv(n, alpha, 0)), alpha));
                    table.insert((0, m, 1, n), v);
                }
            }
            space
        }
        Realization::ExactForms { alpha } => {
            let space = ModeSpace::new(
                names,
                vec![
                    BasisKind::Free,
                    BasisKind::Torsion { beta: -alpha.clone(), pert: vec![(0, vec![-Scalar::one()])] },
                ],
                1,
            );
            // d(t^n e^{−αt}) for n = 0 vanishes when α = 0.
            let exact = |f: &Laurent| -> ModeVec {
                f.iter().filter(|(k, _)| !(alpha.is_zero() && **k == 0)).map(|(k, c)| ((0, *k), c.clone())).collect()
            };
            for m in -mr..=mr {
                for n in -reach..=reach {
                    if space.is_basis(0, n) {
                        // Vector fields commute with d, so act on the primitive.
                        table.insert((0, m, 0, n), exact(&density_action(m, n, &Scalar::zero(), alpha)));
                    }
                }
                let form = density_action(m, -1, &Scalar::one(), alpha);
                let (prim, res) = split_one_form(form, alpha);
                let mut v = exact(&prim);
                push(&mut v, (1, -1), res);
                table.insert((0, m, 1, -1), v);
            }
            space
        }
        Realization::AffineKm { lie, alpha } => {
            let kill = invariant_form(lie).map_err(|e| bad(r, e))?;
            let dim = lie.dim();
            let mut kinds = vec![torsion(&-alpha.clone())];
            kinds.extend(std::iter::repeat(BasisKind::Free).take(dim));
            let space = ModeSpace::new(names, kinds, 1);
            for a in 0..dim {
                for m in -mr..=mr {
                    table.insert((a, m, 0, -1), ModeVec::new());
                    for b in 0..dim {
                        for n in -reach..=reach {
                            let mut v = ModeVec::new();
                            for (k, c) in lie.bracket(a, b) {
                                push(&mut v, (1 + k, m + n), c.clone());
                            }
                            // Res(κ(a,b)·d(t^m)·t^n e^{−αt})
                            let c = &(&kill[a][b] * &Scalar::int(m)) * &residue_power(m + n - 1, alpha);
                            push(&mut v, (0, -1), c);
                            table.insert((a, m, 1 + b, n), v);
                        }
                    }
                }
            }
            space
        }
        Realization::GeneralS7 { alpha, delta_bar, delta, f } => {
            let space = ModeSpace::new(names, vec![BasisKind::Free, BasisKind::Free], 1);
            let wbar = Scalar::one() - delta_bar.clone();
            let wq = Scalar::one() - delta.clone();
            for m in -mr..=mr {
                for n in -reach..=reach {
                    table.insert((0, m, 0, n), to_modes(&density_action(m, n, &wbar, alpha), 0));
                    let mut v = to_modes(&density_action(m, n, &wq, alpha), 1);
                    // −Σ a_ik (−1)^i Σ_j C(i,j) h^{(k+i−j)} g^{(j)}
                    let mut corr = Laurent::new();
                    for (e, c) in f.terms() {
                        let (i, k) = (e[0] as u32, e[1] as u32);
                        let sign = if i % 2 == 0 { -Scalar::one() } else { Scalar::one() };
                        let a = &sign * c.constant_part();
                        for j in 0..=i {
                            let b = &a * &Scalar::from(binomial(i as i64, j));
                            for (t, x) in mul(&h_deriv(m, k + i - j), &g_deriv(n, alpha, j)) {
                                add_to(&mut corr, t, &b * &x);
                            }
                        }
                    }
                    for (t, x) in corr {
                        push(&mut v, (0, t), x);
                    }
                    table.insert((0, m, 1, n), v);
                }
            }
            space
        }
    };
    Ok(ModeAction::from_table(problem.algebra.clone(), space, w, table))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableDiff {
    pub compared: usize,
    /// Keys whose rows differ or exist on one side only, rendered.
    pub mismatched: Vec<String>,
}

impl TableDiff {
    pub fn agrees(&self) -> bool {
        self.mismatched.is_empty()
    }
}

/// Entry-by-entry comparison on every key either table defines.
pub fn compare_tables(a: &ModeAction, b: &ModeAction) -> TableDiff {
    let mut keys: Vec<&ModeKey> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut mismatched = Vec::new();
    for k in &keys {
        let (x, y) = (a.get(k), b.get(k));
        if x != y {
            let show = |v: Option<&ModeVec>| v.map_or("missing".to_string(), |v| a.space.render(v));
            mismatched.push(format!("{k:?}: {} vs {}", show(x), show(y)));
        }
    }
    TableDiff { compared: keys.len(), mismatched }
}
