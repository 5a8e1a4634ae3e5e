//! Brute-force check of a solved extension on modes: expand the λ-action of
//! `E = V ⊕ W` into a table of `g_m x_[p]`, then test every commutator
//! `[g_m, h_n] = Σ c·k_{m+n}` on basis vectors inside a finite window.
//!
//! Indexing: current modes use the bracket index `a_[m]`; the Virasoro field
//! uses `L_m = L_[m+1]`. Module modes satisfy `(∂x)_[p] = −p·x_[p−1]`.

mod realize;

pub use realize::{compare_tables, realization_partner, realize, Realization, TableDiff};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::confmod::{known_action, Cocycle, ConfAlgebra, ExtProblem, GenKind};
use crate::exactnum::{falling, factorial, Scalar};
use crate::multipoly::MPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("unknown realization {0:?}")]
    UnknownRealization(String),
    #[error("realization {0}: {1}")]
    BadParameters(String, String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModeWindow {
    /// Largest `|m|`, `|n|` of the commutator modes.
    pub n: i64,
    /// Largest `|p|` of the basis vector acted on.
    pub p: i64,
    /// Extra room for intermediate indices.
    pub guard: i64,
}

impl Default for ModeWindow {
    fn default() -> Self {
        ModeWindow { n: 8, p: 8, guard: 10 }
    }
}

impl ModeWindow {
    pub fn new(n: i64, p: i64, guard: i64) -> Self {
        ModeWindow { n, p, guard }
    }

    /// Largest `|index|` a table row is built for.
    pub fn reach(&self) -> i64 {
        self.n + self.p + self.guard
    }

    fn mode_range(&self) -> i64 {
        2 * self.n + 1
    }
}

/// Sparse vector over `(generator, index)`.
pub type ModeVec = BTreeMap<(usize, i64), Scalar>;

fn axpy(v: &mut ModeVec, c: &Scalar, w: &ModeVec) {
    if c.is_zero() {
        return;
    }
    for (k, x) in w {
        let e = v.entry(*k).or_default();
        *e = &*e + &(c * x);
        if e.is_zero() {
            v.remove(k);
        }
    }
}

fn unit(x: usize, p: i64) -> ModeVec {
    BTreeMap::from([((x, p), Scalar::one())])
}

fn scaled(c: &Scalar, w: &ModeVec) -> ModeVec {
    let mut v = ModeVec::new();
    axpy(&mut v, c, w);
    v
}

#[derive(Clone, Debug, PartialEq)]
pub enum BasisKind {
    Free,
    /// `∂x = βx + Σ_s a_s(∂)·s`; `pert` lists `(s, coefficients of a_s by ∂-power)`.
    Torsion { beta: Scalar, pert: Vec<(usize, Vec<Scalar>)> },
}

/// Mode basis of `E`: all `x_[p]` for free `x`, only `c_[−1]` for torsion `c`.
#[derive(Clone, Debug)]
pub struct ModeSpace {
    pub names: Vec<String>,
    pub kinds: Vec<BasisKind>,
    pub nsub: usize,
    /// `s_[0] ↦ Σ c·y_[0]`, forced by a torsion quotient with `β = 0`.
    pivot: Option<(usize, ModeVec)>,
}

impl ModeSpace {
    pub fn new(names: Vec<String>, kinds: Vec<BasisKind>, nsub: usize) -> Self {
        let mut s = ModeSpace { names, kinds, nsub, pivot: None };
        let mut a0 = ModeVec::new();
        for k in &s.kinds {
            if let BasisKind::Torsion { beta, pert } = k {
                if beta.is_zero() {
                    for (y, coeffs) in pert {
                        if let Some(c) = coeffs.first() {
                            axpy(&mut a0, c, &s.nf(*y, 0));
                        }
                    }
                }
            }
        }
        if let Some((&(y, q), c)) = a0.iter().next() {
            let c = c.clone();
            let mut rest = a0.clone();
            rest.remove(&(y, q));
            s.pivot = Some((y, scaled(&(-Scalar::one() / c), &rest)));
        }
        s
    }

    pub fn from_problem(p: &ExtProblem, c: &Cocycle) -> Self {
        let mut names = p.sub.gen_names("'");
        names.extend(p.quot.gen_names(""));
        let nsub = p.sub.rank();
        let mut kinds: Vec<BasisKind> = p
            .sub
            .gen_kinds()
            .into_iter()
            .map(|k| match k {
                GenKind::Free => BasisKind::Free,
                GenKind::Torsion(beta) => BasisKind::Torsion { beta, pert: Vec::new() },
            })
            .collect();
        for (q, k) in p.quot.gen_kinds().into_iter().enumerate() {
            kinds.push(match k {
                GenKind::Free => BasisKind::Free,
                GenKind::Torsion(beta) => {
                    let pert = (0..nsub)
                        .filter(|s| !c.a[q][*s].is_zero())
                        .map(|s| {
                            let a = &c.a[q][s];
                            let deg = a.total_degree().unwrap_or(0);
                            (s, (0..=deg).map(|i| a.scalar_coeff(&[i, 0, 0])).collect())
                        })
                        .collect();
                    BasisKind::Torsion { beta, pert }
                }
            });
        }
        ModeSpace::new(names, kinds, nsub)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_basis(&self, x: usize, p: i64) -> bool {
        match &self.kinds[x] {
            BasisKind::Free => self.pivot.as_ref().map_or(true, |(y, _)| !(*y == x && p == 0)),
            BasisKind::Torsion { .. } => p == -1,
        }
    }

    /// Basis keys with `|p| ≤ range`, sorted.
    pub fn basis_keys(&self, range: i64) -> Vec<(usize, i64)> {
        (0..self.len())
            .flat_map(|x| (-range..=range).map(move |p| (x, p)))
            .filter(|&(x, p)| self.is_basis(x, p))
            .collect()
    }

    /// `A_n = Σ_s Σ_i a_{s,i}·(∂^i s)_[n]` in normal form.
    fn pert_at(&self, pert: &[(usize, Vec<Scalar>)], n: i64) -> ModeVec {
        let mut v = ModeVec::new();
        for (s, coeffs) in pert {
            for (i, a) in coeffs.iter().enumerate() {
                let sign = if i % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                let c = &(a * &sign) * &Scalar::from(falling(n, i as u32));
                axpy(&mut v, &c, &self.nf(*s, n - i as i64));
            }
        }
        v
    }

    /// Normal form of the mode `x_[q]`.
    pub fn nf(&self, x: usize, q: i64) -> ModeVec {
        match &self.kinds[x] {
            BasisKind::Free => match &self.pivot {
                Some((y, rep)) if *y == x && q == 0 => rep.clone(),
                _ => unit(x, q),
            },
            BasisKind::Torsion { beta, pert } => {
                if q == -1 {
                    return unit(x, -1);
                }
                // Mode relation: β·x_[n] + n·x_[n−1] + A_n = 0.
                if beta.is_zero() {
                    let a = self.pert_at(pert, q + 1);
                    return scaled(&Scalar::frac(-1, q + 1), &a);
                }
                let inv = -Scalar::one() / beta.clone();
                let mut cur = unit(x, -1);
                if q >= 0 {
                    for k in 0..=q {
                        let mut next = scaled(&Scalar::int(k), &cur);
                        axpy(&mut next, &Scalar::one(), &self.pert_at(pert, k));
                        cur = scaled(&inv, &next);
                    }
                } else {
                    for k in (q..=-2).rev() {
                        let mut next = scaled(beta, &cur);
                        axpy(&mut next, &Scalar::one(), &self.pert_at(pert, k + 1));
                        cur = scaled(&Scalar::frac(-1, k + 1), &next);
                    }
                }
                cur
            }
        }
    }

    pub fn render(&self, v: &ModeVec) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter()
            .map(|((x, p), c)| format!("({c})*{}[{p}]", self.names[*x]))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `rules[g][x]` lists `(y, j, r, c)`: the term `c·λ^j·∂^r y` of `g_λ x`.
type RawRules = Vec<Vec<Vec<(usize, u32, u32, Scalar)>>>;

/// Table key `(g, m, x, p)`.
pub type ModeKey = (usize, i64, usize, i64);

#[derive(Clone, Debug)]
pub struct ModeAction {
    pub algebra: ConfAlgebra,
    pub gen_names: Vec<String>,
    pub space: ModeSpace,
    pub window: ModeWindow,
    table: Arc<BTreeMap<ModeKey, ModeVec>>,
    raw: Option<Arc<RawRules>>,
    patch: Option<(ModeKey, ModeVec)>,
}

fn is_vir(alg: &ConfAlgebra, g: usize) -> bool {
    alg.has_virasoro() && g == 0
}

fn push_poly(rules: &mut Vec<(usize, u32, u32, Scalar)>, y: usize, k: &MPoly) {
    for (e, c) in k.terms() {
        rules.push((y, e[1] as u32, e[0] as u32, c.constant_part().clone()));
    }
}

fn raw_rules(p: &ExtProblem, c: &Cocycle) -> RawRules {
    let ngen = p.algebra.generators().len();
    let nsub = p.sub.rank();
    let nq = p.quot.rank();
    let ks = known_action(&p.algebra, &p.sub);
    let kq = known_action(&p.algebra, &p.quot);
    let mut rules: RawRules = vec![vec![Vec::new(); nsub + nq]; ngen];
    for g in 0..ngen {
        for (x, row) in ks[g].iter().enumerate() {
            for (y, k) in row {
                push_poly(&mut rules[g][x], *y, k);
            }
        }
        for (x, row) in kq[g].iter().enumerate() {
            for (y, k) in row {
                push_poly(&mut rules[g][nsub + x], nsub + y, k);
            }
            for s in 0..nsub {
                push_poly(&mut rules[g][nsub + x], s, &c.f[g][x][s]);
            }
        }
    }
    rules
}

fn raw_apply(alg: &ConfAlgebra, space: &ModeSpace, rules: &RawRules, g: usize, m: i64, x: usize, p: i64) -> ModeVec {
    let big_m = if is_vir(alg, g) { m + 1 } else { m };
    let mut v = ModeVec::new();
    for (y, j, r, c) in &rules[g][x] {
        let idx = big_m + p - *j as i64;
        let sign = if r % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        let coef = &(&(c * &sign) * &Scalar::from(falling(big_m, *j))) * &Scalar::from(falling(idx, *r));
        if !coef.is_zero() {
            axpy(&mut v, &coef, &space.nf(*y, idx - *r as i64));
        }
    }
    v
}

/// Builds `g_m x_[p]` for `|m| ≤ 2N+1` and basis keys with `|p| ≤ N+P+guard`.
pub fn expand_modes(p: &ExtProblem, c: &Cocycle, w: ModeWindow) -> ModeAction {
    let space = ModeSpace::from_problem(p, c);
    let rules = raw_rules(p, c);
    let ngen = p.algebra.generators().len();
    let mr = w.mode_range();
    let keys = space.basis_keys(w.reach());
    let rows: Vec<(usize, i64)> = (0..ngen).flat_map(|g| (-mr..=mr).map(move |m| (g, m))).collect();
    let table: BTreeMap<ModeKey, ModeVec> = rows
        .par_iter()
        .flat_map_iter(|&(g, m)| {
            let (space, rules, alg) = (&space, &rules, &p.algebra);
            keys.iter().map(move |&(x, q)| ((g, m, x, q), raw_apply(alg, space, rules, g, m, x, q)))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    ModeAction {
        algebra: p.algebra.clone(),
        gen_names: p.algebra.generators(),
        space,
        window: w,
        table: Arc::new(table),
        raw: Some(Arc::new(rules)),
        patch: None,
    }
}

impl ModeAction {
    /// A table built elsewhere, e.g. by a realization.
    pub fn from_table(algebra: ConfAlgebra, space: ModeSpace, window: ModeWindow, table: BTreeMap<ModeKey, ModeVec>) -> Self {
        ModeAction {
            gen_names: algebra.generators(),
            algebra,
            space,
            window,
            table: Arc::new(table),
            raw: None,
            patch: None,
        }
    }

    pub fn get(&self, key: &ModeKey) -> Option<&ModeVec> {
        if let Some((k, v)) = &self.patch {
            if k == key {
                return Some(v);
            }
        }
        self.table.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &ModeKey> {
        self.table.keys()
    }

    /// `g_m v`, or `None` when a needed entry lies outside the table.
    pub fn apply(&self, g: usize, m: i64, v: &ModeVec) -> Option<ModeVec> {
        let mut out = ModeVec::new();
        for ((x, p), c) in v {
            axpy(&mut out, c, self.get(&(g, m, *x, *p))?);
        }
        Some(out)
    }

    /// Copy with `key`'s entry at `target` shifted by `delta`.
    pub fn mutated(&self, key: ModeKey, target: (usize, i64), delta: &Scalar) -> ModeAction {
        let mut v = self.get(&key).cloned().unwrap_or_default();
        axpy(&mut v, delta, &unit(target.0, target.1));
        ModeAction { patch: Some((key, v)), ..self.clone() }
    }

    fn display_mode(&self, g: usize, m: i64) -> String {
        if is_vir(&self.algebra, g) {
            format!("{}_{m}", self.gen_names[g])
        } else {
            format!("{}_[{m}]", self.gen_names[g])
        }
    }
}

/// `[g_m, h_n]` as `(k, mode, coefficient)`.
pub fn mode_bracket(alg: &ConfAlgebra, g: usize, m: i64, h: usize, n: i64) -> Vec<(usize, i64, Scalar)> {
    let vir = alg.has_virasoro();
    match (vir, g, h) {
        (true, 0, 0) => vec![(0, m + n, Scalar::int(m - n))],
        (true, 0, h) => vec![(h, m + n, Scalar::int(-n))],
        (true, g, 0) => vec![(g, m + n, Scalar::int(m))],
        _ => match alg {
            ConfAlgebra::VirAb => vec![],
            _ => {
                let lie = alg.lie().expect("current part");
                let off = usize::from(vir);
                lie.bracket(g - off, h - off).iter().map(|(k, c)| (k + off, m + n, c.clone())).collect()
            }
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub gen1: String,
    pub m: i64,
    pub gen2: String,
    pub n: i64,
    pub basis: String,
    pub p: i64,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}({}), {}({})] on {}[{}]: {} != {}",
            self.gen1, self.m, self.gen2, self.n, self.basis, self.p, self.lhs, self.rhs
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub window: ModeWindow,
    pub checked: usize,
    pub skipped: usize,
    pub failed: Vec<Failure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failed.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "window": self.window.n,
            "checked": self.checked,
            "skipped": self.skipped,
            "failed": self.failed,
        })
    }
}

enum Outcome {
    Ok,
    Skip,
    Fail(Failure),
}

fn check_one(ma: &ModeAction, g: usize, m: i64, h: usize, n: i64, x: usize, p: i64) -> Outcome {
    let run = || -> Option<(ModeVec, ModeVec)> {
        let gv = ma.get(&(g, m, x, p))?;
        let hv = ma.get(&(h, n, x, p))?;
        let mut lhs = ma.apply(g, m, hv)?;
        axpy(&mut lhs, &-Scalar::one(), &ma.apply(h, n, gv)?);
        let mut rhs = ModeVec::new();
        for (k, mode, c) in mode_bracket(&ma.algebra, g, m, h, n) {
            axpy(&mut rhs, &c, ma.get(&(k, mode, x, p))?);
        }
        Some((lhs, rhs))
    };
    match run() {
        None => Outcome::Skip,
        Some((l, r)) if l == r => Outcome::Ok,
        Some((l, r)) => Outcome::Fail(Failure {
            gen1: ma.display_mode(g, m),
            m,
            gen2: ma.display_mode(h, n),
            n,
            basis: ma.space.names[x].clone(),
            p,
            lhs: ma.space.render(&l),
            rhs: ma.space.render(&r),
        }),
    }
}

/// Mode relations for the non-basis keys: the table must commute with `nf`.
fn check_relation(ma: &ModeAction, rules: &RawRules, g: usize, m: i64, x: usize, p: i64) -> Outcome {
    let direct = raw_apply(&ma.algebra, &ma.space, rules, g, m, x, p);
    match ma.apply(g, m, &ma.space.nf(x, p)) {
        None => Outcome::Skip,
        Some(v) if v == direct => Outcome::Ok,
        Some(v) => Outcome::Fail(Failure {
            gen1: ma.display_mode(g, m),
            m,
            gen2: "nf".into(),
            n: 0,
            basis: ma.space.names[x].clone(),
            p,
            lhs: ma.space.render(&direct),
            rhs: ma.space.render(&v),
        }),
    }
}

type Check = (usize, i64, usize, i64);

fn commutator_rows(ma: &ModeAction, w: &ModeWindow) -> Vec<Check> {
    let ngen = ma.gen_names.len();
    let mut rows = Vec::new();
    for g in 0..ngen {
        for h in g..ngen {
            for m in -w.n..=w.n {
                for n in -w.n..=w.n {
                    if g == h && m >= n {
                        continue;
                    }
                    rows.push((g, m, h, n));
                }
            }
        }
    }
    rows
}

fn tally(outcomes: impl Iterator<Item = Outcome>, rep: &mut VerifyReport) {
    for o in outcomes {
        match o {
            Outcome::Ok => rep.checked += 1,
            Outcome::Skip => rep.skipped += 1,
            Outcome::Fail(f) => {
                rep.checked += 1;
                rep.failed.push(f);
            }
        }
    }
}

/// Every commutator with `|m|, |n| ≤ N` on every basis vector with `|p| ≤ P`,
/// plus the mode relations of the torsion generators.
pub fn verify_brackets(ma: &ModeAction, w: &ModeWindow) -> VerifyReport {
    let keys = ma.space.basis_keys(w.p);
    let rows = commutator_rows(ma, w);
    let per_row: Vec<Vec<Outcome>> = rows
        .par_iter()
        .map(|&(g, m, h, n)| keys.iter().map(|&(x, p)| check_one(ma, g, m, h, n, x, p)).collect())
        .collect();
    let mut rep = VerifyReport { window: *w, checked: 0, skipped: 0, failed: Vec::new() };
    tally(per_row.into_iter().flatten(), &mut rep);
    if let Some(rules) = &ma.raw {
        let ngen = ma.gen_names.len();
        let extra: Vec<(usize, i64)> = (0..ma.space.len())
            .flat_map(|x| (-w.p..=w.p).map(move |p| (x, p)))
            .filter(|&(x, p)| !ma.space.is_basis(x, p))
            .collect();
        for g in 0..ngen {
            for m in -w.n..=w.n {
                tally(extra.iter().map(|&(x, p)| check_relation(ma, rules, g, m, x, p)), &mut rep);
            }
        }
    }
    rep
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MutationReport {
    pub mutants: usize,
    pub caught: usize,
    /// Mutants whose entry no in-window check reads.
    pub unexercised: usize,
}

impl MutationReport {
    pub fn rate(&self) -> f64 {
        if self.mutants == 0 {
            1.0
        } else {
            self.caught as f64 / self.mutants as f64
        }
    }
}

/// Entries of the correction part (quotient source, sub target) inside the
/// window, in table order.
pub fn mutation_sites(ma: &ModeAction, w: &ModeWindow) -> Vec<(ModeKey, (usize, i64))> {
    let nsub = ma.space.nsub;
    let mut out = Vec::new();
    for (key, v) in ma.table.iter() {
        let &(_, m, x, p) = key;
        if x < nsub || m.abs() > w.n || p.abs() > w.p {
            continue;
        }
        out.extend(v.keys().filter(|(y, _)| *y < nsub).map(|t| (*key, *t)));
    }
    out
}

/// Perturbs up to `limit` correction entries by `+1` (evenly spaced over the
/// sites) and reruns the commutator checks that read each one.
pub fn mutation_suite(ma: &ModeAction, w: &ModeWindow, limit: usize) -> MutationReport {
    let sites = mutation_sites(ma, w);
    let stride = sites.len().div_ceil(limit.max(1)).max(1);
    let chosen: Vec<_> = sites.into_iter().step_by(stride).collect();
    let keys = ma.space.basis_keys(w.p);
    let rows = commutator_rows(ma, w);
    let results: Vec<(bool, bool)> = chosen
        .par_iter()
        .map(|&(key, target)| {
            let mutant = ma.mutated(key, target, &Scalar::one());
            let (g0, m0, _, _) = key;
            let relevant = |&&(g, m, h, n): &&Check| {
                (g == g0 && m == m0)
                    || (h == g0 && n == m0)
                    || mode_bracket(&ma.algebra, g, m, h, n).iter().any(|(k, mm, _)| *k == g0 && *mm == m0)
            };
            let mut touched = false;
            for &(g, m, h, n) in rows.iter().filter(relevant) {
                for &(x, p) in &keys {
                    match check_one(&mutant, g, m, h, n, x, p) {
                        Outcome::Fail(_) => return (true, true),
                        Outcome::Ok => touched = true,
                        Outcome::Skip => {}
                    }
                }
            }
            (false, touched)
        })
        .collect();
    MutationReport {
        mutants: results.len(),
        caught: results.iter().filter(|r| r.0).count(),
        unexercised: results.iter().filter(|r| !r.1).count(),
    }
}

/// `Res_t(t^k e^{−αt})`: `(−α)^j/j!` for `k = −1−j`, zero for `k ≥ 0`.
pub fn residue_power(k: i64, alpha: &Scalar) -> Scalar {
    if k >= 0 {
        return Scalar::zero();
    }
    let j = (-1 - k) as u32;
    let mut acc = Scalar::one();
    for _ in 0..j {
        acc = &acc * &-alpha.clone();
    }
    acc / Scalar::from(factorial(j))
}

#[cfg(test)]
mod tests;
