use std::collections::HashMap;

use super::{ConfAlgebra, ConfError, ExtProblem, GenKind, ModuleDescriptor};
use crate::exactnum::Scalar;
use crate::multipoly::linalg::{rref, SparseRow};
use crate::multipoly::{grlex_desc, Exp, LinearForm, MPoly, Unknown, Var};

/// `table[g][w]` lists `(w', K(∂,λ))` with `g_λ w = Σ K·w'`.
pub type ActionTable = Vec<Vec<Vec<(usize, MPoly)>>>;

fn d() -> MPoly {
    MPoly::var(Var::D)
}

fn l() -> MPoly {
    MPoly::var(Var::L)
}

fn m() -> MPoly {
    MPoly::var(Var::M)
}

/// The action on the module's own generators, as in the standard constructions.
pub fn known_action(alg: &ConfAlgebra, desc: &ModuleDescriptor) -> ActionTable {
    let ngen = alg.generators().len();
    let rank = desc.rank();
    let mut t: ActionTable = vec![vec![Vec::new(); rank]; ngen];
    let vir = |alpha: &Scalar, delta: &Scalar| MPoly::linear(&[(Var::D, Scalar::one()), (Var::L, delta.clone())], alpha.clone());
    let rep_part = |t: &mut ActionTable, rep: &crate::liealg::Representation, off: usize| {
        for (i, mat) in rep.matrices.iter().enumerate() {
            for w in 0..rank {
                for (w2, row) in mat.iter().enumerate() {
                    if !row[w].is_zero() {
                        t[i + off][w].push((w2, MPoly::constant(row[w].clone())));
                    }
                }
            }
        }
    };
    match desc {
        ModuleDescriptor::OneDim { .. } => {}
        ModuleDescriptor::VirMod { alpha, delta } => t[0][0].push((0, vir(alpha, delta))),
        ModuleDescriptor::CurMod { rep } => rep_part(&mut t, rep, 0),
        ModuleDescriptor::VirCurMod { alpha, delta, rep } => {
            for w in 0..rank {
                t[0][w].push((w, vir(alpha, delta)));
            }
            rep_part(&mut t, rep, 1);
        }
        ModuleDescriptor::VirAbMod { alpha, delta, k } => {
            t[0][0].push((0, vir(alpha, delta)));
            if !k.is_zero() {
                t[1][0].push((0, MPoly::constant(k.clone())));
            }
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SlotKind {
    /// Component in sub generator `s` of `g_λ q`.
    Action { g: usize, q: usize, s: usize },
    /// Component in sub generator `s` of `∂q` for a torsion quotient generator.
    Perturbation { q: usize, s: usize },
}

#[derive(Clone, Debug)]
pub struct Slot {
    pub kind: SlotKind,
    pub offset: usize,
    /// Monomials in D and L, descending graded-lex.
    pub monomials: Vec<Exp>,
}

/// One unknown per (slot, monomial); column order is slot-major.
#[derive(Clone, Debug)]
pub struct ActionAnsatz {
    pub slots: Vec<Slot>,
    pub ncols: usize,
    pub gen_names: Vec<String>,
    pub sub_names: Vec<String>,
    pub quot_names: Vec<String>,
    index: HashMap<(usize, Exp), usize>,
    slot_of: HashMap<SlotKind, usize>,
}

/// Correction data: `f[g][q][s]` in D, L and `a[q][s]` in D.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle {
    pub f: Vec<Vec<Vec<MPoly>>>,
    pub a: Vec<Vec<MPoly>>,
}

impl Cocycle {
    pub fn zero(ngen: usize, nquot: usize, nsub: usize) -> Self {
        Cocycle {
            f: vec![vec![vec![MPoly::zero(); nsub]; nquot]; ngen],
            a: vec![vec![MPoly::zero(); nsub]; nquot],
        }
    }
}

fn box_monomials(dmax: u16, lmax: u16) -> Vec<Exp> {
    let mut v: Vec<Exp> = (0..=dmax).flat_map(|i| (0..=lmax).map(move |j| [i, j, 0])).collect();
    v.sort_by_key(grlex_desc);
    v
}

/// Allocates the unknown correction terms for `p`.
pub fn build_ansatz(p: &ExtProblem) -> ActionAnsatz {
    let gens = p.algebra.generators();
    let sub = p.sub.gen_kinds();
    let quot = p.quot.gen_kinds();
    let (dd, dl) = p.bounds;
    let mut slots = Vec::new();
    let mut offset = 0;
    let mut push = |kind: SlotKind, monos: Vec<Exp>| {
        let n = monos.len();
        slots.push(Slot { kind, offset, monomials: monos });
        offset += n;
    };
    let dmax = |s: usize| if matches!(sub[s], GenKind::Torsion(_)) { 0 } else { dd };
    for g in 0..gens.len() {
        for q in 0..quot.len() {
            for s in 0..sub.len() {
                push(SlotKind::Action { g, q, s }, box_monomials(dmax(s), dl));
            }
        }
    }
    for (q, kind) in quot.iter().enumerate() {
        if matches!(kind, GenKind::Torsion(_)) {
            for s in 0..sub.len() {
                push(SlotKind::Perturbation { q, s }, box_monomials(dmax(s), 0));
            }
        }
    }
    let mut index = HashMap::new();
    let mut slot_of = HashMap::new();
    for (i, s) in slots.iter().enumerate() {
        slot_of.insert(s.kind.clone(), i);
        for (k, e) in s.monomials.iter().enumerate() {
            index.insert((i, *e), s.offset + k);
        }
    }
    ActionAnsatz {
        ncols: offset,
        slots,
        gen_names: gens,
        sub_names: p.sub.gen_names("'"),
        quot_names: p.quot.gen_names(""),
        index,
        slot_of,
    }
}

impl ActionAnsatz {
    pub fn slot_index(&self, kind: &SlotKind) -> Option<usize> {
        self.slot_of.get(kind).copied()
    }

    pub fn column(&self, slot: usize, e: &Exp) -> Option<usize> {
        self.index.get(&(slot, *e)).copied()
    }

    pub fn slot_label(&self, kind: &SlotKind) -> String {
        match kind {
            SlotKind::Action { g, q, s } => format!("{}.{} -> {}", self.gen_names[*g], self.quot_names[*q], self.sub_names[*s]),
            SlotKind::Perturbation { q, s } => format!("D.{} -> {}", self.quot_names[*q], self.sub_names[*s]),
        }
    }

    /// Slot and monomial behind a column.
    pub fn column_slot(&self, col: usize) -> (&Slot, Exp) {
        let i = self.slots.partition_point(|s| s.offset <= col) - 1;
        let s = &self.slots[i];
        (s, s.monomials[col - s.offset])
    }

    /// `slot label : monomial` for a column.
    pub fn column_label(&self, col: usize) -> String {
        let i = self.slots.partition_point(|s| s.offset <= col) - 1;
        let s = &self.slots[i];
        let mono = crate::multipoly::monomial_string(&s.monomials[col - s.offset]);
        format!("{} : {}", self.slot_label(&s.kind), if mono.is_empty() { "1" } else { &mono })
    }

    fn shape(&self) -> (usize, usize, usize) {
        (self.gen_names.len(), self.quot_names.len(), self.sub_names.len())
    }

    fn fill(&self, coeff: impl Fn(usize) -> LinearForm) -> Cocycle {
        let (ng, nq, ns) = self.shape();
        let mut c = Cocycle::zero(ng, nq, ns);
        for s in &self.slots {
            let mut poly = MPoly::zero();
            for (k, e) in s.monomials.iter().enumerate() {
                poly.add_term(*e, &coeff(s.offset + k));
            }
            match s.kind {
                SlotKind::Action { g, q, s } => c.f[g][q][s] = poly,
                SlotKind::Perturbation { q, s } => c.a[q][s] = poly,
            }
        }
        c
    }

    /// The generic cocycle, one unknown per column.
    pub fn unknown_cocycle(&self) -> Cocycle {
        self.fill(|i| LinearForm::unknown(Unknown(i as u32)))
    }

    /// Concrete cocycle for a column vector.
    pub fn evaluate(&self, values: &[(usize, Scalar)]) -> Cocycle {
        let dense = crate::multipoly::linalg::sparse_to_dense(values, self.ncols);
        self.fill(|i| LinearForm::constant(dense[i].clone()))
    }

    /// Nonzero slots of a concrete vector as `(label, polynomial)`.
    pub fn render(&self, values: &[(usize, Scalar)]) -> Vec<(String, MPoly)> {
        let c = self.evaluate(values);
        self.slots
            .iter()
            .filter_map(|s| {
                let p = match s.kind {
                    SlotKind::Action { g, q, s } => &c.f[g][q][s],
                    SlotKind::Perturbation { q, s } => &c.a[q][s],
                };
                (!p.is_zero()).then(|| (self.slot_label(&s.kind), p.clone()))
            })
            .collect()
    }

    /// Column vector of a concrete cocycle; `Err` names the first term outside the box.
    pub fn coordinates(&self, c: &Cocycle) -> Result<SparseRow, String> {
        let mut out = Vec::new();
        for (i, s) in self.slots.iter().enumerate() {
            let p = match s.kind {
                SlotKind::Action { g, q, s } => &c.f[g][q][s],
                SlotKind::Perturbation { q, s } => &c.a[q][s],
            };
            for (e, lf) in p.terms() {
                let col = self
                    .column(i, e)
                    .ok_or_else(|| format!("{} has term {} outside the degree box", self.slot_label(&s.kind), crate::multipoly::monomial_string(e)))?;
                if !lf.is_constant() {
                    return Err("cocycle carries unknowns".into());
                }
                out.push((col, lf.constant_part().clone()));
            }
        }
        out.sort_by_key(|(c, _)| *c);
        Ok(out)
    }
}

/// Substitution targets for λ inside an action polynomial.
#[derive(Clone, Copy)]
enum Nu {
    L = 0,
    M = 1,
    LM = 2,
}

fn nu_poly(nu: Nu) -> MPoly {
    match nu {
        Nu::L => l(),
        Nu::M => m(),
        Nu::LM => l().add(&m()),
    }
}

fn at_nu(p: &MPoly, nu: Nu) -> MPoly {
    match nu {
        Nu::L => p.clone(),
        _ => p.substitute(Var::L, &nu_poly(nu)).expect("unknown-free substitution"),
    }
}

fn lin_mul(a: &MPoly, b: &MPoly) -> MPoly {
    a.mul(b).expect("extension identities stay linear in the unknowns")
}

/// `(P(∂) − P(β)) / (∂ − β)`.
fn div_shift(p: &MPoly, beta: &Scalar) -> MPoly {
    let mut out = MPoly::zero();
    for (e, c) in p.terms() {
        let k = e[0];
        for j in 0..k {
            let mut ex = *e;
            ex[0] = j;
            out.add_term(ex, &c.scale(&beta.pow((k - 1 - j) as u32)));
        }
    }
    out
}

type Elem = Vec<MPoly>;

/// Evaluation of actions on `E = V ⊕ W` for a fixed problem.
pub(crate) struct Engine {
    ngen: usize,
    brackets: Vec<Vec<Vec<(usize, MPoly)>>>,
    sub_kinds: Vec<GenKind>,
    quot_kinds: Vec<GenKind>,
    sub_known: [ActionTable; 3],
    quot_known: [ActionTable; 3],
}

struct Prepared<'a> {
    f: [Vec<Vec<Vec<MPoly>>>; 3],
    a: &'a [Vec<MPoly>],
}

fn table_at(t: &ActionTable, nu: Nu) -> ActionTable {
    t.iter()
        .map(|row| row.iter().map(|ws| ws.iter().map(|(w, p)| (*w, at_nu(p, nu))).collect()).collect())
        .collect()
}

impl Engine {
    pub(crate) fn new(p: &ExtProblem) -> Self {
        let ngen = p.algebra.generators().len();
        let brackets = (0..ngen).map(|g| (0..ngen).map(|h| p.algebra.bracket(g, h)).collect()).collect();
        let sk = known_action(&p.algebra, &p.sub);
        let qk = known_action(&p.algebra, &p.quot);
        Engine {
            ngen,
            brackets,
            sub_kinds: p.sub.gen_kinds(),
            quot_kinds: p.quot.gen_kinds(),
            sub_known: [table_at(&sk, Nu::L), table_at(&sk, Nu::M), table_at(&sk, Nu::LM)],
            quot_known: [table_at(&qk, Nu::L), table_at(&qk, Nu::M), table_at(&qk, Nu::LM)],
        }
    }

    fn nsub(&self) -> usize {
        self.sub_kinds.len()
    }

    fn prepare<'a>(&self, c: &'a Cocycle) -> Prepared<'a> {
        let sub = |nu: Nu| -> Vec<Vec<Vec<MPoly>>> {
            c.f.iter().map(|a| a.iter().map(|b| b.iter().map(|p| at_nu(p, nu)).collect()).collect()).collect()
        };
        Prepared { f: [sub(Nu::L), sub(Nu::M), sub(Nu::LM)], a: &c.a }
    }

    fn unit(&self, i: usize) -> Elem {
        let mut e = vec![MPoly::zero(); self.nsub() + self.quot_kinds.len()];
        e[i] = MPoly::one();
        e
    }

    /// Torsion relations: quotient relation first (it feeds the sub part), then sub relations.
    fn normalize(&self, a: &[Vec<MPoly>], mut e: Elem) -> Elem {
        let ns = self.nsub();
        for (q, kind) in self.quot_kinds.iter().enumerate() {
            if let GenKind::Torsion(beta) = kind {
                let p = &e[ns + q];
                if p.degree_in(Var::D).unwrap_or(0) > 0 {
                    let r = div_shift(p, beta);
                    e[ns + q] = p.substitute(Var::D, &MPoly::constant(beta.clone())).expect("constant");
                    for s in 0..ns {
                        if !a[q][s].is_zero() {
                            let t = lin_mul(&r, &a[q][s]);
                            e[s].add_assign(&t);
                        }
                    }
                }
            }
        }
        for (s, kind) in self.sub_kinds.iter().enumerate() {
            if let GenKind::Torsion(beta) = kind {
                if e[s].degree_in(Var::D).unwrap_or(0) > 0 {
                    e[s] = e[s].substitute(Var::D, &MPoly::constant(beta.clone())).expect("constant");
                }
            }
        }
        e
    }

    /// `g_ν x`, using `g_ν(P(∂)w) = P(∂+ν)·g_ν w`.
    fn act(&self, pc: &Prepared, g: usize, nu: Nu, x: &Elem) -> Elem {
        let ns = self.nsub();
        let shift = d().add(&nu_poly(nu));
        let mut out = vec![MPoly::zero(); x.len()];
        for (w, p) in x.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let ps = p.substitute(Var::D, &shift).expect("unknown-free shift");
            if w < ns {
                for (w2, k) in &self.sub_known[nu as usize][g][w] {
                    out[*w2].add_assign(&lin_mul(&ps, k));
                }
            } else {
                let q = w - ns;
                for (w2, k) in &self.quot_known[nu as usize][g][q] {
                    out[ns + w2].add_assign(&lin_mul(&ps, k));
                }
                for s in 0..ns {
                    let f = &pc.f[nu as usize][g][q][s];
                    if !f.is_zero() {
                        out[s].add_assign(&lin_mul(&ps, f));
                    }
                }
            }
        }
        self.normalize(pc.a, out)
    }

    fn constraints(&self, c: &Cocycle) -> Vec<MPoly> {
        use rayon::prelude::*;
        let pc = self.prepare(c);
        let ns = self.nsub();
        let mut jobs = Vec::new();
        for g in 0..self.ngen {
            for h in g..self.ngen {
                for q in 0..self.quot_kinds.len() {
                    jobs.push((g, h, q));
                }
            }
        }
        let mut out: Vec<MPoly> = jobs
            .par_iter()
            .flat_map_iter(|&(g, h, q)| {
                let eq = self.unit(ns + q);
                let x1 = self.act(&pc, g, Nu::L, &self.act(&pc, h, Nu::M, &eq));
                let x2 = self.act(&pc, h, Nu::M, &self.act(&pc, g, Nu::L, &eq));
                let mut diff: Elem = x1.iter().zip(&x2).map(|(a, b)| a.sub(b)).collect();
                let minus_lm = l().add(&m()).neg();
                for (k, b) in &self.brackets[g][h] {
                    let coeff = b.substitute(Var::D, &minus_lm).expect("known");
                    let y = self.act(&pc, *k, Nu::LM, &eq);
                    for (dst, v) in diff.iter_mut().zip(&y) {
                        if !v.is_zero() {
                            dst.axpy_assign(&Scalar::int(-1), &lin_mul(v, &coeff));
                        }
                    }
                }
                diff.into_iter().filter(|p| !p.is_zero())
            })
            .collect();
        let dl = d().add(&l());
        for (q, kind) in self.quot_kinds.iter().enumerate() {
            if let GenKind::Torsion(beta) = kind {
                let mut dq = self.unit(ns + q);
                dq[ns + q] = MPoly::constant(beta.clone());
                for s in 0..ns {
                    dq[s] = c.a[q][s].clone();
                }
                let dq = self.normalize(pc.a, dq);
                for g in 0..self.ngen {
                    let lhs = self.act(&pc, g, Nu::L, &dq);
                    let gq = self.act(&pc, g, Nu::L, &self.unit(ns + q));
                    let rhs = self.normalize(pc.a, gq.iter().map(|p| lin_mul(p, &dl)).collect());
                    out.extend(lhs.iter().zip(&rhs).map(|(a, b)| a.sub(b)).filter(|p| !p.is_zero()));
                }
            }
        }
        out
    }
}

/// The compatibility identities (each must vanish identically) for the generic ansatz.
pub fn build_constraints(p: &ExtProblem, ans: &ActionAnsatz) -> Result<Vec<MPoly>, ConfError> {
    let engine = Engine::new(p);
    Ok(engine.constraints(&ans.unknown_cocycle()))
}

/// Coboundaries that fit inside the ansatz box, with the splitting change producing each.
#[derive(Clone, Debug)]
pub struct CoboundarySpace {
    /// Coordinates in ansatz columns.
    pub generators: Vec<SparseRow>,
    /// `splittings[i][q][s] = G(∂)`: the new lift is `q' = q + Σ_s G·s`.
    pub splittings: Vec<Vec<Vec<MPoly>>>,
}

/// Coboundaries `δψ` for every ℂ[∂]-linear `ψ: W → V` of bounded degree whose
/// image lies in the ansatz box.
pub fn coboundary_generators(p: &ExtProblem, ans: &ActionAnsatz) -> CoboundarySpace {
    let engine = Engine::new(p);
    let (nq, ns) = (engine.quot_kinds.len(), engine.nsub());
    let psi_deg = p.bounds.0 + p.bounds.1 + 2;
    let mut nvars = 0usize;
    let mut psi = vec![vec![MPoly::zero(); ns]; nq];
    let mut psi_vars: Vec<(usize, usize, u16)> = Vec::new();
    for (q, row) in psi.iter_mut().enumerate() {
        for (s, g) in row.iter_mut().enumerate() {
            let top = if matches!(engine.sub_kinds[s], GenKind::Torsion(_)) { 0 } else { psi_deg };
            for i in 0..=top {
                g.add_term([i, 0, 0], &LinearForm::unknown(Unknown(nvars as u32)));
                psi_vars.push((q, s, i));
                nvars += 1;
            }
        }
    }
    let zero = Cocycle::zero(engine.ngen, nq, ns);
    let pc = engine.prepare(&zero);
    let apply_psi = |x: &Elem| -> Elem {
        let mut out = vec![MPoly::zero(); ns + nq];
        for q in 0..nq {
            let pq = &x[ns + q];
            if pq.is_zero() {
                continue;
            }
            for s in 0..ns {
                out[s].add_assign(&lin_mul(pq, &psi[q][s]));
            }
        }
        engine.normalize(&zero.a, out)
    };
    let mut delta = zero.clone();
    for q in 0..nq {
        let mut eq = engine.unit(ns + q);
        let pq = apply_psi(&eq);
        for g in 0..engine.ngen {
            let x = engine.act(&pc, g, Nu::L, &pq);
            let kq = engine.act(&pc, g, Nu::L, &eq);
            let y = apply_psi(&kq);
            for s in 0..ns {
                delta.f[g][q][s] = x[s].sub(&y[s]);
            }
        }
        if let GenKind::Torsion(beta) = &engine.quot_kinds[q] {
            let shift = MPoly::linear(&[(Var::D, Scalar::one())], -beta);
            eq = pq.iter().map(|p| lin_mul(p, &shift)).collect();
            let eq = engine.normalize(&zero.a, eq);
            for s in 0..ns {
                delta.a[q][s] = eq[s].clone();
            }
        }
    }
    // Split δψ into in-box columns and out-of-box constraints on ψ.
    let mut inbox: Vec<(usize, LinearForm)> = Vec::new();
    let mut outside: Vec<SparseRow> = Vec::new();
    let to_row = |lf: &LinearForm| -> SparseRow { lf.terms().iter().map(|(u, c)| (u.0 as usize, c.clone())).collect() };
    let mut visit = |kind: SlotKind, poly: &MPoly| {
        let slot = ans.slot_index(&kind);
        for (e, lf) in poly.terms() {
            match slot.and_then(|i| ans.column(i, e)) {
                Some(col) => inbox.push((col, lf.clone())),
                None => outside.push(to_row(lf)),
            }
        }
    };
    for g in 0..engine.ngen {
        for q in 0..nq {
            for s in 0..ns {
                visit(SlotKind::Action { g, q, s }, &delta.f[g][q][s]);
            }
        }
    }
    for q in 0..nq {
        if matches!(engine.quot_kinds[q], GenKind::Torsion(_)) {
            for s in 0..ns {
                visit(SlotKind::Perturbation { q, s }, &delta.a[q][s]);
            }
        }
    }
    let kernel = rref(outside, nvars).nullspace();
    let mut generators = Vec::new();
    let mut splittings = Vec::new();
    for n in &kernel {
        let dense = crate::multipoly::linalg::sparse_to_dense(n, nvars);
        let mut row: Vec<(usize, Scalar)> = inbox
            .iter()
            .map(|(c, lf)| (*c, lf.eval(&dense)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        row = crate::multipoly::linalg::normalize_row(row);
        if row.is_empty() {
            continue;
        }
        let mut split = vec![vec![MPoly::zero(); ns]; nq];
        for (k, (q, s, i)) in psi_vars.iter().enumerate() {
            if !dense[k].is_zero() {
                split[*q][*s].add_term([*i, 0, 0], &LinearForm::constant(dense[k].clone()));
            }
        }
        generators.push(row);
        splittings.push(split);
    }
    CoboundarySpace { generators, splittings }
}
