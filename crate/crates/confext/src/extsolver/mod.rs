//! Ext(W,V) for fixed parameters: cocycles modulo coboundaries with canonical
//! representatives, plus the parametric degree-n classification for pairs of
//! rank-one Virasoro modules.

mod parametric;
pub mod tables;

pub use parametric::{classify_vir_parametric, recursion_coeff, ConditionPolys};

use std::collections::HashMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::confmod::{
    build_ansatz, build_constraints, coboundary_generators, ActionAnsatz, Cocycle, ConfError, ExtProblem, Scenario,
};
use crate::exactnum::{ArithError, Scalar};
use crate::multipoly::linalg::{axpy, rref, solve_combination, Rref, SparseRow};
use crate::multipoly::{to_linear_system, MPoly, PolyError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Conf(#[from] ConfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("coboundary generator {0} violates the cocycle constraints")]
    CoboundaryNotCocycle(usize),
    #[error("not a cocycle: constraint row {0} fails")]
    NotACocycle(usize),
    #[error("cocycle does not fit the degree box: {0}")]
    OutOfBox(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ExtFlags {
    pub unbounded_family: bool,
    pub reducible_input_warning: bool,
}

/// Non-membership witness: the coordinate `column` of the reduction modulo the
/// coboundary echelon form vanishes on every coboundary but equals `value` here.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub column: usize,
    pub label: String,
    pub value: Scalar,
}

#[derive(Clone, Debug)]
pub struct ExtResult {
    pub scenario: Scenario,
    pub problem: ExtProblem,
    pub ansatz: ActionAnsatz,
    pub cocycle_basis: Vec<SparseRow>,
    pub coboundary_basis: Vec<SparseRow>,
    pub ext_dim: usize,
    pub quotient_basis: Vec<SparseRow>,
    pub certificates: Vec<Certificate>,
    pub flags: ExtFlags,
    pub warnings: Vec<String>,
}

impl ExtResult {
    pub fn quotient_cocycles(&self) -> Vec<Cocycle> {
        self.quotient_basis.iter().map(|v| self.ansatz.evaluate(v)).collect()
    }

    /// Each representative as `(slot label, polynomial)` pairs.
    pub fn rendered_basis(&self) -> Vec<Vec<(String, MPoly)>> {
        self.quotient_basis.iter().map(|v| self.ansatz.render(v)).collect()
    }

    /// Rank of the classes of `cocycles` in Ext; errors if one is not a cocycle.
    pub fn class_rank(&self, cocycles: &[Cocycle]) -> Result<usize, SolveError> {
        let z = rref(self.cocycle_basis.clone(), self.ansatz.ncols);
        let b = rref(self.coboundary_basis.clone(), self.ansatz.ncols);
        let mut reduced = Vec::new();
        for (i, c) in cocycles.iter().enumerate() {
            let x = self.ansatz.coordinates(c).map_err(SolveError::OutOfBox)?;
            if !z.reduce(&x).is_empty() {
                return Err(SolveError::NotACocycle(i));
            }
            reduced.push(b.reduce(&x));
        }
        Ok(rref(reduced, self.ansatz.ncols).rank())
    }

    /// Cocycles whose coordinates vanish on every column where `drop` holds.
    pub fn cocycles_avoiding(&self, drop: impl Fn(usize) -> bool) -> Vec<SparseRow> {
        restrict_span(&self.cocycle_basis, self.ansatz.ncols, &drop)
    }

    /// Same restriction for the coboundary span.
    pub fn coboundaries_avoiding(&self, drop: impl Fn(usize) -> bool) -> Vec<SparseRow> {
        restrict_span(&self.coboundary_basis, self.ansatz.ncols, &drop)
    }

    pub fn to_json(&self) -> Value {
        let basis: Vec<Value> = self
            .rendered_basis()
            .into_iter()
            .map(|r| Value::Array(r.into_iter().map(|(g, p)| json!({"generator": g, "poly": p.to_string()})).collect()))
            .collect();
        let certs: Vec<Value> = self
            .certificates
            .iter()
            .map(|c| json!({"column": c.label, "value": c.value.to_string()}))
            .collect();
        json!({
            "scenario": self.scenario.label(),
            "params": {
                "algebra": self.problem.algebra.name(),
                "sub": self.problem.sub.to_string(),
                "quot": self.problem.quot.to_string(),
                "bounds": {"dpart": self.problem.bounds.0, "dlam": self.problem.bounds.1},
            },
            "ext_dim": self.ext_dim,
            "cocycle_dim": self.cocycle_basis.len(),
            "coboundary_dim": self.coboundary_basis.len(),
            "basis": basis,
            "certificates": certs,
            "flags": self.flags,
            "warnings": self.warnings,
        })
    }
}

/// Echelon basis of the vectors in `span(basis)` that vanish on every dropped column.
pub fn restrict_span(basis: &[SparseRow], ncols: usize, drop: &dyn Fn(usize) -> bool) -> Vec<SparseRow> {
    let mut by_col: std::collections::BTreeMap<usize, SparseRow> = Default::default();
    for (j, v) in basis.iter().enumerate() {
        for (c, x) in v {
            if drop(*c) {
                by_col.entry(*c).or_default().push((j, x.clone()));
            }
        }
    }
    let combos = rref(by_col.into_values().collect(), basis.len()).nullspace();
    let vecs = combos
        .iter()
        .map(|t| t.iter().fold(SparseRow::new(), |acc, (j, c)| axpy(&acc, &-c.clone(), &basis[*j])))
        .collect();
    rref(vecs, ncols).rows
}

/// First row of `rows` with nonzero product against `x`.
pub(crate) fn first_violation(rows: &[SparseRow], x: &[(usize, Scalar)]) -> Option<usize> {
    let xm: HashMap<usize, &Scalar> = x.iter().map(|(c, v)| (*c, v)).collect();
    rows.iter().position(|r| {
        let s = r
            .iter()
            .filter_map(|(c, v)| xm.get(c).map(|w| v * *w))
            .fold(Scalar::zero(), |a, b| &a + &b);
        !s.is_zero()
    })
}

struct Solved {
    ansatz: ActionAnsatz,
    constraints: Rref,
    cocycles: Vec<SparseRow>,
    cob_rref: Rref,
    cob: crate::confmod::CoboundarySpace,
}

fn solve_core(p: &ExtProblem) -> Result<Solved, SolveError> {
    p.field_tag()?;
    let ansatz = build_ansatz(p);
    let ids = build_constraints(p, &ansatz)?;
    let sys = to_linear_system(&ids, ansatz.ncols)?;
    let constraints = rref(sys.rows, ansatz.ncols);
    let cocycles = constraints.nullspace();
    let cob = coboundary_generators(p, &ansatz);
    if let Some(i) = cob.generators.iter().position(|g| first_violation(&constraints.rows, g).is_some()) {
        return Err(SolveError::CoboundaryNotCocycle(i));
    }
    let cob_rref = rref(cob.generators.clone(), ansatz.ncols);
    Ok(Solved { ansatz, constraints, cocycles, cob_rref, cob })
}

fn ext_from(s: &Solved) -> (Vec<SparseRow>, Vec<Certificate>) {
    let reduced: Vec<SparseRow> = s.cocycles.iter().map(|z| s.cob_rref.reduce(z)).filter(|r| !r.is_empty()).collect();
    let quotient = rref(reduced, s.ansatz.ncols).rows;
    let certs = quotient
        .iter()
        .map(|q| {
            let r = s.cob_rref.reduce(q);
            let (column, value) = r[0].clone();
            Certificate { column, label: s.ansatz.column_label(column), value }
        })
        .collect();
    (quotient, certs)
}

/// Ext(quot, sub) with canonical representatives and certificates.
pub fn solve_ext(p: &ExtProblem) -> Result<ExtResult, SolveError> {
    let s = solve_core(p)?;
    let (quotient_basis, certificates) = ext_from(&s);
    let ext_dim = quotient_basis.len();
    debug_assert_eq!(ext_dim, s.cocycles.len() - s.cob_rref.rank());
    let mut flags = ExtFlags::default();
    let warnings = p.warnings();
    flags.reducible_input_warning = !warnings.is_empty();
    if p.probe_saturation {
        let (a, b) = p.bounds;
        let bigger = p.clone().with_bounds(a + 1, b + 1).with_probe(false);
        let s2 = solve_core(&bigger)?;
        flags.unbounded_family = s2.cocycles.len() - s2.cob_rref.rank() > ext_dim;
    }
    Ok(ExtResult {
        scenario: p.scenario(),
        problem: p.clone(),
        ansatz: s.ansatz,
        cocycle_basis: s.cocycles,
        coboundary_basis: s.cob_rref.rows,
        ext_dim,
        quotient_basis,
        certificates,
        flags,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Triviality {
    /// The change of splitting `q' = q + Σ G(∂)·s` that removes the cocycle.
    Trivial { splitting: Vec<(String, MPoly)> },
    /// Reduction of the cocycle modulo all coboundaries.
    Nontrivial { residual: Vec<(String, MPoly)> },
}

/// Decides whether a concrete cocycle is a coboundary.
pub fn triviality_certificate(p: &ExtProblem, cocycle: &Cocycle) -> Result<Triviality, SolveError> {
    let s = solve_core(p)?;
    let x = s.ansatz.coordinates(cocycle).map_err(SolveError::OutOfBox)?;
    if let Some(i) = first_violation(&s.constraints.rows, &x) {
        return Err(SolveError::NotACocycle(i));
    }
    let residual = s.cob_rref.reduce(&x);
    if !residual.is_empty() {
        return Ok(Triviality::Nontrivial { residual: s.ansatz.render(&residual) });
    }
    let t = solve_combination(&s.cob.generators, &x).expect("reduced to zero, so in the span");
    let nq = s.ansatz.quot_names.len();
    let ns = s.ansatz.sub_names.len();
    let mut splitting = Vec::new();
    for q in 0..nq {
        for sub in 0..ns {
            let mut g = MPoly::zero();
            for (i, c) in t.iter().enumerate() {
                if !c.is_zero() {
                    g.axpy_assign(c, &s.cob.splittings[i][q][sub]);
                }
            }
            if !g.is_zero() {
                splitting.push((format!("{} -> {}", s.ansatz.quot_names[q], s.ansatz.sub_names[sub]), g));
            }
        }
    }
    Ok(Triviality::Trivial { splitting })
}
