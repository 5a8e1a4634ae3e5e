//! Sparse polynomials in ∂, λ, μ whose coefficients are affine-linear forms in
//! unknowns, and the reduction of polynomial identities to exact linear systems.

pub mod linalg;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exactnum::Scalar;
use linalg::{rref, SparseRow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("product of two polynomials that both carry unknowns")]
    NonlinearProduct,
    #[error("substitution expression must be free of unknowns")]
    UnknownIndeterminate,
    #[error("identity {identity} has a nonzero constant part at {monomial}")]
    NonhomogeneousSystem { identity: usize, monomial: String },
}

/// The formal indeterminates: D = ∂, L = λ, M = μ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    D = 0,
    L = 1,
    M = 2,
}

impl Var {
    pub fn name(self) -> &'static str {
        ["D", "L", "M"][self as usize]
    }
}

pub type Exp = [u16; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Unknown(pub u32);

/// `constant + Σ coeff·unknown`, no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LinearForm {
    constant: Scalar,
    terms: Vec<(Unknown, Scalar)>,
}

impl LinearForm {
    pub fn constant(c: Scalar) -> Self {
        LinearForm { constant: c, terms: vec![] }
    }

    pub fn unknown(u: Unknown) -> Self {
        LinearForm { constant: Scalar::zero(), terms: vec![(u, Scalar::one())] }
    }

    pub fn from_terms(constant: Scalar, mut terms: Vec<(Unknown, Scalar)>) -> Self {
        terms.sort_by_key(|(u, _)| *u);
        let mut merged: Vec<(Unknown, Scalar)> = Vec::with_capacity(terms.len());
        for (u, c) in terms {
            match merged.last_mut() {
                Some((v, d)) if *v == u => *d = &*d + &c,
                _ => merged.push((u, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        LinearForm { constant, terms: merged }
    }

    pub fn constant_part(&self) -> &Scalar {
        &self.constant
    }

    pub fn terms(&self) -> &[(Unknown, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &LinearForm) -> LinearForm {
        self.axpy(&Scalar::one(), o)
    }

    /// `self + c·o`.
    pub fn axpy(&self, c: &Scalar, o: &LinearForm) -> LinearForm {
        let mut terms = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (a, b) = (&self.terms, &o.terms);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                terms.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                terms.push((b[j].0, c * &b[j].1));
                j += 1;
            } else {
                let v = &a[i].1 + &(c * &b[j].1);
                if !v.is_zero() {
                    terms.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        terms.retain(|(_, v)| !v.is_zero());
        LinearForm { constant: &self.constant + &(c * &o.constant), terms }
    }

    pub fn scale(&self, c: &Scalar) -> LinearForm {
        if c.is_zero() {
            return LinearForm::default();
        }
        LinearForm {
            constant: &self.constant * c,
            terms: self.terms.iter().map(|(u, v)| (*u, v * c)).collect(),
        }
    }

    pub fn eval(&self, values: &[Scalar]) -> Scalar {
        self.terms
            .iter()
            .fold(self.constant.clone(), |acc, (u, c)| &acc + &(c * &values[u.0 as usize]))
    }

    pub fn fmt_with(&self, names: &dyn Fn(Unknown) -> String) -> String {
        let mut parts = Vec::new();
        if !self.constant.is_zero() || self.terms.is_empty() {
            parts.push(self.constant.to_string());
        }
        for (u, c) in &self.terms {
            if c.is_one() {
                parts.push(names(*u));
            } else {
                parts.push(format!("{}*{}", paren(c), names(*u)));
            }
        }
        parts.join(" + ")
    }
}

fn paren(c: &Scalar) -> String {
    let s = c.to_string();
    if c.signum() < 0 || !c.is_rational() {
        format!("({s})")
    } else {
        s
    }
}

/// Sparse polynomial in D, L, M with `LinearForm` coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Exp, LinearForm>,
}

fn add_exp(a: &Exp, b: &Exp) -> Exp {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Graded-lex key, largest first when sorted ascending: ∂ > λ > μ.
pub fn grlex_desc(e: &Exp) -> (std::cmp::Reverse<u16>, std::cmp::Reverse<u16>, std::cmp::Reverse<u16>, std::cmp::Reverse<u16>) {
    use std::cmp::Reverse;
    (Reverse(e[0] + e[1] + e[2]), Reverse(e[0]), Reverse(e[1]), Reverse(e[2]))
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term([0, 0, 0], LinearForm::constant(c))
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v as usize] = 1;
        Self::term(e, LinearForm::constant(Scalar::one()))
    }

    pub fn monomial(e: Exp, c: Scalar) -> Self {
        Self::term(e, LinearForm::constant(c))
    }

    pub fn term(e: Exp, c: LinearForm) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        MPoly { terms }
    }

    /// Σ c_i·vars, e.g. `linear(&[(Var::D, 1), (Var::L, Δ)], α)` = ∂ + Δλ + α.
    pub fn linear(parts: &[(Var, Scalar)], constant: Scalar) -> Self {
        let mut p = MPoly::constant(constant);
        for (v, c) in parts {
            p.add_term(
                {
                    let mut e = [0; 3];
                    e[*v as usize] = 1;
                    e
                },
                &LinearForm::constant(c.clone()),
            );
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &LinearForm)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exp) -> LinearForm {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// Constant coefficient at `e`; panics if it carries unknowns.
    pub fn scalar_coeff(&self, e: &Exp) -> Scalar {
        match self.terms.get(e) {
            None => Scalar::zero(),
            Some(lf) => {
                assert!(lf.is_constant(), "coefficient carries unknowns");
                lf.constant.clone()
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_unknown_free(&self) -> bool {
        self.terms.values().all(|c| c.is_constant())
    }

    pub fn degree_in(&self, v: Var) -> Option<u16> {
        self.terms.keys().map(|e| e[v as usize]).max()
    }

    pub fn total_degree(&self) -> Option<u16> {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).max()
    }

    pub fn add_term(&mut self, e: Exp, c: &LinearForm) {
        self.add_term_scaled(e, &Scalar::one(), c);
    }

    fn add_term_scaled(&mut self, e: Exp, s: &Scalar, c: &LinearForm) {
        if c.is_zero() || s.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let v = x.axpy(s, c);
                if v.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *x = v;
                }
            }
            None => {
                self.terms.insert(e, c.scale(s));
            }
        }
    }

    pub fn add_assign(&mut self, o: &MPoly) {
        self.axpy_assign(&Scalar::one(), o);
    }

    /// `self += c·o`.
    pub fn axpy_assign(&mut self, c: &Scalar, o: &MPoly) {
        for (e, v) in &o.terms {
            self.add_term_scaled(*e, c, v);
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        r.axpy_assign(&Scalar::int(-1), o);
        r
    }

    pub fn neg(&self) -> MPoly {
        self.scale(&Scalar::int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(e, v)| (*e, v.scale(c))).collect() }
    }

    /// Product; at least one factor must be free of unknowns.
    pub fn mul(&self, o: &MPoly) -> Result<MPoly, PolyError> {
        let (known, other) = if o.is_unknown_free() {
            (o, self)
        } else if self.is_unknown_free() {
            (self, o)
        } else {
            return Err(PolyError::NonlinearProduct);
        };
        let mut out = MPoly::zero();
        for (ek, ck) in &known.terms {
            for (eo, co) in &other.terms {
                out.add_term_scaled(add_exp(ek, eo), &ck.constant, co);
            }
        }
        Ok(out)
    }

    /// Product with an unknown-free factor.
    pub fn mul_known(&self, known: &MPoly) -> MPoly {
        debug_assert!(known.is_unknown_free());
        let mut out = MPoly::zero();
        for (ek, ck) in &known.terms {
            for (eo, co) in &self.terms {
                out.add_term_scaled(add_exp(ek, eo), &ck.constant, co);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Result<MPoly, PolyError> {
        let mut acc = MPoly::one();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Replaces `var` by an unknown-free expression.
    pub fn substitute(&self, var: Var, expr: &MPoly) -> Result<MPoly, PolyError> {
        if !expr.is_unknown_free() {
            return Err(PolyError::UnknownIndeterminate);
        }
        let vi = var as usize;
        let mut powers: Vec<MPoly> = vec![MPoly::one()];
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let k = e[vi] as usize;
            while powers.len() <= k {
                let next = powers.last().expect("nonempty").mul_known(expr);
                powers.push(next);
            }
            let mut rest = *e;
            rest[vi] = 0;
            for (pe, pc) in &powers[k].terms {
                out.add_term_scaled(add_exp(&rest, pe), &pc.constant, c);
            }
        }
        Ok(out)
    }

    /// Substitutes concrete values for all unknowns.
    pub fn eval_unknowns(&self, values: &[Scalar]) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, &LinearForm::constant(c.eval(values)));
        }
        out
    }

    /// Evaluates the unknown-free polynomial at scalar values of D, L, M.
    pub fn eval_point(&self, point: [&Scalar; 3]) -> Scalar {
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            assert!(c.is_constant(), "coefficient carries unknowns");
            let mut t = c.constant.clone();
            for (i, p) in point.iter().enumerate() {
                t = &t * &p.pow(e[i] as u32);
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Terms in canonical (descending graded-lex) order.
    pub fn sorted_terms(&self) -> Vec<(&Exp, &LinearForm)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(e, _)| grlex_desc(e));
        v
    }

    pub fn fmt_with(&self, names: &dyn Fn(Unknown) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.sorted_terms() {
            let mono = monomial_string(e);
            let coeff = if c.is_constant() {
                let s = &c.constant;
                if mono.is_empty() {
                    paren(s)
                } else if s.is_one() {
                    String::new()
                } else {
                    paren(s)
                }
            } else {
                format!("({})", c.fmt_with(names))
            };
            parts.push(match (coeff.is_empty(), mono.is_empty()) {
                (true, _) => mono,
                (false, true) => coeff,
                (false, false) => format!("{coeff}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

pub fn monomial_string(e: &Exp) -> String {
    let mut parts = Vec::new();
    for (i, v) in ["D", "L", "M"].iter().enumerate() {
        match e[i] {
            0 => {}
            1 => parts.push(v.to_string()),
            k => parts.push(format!("{v}^{k}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&|u| format!("u{}", u.0)))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One row per (identity, monomial); columns are unknown ids in declaration order.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub ncols: usize,
    pub rows: Vec<SparseRow>,
    pub row_labels: Vec<(usize, Exp)>,
}

pub fn to_linear_system(identities: &[MPoly], ncols: usize) -> Result<LinearSystem, PolyError> {
    let mut sys = LinearSystem { ncols, ..Default::default() };
    for (i, id) in identities.iter().enumerate() {
        for (e, c) in &id.terms {
            if !c.constant.is_zero() {
                return Err(PolyError::NonhomogeneousSystem {
                    identity: i,
                    monomial: monomial_string(e),
                });
            }
            sys.rows.push(c.terms.iter().map(|(u, v)| (u.0 as usize, v.clone())).collect());
            sys.row_labels.push((i, *e));
        }
    }
    Ok(sys)
}

impl LinearSystem {
    pub fn append(&mut self, other: LinearSystem) {
        self.rows.extend(other.rows);
        self.row_labels.extend(other.row_labels);
    }
}

/// RREF basis of the solution space, as dense assignments indexed by unknown id.
pub fn nullspace(sys: &LinearSystem) -> Vec<Vec<Scalar>> {
    let r = rref(sys.rows.clone(), sys.ncols);
    r.nullspace()
        .into_iter()
        .map(|v| linalg::sparse_to_dense(&v, sys.ncols))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d() -> MPoly {
        MPoly::var(Var::D)
    }
    fn l() -> MPoly {
        MPoly::var(Var::L)
    }

    #[test]
    fn binomial_identity_cancels() {
        let s = d().add(&l());
        let p = s.pow(2).unwrap().sub(&d().pow(2).unwrap()).sub(&d().mul(&l()).unwrap().scale(&Scalar::int(2))).sub(&l().pow(2).unwrap());
        assert!(p.is_zero());
    }

    #[test]
    fn canonical_text_form() {
        let p = MPoly::monomial([2, 1, 0], Scalar::frac(3, 2)).add(&MPoly::monomial([0, 3, 0], Scalar::int(-1)));
        assert_eq!(p.to_string(), "3/2*D^2*L + (-1)*L^3");
    }

    #[test]
    fn nonlinear_products_are_rejected() {
        let f = MPoly::term([0, 1, 0], LinearForm::unknown(Unknown(0)));
        assert_eq!(f.mul(&f), Err(PolyError::NonlinearProduct));
        assert!(f.mul(&d()).is_ok());
        assert_eq!(d().substitute(Var::D, &f), Err(PolyError::UnknownIndeterminate));
    }

    #[test]
    fn constant_parts_are_reported() {
        let id = MPoly::constant(Scalar::one());
        assert!(matches!(to_linear_system(&[id], 0), Err(PolyError::NonhomogeneousSystem { .. })));
    }

    #[test]
    fn zero_identity_gives_full_nullspace() {
        let sys = to_linear_system(&[MPoly::zero()], 3).unwrap();
        assert_eq!(nullspace(&sys).len(), 3);
    }
}
