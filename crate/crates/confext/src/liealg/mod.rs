//! Finite-dimensional Lie algebras by structure constants, their matrix
//! representations, and intertwiner spaces computed by exact nullspaces.

mod builtin;
mod file;

pub use builtin::{builtin, sl2, sl2_irrep, sl3};
pub use file::{load_structure_file, StructureFile};

use std::sync::Arc;

use thiserror::Error;

use crate::exactnum::Scalar;
use crate::multipoly::linalg::{normalize_row, rref, SparseRow};

pub type Matrix = Vec<Vec<Scalar>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("antisymmetry fails for [x{0}, x{1}] at component {2}")]
    Antisymmetry(usize, usize, usize),
    #[error("Jacobi identity fails for basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),
    #[error("representation {rep} violates [rho(x{i}), rho(x{j})] = rho([x{i}, x{j}])")]
    RepresentationBracket { rep: String, i: usize, j: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Killing form is degenerate")]
    DegenerateForm,
    #[error("malformed structure file: {0}")]
    Malformed(String),
    #[error("unknown Lie algebra or representation: {0}")]
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    pub name: String,
    pub basis: Vec<String>,
    /// `brackets[i][j]` = sparse expansion of `[x_i, x_j]`.
    brackets: Vec<Vec<Vec<(usize, Scalar)>>>,
}

impl LieAlgebra {
    /// Builds and validates (antisymmetry, Jacobi) from triples `[x_i, x_j] ∋ c·x_k`.
    /// Only one of each antisymmetric pair needs to be listed.
    pub fn new(name: &str, basis: Vec<String>, triples: &[(usize, usize, usize, Scalar)]) -> Result<Self, LieError> {
        let n = basis.len();
        let mut dense = vec![vec![vec![Scalar::zero(); n]; n]; n];
        let mut given = vec![vec![false; n]; n];
        for (i, j, k, c) in triples {
            if *i >= n || *j >= n || *k >= n {
                return Err(LieError::Malformed(format!("index out of range in ({i},{j},{k})")));
            }
            dense[*i][*j][*k] = &dense[*i][*j][*k] + c;
            given[*i][*j] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if given[i][j] && !given[j][i] {
                    for k in 0..n {
                        dense[j][i][k] = -&dense[i][j][k];
                    }
                    given[j][i] = true;
                }
            }
        }
        let alg = LieAlgebra {
            name: name.to_string(),
            basis,
            brackets: dense
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|v| v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
                        .collect()
                })
                .collect(),
        };
        alg.validate()?;
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.brackets[i][j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.brackets[i][j]
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    /// `[x, y]` for coordinate vectors.
    pub fn bracket_vec(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for (k, s) in &self.brackets[i][j] {
                    out[*k] = &out[*k] + &(&c * s);
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<(), LieError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.structure_constant(i, j, k) != -self.structure_constant(j, i, k) {
                        return Err(LieError::Antisymmetry(i, j, k));
                    }
                }
            }
        }
        let unit = |i: usize| {
            let mut v = vec![Scalar::zero(); n];
            v[i] = Scalar::one();
            v
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (x, y, z) = (unit(i), unit(j), unit(k));
                    let a = self.bracket_vec(&x, &self.bracket_vec(&y, &z));
                    let b = self.bracket_vec(&y, &self.bracket_vec(&z, &x));
                    let c = self.bracket_vec(&z, &self.bracket_vec(&x, &y));
                    if (0..n).any(|t| !(&(&a[t] + &b[t]) + &c[t]).is_zero()) {
                        return Err(LieError::Jacobi(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// The adjoint representation, `ad(x_i)_{k,j} = c[i][j][k]`.
    pub fn adjoint(self: &Arc<Self>) -> Representation {
        let n = self.dim();
        let matrices = (0..n)
            .map(|i| {
                let mut m = vec![vec![Scalar::zero(); n]; n];
                for j in 0..n {
                    for (k, c) in &self.brackets[i][j] {
                        m[*k][j] = c.clone();
                    }
                }
                m
            })
            .collect();
        Representation { name: "adj".into(), algebra: self.clone(), matrices }
    }

    /// Pairs of distinct basis elements with `[x_i, x_j] = 0`.
    pub fn commuting_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.brackets[i][j].is_empty() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// True when `[𝔤, 𝔤] = 𝔤`.
    pub fn is_perfect(&self) -> bool {
        let n = self.dim();
        let rows: Vec<SparseRow> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.brackets[i][j].clone())
            .collect();
        rref(rows, n).rank() == n
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    pub name: String,
    pub algebra: Arc<LieAlgebra>,
    /// One `dim × dim` matrix per basis element of the algebra.
    pub matrices: Vec<Matrix>,
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    let mut out = vec![vec![Scalar::zero(); m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[t][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][t] * &b[t][j]);
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y)))
        .collect()
}

fn trace(a: &Matrix) -> Scalar {
    (0..a.len()).fold(Scalar::zero(), |acc, i| &acc + &a[i][i])
}

impl Representation {
    pub fn new(name: &str, algebra: Arc<LieAlgebra>, matrices: Vec<Matrix>) -> Result<Self, LieError> {
        if matrices.len() != algebra.dim() {
            return Err(LieError::DimensionMismatch(format!(
                "representation {name} has {} matrices for a {}-dimensional algebra",
                matrices.len(),
                algebra.dim()
            )));
        }
        let d = matrices.first().map_or(0, |m| m.len());
        if d == 0 || matrices.iter().any(|m| m.len() != d || m.iter().any(|r| r.len() != d)) {
            return Err(LieError::DimensionMismatch(format!("representation {name} has non-square matrices")));
        }
        let r = Representation { name: name.to_string(), algebra, matrices };
        r.validate()?;
        Ok(r)
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].len()
    }

    pub fn matrix(&self, i: usize) -> &Matrix {
        &self.matrices[i]
    }

    pub fn is_trivial(&self) -> bool {
        self.matrices.iter().all(|m| m.iter().all(|r| r.iter().all(|x| x.is_zero())))
    }

    pub fn validate(&self) -> Result<(), LieError> {
        let n = self.algebra.dim();
        let d = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                let ab = mat_mul(&self.matrices[i], &self.matrices[j]);
                let ba = mat_mul(&self.matrices[j], &self.matrices[i]);
                let mut rhs = vec![vec![Scalar::zero(); d]; d];
                for (k, c) in self.algebra.bracket(i, j) {
                    for r in 0..d {
                        for s in 0..d {
                            rhs[r][s] = &rhs[r][s] + &(c * &self.matrices[*k][r][s]);
                        }
                    }
                }
                for r in 0..d {
                    for s in 0..d {
                        if &ab[r][s] - &ba[r][s] != rhs[r][s] {
                            return Err(LieError::RepresentationBracket { rep: self.name.clone(), i, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Trivial representation of the given dimension.
    pub fn trivial(algebra: Arc<LieAlgebra>, dim: usize) -> Self {
        let n = algebra.dim();
        Representation {
            name: if dim == 1 { "triv".into() } else { format!("triv{dim}") },
            algebra,
            matrices: vec![vec![vec![Scalar::zero(); dim]; dim]; n],
        }
    }
}

/// A map `T: 𝔤⊗U → V`; column index `y·dimU + u`.
#[derive(Clone, Debug, PartialEq)]
pub struct Intertwiner {
    pub matrix: Matrix,
    pub dim_u: usize,
}

impl Intertwiner {
    /// `T(x_y ⊗ u_u)` as a vector in V.
    pub fn apply(&self, y: usize, u: usize) -> Vec<Scalar> {
        self.matrix.iter().map(|row| row[y * self.dim_u + u].clone()).collect()
    }
}

fn check_same_algebra(l: &LieAlgebra, u: &Representation, v: &Representation) -> Result<(), LieError> {
    if u.algebra.as_ref() != l || v.algebra.as_ref() != l {
        return Err(LieError::DimensionMismatch("representations over different algebras".into()));
    }
    Ok(())
}

/// Equivariance rows for `T: 𝔤⊗U → V`, unknown `T[r][y·dimU+u]` at column
/// `r·(n·dimU) + y·dimU + u`.
fn intertwiner_rows(l: &LieAlgebra, u: &Representation, v: &Representation) -> Vec<SparseRow> {
    let (n, du, dv) = (l.dim(), u.dim(), v.dim());
    let width = n * du;
    let col = |r: usize, y: usize, w: usize| r * width + y * du + w;
    let mut rows = Vec::new();
    for x in 0..n {
        let rho = v.matrix(x);
        let pi = u.matrix(x);
        for y in 0..n {
            for uu in 0..du {
                for r in 0..dv {
                    let mut row: Vec<(usize, Scalar)> = Vec::new();
                    for s in 0..dv {
                        if !rho[r][s].is_zero() {
                            row.push((col(s, y, uu), rho[r][s].clone()));
                        }
                    }
                    for (k, c) in l.bracket(x, y) {
                        row.push((col(r, *k, uu), -c));
                    }
                    for w in 0..du {
                        if !pi[w][uu].is_zero() {
                            row.push((col(r, y, w), -&pi[w][uu]));
                        }
                    }
                    rows.push(normalize_row(row));
                }
            }
        }
    }
    rows
}

fn unflatten(v: &SparseRow, dv: usize, width: usize) -> Matrix {
    let mut m = vec![vec![Scalar::zero(); width]; dv];
    for (c, x) in v {
        m[c / width][c % width] = x.clone();
    }
    m
}

/// Basis of `Hom_𝔤(𝔤⊗U, V)`, RREF-normalized.
pub fn intertwiner_space(l: &LieAlgebra, u: &Representation, v: &Representation) -> Result<Vec<Intertwiner>, LieError> {
    check_same_algebra(l, u, v)?;
    let width = l.dim() * u.dim();
    let r = rref(intertwiner_rows(l, u, v), v.dim() * width);
    Ok(r
        .nullspace()
        .iter()
        .map(|b| Intertwiner { matrix: unflatten(b, v.dim(), width), dim_u: u.dim() })
        .collect())
}

/// Intertwiners additionally satisfying `Σ rows(T) = 0` for the given extra linear rows.
pub fn intertwiners_with(
    l: &LieAlgebra,
    u: &Representation,
    v: &Representation,
    extra: impl Fn(&dyn Fn(usize, usize, usize) -> usize) -> Vec<SparseRow>,
) -> Result<Vec<Intertwiner>, LieError> {
    check_same_algebra(l, u, v)?;
    let (du, width) = (u.dim(), l.dim() * u.dim());
    let col = move |r: usize, y: usize, w: usize| r * width + y * du + w;
    let mut rows = intertwiner_rows(l, u, v);
    rows.extend(extra(&col).into_iter().map(normalize_row));
    let r = rref(rows, v.dim() * width);
    Ok(r
        .nullspace()
        .iter()
        .map(|b| Intertwiner { matrix: unflatten(b, v.dim(), width), dim_u: du })
        .collect())
}

/// Basis of `Hom_𝔤(U, V)` as `dimV × dimU` matrices.
pub fn module_homs(l: &LieAlgebra, u: &Representation, v: &Representation) -> Result<Vec<Matrix>, LieError> {
    check_same_algebra(l, u, v)?;
    let (du, dv) = (u.dim(), v.dim());
    let col = |r: usize, w: usize| r * du + w;
    let mut rows = Vec::new();
    for x in 0..l.dim() {
        let (rho, pi) = (v.matrix(x), u.matrix(x));
        for r in 0..dv {
            for w in 0..du {
                let mut row = Vec::new();
                for s in 0..dv {
                    if !rho[r][s].is_zero() {
                        row.push((col(s, w), rho[r][s].clone()));
                    }
                }
                for t in 0..du {
                    if !pi[t][w].is_zero() {
                        row.push((col(r, t), -&pi[t][w]));
                    }
                }
                rows.push(normalize_row(row));
            }
        }
    }
    let r = rref(rows, du * dv);
    Ok(r.nullspace().iter().map(|b| unflatten(b, dv, du)).collect())
}

/// Killing form `κ(x_i, x_j) = tr(ad x_i · ad x_j)`.
pub fn invariant_form(l: &Arc<LieAlgebra>) -> Result<Matrix, LieError> {
    let ad = l.adjoint();
    let n = l.dim();
    let mut k = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            k[i][j] = trace(&mat_mul(ad.matrix(i), ad.matrix(j)));
        }
    }
    let rows: Vec<SparseRow> = k.iter().map(|r| crate::multipoly::linalg::dense_to_sparse(r)).collect();
    if rref(rows, n).rank() < n {
        return Err(LieError::DegenerateForm);
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn killing_form_of_sl2() {
        let g = sl2();
        let k = invariant_form(&g).unwrap();
        let (e, h, f) = (0, 1, 2);
        assert_eq!(k[h][h], Scalar::int(8));
        assert_eq!(k[e][f], Scalar::int(4));
        assert_eq!(k[e][e], Scalar::zero());
    }

    #[test]
    fn killing_form_is_invariant() {
        let g = sl2();
        let k = invariant_form(&g).unwrap();
        let n = g.dim();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut s = Scalar::zero();
                    for (t, c) in g.bracket(x, y) {
                        s = &s + &(c * &k[*t][z]);
                    }
                    for (t, c) in g.bracket(x, z) {
                        s = &s + &(c * &k[y][*t]);
                    }
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn abelian_algebra_is_degenerate() {
        let a = Arc::new(LieAlgebra::new("a", vec!["a".into()], &[]).unwrap());
        assert_eq!(invariant_form(&a), Err(LieError::DegenerateForm));
    }

    #[test]
    fn intertwiner_dimensions_for_sl2() {
        let g = sl2();
        let dim = |m: u32, n: u32| intertwiner_space(&g, &sl2_irrep(&g, m), &sl2_irrep(&g, n)).unwrap().len();
        assert_eq!(dim(1, 3), 1);
        assert_eq!(dim(2, 2), 1);
        assert_eq!(dim(1, 5), 0);
    }

    #[test]
    fn adjoint_self_intertwiner_is_the_action() {
        let g = sl2();
        let u = sl2_irrep(&g, 2);
        let sp = intertwiner_space(&g, &u, &u).unwrap();
        assert_eq!(sp.len(), 1);
        let t = &sp[0];
        // T(a⊗w) must be proportional to π(a)w with one global factor.
        let mut ratio: Option<Scalar> = None;
        for a in 0..3 {
            for w in 0..3 {
                let lhs = t.apply(a, w);
                let rhs: Vec<Scalar> = (0..3).map(|r| u.matrix(a)[r][w].clone()).collect();
                for r in 0..3 {
                    if rhs[r].is_zero() {
                        assert!(lhs[r].is_zero());
                    } else {
                        let q = &lhs[r] / &rhs[r];
                        match &ratio {
                            None => ratio = Some(q),
                            Some(x) => assert_eq!(x, &q),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn schur_for_module_homs() {
        let g = sl2();
        assert_eq!(module_homs(&g, &sl2_irrep(&g, 2), &sl2_irrep(&g, 2)).unwrap().len(), 1);
        assert_eq!(module_homs(&g, &sl2_irrep(&g, 1), &sl2_irrep(&g, 3)).unwrap().len(), 0);
        let h = sl3();
        let adj = h.adjoint();
        assert_eq!(module_homs(&h, &adj, &adj).unwrap().len(), 1);
    }

    #[test]
    fn bad_brackets_are_rejected() {
        // [x0,x1] = x1, [x0,x2] = x2, [x1,x2] = x0 breaks Jacobi.
        let basis = vec!["x0".into(), "x1".into(), "x2".into()];
        let t = [(0, 1, 1, Scalar::one()), (0, 2, 2, Scalar::one()), (1, 2, 0, Scalar::one())];
        assert!(matches!(LieAlgebra::new("bad", basis, &t), Err(LieError::Jacobi(..))));
    }
}
