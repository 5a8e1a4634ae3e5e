//! Sparse exact row reduction. Rows are sorted `(column, value)` lists with no zeros.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::exactnum::Scalar;

pub type SparseRow = Vec<(usize, Scalar)>;

/// `a − c·b` for sorted sparse rows.
pub fn axpy(a: &[(usize, Scalar)], c: &Scalar, b: &[(usize, Scalar)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_row(r: &mut SparseRow, c: &Scalar) {
    for (_, v) in r.iter_mut() {
        *v = &*v * c;
    }
}

pub fn dense_to_sparse(v: &[Scalar]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(r: &[(usize, Scalar)], n: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    for (i, x) in r {
        v[*i] = x.clone();
    }
    v
}

/// Sorts by column, merges duplicates, drops zeros.
pub fn normalize_row(mut row: Vec<(usize, Scalar)>) -> SparseRow {
    row.sort_by_key(|(c, _)| *c);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((cc, vv)) if *cc == c => *vv = &*vv + &v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// Reduced row echelon form: rows sorted by pivot column, pivots equal to 1,
/// no pivot column appears in any other row.
#[derive(Clone, Debug, Default)]
pub struct Rref {
    pub ncols: usize,
    pub rows: Vec<SparseRow>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    /// Reduces `v` modulo the row space; the result has no pivot-column entries.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> SparseRow {
        let index: HashMap<usize, usize> =
            self.rows.iter().enumerate().map(|(i, r)| (r[0].0, i)).collect();
        let mut acc: HashMap<usize, Scalar> = v.iter().cloned().collect();
        for (col, _) in v {
            if let Some(&ri) = index.get(col) {
                let c = acc.get(col).cloned().unwrap_or_default();
                if c.is_zero() {
                    continue;
                }
                for (k, x) in &self.rows[ri] {
                    let e = acc.entry(*k).or_default();
                    *e = &*e - &(&c * x);
                }
            }
        }
        let mut out: SparseRow = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        out.sort_by_key(|(c, _)| *c);
        out
    }

    /// Basis of the solution space of `rows · x = 0`, itself in RREF.
    pub fn nullspace(&self) -> Vec<SparseRow> {
        let mut is_pivot = vec![false; self.ncols];
        for r in &self.rows {
            is_pivot[r[0].0] = true;
        }
        let mut basis: HashMap<usize, SparseRow> = (0..self.ncols)
            .filter(|c| !is_pivot[*c])
            .map(|c| (c, vec![(c, Scalar::one())]))
            .collect();
        for r in &self.rows {
            let p = r[0].0;
            for (f, v) in &r[1..] {
                basis.get_mut(f).expect("free column").push((p, -v));
            }
        }
        let mut vecs: Vec<SparseRow> = basis
            .into_values()
            .map(|mut v| {
                v.sort_by_key(|(c, _)| *c);
                v
            })
            .collect();
        vecs.sort_by_key(|v| v[0].0);
        rref(vecs, self.ncols).rows
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// RREF of the given rows. Rows are split into independent column blocks first,
/// and blocks are reduced in parallel.
pub fn rref(rows: Vec<SparseRow>, ncols: usize) -> Rref {
    let rows: Vec<SparseRow> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut parent: Vec<usize> = (0..ncols).collect();
    for r in &rows {
        for (c, _) in &r[1..] {
            let a = find(&mut parent, r[0].0);
            let b = find(&mut parent, *c);
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    let mut blocks: HashMap<usize, Vec<SparseRow>> = HashMap::new();
    for r in rows {
        let root = find(&mut parent, r[0].0);
        blocks.entry(root).or_default().push(r);
    }
    let mut blocks: Vec<Vec<SparseRow>> = blocks.into_values().collect();
    blocks.sort_by_key(|b| b[0][0].0);
    let reduced: Vec<Vec<SparseRow>> = blocks.into_par_iter().map(rref_block).collect();
    let mut all: Vec<SparseRow> = reduced.into_iter().flatten().collect();
    all.sort_by_key(|r| r[0].0);
    Rref { ncols, rows: all }
}

fn rref_block(mut rows: Vec<SparseRow>) -> Vec<SparseRow> {
    // Shorter rows first keeps fill-in down.
    rows.sort_by_key(|r| (r.len(), r[0].0));
    let mut pivot_of: HashMap<usize, usize> = HashMap::new();
    let mut echelon: Vec<SparseRow> = Vec::new();
    for mut r in rows {
        loop {
            if r.is_empty() {
                break;
            }
            let lead = r[0].0;
            match pivot_of.get(&lead) {
                Some(&pi) => {
                    let c = r[0].1.clone();
                    r = axpy(&r, &c, &echelon[pi]);
                }
                None => {
                    let inv = r[0].1.try_inv().expect("nonzero lead");
                    scale_row(&mut r, &inv);
                    pivot_of.insert(lead, echelon.len());
                    echelon.push(r);
                    break;
                }
            }
        }
    }
    echelon.sort_by_key(|r| std::cmp::Reverse(r[0].0));
    // Back substitution from the last pivot upwards.
    let mut done: HashMap<usize, SparseRow> = HashMap::new();
    let mut out = Vec::with_capacity(echelon.len());
    for r in echelon {
        let lead = r[0].0;
        let needs = r[1..].iter().any(|(c, _)| done.contains_key(c));
        let row = if needs {
            let mut acc: HashMap<usize, Scalar> = HashMap::new();
            for (c, v) in &r {
                let e = acc.entry(*c).or_default();
                *e = &*e + v;
                if let Some(pr) = done.get(c) {
                    for (k, x) in pr {
                        let e = acc.entry(*k).or_default();
                        *e = &*e - &(v * x);
                    }
                }
            }
            let mut row: SparseRow = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
            row.sort_by_key(|(c, _)| *c);
            row
        } else {
            r
        };
        debug_assert_eq!(row[0].0, lead);
        done.insert(lead, row.clone());
        out.push(row);
    }
    out.reverse();
    out
}

/// Solves `Σ x_i · gens[i] = target` if possible.
pub fn solve_combination(gens: &[SparseRow], target: &[(usize, Scalar)]) -> Option<Vec<Scalar>> {
    // Columns of the transposed system are generator indices plus one slot for the target.
    let k = gens.len();
    let mut by_col: HashMap<usize, SparseRow> = HashMap::new();
    for (i, g) in gens.iter().enumerate() {
        for (c, v) in g {
            by_col.entry(*c).or_default().push((i, v.clone()));
        }
    }
    for (c, v) in target {
        by_col.entry(*c).or_default().push((k, -v));
    }
    let rows: Vec<SparseRow> = by_col.into_values().collect();
    let r = rref(rows, k + 1);
    let null = r.nullspace();
    // In RREF the vector with a nonzero target coordinate (if any) is the last one.
    let v = null.iter().find(|v| v.iter().any(|(c, _)| *c == k))?;
    let t = v.iter().find(|(c, _)| *c == k).map(|(_, x)| x.clone())?;
    let inv = t.try_inv().ok()?;
    let mut out = vec![Scalar::zero(); k];
    for (c, x) in v {
        if *c < k {
            out[*c] = x * &inv;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[(usize, i64)]) -> SparseRow {
        v.iter().map(|&(c, x)| (c, Scalar::int(x))).collect()
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        let r = rref((0..4).map(|i| row(&[(i, 1)])).collect(), 4);
        assert_eq!(r.rank(), 4);
        assert!(r.nullspace().is_empty());
    }

    #[test]
    fn nullspace_vectors_solve_the_system() {
        let rows = vec![row(&[(0, 1), (1, 2), (3, -1)]), row(&[(1, 1), (2, 1)]), row(&[(0, 1), (2, -2), (3, -1)])];
        let r = rref(rows.clone(), 5);
        let ns = r.nullspace();
        assert_eq!(ns.len(), 5 - r.rank());
        for v in &ns {
            let dv = sparse_to_dense(v, 5);
            for rw in &rows {
                let s = rw.iter().fold(Scalar::zero(), |acc, (c, x)| &acc + &(x * &dv[*c]));
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn combination_solver() {
        let gens = vec![row(&[(0, 1), (1, 1)]), row(&[(1, 1), (2, 1)])];
        let x = solve_combination(&gens, &row(&[(0, 2), (1, 5), (2, 3)])).unwrap();
        assert_eq!(x, vec![Scalar::int(2), Scalar::int(3)]);
        assert!(solve_combination(&gens, &row(&[(0, 1)])).is_none());
    }
}
