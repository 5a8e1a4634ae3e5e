use std::sync::Arc;

use super::{LieAlgebra, LieError, Matrix, Representation};
use crate::exactnum::Scalar;

/// sl₂ in the basis (e, h, f): [e,f] = h, [h,e] = 2e, [h,f] = −2f.
pub fn sl2() -> Arc<LieAlgebra> {
    let basis = ["e", "h", "f"].iter().map(|s| s.to_string()).collect();
    let t = [
        (0, 2, 1, Scalar::one()),
        (1, 0, 0, Scalar::int(2)),
        (1, 2, 2, Scalar::int(-2)),
    ];
    Arc::new(LieAlgebra::new("sl2", basis, &t).expect("sl2 structure constants"))
}

/// The irreducible sl₂-module of highest weight m on w_0..w_m.
pub fn sl2_irrep(g: &Arc<LieAlgebra>, m: u32) -> Representation {
    let d = m as usize + 1;
    let z = || vec![vec![Scalar::zero(); d]; d];
    let (mut e, mut h, mut f) = (z(), z(), z());
    for j in 0..d {
        let ji = j as i64;
        h[j][j] = Scalar::int(m as i64 - 2 * ji);
        if j > 0 {
            e[j - 1][j] = Scalar::int(ji * (m as i64 - ji + 1));
        }
        if j + 1 < d {
            f[j + 1][j] = Scalar::one();
        }
    }
    Representation { name: format!("V{m}"), algebra: g.clone(), matrices: vec![e, h, f] }
}

const SL3_UNITS: [(usize, usize); 6] = [(0, 1), (1, 2), (0, 2), (1, 0), (2, 1), (2, 0)];

fn sl3_matrices() -> Vec<Matrix> {
    let unit = |r: usize, c: usize, v: i64| {
        let mut m = vec![vec![Scalar::zero(); 3]; 3];
        m[r][c] = Scalar::int(v);
        m
    };
    let mut out: Vec<Matrix> = SL3_UNITS[..3].iter().map(|&(r, c)| unit(r, c, 1)).collect();
    let mut h1 = unit(0, 0, 1);
    h1[1][1] = Scalar::int(-1);
    let mut h2 = unit(1, 1, 1);
    h2[2][2] = Scalar::int(-1);
    out.push(h1);
    out.push(h2);
    out.extend(SL3_UNITS[3..].iter().map(|&(r, c)| unit(r, c, 1)));
    out
}

/// Coordinates of a traceless 3×3 matrix in the sl₃ basis.
fn sl3_coords(m: &Matrix) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); 8];
    for (i, &(r, c)) in SL3_UNITS[..3].iter().enumerate() {
        v[i] = m[r][c].clone();
    }
    for (i, &(r, c)) in SL3_UNITS[3..].iter().enumerate() {
        v[5 + i] = m[r][c].clone();
    }
    // x·h1 + y·h2 = diag(x, y−x, −y)
    v[3] = m[0][0].clone();
    v[4] = -&m[2][2];
    v
}

/// sl₃ with basis e1=E12, e2=E23, e3=E13, h1, h2, f1=E21, f2=E32, f3=E31.
pub fn sl3() -> Arc<LieAlgebra> {
    let basis = ["e1", "e2", "e3", "h1", "h2", "f1", "f2", "f3"].iter().map(|s| s.to_string()).collect();
    let ms = sl3_matrices();
    let mut t = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            let ab = super::mat_mul(&ms[i], &ms[j]);
            let ba = super::mat_mul(&ms[j], &ms[i]);
            let comm: Matrix = (0..3).map(|r| (0..3).map(|c| &ab[r][c] - &ba[r][c]).collect()).collect();
            for (k, c) in sl3_coords(&comm).into_iter().enumerate() {
                if !c.is_zero() {
                    t.push((i, j, k, c));
                }
            }
        }
    }
    Arc::new(LieAlgebra::new("sl3", basis, &t).expect("sl3 structure constants"))
}

fn sl3_fund(g: &Arc<LieAlgebra>) -> Representation {
    Representation { name: "fund".into(), algebra: g.clone(), matrices: sl3_matrices() }
}

fn sl3_antifund(g: &Arc<LieAlgebra>) -> Representation {
    let matrices = sl3_matrices()
        .into_iter()
        .map(|m| (0..3).map(|r| (0..3).map(|c| -&m[c][r]).collect()).collect())
        .collect();
    Representation { name: "antifund".into(), algebra: g.clone(), matrices }
}

/// Built-in algebra by name: `sl2` or `sl3`.
pub fn builtin(name: &str) -> Result<Arc<LieAlgebra>, LieError> {
    match name {
        "sl2" => Ok(sl2()),
        "sl3" => Ok(sl3()),
        _ => Err(LieError::Unknown(name.to_string())),
    }
}

impl Representation {
    /// Named representation of a built-in algebra: `adj`, `triv`, `V<m>` (sl₂),
    /// `fund`/`antifund` (sl₃).
    pub fn named(g: &Arc<LieAlgebra>, name: &str) -> Result<Representation, LieError> {
        match (g.name.as_str(), name) {
            (_, "adj") => Ok(g.adjoint()),
            (_, "triv") => Ok(Representation::trivial(g.clone(), 1)),
            ("sl2", v) if v.starts_with('V') => v[1..]
                .parse::<u32>()
                .map(|m| sl2_irrep(g, m))
                .map_err(|_| LieError::Unknown(name.to_string())),
            ("sl3", "fund") => Ok(sl3_fund(g)),
            ("sl3", "antifund") => Ok(sl3_antifund(g)),
            _ => Err(LieError::Unknown(format!("{}:{}", g.name, name))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_irreps_are_representations() {
        let g = sl2();
        for m in 0..=6 {
            let r = sl2_irrep(&g, m);
            assert_eq!(r.dim(), m as usize + 1);
            r.validate().unwrap();
        }
        assert!(sl2_irrep(&g, 0).is_trivial());
        let h: Vec<Scalar> = (0..3).map(|j| sl2_irrep(&g, 2).matrix(1)[j][j].clone()).collect();
        assert_eq!(h, vec![Scalar::int(2), Scalar::zero(), Scalar::int(-2)]);
    }

    #[test]
    fn sl3_reps_validate() {
        let g = sl3();
        assert!(g.is_perfect());
        for n in ["adj", "fund", "antifund", "triv"] {
            Representation::named(&g, n).unwrap().validate().unwrap();
        }
    }
}
