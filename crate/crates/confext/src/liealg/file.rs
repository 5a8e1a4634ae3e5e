use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use super::{LieAlgebra, LieError, Matrix, Representation};
use crate::exactnum::Scalar;

#[derive(Deserialize)]
struct RawRep {
    dim: usize,
    matrices: BTreeMap<String, Vec<Vec<Value>>>,
}

#[derive(Deserialize)]
struct RawFile {
    name: String,
    dim: usize,
    basis: Vec<String>,
    brackets: Vec<(usize, usize, usize, Value)>,
    #[serde(default)]
    reps: BTreeMap<String, RawRep>,
}

/// A loaded structure-constants file.
#[derive(Clone, Debug)]
pub struct StructureFile {
    pub algebra: Arc<LieAlgebra>,
    pub reps: BTreeMap<String, Representation>,
}

fn scalar(v: &Value) -> Result<Scalar, LieError> {
    match v {
        Value::String(s) => s.parse().map_err(|e| LieError::Malformed(format!("{s}: {e}"))),
        Value::Number(n) => n
            .as_i64()
            .map(Scalar::int)
            .ok_or_else(|| LieError::Malformed(format!("non-integer number {n}; quote fractions"))),
        other => Err(LieError::Malformed(format!("expected scalar, got {other}"))),
    }
}

/// Parses and validates the JSON structure-constants format.
pub fn load_structure_file(text: &str) -> Result<StructureFile, LieError> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| LieError::Malformed(e.to_string()))?;
    if raw.basis.len() != raw.dim {
        return Err(LieError::DimensionMismatch(format!("dim {} but {} basis names", raw.dim, raw.basis.len())));
    }
    let triples = raw
        .brackets
        .iter()
        .map(|(i, j, k, c)| Ok((*i, *j, *k, scalar(c)?)))
        .collect::<Result<Vec<_>, LieError>>()?;
    let algebra = Arc::new(LieAlgebra::new(&raw.name, raw.basis.clone(), &triples)?);
    let mut reps = BTreeMap::new();
    for (name, r) in raw.reps {
        let mut matrices = Vec::with_capacity(raw.dim);
        for b in &raw.basis {
            let m = r
                .matrices
                .get(b)
                .ok_or_else(|| LieError::Malformed(format!("rep {name} lacks a matrix for {b}")))?;
            let m: Matrix = m
                .iter()
                .map(|row| row.iter().map(scalar).collect::<Result<Vec<_>, _>>())
                .collect::<Result<_, _>>()?;
            if m.len() != r.dim {
                return Err(LieError::DimensionMismatch(format!("rep {name}, matrix {b}")));
            }
            matrices.push(m);
        }
        let rep = Representation::new(&name, algebra.clone(), matrices)?;
        reps.insert(name, rep);
    }
    Ok(StructureFile { algebra, reps })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SL2: &str = r#"{
      "name": "sl2", "dim": 3, "basis": ["e","h","f"],
      "brackets": [[0,2,1,"1"],[1,0,0,2],[1,2,2,"-2"]],
      "reps": {"std": {"dim": 2, "matrices": {
        "e": [[0,1],[0,0]], "h": [[1,0],[0,-1]], "f": [[0,0],[1,0]]}}}
    }"#;

    #[test]
    fn loads_sl2() {
        let f = load_structure_file(SL2).unwrap();
        assert_eq!(f.algebra.dim(), 3);
        assert_eq!(f.reps["std"].dim(), 2);
    }

    #[test]
    fn rejects_bad_rep() {
        let bad = SL2.replace("\"f\": [[0,0],[1,0]]", "\"f\": [[0,0],[2,0]]");
        assert!(matches!(load_structure_file(&bad), Err(LieError::RepresentationBracket { .. })));
    }
}
