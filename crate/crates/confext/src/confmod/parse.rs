use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use super::{ConfAlgebra, ConfError, ExtProblem, ModuleDescriptor};
use crate::exactnum::Scalar;
use crate::liealg::{builtin, load_structure_file, LieAlgebra, Representation};

/// A Lie algebra together with any representations loaded alongside it.
#[derive(Clone, Debug)]
pub struct LieContext {
    pub algebra: Arc<LieAlgebra>,
    pub extra: BTreeMap<String, Representation>,
}

impl LieContext {
    pub fn resolve(&self, name: &str) -> Result<Representation, ConfError> {
        if let Some(r) = self.extra.get(name) {
            return Ok(r.clone());
        }
        Ok(Representation::named(&self.algebra, name)?)
    }
}

/// `vir`, `virab`, `cur:<lie>`, `vircur:<lie>`; `<lie>` is `sl2`, `sl3` or `@file.json`.
pub fn parse_algebra(s: &str) -> Result<(ConfAlgebra, Option<LieContext>), ConfError> {
    let s = s.trim();
    match s {
        "vir" => return Ok((ConfAlgebra::Vir, None)),
        "virab" => return Ok((ConfAlgebra::VirAb, None)),
        _ => {}
    }
    let (kind, lie) = s.split_once(':').ok_or_else(|| ConfError::Parse(format!("unknown algebra {s}")))?;
    let ctx = if let Some(path) = lie.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| ConfError::Parse(format!("{path}: {e}")))?;
        let f = load_structure_file(&text)?;
        LieContext { algebra: f.algebra, extra: f.reps }
    } else {
        LieContext { algebra: builtin(lie)?, extra: BTreeMap::new() }
    };
    let alg = match kind {
        "cur" => ConfAlgebra::Cur(ctx.algebra.clone()),
        "vircur" => ConfAlgebra::VirCur(ctx.algebra.clone()),
        _ => return Err(ConfError::Parse(format!("unknown algebra kind {kind}"))),
    };
    Ok((alg, Some(ctx)))
}

fn scalar(s: &str) -> Result<Scalar, ConfError> {
    s.trim().parse().map_err(ConfError::Arith)
}

/// `C(β) | M(α,Δ) | M(rep) | M(α,Δ,rep) | M(α,Δ,k=…)`.
pub fn parse_descriptor(s: &str, alg: &ConfAlgebra, ctx: Option<&LieContext>) -> Result<ModuleDescriptor, ConfError> {
    let s = s.trim();
    let bad = || ConfError::Parse(format!("malformed module descriptor {s:?}"));
    let (head, body) = s.split_once('(').ok_or_else(bad)?;
    let body = body.strip_suffix(')').ok_or_else(bad)?;
    let args: Vec<&str> = body.split(',').map(str::trim).collect();
    let rep = |name: &str| -> Result<Representation, ConfError> {
        ctx.ok_or_else(|| ConfError::Parse(format!("{alg} has no Lie algebra for representation {name}")))?
            .resolve(name)
    };
    let desc = match (head.trim(), args.as_slice()) {
        ("C", [b]) => ModuleDescriptor::OneDim { beta: scalar(b)? },
        ("M", [r]) => ModuleDescriptor::CurMod { rep: rep(r)? },
        ("M", [a, d]) => ModuleDescriptor::VirMod { alpha: scalar(a)?, delta: scalar(d)? },
        ("M", [a, d, k]) if k.starts_with("k=") => {
            ModuleDescriptor::VirAbMod { alpha: scalar(a)?, delta: scalar(d)?, k: scalar(&k[2..])? }
        }
        ("M", [a, d, r]) => ModuleDescriptor::VirCurMod { alpha: scalar(a)?, delta: scalar(d)?, rep: rep(r)? },
        _ => return Err(bad()),
    };
    if !desc.fits(alg) {
        return Err(ConfError::Mismatch { module: desc.to_string(), algebra: alg.name() });
    }
    Ok(desc)
}

#[derive(Deserialize)]
struct RawBounds {
    dpart: u16,
    dlam: u16,
}

#[derive(Deserialize)]
struct RawProblem {
    algebra: String,
    sub: Value,
    quot: Value,
    bounds: Option<RawBounds>,
}

fn descriptor_value(v: &Value, alg: &ConfAlgebra, ctx: Option<&LieContext>) -> Result<ModuleDescriptor, ConfError> {
    match v {
        Value::String(s) => parse_descriptor(s, alg, ctx),
        Value::Object(o) => {
            let field = |k: &str| -> Result<String, ConfError> {
                match o.get(k) {
                    Some(Value::String(s)) => Ok(s.clone()),
                    Some(Value::Number(n)) => Ok(n.to_string()),
                    _ => Err(ConfError::Parse(format!("missing field {k}"))),
                }
            };
            let text = match field("kind")?.as_str() {
                "one_dim" => format!("C({})", field("beta")?),
                "vir" => format!("M({},{})", field("alpha")?, field("delta")?),
                "cur" => format!("M({})", field("rep")?),
                "vircur" => format!("M({},{},{})", field("alpha")?, field("delta")?, field("rep")?),
                "virab" => format!("M({},{},k={})", field("alpha")?, field("delta")?, field("k")?),
                k => return Err(ConfError::Parse(format!("unknown module kind {k}"))),
            };
            parse_descriptor(&text, alg, ctx)
        }
        _ => Err(ConfError::Parse("module must be a string or an object".into())),
    }
}

/// `{algebra, sub, quot, bounds:{dpart, dlam}}`; modules are grammar strings or
/// objects `{kind, beta|alpha|delta|rep|k}`.
pub fn parse_problem_json(text: &str) -> Result<ExtProblem, ConfError> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| ConfError::Parse(e.to_string()))?;
    let (alg, ctx) = parse_algebra(&raw.algebra)?;
    let sub = descriptor_value(&raw.sub, &alg, ctx.as_ref())?;
    let quot = descriptor_value(&raw.quot, &alg, ctx.as_ref())?;
    let mut p = ExtProblem::new(alg, sub, quot)?;
    if let Some(b) = raw.bounds {
        p = p.with_bounds(b.dpart, b.dlam);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_round_trip() {
        let (vir, _) = parse_algebra("vir").unwrap();
        let d = parse_descriptor("M(0, 7/2+1/2*sqrt(19))", &vir, None).unwrap();
        assert_eq!(d.to_string(), "M(0,7/2+1/2*sqrt(19))");
        assert!(matches!(parse_descriptor("C(-1)", &vir, None).unwrap(), ModuleDescriptor::OneDim { .. }));
        let (cur, ctx) = parse_algebra("cur:sl2").unwrap();
        let m = parse_descriptor("M(V3)", &cur, ctx.as_ref()).unwrap();
        assert_eq!(m.rank(), 4);
        let (ab, _) = parse_algebra("virab").unwrap();
        assert!(matches!(parse_descriptor("M(0,1,k=2)", &ab, None).unwrap(), ModuleDescriptor::VirAbMod { .. }));
    }

    #[test]
    fn mismatched_module_is_rejected() {
        let (vir, _) = parse_algebra("vir").unwrap();
        assert!(parse_descriptor("M(0,1,k=2)", &vir, None).is_err());
        assert!(parse_descriptor("M(0,1", &vir, None).is_err());
    }

    #[test]
    fn json_problem() {
        let p = parse_problem_json(
            r#"{"algebra":"vir","sub":{"kind":"one_dim","beta":"-1"},"quot":"M(1,2)","bounds":{"dpart":3,"dlam":4}}"#,
        )
        .unwrap();
        assert_eq!(p.bounds, (3, 4));
        assert_eq!(p.scenario(), super::super::Scenario::S1);
    }
}
