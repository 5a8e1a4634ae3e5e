//! Browser bindings: one Ext query, a weight grid of density-module Ext
//! dimensions, and the per-degree classification. Every entry point returns JSON.

use confext::confmod::{parse_algebra, parse_descriptor, ConfAlgebra, ExtProblem, ModuleDescriptor};
use confext::exactnum::Scalar;
use confext::extsolver::{classify_vir_parametric, solve_ext};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest grid side accepted by [`vir_grid`].
pub const MAX_GRID: i64 = 25;

fn scalar(s: &str) -> Result<Scalar, String> {
    s.trim().parse().map_err(|e| format!("{e}"))
}

pub fn ext_json(alg: &str, sub: &str, quot: &str) -> Result<Value, String> {
    let (a, ctx) = parse_algebra(alg).map_err(|e| e.to_string())?;
    let s = parse_descriptor(sub, &a, ctx.as_ref()).map_err(|e| e.to_string())?;
    let q = parse_descriptor(quot, &a, ctx.as_ref()).map_err(|e| e.to_string())?;
    let p = ExtProblem::new(a, s, q).map_err(|e| e.to_string())?;
    Ok(solve_ext(&p).map_err(|e| e.to_string())?.to_json())
}

/// Ext dimensions for `M(α,Δ̄) ⊂ M(α,Δ)` with integer weights in `lo..=hi`;
/// `grid[i][j]` has `Δ = lo+i` and `Δ̄ = lo+j`.
pub fn vir_grid(alpha: &str, lo: i64, hi: i64) -> Result<Value, String> {
    if hi < lo || hi - lo >= MAX_GRID {
        return Err(format!("weight range {lo}..{hi} must be nonempty and at most {MAX_GRID} wide"));
    }
    let alpha = scalar(alpha)?;
    let module = |d: i64| ModuleDescriptor::VirMod { alpha: alpha.clone(), delta: Scalar::int(d) };
    let mut grid = Vec::new();
    for delta in lo..=hi {
        let mut row = Vec::new();
        for dbar in lo..=hi {
            let p = ExtProblem::new(ConfAlgebra::Vir, module(dbar), module(delta))
                .map_err(|e| e.to_string())?
                .with_probe(false);
            row.push(solve_ext(&p).map_err(|e| e.to_string())?.ext_dim);
        }
        grid.push(row);
    }
    Ok(json!({"alpha": alpha.to_string(), "weights": (lo..=hi).collect::<Vec<_>>(), "grid": grid}))
}

pub fn classify_json(a: usize, b: usize) -> Result<Value, String> {
    if a < 3 || a > b {
        return Err(format!("degrees {a}..{b}: need 3 <= a <= b"));
    }
    let mut out = Vec::new();
    for n in a..=b {
        let c = classify_vir_parametric(n).map_err(|e| e.to_string())?;
        out.push(json!({
            "degree": n,
            "identically_satisfiable": c.identically_satisfiable,
            "condition": c.condition_primitive().to_string(),
            "roots": c.roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        }));
    }
    Ok(Value::Array(out))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn ext(alg: &str, sub: &str, quot: &str) -> Result<String, JsValue> {
    to_js(ext_json(alg, sub, quot))
}

#[wasm_bindgen]
pub fn grid(alpha: &str, lo: i32, hi: i32) -> Result<String, JsValue> {
    to_js(vir_grid(alpha, lo.into(), hi.into()))
}

#[wasm_bindgen]
pub fn classify(a: u32, b: u32) -> Result<String, JsValue> {
    to_js(classify_json(a as usize, b as usize))
}
