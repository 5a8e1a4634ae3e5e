use std::fmt::{self, Write as _};

use confext::confmod::{parse_algebra, parse_descriptor, parse_problem_json, ConfError, ExtProblem};
use confext::exactnum::{Rational, Scalar};
use confext::extsolver::tables::{section_table, SectionTable, Status, Witness, SECTIONS};
use confext::extsolver::{classify_vir_parametric, solve_ext, ConditionPolys, SolveError};
use confext::modeoracle::{expand_modes, mutation_suite, verify_brackets, Failure as BracketFailure, ModeWindow};
use serde_json::{json, Value};

use crate::{ExtArgs, Format};

/// Mutants drawn per cocycle by `oracle --mutate`.
const MUTANTS_PER_COCYCLE: usize = 12;
/// Minimum share of caught mutants, in percent. Guard-band skips can hide a few.
const MUTANT_THRESHOLD: usize = 95;

pub struct Report {
    pub out: String,
    /// False on a verification failure (exit 1).
    pub ok: bool,
}

impl Report {
    fn ok(out: String) -> Self {
        Report { out, ok: true }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Arith(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Arith(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Arith(m) => write!(f, "arithmetic error: {m}"),
        }
    }
}

impl From<ConfError> for Failure {
    fn from(e: ConfError) -> Self {
        match e {
            ConfError::Arith(_) | ConfError::Poly(_) => Failure::Arith(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Conf(c) => c.into(),
            SolveError::OutOfRange(_) => Failure::Usage(e.to_string()),
            _ => Failure::Arith(e.to_string()),
        }
    }
}

fn csv_out(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn pretty(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("json"))
}

fn build_problem(a: &ExtArgs) -> Result<ExtProblem, Failure> {
    let mut p = match &a.file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            parse_problem_json(&text)?
        }
        None => {
            let (alg, ctx) = parse_algebra(a.alg.as_deref().unwrap_or_default())?;
            let sub = parse_descriptor(a.sub.as_deref().unwrap_or_default(), &alg, ctx.as_ref())?;
            let quot = parse_descriptor(a.quot.as_deref().unwrap_or_default(), &alg, ctx.as_ref())?;
            ExtProblem::new(alg, sub, quot)?
        }
    };
    if a.dpart.is_some() || a.dlam.is_some() {
        let (d, l) = p.bounds;
        p = p.with_bounds(a.dpart.unwrap_or(d), a.dlam.unwrap_or(l));
    }
    Ok(p.with_probe(!a.no_probe))
}

pub fn ext(a: &ExtArgs, fmt: Format) -> Result<Report, Failure> {
    let p = build_problem(a)?;
    let r = solve_ext(&p)?;
    let basis = r.rendered_basis();
    let out = match fmt {
        Format::Json => pretty(&r.to_json()),
        Format::Csv => csv_out(
            &["class", "generator", "poly"],
            basis
                .iter()
                .enumerate()
                .flat_map(|(i, parts)| parts.iter().map(move |(g, f)| vec![i.to_string(), g.clone(), f.to_string()])),
        ),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "scenario  {}", r.scenario.label()).unwrap();
            writeln!(s, "algebra   {}", p.algebra.name()).unwrap();
            writeln!(s, "sub       {}", p.sub).unwrap();
            writeln!(s, "quot      {}", p.quot).unwrap();
            writeln!(s, "bounds    dpart={} dlam={}", p.bounds.0, p.bounds.1).unwrap();
            writeln!(s, "ext_dim   {}", r.ext_dim).unwrap();
            for (i, parts) in basis.iter().enumerate() {
                for (g, f) in parts {
                    writeln!(s, "  [{i}] {g}: {f}").unwrap();
                }
            }
            for c in &r.certificates {
                writeln!(s, "  certificate {} = {}", c.label, c.value).unwrap();
            }
            if r.flags.unbounded_family {
                writeln!(s, "flag      unbounded polynomial family (basis truncated at the bounds)").unwrap();
            }
            for w in &r.warnings {
                writeln!(s, "warning   {w}").unwrap();
            }
            s
        }
    };
    Ok(Report::ok(out))
}

fn degree_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("--degrees expects a..b with 3 <= a <= b, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a < 3 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn set(xs: &[Scalar]) -> String {
    format!("{{{}}}", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// `(Δ, Δ̄)` pairs carried by the degree-`n` roots.
fn pairs(n: usize, roots: &[Scalar]) -> String {
    let gap = Scalar::int(n as i64 - 1);
    let v: Vec<String> = roots.iter().map(|r| format!("({},{})", r + &gap, r)).collect();
    v.join(" ")
}

pub fn classify(degrees: &str, sqrt: Option<u64>, fmt: Format) -> Result<Report, Failure> {
    let (a, b) = degree_range(degrees)?;
    let field = match sqrt {
        Some(0) => return Err(Failure::Usage("--sqrt expects a positive integer".into())),
        Some(d) => Some(Scalar::quadratic(Rational::zero(), Rational::one(), d).ext()),
        None => None,
    };
    let keep = |x: &Scalar| field.map_or(true, |d| x.ext() == 0 || x.ext() == d);
    let results: Vec<(usize, ConditionPolys, Vec<Scalar>)> = (a..=b)
        .map(|n| {
            let c = classify_vir_parametric(n)?;
            let roots: Vec<Scalar> = c.roots.iter().filter(|x| keep(x)).cloned().collect();
            Ok((n, c, roots))
        })
        .collect::<Result<_, SolveError>>()?;
    let verdict = |c: &ConditionPolys, roots: &[Scalar]| {
        if c.identically_satisfiable {
            "every".to_string()
        } else if roots.is_empty() {
            "none".to_string()
        } else {
            set(roots)
        }
    };
    let out = match fmt {
        Format::Json => pretty(&Value::Array(
            results
                .iter()
                .map(|(n, c, roots)| {
                    json!({
                        "degree": n,
                        "equations": c.equations,
                        "minors_vanish": c.minors_vanish,
                        "condition": c.condition_primitive().to_string(),
                        "identically_satisfiable": c.identically_satisfiable,
                        "roots": roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                        "rejected": c.rejected.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                        "residual": c.residual.to_string(),
                    })
                })
                .collect(),
        )),
        Format::Csv => csv_out(
            &["degree", "condition", "identically_satisfiable", "roots", "residual"],
            results.iter().map(|(n, c, roots)| {
                vec![
                    n.to_string(),
                    c.condition_primitive().to_string(),
                    c.identically_satisfiable.to_string(),
                    roots.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(";"),
                    c.residual.to_string(),
                ]
            }),
        ),
        Format::Text => {
            let mut s = String::new();
            for (n, c, roots) in &results {
                if c.identically_satisfiable {
                    writeln!(s, "degree {n}: identically satisfiable (every Δ̄)").unwrap();
                    continue;
                }
                writeln!(s, "degree {n}: condition {}", c.condition_primitive()).unwrap();
                writeln!(s, "  roots {}", set(roots)).unwrap();
                if !roots.is_empty() {
                    writeln!(s, "  pairs (Δ,Δ̄) {}", pairs(*n, roots)).unwrap();
                }
                if !c.rejected.is_empty() {
                    writeln!(s, "  rejected {}", set(&c.rejected)).unwrap();
                }
                if c.residual.degree().unwrap_or(0) > 0 {
                    writeln!(s, "  unfactored {}", c.residual).unwrap();
                }
            }
            let summary: Vec<String> = results.iter().map(|(n, c, r)| format!("{n}:{}", verdict(c, r))).collect();
            writeln!(s, "summary {}", summary.join(" ")).unwrap();
            s
        }
    };
    Ok(Report::ok(out))
}

fn table_text(section: u8, t: &SectionTable) -> String {
    let header = ["label", "sub", "quot", "expected", "computed", "status"];
    let rows: Vec<[String; 6]> = t
        .rows
        .iter()
        .map(|r| [r.label.clone(), r.sub.clone(), r.quot.clone(), r.expected.clone(), r.computed.clone(), r.status.label().into()])
        .collect();
    let mut width = header.map(str::len);
    for r in &rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let v: Vec<String> = cells.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{}\n", v.join("  ").trim_end())
    };
    let mut s = format!("section {section}\n");
    s += &line(&header.map(String::from));
    for r in &rows {
        s += &line(r);
    }
    for r in t.rows.iter().filter(|r| !r.note.is_empty()) {
        writeln!(s, "note [{}]: {}", r.label, r.note).unwrap();
    }
    writeln!(
        s,
        "{} rows: {} PASS, {} REPORTED, {} FAIL",
        t.rows.len(),
        t.count(Status::Pass),
        t.count(Status::Reported),
        t.count(Status::Fail)
    )
    .unwrap();
    s
}

pub fn table(section: u8, fmt: Format) -> Result<Report, Failure> {
    let t = section_table(section)?;
    let out = match fmt {
        Format::Json => pretty(&json!({
            "section": section,
            "rows": t.rows,
            "pass": t.count(Status::Pass),
            "reported": t.count(Status::Reported),
            "fail": t.count(Status::Fail),
        })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &t.rows {
                w.serialize(r).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Text => table_text(section, &t),
    };
    Ok(Report { out, ok: t.passed() })
}

struct OracleLine {
    label: String,
    cocycles: usize,
    checked: usize,
    skipped: usize,
    failed: Vec<BracketFailure>,
    mutants: usize,
    caught: usize,
    unexercised: usize,
}

fn oracle_line(w: &Witness, win: &ModeWindow, mutate: bool) -> OracleLine {
    let mut l = OracleLine {
        label: format!("{} [{} / {} over {}]", w.label, w.problem.sub, w.problem.quot, w.problem.algebra.name()),
        cocycles: w.cocycles.len(),
        checked: 0,
        skipped: 0,
        failed: Vec::new(),
        mutants: 0,
        caught: 0,
        unexercised: 0,
    };
    for c in &w.cocycles {
        let ma = expand_modes(&w.problem, c, *win);
        let r = verify_brackets(&ma, win);
        l.checked += r.checked;
        l.skipped += r.skipped;
        l.failed.extend(r.failed);
        if mutate {
            let m = mutation_suite(&ma, win, MUTANTS_PER_COCYCLE);
            l.mutants += m.mutants;
            l.caught += m.caught;
            l.unexercised += m.unexercised;
        }
    }
    l
}

fn all_witnesses() -> Result<Vec<Witness>, Failure> {
    let mut out = Vec::new();
    for s in SECTIONS {
        out.extend(section_table(s)?.witnesses);
    }
    Ok(out)
}

pub fn oracle(window: i64, guard: i64, mutate: bool, fmt: Format) -> Result<Report, Failure> {
    let win = ModeWindow::new(window, window, guard);
    let lines: Vec<OracleLine> = all_witnesses()?.iter().map(|w| oracle_line(w, &win, mutate)).collect();
    let sum = |f: fn(&OracleLine) -> usize| lines.iter().map(f).sum::<usize>();
    let failed: Vec<&BracketFailure> = lines.iter().flat_map(|l| &l.failed).collect();
    let ok = failed.is_empty() && sum(|l| l.caught) * 100 >= sum(|l| l.mutants) * MUTANT_THRESHOLD;
    let out = match fmt {
        Format::Json => {
            let mut v = json!({
                "window": window,
                "guard": guard,
                "cocycles": sum(|l| l.cocycles),
                "checked": sum(|l| l.checked),
                "skipped": sum(|l| l.skipped),
                "failed": failed,
            });
            if mutate {
                v["mutants"] = json!(sum(|l| l.mutants));
                v["caught"] = json!(sum(|l| l.caught));
                v["unexercised"] = json!(sum(|l| l.unexercised));
            }
            pretty(&v)
        }
        Format::Csv => csv_out(
            &["witness", "cocycles", "checked", "skipped", "failed", "mutants", "caught", "unexercised"],
            lines.iter().map(|l| {
                vec![
                    l.label.clone(),
                    l.cocycles.to_string(),
                    l.checked.to_string(),
                    l.skipped.to_string(),
                    l.failed.len().to_string(),
                    l.mutants.to_string(),
                    l.caught.to_string(),
                    l.unexercised.to_string(),
                ]
            }),
        ),
        Format::Text => {
            let mut s = String::new();
            for l in &lines {
                write!(s, "{}: {} checked, {} skipped, {} failed", l.label, l.checked, l.skipped, l.failed.len()).unwrap();
                if mutate {
                    write!(s, ", mutants {}/{} caught", l.caught, l.mutants).unwrap();
                }
                s.push('\n');
                for f in &l.failed {
                    writeln!(s, "  {f}").unwrap();
                }
            }
            write!(
                s,
                "window {window} guard {guard}: {} cocycles, checked {}, skipped {}, failed {}",
                sum(|l| l.cocycles),
                sum(|l| l.checked),
                sum(|l| l.skipped),
                failed.len()
            )
            .unwrap();
            if mutate {
                write!(
                    s,
                    ", mutants {} caught {} unexercised {}",
                    sum(|l| l.mutants),
                    sum(|l| l.caught),
                    sum(|l| l.unexercised)
                )
                .unwrap();
            }
            s.push('\n');
            s
        }
    };
    Ok(Report { out, ok })
}

pub fn selftest(fmt: Format) -> Result<Report, Failure> {
    let mut checks: Vec<(String, bool)> = Vec::new();
    for (alg, sub, quot, want) in [
        ("vir", "M(0,0)", "M(0,1)", 3),
        ("vir", "C(-1)", "M(1,2)", 1),
        ("cur:sl2", "M(V3)", "M(V1)", 2),
    ] {
        let a = ExtArgs {
            alg: Some(alg.into()),
            sub: Some(sub.into()),
            quot: Some(quot.into()),
            file: None,
            dpart: None,
            dlam: None,
            no_probe: true,
        };
        let got = solve_ext(&build_problem(&a)?)?.ext_dim;
        checks.push((format!("ext {alg} {sub} {quot} = {want} (got {got})"), got == want));
    }
    let c6 = classify_vir_parametric(6)?;
    checks.push((format!("degree 6 roots {}", set(&c6.roots)), c6.roots.len() == 2));
    let win = ModeWindow::new(4, 4, 6);
    for s in SECTIONS {
        let t = section_table(s)?;
        checks.push((format!("table {s}: {} rows, {} FAIL", t.rows.len(), t.count(Status::Fail)), t.passed()));
        let bad: usize = t.witnesses.iter().map(|w| oracle_line(w, &win, false).failed.len()).sum();
        checks.push((format!("oracle {s} at window 4: {bad} failed"), bad == 0));
    }
    let ok = checks.iter().all(|c| c.1);
    let label = |b: bool| if b { "PASS" } else { "FAIL" };
    let out = match fmt {
        Format::Json => pretty(&json!({
            "ok": ok,
            "checks": checks.iter().map(|(m, b)| json!({"check": m, "status": label(*b)})).collect::<Vec<_>>(),
        })),
        Format::Csv => csv_out(&["check", "status"], checks.iter().map(|(m, b)| vec![m.clone(), label(*b).into()])),
        Format::Text => checks.iter().map(|(m, b)| format!("{} {m}\n", label(*b))).collect(),
    };
    Ok(Report { out, ok })
}
