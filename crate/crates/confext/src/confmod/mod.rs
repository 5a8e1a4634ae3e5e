//! Conformal algebras, their finite irreducible modules, and the reduction of an
//! extension problem to linear algebra: an action ansatz with unknown
//! coefficients, the bracket-compatibility identities it must satisfy, and the
//! coboundaries coming from changes of splitting.

mod engine;
mod parse;

pub use engine::{
    build_ansatz, build_constraints, coboundary_generators, known_action, ActionAnsatz, ActionTable,
    CoboundarySpace, Cocycle, Slot, SlotKind,
};
pub use parse::{parse_algebra, parse_descriptor, parse_problem_json, LieContext};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exactnum::{ArithError, Scalar};
use crate::liealg::{LieAlgebra, LieError, Representation};
use crate::multipoly::{MPoly, PolyError, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfError {
    #[error("module {module} is not a module over {algebra}")]
    Mismatch { module: String, algebra: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConfAlgebra {
    Vir,
    Cur(Arc<LieAlgebra>),
    VirCur(Arc<LieAlgebra>),
    VirAb,
}

impl ConfAlgebra {
    pub fn name(&self) -> String {
        match self {
            ConfAlgebra::Vir => "vir".into(),
            ConfAlgebra::Cur(g) => format!("cur:{}", g.name),
            ConfAlgebra::VirCur(g) => format!("vircur:{}", g.name),
            ConfAlgebra::VirAb => "virab".into(),
        }
    }

    pub fn lie(&self) -> Option<&Arc<LieAlgebra>> {
        match self {
            ConfAlgebra::Cur(g) | ConfAlgebra::VirCur(g) => Some(g),
            _ => None,
        }
    }

    pub fn has_virasoro(&self) -> bool {
        !matches!(self, ConfAlgebra::Cur(_))
    }

    /// Generator names; `L` first when present.
    pub fn generators(&self) -> Vec<String> {
        match self {
            ConfAlgebra::Vir => vec!["L".into()],
            ConfAlgebra::Cur(g) => g.basis.clone(),
            ConfAlgebra::VirCur(g) => std::iter::once("L".to_string()).chain(g.basis.iter().cloned()).collect(),
            ConfAlgebra::VirAb => vec!["L".into(), "a".into()],
        }
    }

    /// `[g_λ h] = Σ B_k(∂,λ)·x_k` with `B_k` in D and L.
    pub fn bracket(&self, g: usize, h: usize) -> Vec<(usize, MPoly)> {
        let d = || MPoly::var(Var::D);
        let l = || MPoly::var(Var::L);
        let vir = self.has_virasoro();
        match (vir, g, h) {
            (true, 0, 0) => vec![(0, d().add(&l().scale(&Scalar::int(2))))],
            (true, 0, h) => vec![(h, d().add(&l()))],
            (true, g, 0) => vec![(g, l())],
            _ => match self {
                ConfAlgebra::VirAb => vec![],
                _ => {
                    let lie = self.lie().expect("current part");
                    let off = usize::from(vir);
                    lie.bracket(g - off, h - off)
                        .iter()
                        .map(|(k, c)| (k + off, MPoly::constant(c.clone())))
                        .collect()
                }
            },
        }
    }
}

impl fmt::Display for ConfAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// How a module generator sits over ℂ[∂].
#[derive(Clone, Debug, PartialEq)]
pub enum GenKind {
    Free,
    /// `∂c = β·c`
    Torsion(Scalar),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModuleDescriptor {
    OneDim { beta: Scalar },
    VirMod { alpha: Scalar, delta: Scalar },
    CurMod { rep: Representation },
    VirCurMod { alpha: Scalar, delta: Scalar, rep: Representation },
    VirAbMod { alpha: Scalar, delta: Scalar, k: Scalar },
}

impl ModuleDescriptor {
    pub fn gen_kinds(&self) -> Vec<GenKind> {
        match self {
            ModuleDescriptor::OneDim { beta } => vec![GenKind::Torsion(beta.clone())],
            ModuleDescriptor::CurMod { rep } | ModuleDescriptor::VirCurMod { rep, .. } => vec![GenKind::Free; rep.dim()],
            _ => vec![GenKind::Free],
        }
    }

    pub fn rank(&self) -> usize {
        self.gen_kinds().len()
    }

    /// Short generator names, suffixed with `tag` to tell the two sides apart.
    pub fn gen_names(&self, tag: &str) -> Vec<String> {
        match self {
            ModuleDescriptor::OneDim { .. } => vec![format!("c{tag}")],
            ModuleDescriptor::CurMod { rep } | ModuleDescriptor::VirCurMod { rep, .. } => {
                (0..rep.dim()).map(|i| format!("u{tag}{i}")).collect()
            }
            _ => vec![format!("v{tag}")],
        }
    }

    pub fn fits(&self, alg: &ConfAlgebra) -> bool {
        let same = |rep: &Representation, g: &Arc<LieAlgebra>| rep.algebra.as_ref() == g.as_ref();
        match (self, alg) {
            (ModuleDescriptor::OneDim { .. }, _) => true,
            (ModuleDescriptor::VirMod { .. }, ConfAlgebra::Vir) => true,
            (ModuleDescriptor::CurMod { rep }, ConfAlgebra::Cur(g)) => same(rep, g),
            (ModuleDescriptor::VirCurMod { rep, .. }, ConfAlgebra::VirCur(g)) => same(rep, g),
            (ModuleDescriptor::VirAbMod { .. }, ConfAlgebra::VirAb) => true,
            _ => false,
        }
    }

    /// Non-`None` when the module is reducible; computation still proceeds.
    pub fn irreducibility_warning(&self) -> Option<String> {
        match self {
            ModuleDescriptor::VirMod { delta, .. } if delta.is_zero() => Some(format!("{self}: conformal weight 0 is reducible")),
            ModuleDescriptor::CurMod { rep } if rep.is_trivial() => Some(format!("{self}: trivial representation is reducible")),
            ModuleDescriptor::VirCurMod { delta, rep, .. } if delta.is_zero() && rep.is_trivial() => {
                Some(format!("{self}: weight 0 with trivial representation is reducible"))
            }
            ModuleDescriptor::VirAbMod { delta, k, .. } if delta.is_zero() && k.is_zero() => {
                Some(format!("{self}: (weight, k) = (0, 0) is reducible"))
            }
            _ => None,
        }
    }

    fn scalars(&self) -> Vec<&Scalar> {
        match self {
            ModuleDescriptor::OneDim { beta } => vec![beta],
            ModuleDescriptor::CurMod { .. } => vec![],
            ModuleDescriptor::VirMod { alpha, delta } | ModuleDescriptor::VirCurMod { alpha, delta, .. } => vec![alpha, delta],
            ModuleDescriptor::VirAbMod { alpha, delta, k } => vec![alpha, delta, k],
        }
    }

    /// Same module after the substitution ∂ ↦ ∂ + c.
    pub fn shifted(&self, c: &Scalar) -> ModuleDescriptor {
        let mut m = self.clone();
        match &mut m {
            ModuleDescriptor::OneDim { beta } => *beta = &*beta - c,
            ModuleDescriptor::VirMod { alpha, .. }
            | ModuleDescriptor::VirCurMod { alpha, .. }
            | ModuleDescriptor::VirAbMod { alpha, .. } => *alpha = &*alpha + c,
            ModuleDescriptor::CurMod { .. } => {}
        }
        m
    }
}

impl fmt::Display for ModuleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleDescriptor::OneDim { beta } => write!(f, "C({beta})"),
            ModuleDescriptor::VirMod { alpha, delta } => write!(f, "M({alpha},{delta})"),
            ModuleDescriptor::CurMod { rep } => write!(f, "M({})", rep.name),
            ModuleDescriptor::VirCurMod { alpha, delta, rep } => write!(f, "M({alpha},{delta},{})", rep.name),
            ModuleDescriptor::VirAbMod { alpha, delta, k } => write!(f, "M({alpha},{delta},k={k})"),
        }
    }
}

/// The fixed catalog of extension shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Scenario {
    /// Vir: one-dimensional sub, M(α,Δ) quotient.
    S1,
    /// Vir: M(α,Δ) sub, one-dimensional quotient.
    S2,
    /// Current: one-dimensional sub, M(U) quotient.
    S3,
    /// Current: M(U) sub, one-dimensional quotient.
    S4,
    /// Semidirect: one-dimensional sub, M(α,Δ,U) quotient.
    S5,
    /// Semidirect: M(α,Δ,U) sub, one-dimensional quotient.
    S6,
    /// Vir: both of rank one.
    S7,
    /// Current: both free.
    S8,
    /// Semidirect: both free.
    S9,
    /// Vir plus abelian current, any pair.
    S10,
    /// Both modules one-dimensional.
    OneDimPair,
}

impl Scenario {
    pub fn label(self) -> &'static str {
        match self {
            Scenario::S1 => "S1",
            Scenario::S2 => "S2",
            Scenario::S3 => "S3",
            Scenario::S4 => "S4",
            Scenario::S5 => "S5",
            Scenario::S6 => "S6",
            Scenario::S7 => "S7",
            Scenario::S8 => "S8",
            Scenario::S9 => "S9",
            Scenario::S10 => "S10",
            Scenario::OneDimPair => "one-dim-pair",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtProblem {
    pub algebra: ConfAlgebra,
    /// The submodule V.
    pub sub: ModuleDescriptor,
    /// The quotient W.
    pub quot: ModuleDescriptor,
    /// Maximum ∂-degree and λ-degree of correction terms.
    pub bounds: (u16, u16),
    /// Re-solve one degree higher and flag growth as an unbounded family.
    pub probe_saturation: bool,
}

impl ExtProblem {
    pub fn new(algebra: ConfAlgebra, sub: ModuleDescriptor, quot: ModuleDescriptor) -> Result<Self, ConfError> {
        for m in [&sub, &quot] {
            if !m.fits(&algebra) {
                return Err(ConfError::Mismatch { module: m.to_string(), algebra: algebra.name() });
            }
        }
        let bounds = default_bounds(&algebra);
        let p = ExtProblem { algebra, sub, quot, bounds, probe_saturation: true };
        p.field_tag()?;
        Ok(p)
    }

    pub fn with_bounds(mut self, dpart: u16, dlam: u16) -> Self {
        self.bounds = (dpart, dlam);
        self
    }

    pub fn with_probe(mut self, probe: bool) -> Self {
        self.probe_saturation = probe;
        self
    }

    /// The single quadratic field all parameters live in (0 for ℚ).
    pub fn field_tag(&self) -> Result<u64, ArithError> {
        let mut tag = 0;
        for s in self.sub.scalars().into_iter().chain(self.quot.scalars()) {
            match (tag, s.ext()) {
                (_, 0) => {}
                (0, d) => tag = d,
                (t, d) if t == d => {}
                (t, d) => return Err(ArithError::MixedExtension(t, d)),
            }
        }
        Ok(tag)
    }

    pub fn scenario(&self) -> Scenario {
        use ModuleDescriptor::OneDim;
        let (s1, q1) = (matches!(self.sub, OneDim { .. }), matches!(self.quot, OneDim { .. }));
        if s1 && q1 {
            return Scenario::OneDimPair;
        }
        match (&self.algebra, s1, q1) {
            (ConfAlgebra::Vir, true, _) => Scenario::S1,
            (ConfAlgebra::Vir, _, true) => Scenario::S2,
            (ConfAlgebra::Vir, _, _) => Scenario::S7,
            (ConfAlgebra::Cur(_), true, _) => Scenario::S3,
            (ConfAlgebra::Cur(_), _, true) => Scenario::S4,
            (ConfAlgebra::Cur(_), _, _) => Scenario::S8,
            (ConfAlgebra::VirCur(_), true, _) => Scenario::S5,
            (ConfAlgebra::VirCur(_), _, true) => Scenario::S6,
            (ConfAlgebra::VirCur(_), _, _) => Scenario::S9,
            (ConfAlgebra::VirAb, _, _) => Scenario::S10,
        }
    }

    /// Problem after ∂ ↦ ∂ + c on both modules.
    pub fn shifted(&self, c: &Scalar) -> ExtProblem {
        ExtProblem { sub: self.sub.shifted(c), quot: self.quot.shifted(c), ..self.clone() }
    }

    pub fn warnings(&self) -> Vec<String> {
        [&self.sub, &self.quot].iter().filter_map(|m| m.irreducibility_warning()).collect()
    }
}

/// Degree bounds used when none are given.
pub fn default_bounds(alg: &ConfAlgebra) -> (u16, u16) {
    match alg {
        ConfAlgebra::Vir | ConfAlgebra::VirAb => (8, 8),
        ConfAlgebra::Cur(g) | ConfAlgebra::VirCur(g) if g.dim() <= 3 => (4, 4),
        _ => (3, 3),
    }
}
