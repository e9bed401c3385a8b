//! The closed registry of every system, map, first integral and
//! particular solution the toolkit knows about.
//!
//! Everything lives over one shared [`SymbolTable`], so any expression
//! from any model can be combined with any other. Where a printed formula
//! is suspect, both the printed and the corrected form are registered
//! and the verifier decides which one satisfies the identities.

mod registry;
mod serial;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symcore::{Bindings, Symbol, SymbolTable};
use crate::weyl::ParameterAction;
use crate::{QDerivation, QExpr, QRelation, Rational};

pub use registry::build_registry;
pub use serial::{dump_models, parse_models, to_docs, ModelDoc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown {kind} `{id}`")]
    Unknown { kind: &'static str, id: String },
    #[error("map `{0}` has no disputed coefficient, so there is no `corrected` variant")]
    NoCorrectedVariant(String),
    #[error("malformed model document: {0}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Printed,
    Corrected,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Printed => "printed",
            Variant::Corrected => "corrected",
        })
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "printed" => Ok(Variant::Printed),
            "corrected" => Ok(Variant::Corrected),
            other => Err(format!("unknown variant `{other}`")),
        }
    }
}

/// Hamiltonian attached to a system, with the canonical pairing
/// `dq/du = +dH/dp`, `dp/du = -dH/dq`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    pub h: QExpr,
    /// `(coordinate, momentum)` pairs.
    pub pairs: Vec<(Symbol, Symbol)>,
    /// Named printed pieces whose sum must equal `h` (e.g. K1, K2, coupling).
    pub parts: Vec<(String, QExpr)>,
    /// The fully expanded printed form, when the source gives one.
    pub expanded: Option<QExpr>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorFieldSystem {
    pub id: String,
    pub state: Vec<Symbol>,
    pub indep: Symbol,
    pub params: Vec<Symbol>,
    pub constants: Vec<Symbol>,
    pub rhs: Vec<QExpr>,
    pub relation: Option<QRelation>,
    pub hamiltonian: Option<Hamiltonian>,
}

impl VectorFieldSystem {
    pub fn dim(&self) -> usize {
        self.state.len()
    }

    pub fn position(&self, s: Symbol) -> Option<usize> {
        self.state.iter().position(|&v| v == s)
    }

    pub fn rhs_of(&self, s: Symbol) -> Option<&QExpr> {
        self.position(s).map(|i| &self.rhs[i])
    }

    /// `d/d(indep)` along the flow: state symbols map to their rhs and the
    /// independent variable to 1.
    pub fn derivation(&self) -> QDerivation {
        let mut d = QDerivation::new().with(self.indep, QExpr::one());
        for (s, f) in self.state.iter().zip(&self.rhs) {
            d.set(*s, f.clone());
        }
        d
    }

    /// The rhs with parameters, `eta` and the independent variable replaced
    /// (simultaneously) by the given expressions.
    pub fn rhs_with(&self, bindings: &Bindings<Rational>) -> Result<Vec<QExpr>, crate::symcore::SymError> {
        self.rhs.iter().map(|f| f.substitute(bindings)).collect()
    }

    /// Builds Hamilton's equations `dq = dH/dp`, `dp = -dH/dq` for the
    /// given pairs; state order is `q1, p1, q2, p2, ...`.
    pub fn from_hamiltonian(
        id: &str,
        h: QExpr,
        pairs: Vec<(Symbol, Symbol)>,
        indep: Symbol,
        params: Vec<Symbol>,
        constants: Vec<Symbol>,
        relation: Option<QRelation>,
    ) -> Self {
        let mut state = Vec::new();
        let mut rhs = Vec::new();
        for &(q, p) in &pairs {
            state.push(q);
            rhs.push(h.partial(p));
            state.push(p);
            rhs.push(-h.partial(q));
        }
        VectorFieldSystem {
            id: id.to_string(),
            state,
            indep,
            params,
            constants,
            rhs,
            relation,
            hamiltonian: Some(Hamiltonian { h, pairs, parts: Vec::new(), expanded: None }),
        }
    }
}

/// How a map acts on the independent variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clock {
    /// `u' = indep_sign * u`, the sign being carried by the parameter action.
    Linear,
    /// `s = exp(-t)`; the new independent variable is a generator of the old one.
    ExpNeg,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BirationalMap {
    pub id: String,
    pub variant: Variant,
    /// System the map is applied to.
    pub source: String,
    /// System the image satisfies (with transformed parameters).
    pub target: String,
    /// `(target symbol, formula in source symbols)`, one per target state symbol.
    pub var_map: Vec<(Symbol, QExpr)>,
    pub action: ParameterAction,
    pub clock: Clock,
}

impl BirationalMap {
    pub fn eta_sign(&self) -> i8 {
        self.action.eta_sign
    }

    pub fn indep_sign(&self) -> i8 {
        self.action.indep_sign
    }

    pub fn component(&self, s: Symbol) -> Option<&QExpr> {
        self.var_map.iter().find(|(t, _)| *t == s).map(|(_, e)| e)
    }

    pub fn formulas(&self) -> Vec<QExpr> {
        self.var_map.iter().map(|(_, e)| e.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstIntegral {
    pub id: String,
    pub expr: QExpr,
    /// Eigenvalue in `D(expr) = lambda * expr`.
    pub lambda: Rational,
    pub system_id: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolutionKind {
    /// Closed-form bindings for every state symbol, in a ring extended by
    /// exponential generators.
    Closed { bindings: Vec<(Symbol, QExpr)>, generator_rules: Vec<(Symbol, QExpr)> },
    /// Zero some state symbols and fix some parameters in `source`; the
    /// surviving components must reproduce `system_id` and the zeroed
    /// components must stay zero.
    Restriction { source: String, zeroed: Vec<Symbol>, param_values: Vec<(Symbol, QExpr)> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParticularSolution {
    pub id: String,
    pub system_id: String,
    pub kind: SolutionKind,
}

/// Maps with a disputed printed coefficient.
pub const DISPUTED_MAPS: [&str; 3] = ["s2_5d", "chart2", "s2_4d"];

pub const SYSTEM_IDS: [&str; 10] = [
    "five_dim",
    "reduced_alpha1_zero",
    "linear_xz",
    "xzw",
    "second_order_x",
    "ham_4d",
    "K1_sys",
    "K2_sys",
    "tildeK2_sys",
    "coupled_second_order",
];

pub const MAP_IDS: [&str; 12] = [
    "s0_5d",
    "s1_5d",
    "s2_5d",
    "chart0",
    "chart1",
    "chart2",
    "s0_4d",
    "s1_4d",
    "s2_4d",
    "pi_4d",
    "reduce_5d_4d",
    "scale_step",
];

pub const INTEGRAL_IDS: [&str; 3] = ["ywq", "I1", "I2"];

pub const SOLUTION_IDS: [&str; 4] = ["linear_xz_sol", "second_order_sol_a", "second_order_sol_b", "rest_wq_zero"];

#[derive(Clone, Debug)]
pub struct Registry {
    pub table: SymbolTable,
    pub systems: Vec<VectorFieldSystem>,
    pub maps: Vec<BirationalMap>,
    pub integrals: Vec<FirstIntegral>,
    pub solutions: Vec<ParticularSolution>,
}

impl Registry {
    pub fn sym(&self, name: &str) -> Symbol {
        self.table.sym(name)
    }

    pub fn system(&self, id: &str) -> Result<&VectorFieldSystem, ModelError> {
        self.systems
            .iter()
            .find(|s| s.id == id)
            .ok_or_else(|| ModelError::Unknown { kind: "system", id: id.to_string() })
    }

    pub fn map(&self, id: &str, variant: Variant) -> Result<&BirationalMap, ModelError> {
        if !self.maps.iter().any(|m| m.id == id) {
            return Err(ModelError::Unknown { kind: "map", id: id.to_string() });
        }
        self.maps
            .iter()
            .find(|m| m.id == id && m.variant == variant)
            .ok_or_else(|| ModelError::NoCorrectedVariant(id.to_string()))
    }

    /// Variants registered for `id`: both for disputed maps, printed otherwise.
    pub fn variants(&self, id: &str) -> Vec<Variant> {
        self.maps.iter().filter(|m| m.id == id).map(|m| m.variant).collect()
    }

    pub fn is_disputed(&self, id: &str) -> bool {
        self.variants(id).len() > 1
    }

    pub fn integral(&self, id: &str) -> Result<&FirstIntegral, ModelError> {
        self.integrals
            .iter()
            .find(|s| s.id == id)
            .ok_or_else(|| ModelError::Unknown { kind: "integral", id: id.to_string() })
    }

    pub fn solution(&self, id: &str) -> Result<&ParticularSolution, ModelError> {
        self.solutions
            .iter()
            .find(|s| s.id == id)
            .ok_or_else(|| ModelError::Unknown { kind: "particular solution", id: id.to_string() })
    }

    pub fn relation(&self) -> QRelation {
        let ps = [self.sym("alpha0"), self.sym("alpha1"), self.sym("alpha2")];
        QRelation::unit_sum(&ps, 1)
    }

    pub fn alphas(&self) -> [Symbol; 3] {
        [self.sym("alpha0"), self.sym("alpha1"), self.sym("alpha2")]
    }
}

static REGISTRY: OnceLock<Registry> = OnceLock::new();

/// The process-wide registry, built on first use.
pub fn registry() -> &'static Registry {
    REGISTRY.get_or_init(build_registry)
}

pub fn load_model(id: &str) -> Result<&'static VectorFieldSystem, ModelError> {
    registry().system(id)
}

pub fn load_map(id: &str, variant: Variant) -> Result<&'static BirationalMap, ModelError> {
    registry().map(id, variant)
}

pub fn load_integral(id: &str) -> Result<&'static FirstIntegral, ModelError> {
    registry().integral(id)
}

pub fn load_particular_solution(id: &str) -> Result<&'static ParticularSolution, ModelError> {
    registry().solution(id)
}
