//! Human-readable model documents: one pretty JSON document per model,
//! expressions written in canonical infix.

use serde::{Deserialize, Serialize};

use super::{
    BirationalMap, Clock, FirstIntegral, Hamiltonian, ModelError, ParticularSolution, Registry, SolutionKind,
    Variant, VectorFieldSystem,
};
use crate::symcore::{parse_expr, parse_poly, Symbol, SymbolKind, SymbolTable};
use crate::weyl::ParameterAction;
use crate::{QExpr, QRelation, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolDoc {
    pub name: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub symbol: String,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub eliminated: String,
    pub replacement: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianDoc {
    pub h: String,
    pub pairs: Vec<[String; 2]>,
    pub parts: Vec<Component>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expanded: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemDoc {
    pub id: String,
    pub state: Vec<String>,
    pub indep: String,
    pub params: Vec<String>,
    pub constants: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<RelationDoc>,
    pub rhs: Vec<Component>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<HamiltonianDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapDoc {
    pub id: String,
    pub variant: Variant,
    pub source: String,
    pub target: String,
    pub components: Vec<Component>,
    pub action: ParameterAction,
    pub clock: Clock,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralDoc {
    pub id: String,
    pub system: String,
    pub expr: String,
    pub lambda: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum SolutionForm {
    Closed { bindings: Vec<Component>, generator_rules: Vec<Component> },
    Restriction { source: String, zeroed: Vec<String>, param_values: Vec<Component> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub id: String,
    pub system: String,
    #[serde(flatten)]
    pub form: SolutionForm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelDoc {
    SymbolTable { symbols: Vec<SymbolDoc> },
    System(SystemDoc),
    Map(MapDoc),
    Integral(IntegralDoc),
    Solution(SolutionDoc),
}

struct Writer<'a> {
    t: &'a SymbolTable,
}

impl Writer<'_> {
    fn name(&self, s: Symbol) -> String {
        self.t.name(s).to_string()
    }

    fn names(&self, ss: &[Symbol]) -> Vec<String> {
        ss.iter().map(|&s| self.name(s)).collect()
    }

    fn expr(&self, e: &QExpr) -> String {
        e.to_infix(self.t)
    }

    fn comps(&self, cs: &[(Symbol, QExpr)]) -> Vec<Component> {
        cs.iter().map(|(s, e)| Component { symbol: self.name(*s), expr: self.expr(e) }).collect()
    }

    fn system(&self, sys: &VectorFieldSystem) -> SystemDoc {
        let pairs: Vec<(Symbol, QExpr)> = sys.state.iter().copied().zip(sys.rhs.iter().cloned()).collect();
        SystemDoc {
            id: sys.id.clone(),
            state: self.names(&sys.state),
            indep: self.name(sys.indep),
            params: self.names(&sys.params),
            constants: self.names(&sys.constants),
            relation: sys.relation.as_ref().map(|r| RelationDoc {
                eliminated: self.name(r.eliminated),
                replacement: r.replacement.display(self.t).to_string(),
            }),
            rhs: self.comps(&pairs),
            hamiltonian: sys.hamiltonian.as_ref().map(|h| HamiltonianDoc {
                h: self.expr(&h.h),
                pairs: h.pairs.iter().map(|(q, p)| [self.name(*q), self.name(*p)]).collect(),
                parts: h.parts.iter().map(|(n, e)| Component { symbol: n.clone(), expr: self.expr(e) }).collect(),
                expanded: h.expanded.as_ref().map(|e| self.expr(e)),
            }),
        }
    }
}

pub fn to_docs(reg: &Registry) -> Vec<ModelDoc> {
    let w = Writer { t: &reg.table };
    let mut docs = vec![ModelDoc::SymbolTable {
        symbols: reg
            .table
            .symbols()
            .map(|s| {
                let kind = reg.table.kind(s);
                SymbolDoc {
                    name: w.name(s),
                    kind: kind.tag().to_string(),
                    rate: match kind {
                        SymbolKind::ExpGenerator { rate } => Some(w.expr(rate)),
                        _ => None,
                    },
                }
            })
            .collect(),
    }];
    docs.extend(reg.systems.iter().map(|s| ModelDoc::System(w.system(s))));
    docs.extend(reg.maps.iter().map(|m| {
        ModelDoc::Map(MapDoc {
            id: m.id.clone(),
            variant: m.variant,
            source: m.source.clone(),
            target: m.target.clone(),
            components: w.comps(&m.var_map),
            action: m.action,
            clock: m.clock,
        })
    }));
    docs.extend(reg.integrals.iter().map(|i| {
        ModelDoc::Integral(IntegralDoc {
            id: i.id.clone(),
            system: i.system_id.clone(),
            expr: w.expr(&i.expr),
            lambda: crate::scalar::fmt_rational(&i.lambda),
        })
    }));
    docs.extend(reg.solutions.iter().map(|s| {
        let form = match &s.kind {
            SolutionKind::Closed { bindings, generator_rules } => SolutionForm::Closed {
                bindings: w.comps(bindings),
                generator_rules: w.comps(generator_rules),
            },
            SolutionKind::Restriction { source, zeroed, param_values } => SolutionForm::Restriction {
                source: source.clone(),
                zeroed: w.names(zeroed),
                param_values: w.comps(param_values),
            },
        };
        ModelDoc::Solution(SolutionDoc { id: s.id.clone(), system: s.system_id.clone(), form })
    }));
    docs
}

/// Renders the registry as a stream of pretty JSON documents, separated
/// by blank lines.
pub fn dump_models(reg: &Registry) -> String {
    let mut out = String::new();
    for d in to_docs(reg) {
        out.push_str(&serde_json::to_string_pretty(&d).expect("model documents serialize"));
        out.push_str("\n\n");
    }
    out
}

struct Reader<'a> {
    t: &'a SymbolTable,
}

fn bad(msg: impl Into<String>) -> ModelError {
    ModelError::Malformed(msg.into())
}

impl Reader<'_> {
    fn sym(&self, n: &str) -> Result<Symbol, ModelError> {
        self.t.get(n).ok_or_else(|| bad(format!("unknown symbol `{n}`")))
    }

    fn syms(&self, ns: &[String]) -> Result<Vec<Symbol>, ModelError> {
        ns.iter().map(|n| self.sym(n)).collect()
    }

    fn expr(&self, src: &str) -> Result<QExpr, ModelError> {
        parse_expr(src, self.t).map_err(|e| bad(format!("`{src}`: {e}")))
    }

    fn comps(&self, cs: &[Component]) -> Result<Vec<(Symbol, QExpr)>, ModelError> {
        cs.iter().map(|c| Ok((self.sym(&c.symbol)?, self.expr(&c.expr)?))).collect()
    }

    fn system(&self, d: &SystemDoc) -> Result<VectorFieldSystem, ModelError> {
        let rhs = self.comps(&d.rhs)?;
        let state = self.syms(&d.state)?;
        if rhs.iter().map(|(s, _)| *s).collect::<Vec<_>>() != state {
            return Err(bad(format!("system `{}`: rhs order differs from state order", d.id)));
        }
        let relation = match &d.relation {
            Some(r) => Some(QRelation {
                eliminated: self.sym(&r.eliminated)?,
                replacement: parse_poly(&r.replacement, self.t).map_err(|e| bad(e.to_string()))?,
            }),
            None => None,
        };
        let hamiltonian = match &d.hamiltonian {
            Some(h) => Some(Hamiltonian {
                h: self.expr(&h.h)?,
                pairs: h.pairs.iter().map(|[q, p]| Ok((self.sym(q)?, self.sym(p)?))).collect::<Result<_, ModelError>>()?,
                parts: h.parts.iter().map(|c| Ok((c.symbol.clone(), self.expr(&c.expr)?))).collect::<Result<_, ModelError>>()?,
                expanded: h.expanded.as_deref().map(|e| self.expr(e)).transpose()?,
            }),
            None => None,
        };
        Ok(VectorFieldSystem {
            id: d.id.clone(),
            state,
            indep: self.sym(&d.indep)?,
            params: self.syms(&d.params)?,
            constants: self.syms(&d.constants)?,
            rhs: rhs.into_iter().map(|(_, e)| e).collect(),
            relation,
            hamiltonian,
        })
    }
}

fn kind_from_tag(tag: &str, rate: Option<QExpr>) -> Result<SymbolKind, ModelError> {
    Ok(match (tag, rate) {
        ("state", None) => SymbolKind::State,
        ("independent", None) => SymbolKind::Independent,
        ("parameter", None) => SymbolKind::Parameter,
        ("constant", None) => SymbolKind::Constant,
        ("exp-generator", Some(rate)) => SymbolKind::ExpGenerator { rate },
        (t, _) => return Err(bad(format!("bad symbol kind `{t}`"))),
    })
}

/// Parses a document stream produced by [`dump_models`].
pub fn parse_models(src: &str) -> Result<Registry, ModelError> {
    let docs: Vec<ModelDoc> = serde_json::Deserializer::from_str(src)
        .into_iter::<ModelDoc>()
        .collect::<Result<_, _>>()
        .map_err(|e| bad(e.to_string()))?;
    let mut it = docs.into_iter();
    let Some(ModelDoc::SymbolTable { symbols }) = it.next() else {
        return Err(bad("first document must be the symbol table"));
    };
    let mut table = SymbolTable::new();
    for s in &symbols {
        let rate = match &s.rate {
            Some(r) => Some(parse_expr(r, &table).map_err(|e| bad(e.to_string()))?),
            None => None,
        };
        table.push(&s.name, kind_from_tag(&s.kind, rate)?).map_err(|e| bad(e.to_string()))?;
    }
    let mut reg = Registry { table, systems: Vec::new(), maps: Vec::new(), integrals: Vec::new(), solutions: Vec::new() };
    for d in it {
        let r = Reader { t: &reg.table };
        match d {
            ModelDoc::SymbolTable { .. } => return Err(bad("duplicate symbol table")),
            ModelDoc::System(s) => {
                let sys = r.system(&s)?;
                reg.systems.push(sys);
            }
            ModelDoc::Map(m) => {
                let map = BirationalMap {
                    id: m.id,
                    variant: m.variant,
                    source: m.source,
                    target: m.target,
                    var_map: r.comps(&m.components)?,
                    action: m.action,
                    clock: m.clock,
                };
                reg.maps.push(map);
            }
            ModelDoc::Integral(i) => {
                let lambda: Rational = i.lambda.parse().map_err(|_| bad(format!("bad lambda `{}`", i.lambda)))?;
                let fi = FirstIntegral { id: i.id, expr: r.expr(&i.expr)?, lambda, system_id: i.system };
                reg.integrals.push(fi);
            }
            ModelDoc::Solution(s) => {
                let kind = match &s.form {
                    SolutionForm::Closed { bindings, generator_rules } => SolutionKind::Closed {
                        bindings: r.comps(bindings)?,
                        generator_rules: r.comps(generator_rules)?,
                    },
                    SolutionForm::Restriction { source, zeroed, param_values } => SolutionKind::Restriction {
                        source: source.clone(),
                        zeroed: r.syms(zeroed)?,
                        param_values: r.comps(param_values)?,
                    },
                };
                reg.solutions.push(ParticularSolution { id: s.id, system_id: s.system, kind });
            }
        }
    }
    Ok(reg)
}
