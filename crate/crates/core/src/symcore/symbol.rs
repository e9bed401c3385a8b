use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use num_rational::BigRational;

use super::{RatExpr, SymError};

/// Index of a symbol inside a [`SymbolTable`]. Exponent vectors are
/// positional over the same indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Symbol(pub u16);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SymbolKind {
    State,
    Independent,
    Parameter,
    Constant,
    /// `dE/d(indep) = rate * E`; the rate never mentions state symbols.
    ExpGenerator { rate: RatExpr<BigRational> },
}

impl SymbolKind {
    pub fn tag(&self) -> &'static str {
        match self {
            SymbolKind::State => "state",
            SymbolKind::Independent => "independent",
            SymbolKind::Parameter => "parameter",
            SymbolKind::Constant => "constant",
            SymbolKind::ExpGenerator { .. } => "exp-generator",
        }
    }
}

#[derive(Clone, Debug)]
struct Entry {
    name: String,
    kind: SymbolKind,
}

/// Ordered symbol list. Order is fixed once a symbol is pushed and drives
/// the graded lexicographic monomial order.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    entries: Vec<Entry>,
    by_name: HashMap<String, Symbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &str, kind: SymbolKind) -> Result<Symbol, SymError> {
        if self.by_name.contains_key(name) {
            return Err(SymError::DuplicateSymbol(name.to_string()));
        }
        if let SymbolKind::ExpGenerator { rate } = &kind {
            for s in rate.symbols() {
                if matches!(self.kind(s), SymbolKind::State) {
                    return Err(SymError::StateInGeneratorRate(name.to_string()));
                }
            }
        }
        let sym = Symbol(self.entries.len() as u16);
        self.entries.push(Entry { name: name.to_string(), kind });
        self.by_name.insert(name.to_string(), sym);
        Ok(sym)
    }

    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.by_name.get(name).copied()
    }

    /// Like [`get`](Self::get) but panics; for registry construction where
    /// the name is a literal.
    pub fn sym(&self, name: &str) -> Symbol {
        self.get(name).unwrap_or_else(|| panic!("unknown symbol `{name}`"))
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.entries[s.index()].name
    }

    pub fn kind(&self, s: Symbol) -> &SymbolKind {
        &self.entries[s.index()].kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.entries.len()).map(|i| Symbol(i as u16))
    }

    pub fn of_kind<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = Symbol> + 'a {
        self.symbols().filter(move |s| self.kind(*s).tag() == tag)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
