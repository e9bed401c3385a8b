//! Exact sparse multivariate polynomials and rational expressions.

mod derivation;
mod infix;
mod linalg;
mod monomial;
mod poly;
mod ratexpr;
mod relation;
mod symbol;

pub use derivation::Derivation;
pub use infix::{ex, parse_expr, parse_poly, ExprDisplay, PolyDisplay};
pub use linalg::{determinant, jacobian, jacobian_determinant};
pub use monomial::Monomial;
pub use poly::Poly;
pub use ratexpr::{ring_op, Bindings, RatExpr, RingOp};
pub use relation::ParameterRelation;
pub use symbol::{Symbol, SymbolKind, SymbolTable};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("division by an identically zero expression")]
    DivisionByZero,
    #[error("substitution makes the denominator identically zero (bindings for {symbols:?})")]
    SingularSubstitution { symbols: Vec<Symbol> },
    #[error("denominator vanishes at the evaluation point")]
    ZeroDenominator,
    #[error("symbol {0} has no value at the evaluation point")]
    Unbound(Symbol),
    #[error("symbol `{0}` already defined")]
    DuplicateSymbol(String),
    #[error("rate of exponential generator `{0}` mentions a state symbol")]
    StateInGeneratorRate(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}
