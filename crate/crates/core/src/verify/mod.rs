//! Exact certification of the symbolic identities: each check
//! reduces to residual rational expressions that must vanish identically
//! on the hyperplane `alpha0 + alpha1 + alpha2 = 1`.

mod checks;
mod report;
mod search;
mod suite;

use thiserror::Error;

use crate::models::ModelError;
use crate::symcore::SymError;

pub use checks::{
    check_chart, check_disputed, check_first_integral, check_first_integral_expr, check_hamiltonian_consistency,
    check_invariant_divisor, check_particular_solution, check_reduction_5d_to_4d, check_reduction_with,
    check_second_order_forms, check_second_order_forms_with, check_symmetry, check_typo_consistency,
    check_vector_field_degree, eliminate_to_second_order, invariant_divisor_quotient, symmetry_residuals,
    vector_field_degree, CouplingTerm, ReductionAnsatz,
};
pub use report::{find_witness, Residual, Status, VerificationReport, WITNESS_SEED};
pub use search::{first_integral_search, SearchConfig, DEFAULT_MONOMIAL_CAP};
pub use suite::{run_suite, Scope, SuiteOptions, VariantSelection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("structural error in {check}: {msg}")]
    Structural { check: String, msg: String },
    #[error("singular composition in {check}: denominator vanishes identically (bindings for {symbols:?})")]
    Singular { check: String, symbols: Vec<String> },
    #[error("search needs {unknowns} unknown coefficients, above the cap of {cap}")]
    Capacity { unknowns: usize, cap: usize },
}

impl VerifyError {
    pub(crate) fn structural(check: &str, msg: impl Into<String>) -> Self {
        VerifyError::Structural { check: check.to_string(), msg: msg.into() }
    }
}
