//! Words in the generators `s0, s1, s2, pi`, their integer action on the
//! parameters, and relation checks on parameters (exact) and on the
//! birational maps (exact evaluation at random rational points).

mod action;
mod relations;
mod words;

use thiserror::Error;

use crate::models::ModelError;

pub use action::ParameterAction;
pub use relations::{random_point, relations_for, verify_group_relations, Relation, MAX_RESAMPLES};
pub use words::{
    apply_generator, apply_word_ordered, apply_word_to_point, calibrate_convention, generator_action, generator_map,
    normalization_defect, parameter_action, parameter_action_ordered, translation_shift, Context, ExactPoint,
    Generator, GroupWord, Ordering, Shift, T1_SHIFT, T2_SHIFT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error("`pi` is only available on the four-dimensional system")]
    PiOutsideTh2,
    #[error("convention calibration failed: {0}")]
    Calibration(String),
    #[error("denominator vanishes when applying {generator}")]
    Singular { generator: String },
    #[error("no regular sample point for `{relation}` after {attempts} attempts")]
    Sampling { relation: String, attempts: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}
