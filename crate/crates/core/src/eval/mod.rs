//! Term valuation, signature conformance and satisfaction along a path.

mod check;
mod conform;
mod term;

use thiserror::Error;

pub use check::{first_failure, holds, holds_all_stages, holds_globally_on_path, is_model_of, CompiledFormula, Verdict};
pub use conform::{check_conformance, conformance_issues};
pub use term::{eval_closed_term, eval_term, ground_action};

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("variable `{0}` in a term that must be variable-free")]
    UnexpectedVariable(String),
    #[error("integer overflow evaluating `{0}`")]
    Overflow(String),
    #[error("state has no value for variable `{0}`")]
    MissingValue(String),
    #[error("formula does not conform to the signature: {}", .0.join("; "))]
    Conformance(Vec<String>),
    #[error("stage {stage} is outside the path (length {len})")]
    StageOutOfRange { stage: usize, len: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}
