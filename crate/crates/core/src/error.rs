use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scalar field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("cannot parse scalar {text:?}: {reason}")]
    ScalarParse { text: String, reason: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("group axiom violated ({axiom}): {witness}")]
    GroupAxiom { axiom: &'static str, witness: String },

    #[error("invalid group action: {0}")]
    SetAction(String),

    #[error("malformed category: {0}")]
    Malformed(String),

    #[error("category axiom violated ({axiom}): {witness}")]
    CategoryAxiom { axiom: &'static str, witness: String },

    #[error("action axiom violated ({axiom}): {witness}")]
    ActionAxiom { axiom: &'static str, witness: String },

    #[error("grading violated: {0}")]
    GradingLeak(String),

    #[error("functor axiom violated: {0}")]
    Functor(String),

    #[error("functor is not fully faithful: {0}")]
    NotFullyFaithful(String),

    #[error("action is not free on objects: {0}")]
    NonFreeAction(String),

    #[error("invalid transversal: {0}")]
    InvalidTransversal(String),

    #[error("basis budget exceeded: {what} needs {needed} elements, budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        budget: usize,
    },

    #[error("class filter leak: {0}")]
    ClassLeak(String),

    #[error("characteristic {characteristic} divides the group order {order}")]
    CharacteristicDividesOrder { characteristic: u64, order: usize },

    #[error("{0}")]
    Input(String),
}
