//! Crate error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground parameters must satisfy 1 <= t < k <= n <= 64, got n={n} k={k} t={t}")]
    BadGroundParams { n: u64, k: u64, t: u64 },

    #[error("enumeration needs 1 <= k <= n <= 64, got n={n} k={k}")]
    BadEnumerationParams { n: u64, k: u64 },

    #[error("element {element} outside ground set 1..={n}")]
    ElementOutOfRange { element: u64, n: u32 },

    #[error("block is empty")]
    EmptyBlock,

    #[error("blocks overlap")]
    OverlappingBlocks,

    #[error("blocks do not cover the ground set")]
    IncompleteCover,

    #[error("restricted growth string is invalid: {0}")]
    BadRgs(String),

    #[error("cannot parse partition literal {literal:?}: {reason}")]
    BadLiteral { literal: String, reason: String },

    #[error("family spec is invalid: {0}")]
    BadFamilySpec(String),

    #[error("work would visit {needed} partitions, over the budget of {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("family is empty")]
    EmptyFamily,

    #[error("family is not {t}-intersecting (members {i} and {j} share too few blocks)")]
    NotTIntersecting { t: u32, i: usize, j: usize },

    #[error("operation needs covering number {expected}, family has {actual}")]
    WrongCoveringNumber { expected: u32, actual: u32 },

    #[error("isomorphism search supports n <= {budget}, got n={n}")]
    IsoBudgetExceeded { n: u32, budget: u32 },

    #[error("unknown claim id {0:?}")]
    UnknownClaim(String),

    #[error("grid point outside claim hypotheses: {0}")]
    HypothesisViolated(String),

    #[error("cannot parse grid spec {spec:?}: {reason}")]
    BadGrid { spec: String, reason: String },

    #[error("intersection table is missing entry for subset {0:#x}")]
    IncompleteTable(u32),

    #[error("interval comparison stayed indeterminate at {0} bits")]
    Indeterminate(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
