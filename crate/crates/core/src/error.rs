use thiserror::Error;

/// Errors across the crate. Resource caps get their own variants so callers
/// can distinguish "the claim is false" from "the machine gave up".
#[derive(Debug, Error)]
pub enum Error {
    #[error("enumeration limit: n = {n} exceeds the configured cap {cap}")]
    EnumerationLimit { n: usize, cap: usize },

    #[error("size mismatch: operands live in S_{left} and S_{right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("not comparable: {lower} is not below {upper}")]
    NotComparable { lower: String, upper: String },

    #[error("malformed bracket sequence: {0}")]
    MalformedBrackets(String),

    #[error("invalid involution: {0}")]
    InvalidInvolution(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("rise ({i1},{i2}) is not suitable: {reason}")]
    UnsuitableRise { i1: u32, i2: u32, reason: String },

    #[error("chain step {from} -> {to} is not a covering relation")]
    NonCoverStep { from: String, to: String },

    #[error("cover edge {from} -> {to} carries no label")]
    UnlabeledEdge { from: String, to: String },

    #[error("interval [{lower}, {upper}] has {count} maximal chains, over the cap {cap}")]
    ChainCapExceeded {
        lower: String,
        upper: String,
        count: u128,
        cap: u64,
    },

    #[error("ridge table would exceed {cap} entries")]
    RidgeCapExceeded { cap: usize },

    #[error("Deodhar-Srinivasan cover {from} -> {to} is not a Bruhat cover")]
    SubposetViolation { from: String, to: String },

    #[error("facet at position {position} violates the shelling intersection condition")]
    ShellingViolation { position: usize },

    #[error("EL verification has not passed for this poset")]
    ElNotVerified,

    #[error("degenerate order complex: {0}")]
    Degenerate(String),

    #[error("graded poset invariant violated: {0}")]
    InvalidPoset(String),

    #[error("invariant failure: {0}")]
    InvariantFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
