use thiserror::Error;

use crate::transform::TypeVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected {expected} tokens, found {found}")]
    TokenCount { expected: usize, found: usize },

    #[error("token {position}: point {value} is outside 1..={n}")]
    PointOutOfRange {
        position: usize,
        value: usize,
        n: usize,
    },

    #[error("token {position}: malformed token {token:?}")]
    MalformedToken { position: usize, token: String },

    #[error("ground set size must be in 1..={max}, got {n}")]
    InvalidDegree { n: usize, max: usize },

    #[error("ground set sizes differ: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    NotPermutation(String),

    #[error("invalid type vector: {0}")]
    InvalidType(String),

    #[error("types differ: {left} vs {right}; the variants are not isomorphic")]
    TypeMismatch { left: TypeVector, right: TypeVector },

    #[error("n = {n} exceeds the exhaustive limit {limit}")]
    OverBudget { n: usize, limit: usize },

    #[error("no type of degree {n} produces this fingerprint")]
    NoMatchingType { n: usize },

    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),

    #[error("table orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("index map is not a bijection on 0..{order}")]
    NotBijective { order: usize },

    #[error("product ({x}, {y}) = {value} is outside 0..{order}")]
    ProductOutOfRange {
        x: usize,
        y: usize,
        value: usize,
        order: usize,
    },

    #[error("table is not associative at ({x}, {y}, {z})")]
    NotAssociative { x: usize, y: usize, z: usize },

    #[error("table format, line {line}: {message}")]
    TableFormat { line: usize, message: String },

    #[error("isomorphism search exhausted its budget of {nodes} nodes")]
    SearchBudgetExhausted { nodes: u64 },
}
