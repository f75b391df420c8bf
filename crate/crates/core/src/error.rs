use thiserror::Error;

use crate::word::Word;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("not functional: input {witness} admits two outputs")]
    NotFunctional { witness: Word },
    #[error("not total: no output on input {witness}")]
    NotTotal { witness: Word },
    #[error("domains overlap at {witness}")]
    DomainsOverlap { witness: Word },
    #[error("domains do not cover: {witness} is in no piece")]
    DomainsDoNotCover { witness: Word },
    #[error("not injective: {first} and {second} share a value")]
    NotInjective { first: Word, second: Word },
    #[error("no infinite cylinder: language is finite")]
    NoInfiniteCylinder,
    #[error("empty language")]
    EmptyLanguage,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A hypothesis or realizability condition of a construction does not hold.
    #[error("{0}")]
    Precondition(String),
    /// Symbolic results contradict each other: an implementation defect.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("length bound {bound} exceeds maximum {max}")]
    BoundExceeded { bound: usize, max: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
