use thiserror::Error;

use crate::graded::Slice;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("not a unit for series division: {0}")]
    NotUnit(String),

    #[error("invalid quartet: {0}")]
    InvalidQuartet(String),

    #[error("heisenberg relations fail: {0}")]
    RelationsFailed(String),

    #[error("rank defect at slice {slice}: {images} image vectors of rank {rank} in a slice of dimension {dim}")]
    RankDefect {
        slice: Slice,
        images: usize,
        rank: usize,
        dim: usize,
    },

    #[error("insufficient truncation: need N >= {needed}, have N = {have}")]
    InsufficientTruncation { needed: i64, have: i64 },

    #[error("input is not a Macdonald family for genus {genus}: {reason} at (i,n) = ({degree},{level})")]
    NotMacdonaldFamily {
        genus: u32,
        degree: i64,
        level: i64,
        reason: String,
    },

    #[error("series inconsistent with arithmetic genus {genus}: nonzero coefficient {value} at q^{degree}")]
    GenusInconsistent { genus: u32, degree: usize, value: i64 },

    #[error("not a BPS-rational series: {0}")]
    NotBpsRational(String),

    #[error("integrality violated: n_{genus} = {value}")]
    IntegralityViolated { genus: u32, value: String },

    #[error("polynomial is not symmetric under q -> 1/q (genus {0})")]
    Asymmetric(u32),

    #[error("invalid semigroup: {0}")]
    Semigroup(String),

    #[error("invalid curve model: {0}")]
    Model(String),

    #[error("enumeration cap exceeded: colength {requested} > cap {cap}")]
    EnumerationCap { requested: usize, cap: usize },

    #[error("value out of range: {0}")]
    Overflow(String),
}
