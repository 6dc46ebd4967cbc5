use thiserror::Error;

/// Errors shared by the whole crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("images do not form a bijection on 0..{degree}: {detail}")]
    NotABijection { degree: usize, detail: String },

    #[error("cannot parse `{input}` as cycle notation: {detail}")]
    CycleParse { input: String, detail: String },

    #[error("a generator set must contain at least one permutation")]
    EmptyGeneratorSet,

    #[error("point {point} is out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("{what} must not be the identity")]
    IdentityNotAllowed { what: &'static str },

    #[error("element of degree {degree} does not lie in the expected group (order {order})")]
    NotInGroup { degree: usize, order: String },

    #[error("{what} = {value} exceeds the configured ceiling {ceiling}")]
    CeilingExceeded {
        what: &'static str,
        value: String,
        ceiling: String,
    },

    #[error("{what} = {value} is outside the supported range {range}")]
    OutOfRange {
        what: &'static str,
        value: String,
        range: &'static str,
    },

    #[error("the partition is not a block system for the group: {detail}")]
    NotABlockSystem { detail: String },

    #[error("the action is not transitive ({orbit_count} orbits)")]
    NotTransitive { orbit_count: usize },

    #[error("invalid normal chain: {detail}")]
    InvalidChain { detail: String },

    #[error("the group generated by the inputs is not the expected ambient group")]
    NotAmbient,

    #[error("unknown construction `{input}`; expected alt<n>, sym<n>, alt<n>^2:swap or alt<n>wrC<m>")]
    UnknownConstruction { input: String },

    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),

    #[error("sample count must be positive")]
    NoSamples,

    #[error("confidence must lie strictly between 0 and 1, got {0}")]
    BadConfidence(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
