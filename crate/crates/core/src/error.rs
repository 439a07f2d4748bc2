use thiserror::Error;

use crate::game::Coalition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("player count {n} outside supported range {min}..={max}")]
    PlayerCount { n: usize, min: usize, max: usize },

    #[error("coalition must be nonempty")]
    EmptyCoalition,

    #[error("coalition bits {bits:#b} out of range for n = {n}")]
    CoalitionOutOfRange { bits: u64, n: usize },

    #[error("player {player} out of range for n = {n}")]
    PlayerOutOfRange { player: usize, n: usize },

    #[error("player counts differ: {left} vs {right}")]
    PlayerMismatch { left: usize, right: usize },

    #[error("expected {expected} entries, found {found}")]
    WrongLength { expected: usize, found: usize },

    #[error("{oracle} oracle is capped at n = {cap}, got n = {n}")]
    OracleCap {
        oracle: &'static str,
        n: usize,
        cap: usize,
    },

    #[error(
        "map is not symmetric at size {size}: payoff to player {} on u_{} differs from player {} on u_{}",
        reference.1, reference.0, witness.1, witness.0
    )]
    NotSymmetric {
        size: usize,
        reference: (Coalition, usize),
        witness: (Coalition, usize),
    },

    #[error("target is not efficient (defect at stratum {stratum})")]
    NotEfficient { stratum: usize },

    #[error("unknown target `{0}`")]
    UnknownTarget(String),

    #[error("invalid rational `{0}`")]
    InvalidRational(String),

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("directions are linearly dependent: {}", .0.join(", "))]
    DependentDirections(Vec<String>),

    #[error("stratum {stratum} out of range 1..={max}")]
    StratumOutOfRange { stratum: usize, max: usize },

    #[error("malformed game: {0}")]
    GameFormat(String),

    #[error("duplicate coalition {0:?}")]
    DuplicateCoalition(Vec<usize>),

    #[error("identity check failed: {0}")]
    IdentityViolation(String),
}
