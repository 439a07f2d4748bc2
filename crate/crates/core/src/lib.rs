//! Exact inner-product geometry on linear value maps of cooperative TU games.
//!
//! Games live in the unanimity basis through their Harsanyi dividends. Linear
//! value maps are compared with the inner product obtained by summing the
//! Euclidean pairing of their payoffs over all unanimity games. On top of that
//! the crate computes projections onto the egalitarian Shapley line
//! `F^ε = (1 − ε)·Sh + ε·ED`, size-stratified coordinates, multi-direction
//! least-squares fits and large-`n` trends. Every quantity is an exact
//! rational; floating point only appears when rendering.

pub mod asymptotics;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod line;
pub mod multifit;
pub mod rational;
pub mod strata;
pub mod value;
pub mod verify;

pub use error::{Error, Result};
pub use game::{Coalition, DividendVector, Game, HOrthonormalBasis};
pub use line::ProjectionReport;
pub use multifit::GramFit;
pub use rational::Rational;
pub use strata::{StratifiedCoordinates, StratumWeights};
pub use value::{GeneralLinearValueMap, PayoffVector, SymmetricValueProfile, Target, ValueKind};
