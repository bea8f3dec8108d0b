//! Fair division of multi-layered cakes.
//!
//! A layered cake is a stack of `m` divisible resources over the same time
//! axis `[0, 1]`. Agents may not receive overlapping time slots on different
//! layers. This crate implements envy-free and proportional protocols for
//! that setting in exact rational arithmetic, an independent verifier, and
//! query accounting in the Robertson–Webb style.

pub mod cake;
pub mod ef;
pub mod error;
pub mod instance;
pub mod matching;
pub mod piece;
pub mod prop;
pub mod pwl;
pub mod rational;
pub mod render;
pub mod session;
pub mod solve;
pub mod step;
pub mod valuation;
pub mod verify;

pub use cake::{DiagonalSide, Layer, LayeredCake, LayeredPiece, MergeMap, MultiAllocation};
pub use ef::{cut_and_choose, ef_noncontiguous, moving_knife_three, ShoutPoint};
pub use error::{Error, Result};
pub use instance::Instance;
pub use piece::{Interval, Piece, SetOp};
pub use prop::{equitable_partition, prop_matching, prop_power_two, EquitablePartition};
pub use rational::Rational;
pub use session::{QueryCounts, QuerySession};
pub use solve::{solve, Protocol, Report, Solution};
pub use step::StepFn;
pub use valuation::Valuation;
