//! Nested sequences of closed balls with empty intersection.

mod nested;
mod schedule;

pub use nested::{Certificate, Exclusion, IvbWitness, NestedBallSeq, TypeIvKind};
pub use schedule::Schedule;
