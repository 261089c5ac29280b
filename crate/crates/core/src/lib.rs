//! Exact evaluation of classic pathological real functions and the
//! 28-block partition of real functions by the cardinalities of their
//! continuity and differentiability sets.
//!
//! - [`points`]: exact tagged reals with decidable rationality.
//! - [`cantorset`]: ternary Cantor set levels, localization, membership.
//! - [`zoo`]: expression trees for the block representatives and certified evaluation.
//! - [`taxonomy`]: the 28 blocks, their cardinalities and summary statistics.
//! - [`witness`]: a falsification harness for continuity and differentiability claims.
//! - [`conn`]: the connection graph between block representatives.

pub mod cantorset;
pub mod conn;
pub mod enclosure;
pub mod numeric;
pub mod points;
pub mod taxonomy;
pub mod witness;
pub mod zoo;

/// Arbitrary-precision rationals, the scalar type of every exact computation here.
pub type Q = num_rational::BigRational;

pub use cantorset::{CantorInterval, Location, Membership};
pub use conn::{ConnEdge, ConnGraph, EdgeReport, GraphShape};
pub use enclosure::Enclosure;
pub use points::{CantorGenerator, TaggedPoint};
pub use taxonomy::{Block, BlockSignature, CardinalLabel};
pub use witness::{ProbePlan, Verdict};
pub use zoo::{EvalError, FnExpr, ZooEntry};
