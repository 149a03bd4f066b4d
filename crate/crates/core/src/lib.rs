//! Exact, oracle-relative analysis on a closed universe of symbolic real
//! functions: suprema, oscillation, moduli, points of continuity, covering
//! lemmas, variation, and the realiser reductions that show where naive
//! rational sampling breaks down.

pub mod algorithms;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod reductions;
pub mod universe;

pub use error::AbyssError;
pub use exact::{DyadicInterval, FueledBool, Precision, Rational, Surd, Truth};
pub use universe::{ClassSet, CountableSet, Region, SymbolicFn, View};

/// Default fuel for oracle simulation.
pub const DEFAULT_FUEL: u64 = 64;
