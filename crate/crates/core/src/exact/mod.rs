//! Exact arithmetic substrate.

mod enumerate;
mod interval;
mod rational;
mod surd;

pub(crate) use enumerate::log2_ceil_inv;
pub use enumerate::{dyadic_interval_enum, rational_enum_signed, rational_enum_unit, simplest_in};
pub use interval::{ball, halve, rational_grid, DyadicInterval, FueledBool, Precision, Truth};
pub use rational::Rational;
pub use surd::Surd;
