//! The closed universe of symbolic functions on [0,1].

mod closed;
mod func;
mod piecewise;
mod region;
mod seq;
mod set;
mod tags;
mod text;

pub use closed::{ClosedSetRep, OpenUnion};
pub use func::{
    build_cover_psi, build_penny, build_tilde, extremes_over, osc_selfcheck, Local, SideLimits,
    SymbolicFn,
};
pub use piecewise::{Affine, Breakpoint, Piecewise, Policy};
pub use region::{band, band_bounds, Region, View};
pub use seq::Baire1Seq;
pub use set::{tilde_shift, CountableSet, Member};
pub use tags::ClassSet;
pub use text::{parse_closed, parse_function, parse_open, parse_points, parse_set};
