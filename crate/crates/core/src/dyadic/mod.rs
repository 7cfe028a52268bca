//! Exact arithmetic and analysis on dyadic grids.

mod grid;
mod rational;
mod set;
mod step;
pub mod walsh;

pub use grid::{finest, DyadicGrid1D, DyadicGrid2D};
pub use rational::{Dyadic, ParseDyadicError};
pub use set::{DyadicSet1D, DyadicSet2D, RleMask};
pub use step::{DyadicInterval, DyadicRect, StepFunction1D, StepFunction2D};
pub use walsh::{
    dirichlet_packet, fwht, fwht2, inverse_fwht, inverse_fwht2, rademacher, walsh, walsh2,
};
