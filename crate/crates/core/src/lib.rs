//! Constructive double Walsh-Paley series that are universal in weighted
//! `L¹_μ([0,1]²)` with respect to subseries, together with machine checks of
//! every quantitative condition the construction relies on.
//!
//! The numeric core (`dyadic`, `series`) is generic over [`Real`]; the
//! builders work in `f64` through the aliases below.

pub mod check;
pub mod dyadic;
mod error;
pub mod io;
pub mod lemma;
mod scalar;
pub mod series;
pub mod universal;

pub use error::{Error, Infeasibility, Result};
pub use scalar::Real;

pub type Grid1D = dyadic::DyadicGrid1D<f64>;
pub type Grid2D = dyadic::DyadicGrid2D<f64>;
pub type Series2D = series::WalshSeries2D<f64>;
pub type Series1D = series::WalshSeries1D<f64>;
