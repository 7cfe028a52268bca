use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the dyadic grids, transforms and partial sums are
/// generic over. Implemented for `f32` and `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// `2^-p` computed exactly.
    fn exp2_neg(p: u32) -> Self {
        Self::from_f64((-(p as f64)).exp2()).unwrap()
    }

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}
