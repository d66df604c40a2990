//! Floating-point scalar abstraction shared by the spectral pipeline.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Real scalar the Hamiltonian, propagator and statistics are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances quoted throughout the crate
/// assume `f64`; `f32` runs are useful for quick exploratory sweeps only.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Default + Send + Sync + Debug + Display + LowerExp + 'static
{
    /// Converts an `f64` literal. Cannot fail for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal representable")
    }

    /// Converts an integer count.
    #[inline]
    fn from_count(n: usize) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("count representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
