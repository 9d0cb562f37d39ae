//! Floating-point scalar abstraction.
//!
//! All of the analytic core (group arithmetic, box generators, fibers,
//! brackets) is generic over [`Scalar`], so the same code runs at `f32`
//! and `f64`. The spectral/decision layer and the concrete aliases at the
//! crate root are pinned to `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts a tabulated `f64` constant into the scalar type.
    fn real(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant converts to any Scalar")
    }

    /// `2 * pi`.
    fn two_pi() -> Self {
        Self::PI() + Self::PI()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
