//! Real scalar abstraction: the numerical core runs on any IEEE float.

use std::fmt;
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar type for amplitudes, entropies and fitness values.
///
/// Implemented by `f32` and `f64`. Tolerances throughout the crate are
/// specified as `f64` literals and converted with [`tol`], which floors
/// them at a small multiple of the type's epsilon so that `f32`
/// instantiations keep sane acceptance bands.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum<Self>
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Sum<Self>
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Convert an `f64` tolerance to `T`, floored at 64 ulps of one.
pub(crate) fn tol<T: Scalar>(base: f64) -> T {
    let t = T::from_f64(base).expect("tolerance must be representable");
    let floor = T::epsilon() * T::from_f64(64.0).expect("64 is representable");
    if t < floor {
        floor
    } else {
        t
    }
}

/// `usize` to `T`, for means and dimension factors.
pub(crate) fn from_usize<T: Scalar>(v: usize) -> T {
    T::from_usize(v).expect("count must be representable in the scalar type")
}
