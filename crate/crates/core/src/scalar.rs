use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the whole crate is generic over: `f32` or `f64`.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Display + 'static {
    /// Default magnitude below which a response denominator is treated as
    /// singular rather than divided through.
    fn denominator_floor() -> Self;
}

impl Scalar for f64 {
    fn denominator_floor() -> Self {
        1e-300
    }
}

impl Scalar for f32 {
    // 1e-300 underflows f32; use the smallest normal instead.
    fn denominator_floor() -> Self {
        f32::MIN_POSITIVE
    }
}

/// Converts an `f64` literal into the working scalar type.
pub(crate) fn lit<T: Scalar>(v: f64) -> T {
    T::from_f64(v).expect("literal representable in the scalar type")
}
