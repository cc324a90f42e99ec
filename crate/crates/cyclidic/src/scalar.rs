//! Floating point scalar abstraction.

use core::fmt::{Debug, Display};
use core::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

/// Real scalar used throughout the crate: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Default relative tolerance for predicates in this precision.
    const DEFAULT_TOL: f64;
    /// Default near-spherical switch threshold in this precision.
    const DEFAULT_SWITCH: f64;
}

impl Real for f32 {
    const DEFAULT_TOL: f64 = 1e-4;
    const DEFAULT_SWITCH: f64 = 1e-3;
}

impl Real for f64 {
    const DEFAULT_TOL: f64 = 1e-9;
    const DEFAULT_SWITCH: f64 = 1e-7;
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable")
}

#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().expect("finite scalar")
}

/// Tolerance context threaded through predicates.
///
/// `rel` scales with the norms of the inputs of each predicate; `switch`
/// is the relative threshold on the boundary-sphere pairing below which a
/// patch is built on the spherical path; `closure` is relative to the cube
/// diameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tol<T> {
    pub rel: T,
    pub switch: T,
    pub closure: T,
}

impl<T: Real> Default for Tol<T> {
    fn default() -> Self {
        Tol {
            rel: lit(T::DEFAULT_TOL),
            switch: lit(T::DEFAULT_SWITCH),
            closure: lit(1e-6),
        }
    }
}

impl<T: Real> Tol<T> {
    pub fn with_rel(rel: T) -> Self {
        Tol { rel, ..Self::default() }
    }
}
