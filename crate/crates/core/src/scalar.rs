//! Floating point abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the library is generic over: `f32` or `f64`.
///
/// The tolerances quoted throughout the crate (1e-12 slack, 1e-9 violation
/// threshold) are calibrated for `f64`; with `f32` they degrade to the
/// type's own epsilon.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only for values the type cannot represent at all.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lossy conversion used for reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts a count or index.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Compensated (Neumaier) sum of a sequence.
pub fn compensated_sum<T: Scalar, I: IntoIterator<Item = T>>(terms: I) -> T {
    let mut sum = T::zero();
    let mut carry = T::zero();
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            carry = carry + ((sum - t) + x);
        } else {
            carry = carry + ((x - t) + sum);
        }
        sum = t;
    }
    sum + carry
}

/// `|v|^p` with the zero base short-circuited, so negative values never reach `ln`.
pub fn abs_pow<T: Scalar>(v: T, p: T) -> T {
    let a = v.abs();
    if a.is_zero() {
        T::zero()
    } else {
        (p * a.ln()).exp()
    }
}

/// Relative closeness `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close_rel<T: Scalar>(a: T, b: T, tol: T) -> bool {
    let scale = T::one().max(a.abs()).max(b.abs());
    (a - b).abs() <= tol * scale
}
