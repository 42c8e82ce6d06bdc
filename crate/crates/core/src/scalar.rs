//! Numeric scalar abstraction shared by the graph, valuation, model and solver layers.
//!
//! Anything that is an ordered field with conversions to and from `f64` works:
//! `f32`, `f64` and exact rationals (`Ratio<i64>`). Statistical code (normal CDFs,
//! logarithms, square roots) stays on `f64`.

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use std::fmt::{Debug, Display};

pub trait Scalar:
    Copy
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion used for reporting and file output.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Conversion from parsed decimal input.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(Self::zero)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half(self) -> Self {
        self / Self::two()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).unwrap_or_else(Self::zero)
    }

    /// Absolute slack under which two objective values count as equal.
    fn slack() -> Self;

    /// Smallest `d` with `self * d` integral, when cheaply known.
    fn denominator(self) -> Option<i64>;

    /// Largest multiple of `1 / steps` not above `self`, up to rounding noise.
    fn floor_to(self, steps: i64) -> Self;
}

fn float_floor_to(v: f64, steps: i64) -> f64 {
    let scaled = v * steps as f64;
    (scaled + 1e-6 * scaled.abs().max(1.0)).floor() / steps as f64
}

impl Scalar for f32 {
    fn slack() -> Self {
        1e-4
    }

    fn denominator(self) -> Option<i64> {
        (self.fract() == 0.0).then_some(1)
    }

    fn floor_to(self, steps: i64) -> Self {
        float_floor_to(self as f64, steps) as f32
    }
}

impl Scalar for f64 {
    fn slack() -> Self {
        1e-9
    }

    fn denominator(self) -> Option<i64> {
        (self.fract() == 0.0).then_some(1)
    }

    fn floor_to(self, steps: i64) -> Self {
        float_floor_to(self, steps)
    }
}

impl Scalar for Ratio<i64> {
    fn slack() -> Self {
        Ratio::from_integer(0)
    }

    fn denominator(self) -> Option<i64> {
        Some(*self.denom())
    }

    fn floor_to(self, steps: i64) -> Self {
        let steps = Ratio::from_integer(steps);
        match num_traits::CheckedMul::checked_mul(&self, &steps) {
            Some(scaled) => scaled.floor() / steps,
            None => self,
        }
    }
}

/// Sum of an iterator of scalars.
pub fn sum<T: Scalar, I: IntoIterator<Item = T>>(items: I) -> T {
    items.into_iter().fold(T::zero(), |acc, v| acc + v)
}
