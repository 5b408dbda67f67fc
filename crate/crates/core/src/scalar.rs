//! Scalar abstraction.
//!
//! Table and series arithmetic only needs field operations, so it is written
//! against [`Field`], which covers `f32`, `f64`, the double-double
//! [`TwoFloat`] and exact [`BigRational`]. Anything needing transcendental
//! functions (characteristic functions, limiting pmfs) asks for [`Real`].

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};
use twofloat::TwoFloat;

pub trait Field:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// False for NaN and infinities; always true for exact types.
    fn is_finite_value(&self) -> bool;

    /// Unit roundoff of one arithmetic operation; zero for exact types.
    fn unit_roundoff() -> Self;

    /// Nearest value to a finite `f64` (exact for the wider types).
    ///
    /// `FromPrimitive::from_f64` is not used because its default
    /// implementation truncates through `i64`.
    fn convert_f64(x: f64) -> Self;
}

/// Floating-point scalars.
pub trait Real: Field + Float {}

impl<T: Field + Float> Real for T {}

impl Field for f32 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    fn unit_roundoff() -> Self {
        f32::EPSILON / 2.0
    }
    fn convert_f64(x: f64) -> Self {
        x as f32
    }
}

impl Field for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    fn unit_roundoff() -> Self {
        f64::EPSILON / 2.0
    }
    fn convert_f64(x: f64) -> Self {
        x
    }
}

impl Field for TwoFloat {
    fn is_finite_value(&self) -> bool {
        self.is_valid()
    }
    fn unit_roundoff() -> Self {
        // 2^-104
        TwoFloat::from(f64::EPSILON * f64::EPSILON / 8.0)
    }
    fn convert_f64(x: f64) -> Self {
        TwoFloat::from(x)
    }
}

impl Field for BigRational {
    fn is_finite_value(&self) -> bool {
        true
    }
    fn unit_roundoff() -> Self {
        BigRational::from_integer(0.into())
    }
    fn convert_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(|| panic!("{x} is not finite"))
    }
}

/// Converts an `f64` into `T`. Panics only for non-finite input on exact types.
pub fn from_f64<T: Field>(x: f64) -> T {
    T::convert_f64(x)
}

pub fn from_usize<T: Field>(x: usize) -> T {
    T::from_usize(x).expect("usize converts into every field")
}

/// Lossy conversion to `f64` for reporting.
pub fn to_f64<T: Field>(x: &T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `base^exp` by repeated squaring.
pub fn powi<T: Field>(base: &T, exp: usize) -> T {
    num_traits::pow::pow(base.clone(), exp)
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone)]
pub struct CompensatedSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Field> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }
}

impl<T: Field> CompensatedSum<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum.clone() + x.clone();
        if self.sum.abs() >= x.abs() {
            self.compensation = self.compensation.clone() + ((self.sum.clone() - t.clone()) + x);
        } else {
            self.compensation = self.compensation.clone() + ((x - t.clone()) + self.sum.clone());
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum.clone() + self.compensation.clone()
    }
}

impl<T: Field> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of a sequence.
pub fn sum<T: Field, I: IntoIterator<Item = T>>(iter: I) -> T {
    iter.into_iter().collect::<CompensatedSum<T>>().value()
}
