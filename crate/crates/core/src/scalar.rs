//! Coefficient rings for multivectors.
//!
//! Exact backends: [`Rational64`] and Gaussian rationals
//! ([`GaussianRational`]). Floating backend: [`Complex64`], compared with a
//! tolerance only.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

pub type GaussianRational = Complex<Rational64>;

/// Magnitude under which a float coefficient is dropped.
pub const FLOAT_ZERO: f64 = 1e-14;

pub trait Scalar:
    Clone
    + Debug
    + Zero
    + One
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// `true` for backends that support exact equality.
    const EXACT: bool;

    /// Exact zero test for exact backends, thresholded for floats.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn from_rational(r: Rational64) -> Self;
    fn to_complex(&self) -> Complex64;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(Rational64::from_integer(v))
    }

    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }
}

impl Scalar for Rational64 {
    const EXACT: bool = true;

    fn from_rational(r: Rational64) -> Self {
        r
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn from_rational(r: Rational64) -> Self {
        Complex::new(r, Zero::zero())
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn is_negligible(&self) -> bool {
        self.norm() < FLOAT_ZERO
    }
    fn from_rational(r: Rational64) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}
