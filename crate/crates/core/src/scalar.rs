//! Scalar types that symbolic expressions can be evaluated over.
//!
//! The symbolic kernel itself never touches floating point; evaluation is the
//! bridge to the numeric side and to exact spot checks over the rationals.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// A number type an [`Expr`](crate::Expr) can be evaluated in.
pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync
{
    fn from_rational(r: &BigRational) -> Self;

    fn from_integer(n: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()))
    }

    fn abs_value(&self) -> Self;

    fn to_f64_lossy(&self) -> f64;

    /// True when the value is unusable as a result (NaN or infinite floats).
    fn is_degenerate(&self) -> bool {
        false
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_rational(r: &BigRational) -> Self {
                rational_to_f64(r) as $t
            }

            fn abs_value(&self) -> Self {
                <$t>::abs(*self)
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }

            fn is_degenerate(&self) -> bool {
                !self.is_finite()
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }

    fn to_f64_lossy(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            rational_to_f64(self)
        }
    }
}
