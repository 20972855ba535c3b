//! Numeric abstraction shared by every solver.
//!
//! All solvers are written against [`Scalar`]. The exact instantiation
//! ([`BigRational`]) is the one used for every optimality claim; `f64` is
//! available for quick experiments where exact ties do not matter.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Time, cost and speed values.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    fn floor_val(&self) -> Self;
    fn ceil_val(&self) -> Self;
    fn to_f64_lossy(&self) -> f64;

    /// `num / den` in this scalar type.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("i64 fits") / Self::from_i64(den).expect("i64 fits")
    }

    fn of_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize fits")
    }

    /// Integer power with a non-negative exponent.
    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for BigRational {
    fn floor_val(&self) -> Self {
        self.floor()
    }

    fn ceil_val(&self) -> Self {
        self.ceil()
    }

    fn to_f64_lossy(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                // scale down big operands before dividing
                let shift = self
                    .denom()
                    .bits()
                    .max(self.numer().bits())
                    .saturating_sub(900);
                let n = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
                let d = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Scalar for f64 {
    fn floor_val(&self) -> Self {
        self.floor()
    }

    fn ceil_val(&self) -> Self {
        self.ceil()
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

pub(crate) fn max_of<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

/// Sorts and removes duplicates from a list of scalars.
pub(crate) fn sort_dedup<T: Scalar>(values: &mut Vec<T>) {
    values.sort_by(|a, b| a.partial_cmp(b).expect("comparable scalars"));
    values.dedup_by(|a, b| a == b);
}

pub(crate) fn cmp<T: Scalar>(a: &T, b: &T) -> std::cmp::Ordering {
    a.partial_cmp(b).expect("comparable scalars")
}
