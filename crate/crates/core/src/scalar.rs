use std::fmt::Debug;

use num_traits::{FromPrimitive, Signed};

/// Coordinate type for the predicates.
///
/// Only ring operations and comparisons are used, so integer types are exact
/// as long as the products involved do not overflow. Floating point types
/// satisfy the bound but give no exactness guarantees.
pub trait Scalar: Clone + PartialOrd + Debug + Signed + FromPrimitive + Send + Sync {
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("scalar cannot represent integer")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// Sign as -1, 0 or +1.
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

impl<T> Scalar for T where T: Clone + PartialOrd + Debug + Signed + FromPrimitive + Send + Sync {}
