use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar type the numeric core is generic over (`f32` or `f64`).
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    /// Threshold below which an eigenvalue is treated as exactly zero.
    ///
    /// `1e-10` for `f64`; widened for lower precision types and for
    /// operators with a large norm.
    fn zero_eigenvalue_tolerance(scale: Self) -> Self {
        let rounding = Self::epsilon() * Self::lit(64.0) * scale;
        rounding.max(Self::lit(1e-10))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_tolerance_is_1e_minus_10_for_desk_scale_f64() {
        assert_eq!(f64::zero_eigenvalue_tolerance(100.0), 1e-10);
        assert!(f32::zero_eigenvalue_tolerance(1.0) > 1e-6);
    }
}
