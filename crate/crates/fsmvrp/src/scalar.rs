//! Floating-point scalar abstraction for distances, costs, and LP arithmetic.

use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Trait bound for every floating-point scalar used in geometry, model
/// coefficients, and the simplex engine. Demand quantities are *not* scalars;
/// they use the exact [`crate::quantity::Qty`] type.
pub trait Scalar:
    num_traits::Float + num_traits::FromPrimitive + num_traits::ToPrimitive + Debug + Display + Sum + Default + 'static
{
    /// Lossless-enough conversion from f64 literals (tolerances, defaults).
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("f64 conversion")
    }

    /// Conversion from raw integer quantity units.
    fn from_units(units: i64) -> Self {
        Self::from_i64(units).expect("i64 conversion")
    }

    /// Primal feasibility tolerance for the simplex engine.
    fn feas_eps() -> Self;

    /// Threshold below which a pivot element counts as zero.
    fn pivot_eps() -> Self;
}

impl Scalar for f32 {
    fn feas_eps() -> Self {
        1e-4
    }
    fn pivot_eps() -> Self {
        1e-5
    }
}

impl Scalar for f64 {
    fn feas_eps() -> Self {
        1e-7
    }
    fn pivot_eps() -> Self {
        1e-9
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_small_integers_exactly() {
        assert_eq!(f64::from_units(25), 25.0);
        assert_eq!(f32::from_units(-3), -3.0);
        assert_eq!(f64::from_f64_lossy(0.5), 0.5);
    }
}
