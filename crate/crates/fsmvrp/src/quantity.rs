//! Exact demand/capacity quantities.
//!
//! Quantities are integer units at a document-declared scale, so demand
//! satisfaction and aggregation checks are exact integer arithmetic; only
//! distances and costs are floating point.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A nonnegative-by-convention quantity in integer units. Arithmetic is plain
/// i64; validation of sign happens at document load, not here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Qty(pub i64);

impl Qty {
    pub const ZERO: Qty = Qty(0);

    pub fn units(self) -> i64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// Ceiling division, the ⌈demand / capacity⌉ pattern used by fleet sizing
    /// and the minimum-visit cuts. Panics on a nonpositive divisor.
    pub fn div_ceil(self, divisor: Qty) -> i64 {
        assert!(divisor.0 > 0, "div_ceil by nonpositive quantity");
        (self.0 + divisor.0 - 1).div_euclid(divisor.0)
    }

    /// Value as a model scalar (coefficients, bounds, rhs).
    pub fn to_scalar<S: Scalar>(self) -> S {
        S::from_units(self.0)
    }
}

impl Add for Qty {
    type Output = Qty;
    fn add(self, rhs: Qty) -> Qty {
        Qty(self.0 + rhs.0)
    }
}

impl AddAssign for Qty {
    fn add_assign(&mut self, rhs: Qty) {
        self.0 += rhs.0;
    }
}

impl Sub for Qty {
    type Output = Qty;
    fn sub(self, rhs: Qty) -> Qty {
        Qty(self.0 - rhs.0)
    }
}

impl SubAssign for Qty {
    fn sub_assign(&mut self, rhs: Qty) {
        self.0 -= rhs.0;
    }
}

impl Mul<i64> for Qty {
    type Output = Qty;
    fn mul(self, rhs: i64) -> Qty {
        Qty(self.0 * rhs)
    }
}

impl Sum for Qty {
    fn sum<I: Iterator<Item = Qty>>(iter: I) -> Qty {
        Qty(iter.map(|q| q.0).sum())
    }
}

impl fmt::Display for Qty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn div_ceil_matches_manual_ceiling() {
        assert_eq!(Qty(25).div_ceil(Qty(10)), 3);
        assert_eq!(Qty(10).div_ceil(Qty(10)), 1);
        assert_eq!(Qty(0).div_ceil(Qty(10)), 0);
        assert_eq!(Qty(35).div_ceil(Qty(15)), 3);
    }

    #[test]
    fn sums_are_exact() {
        let total: Qty = [Qty(3), Qty(1), Qty(2), Qty(4)].into_iter().sum();
        assert_eq!(total, Qty(10));
    }
}
