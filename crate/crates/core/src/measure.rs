//! Scalar types for accuracy and quality measures.
//!
//! Measures are ratios of set cardinalities. They are computed generically
//! over any [`Measure`] scalar; the exact [`Ratio`](crate::Ratio) is the
//! default and the one used in reports, while `f32`/`f64` are available for
//! callers that want floating point.

use std::fmt::Debug;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, NumCast, ToPrimitive};

/// A scalar that can represent the quotient of two cardinalities.
pub trait Measure: Num + PartialOrd + Copy + Debug {
    /// `num / den`; `den` must be non-zero.
    fn from_counts(num: usize, den: usize) -> Self;
}

impl Measure for f32 {
    fn from_counts(num: usize, den: usize) -> Self {
        num as f32 / den as f32
    }
}

impl Measure for f64 {
    fn from_counts(num: usize, den: usize) -> Self {
        num as f64 / den as f64
    }
}

impl<T> Measure for Ratio<T>
where
    T: Integer + Clone + Copy + Debug + NumCast,
{
    fn from_counts(num: usize, den: usize) -> Self {
        let cast = |n: usize| T::from(n).expect("cardinality fits the ratio's integer type");
        Ratio::new(cast(num), cast(den))
    }
}

/// Renders `r` in decimal with exactly `places` fractional digits, rounding
/// half away from zero. Works from the exact numerator and denominator.
pub fn decimal<T>(r: &Ratio<T>, places: u32) -> String
where
    T: Clone + Integer + ToPrimitive,
{
    let num = r.numer().to_u128().expect("non-negative ratio");
    let den = r.denom().to_u128().expect("positive denominator");
    let scale = 10u128.pow(places);
    let scaled = num * scale;
    let mut q = scaled / den;
    if 2 * (scaled % den) >= den {
        q += 1;
    }
    if places == 0 {
        return q.to_string();
    }
    format!("{}.{:0width$}", q / scale, q % scale, width = places as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    type R = Ratio<u64>;

    #[test]
    fn counts_reduce() {
        let r = R::from_counts(2, 8);
        assert_eq!((*r.numer(), *r.denom()), (1, 4));
        assert_eq!(R::from_counts(0, 10), R::from_integer(0));
        assert_eq!(f64::from_counts(1, 4), 0.25);
        assert_eq!(f32::from_counts(3, 2), 1.5);
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&R::new(1, 4), 6), "0.250000");
        assert_eq!(decimal(&R::new(1, 3), 6), "0.333333");
        assert_eq!(decimal(&R::new(2, 3), 6), "0.666667");
        assert_eq!(decimal(&R::new(3, 2), 6), "1.500000");
        assert_eq!(decimal(&R::new(0, 1), 6), "0.000000");
        assert_eq!(decimal(&R::new(1, 2), 0), "1");
        assert_eq!(decimal(&R::new(1, 2_000_000), 6), "0.000001");
    }
}
