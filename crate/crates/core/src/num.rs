//! Scalar abstraction for the numeric parts of the audit (readability
//! formulas, reading-time estimates, density ratios).

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumCast};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumCast + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts a literal constant. Constants used by the formulas are all
    /// representable (possibly rounded) in every implementor.
    fn lit(value: f64) -> Self {
        <Self as FromPrimitive>::from_f64(value).expect("finite literal")
    }

    /// Converts an occurrence count.
    fn count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("count fits in a float")
    }

    fn to_f64_lossy(self) -> f64 {
        <f64 as NumCast>::from(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `100 * part / whole`, defined as zero when `whole` is zero.
pub fn percent<F: Scalar>(part: usize, whole: usize) -> F {
    if whole == 0 {
        return F::zero();
    }
    F::lit(100.0) * F::count(part) / F::count(whole)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percent_handles_zero_denominator() {
        assert_eq!(percent::<f64>(3, 0), 0.0);
        assert_eq!(percent::<f32>(0, 0), 0.0);
    }

    #[test]
    fn percent_matches_direct_division() {
        let p: f64 = percent(364, 5073);
        assert!((p - 7.175).abs() < 1e-3);
        let q: f32 = percent(1, 8);
        assert_eq!(q, 12.5);
    }
}
