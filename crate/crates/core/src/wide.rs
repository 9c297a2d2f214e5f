//! Exact integer arithmetic.
//!
//! Every routine in this crate is generic over [`Exact`], which is
//! implemented for `i128` (checked, overflow reported as
//! [`Error::Overflow`]) and for [`BigInt`] (never overflows). Top-level
//! entry points run the `i128` kernel first and transparently rerun on
//! `BigInt` when it overflows, see [`run_promoting`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-magnitude signed integer used at API boundaries.
pub type WideInt = BigInt;

/// Exact signed integer arithmetic with explicit overflow reporting.
pub trait Exact: Clone + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_u128(v: u128) -> Result<Self>;
    fn try_add(&self, rhs: &Self) -> Result<Self>;
    fn try_sub(&self, rhs: &Self) -> Result<Self>;
    fn try_mul(&self, rhs: &Self) -> Result<Self>;
    /// Floor division and the matching non-negative remainder; `rhs > 0`.
    fn div_mod_floor(&self, rhs: &Self) -> (Self, Self);
    fn is_negative(&self) -> bool;
    fn is_zero(&self) -> bool;
    fn to_bigint(&self) -> BigInt;
    fn from_bigint(v: &BigInt) -> Result<Self>;
    /// Lossy conversion, only for heuristics and diagnostics.
    fn to_f64(&self) -> f64;

    fn one() -> Self {
        Self::from_i64(1)
    }

    fn try_mul_usize(&self, m: usize) -> Result<Self> {
        self.try_mul(&Self::from_u128(m as u128)?)
    }

    fn from_usize(v: usize) -> Self {
        Self::from_u128(v as u128).expect("usize fits every Exact type")
    }
}

impl Exact for i128 {
    #[inline]
    fn zero() -> Self {
        0
    }

    #[inline]
    fn from_i64(v: i64) -> Self {
        v as i128
    }

    fn from_u128(v: u128) -> Result<Self> {
        i128::try_from(v).map_err(|_| Error::Overflow)
    }

    #[inline]
    fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(*rhs).ok_or(Error::Overflow)
    }

    #[inline]
    fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_sub(*rhs).ok_or(Error::Overflow)
    }

    #[inline]
    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.checked_mul(*rhs).ok_or(Error::Overflow)
    }

    fn div_mod_floor(&self, rhs: &Self) -> (Self, Self) {
        Integer::div_mod_floor(self, rhs)
    }

    #[inline]
    fn is_negative(&self) -> bool {
        *self < 0
    }

    #[inline]
    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn from_bigint(v: &BigInt) -> Result<Self> {
        v.to_i128().ok_or(Error::Overflow)
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Exact for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }

    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn from_u128(v: u128) -> Result<Self> {
        Ok(BigInt::from(v))
    }

    fn try_add(&self, rhs: &Self) -> Result<Self> {
        Ok(self + rhs)
    }

    fn try_sub(&self, rhs: &Self) -> Result<Self> {
        Ok(self - rhs)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        Ok(self * rhs)
    }

    fn div_mod_floor(&self, rhs: &Self) -> (Self, Self) {
        Integer::div_mod_floor(self, rhs)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn from_bigint(v: &BigInt) -> Result<Self> {
        Ok(v.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Sum of a slice, exact.
pub fn try_sum<'a, T: Exact>(values: impl IntoIterator<Item = &'a T>) -> Result<T> {
    values.into_iter().try_fold(T::zero(), |acc, v| acc.try_add(v))
}

/// Largest element, or zero for an empty slice.
pub fn max_or_zero<T: Exact>(values: &[T]) -> T {
    values.iter().max().cloned().unwrap_or_else(T::zero)
}

/// A computation that can run on any [`Exact`] integer type.
pub trait Kernel {
    type Output;

    fn run<T: Exact>(&mut self, costs: &[T]) -> Result<Self::Output>;
}

/// Runs `kernel` with `i128` arithmetic and falls back to `BigInt` if the
/// fixed-width attempt overflows (or the costs do not fit in the first place).
pub fn run_promoting<K: Kernel>(costs: &[BigInt], kernel: &mut K) -> Result<K::Output> {
    let narrow: Option<Vec<i128>> = costs.iter().map(|c| c.to_i128()).collect();
    if let Some(narrow) = narrow {
        match kernel.run(&narrow) {
            Err(Error::Overflow) => {}
            other => return other,
        }
    }
    kernel.run(costs)
}

/// Converts a slice of machine integers into [`WideInt`]s.
pub fn wide_vec<I: Into<BigInt> + Copy>(values: &[I]) -> Vec<WideInt> {
    values.iter().map(|&v| v.into()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i128_overflow_is_reported() {
        assert_eq!(i128::MAX.try_add(&1), Err(Error::Overflow));
        assert_eq!(i128::MIN.try_sub(&1), Err(Error::Overflow));
        assert_eq!((1i128 << 100).try_mul(&(1i128 << 30)), Err(Error::Overflow));
        assert_eq!(<i128 as Exact>::from_u128(u128::MAX), Err(Error::Overflow));
    }

    #[test]
    fn floor_division_has_non_negative_remainder() {
        assert_eq!(Exact::div_mod_floor(&-7i128, &3), (-3, 2));
        let (q, r) = Exact::div_mod_floor(&BigInt::from(-7), &BigInt::from(3));
        assert_eq!((q, r), (BigInt::from(-3), BigInt::from(2)));
    }

    struct Square;

    impl Kernel for Square {
        type Output = BigInt;

        fn run<T: Exact>(&mut self, costs: &[T]) -> Result<BigInt> {
            let mut acc = T::zero();
            for c in costs {
                acc = acc.try_add(&c.try_mul(c)?)?;
            }
            Ok(acc.to_bigint())
        }
    }

    #[test]
    fn promotion_recovers_from_overflow() {
        let big = BigInt::from(1u128 << 100);
        let out = run_promoting(std::slice::from_ref(&big), &mut Square).unwrap();
        assert_eq!(out, &big * &big);
        let small = run_promoting(&wide_vec(&[3i64, 4]), &mut Square).unwrap();
        assert_eq!(small, BigInt::from(25));
    }
}
