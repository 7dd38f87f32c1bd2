use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{CheckedMul, FromPrimitive, ToPrimitive, Unsigned};

/// Unsigned integer type usable as a lattice coordinate.
///
/// Fixed-width implementors are fast but may overflow in intermediate
/// powers; every routine in this crate uses checked arithmetic or lifts to
/// [`BigUint`] where a power can exceed the coordinate itself.
pub trait Natural:
    Integer
    + Unsigned
    + Roots
    + CheckedMul
    + Clone
    + Hash
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn to_big(&self) -> BigUint;

    /// `None` when the value does not fit.
    fn from_big(value: &BigUint) -> Option<Self>;
}

macro_rules! impl_natural {
    ($($t:ty),*) => {$(
        impl Natural for $t {
            fn to_big(&self) -> BigUint {
                BigUint::from(*self)
            }

            fn from_big(value: &BigUint) -> Option<Self> {
                <$t>::try_from(value).ok()
            }
        }
    )*};
}

impl_natural!(u32, u64, u128);

impl Natural for BigUint {
    fn to_big(&self) -> BigUint {
        self.clone()
    }

    fn from_big(value: &BigUint) -> Option<Self> {
        Some(value.clone())
    }
}

/// `base^exp`, or `None` on overflow of `T`.
pub(crate) fn checked_pow<T: Natural>(base: &T, exp: u32) -> Option<T> {
    num_traits::checked_pow(base.clone(), exp as usize)
}

pub(crate) fn big_pow(base: &BigUint, exp: u64) -> BigUint {
    num_traits::pow(base.clone(), exp as usize)
}
