//! Generalized lattice-point visibility.
//!
//! A point `n` of `ℕᵏ` is `b`-visible for an exponent vector `b ∈ ℕᵏ` when no
//! real `0 < t < 1` maps `(n₁t^{b₁}, …, n_k t^{b_k})` back into `ℕᵏ`. This crate
//! provides the number-theoretic predicates for integer, positive-rational and
//! signed-rational exponent vectors, brute-force parametric oracles, exact
//! Möbius counts over finite boxes and the `1/ζ(s)` densities they approach.
//!
//! The arithmetic is generic over the coordinate type ([`Natural`]: `u32`,
//! `u64`, `u128`, [`BigUint`]) and the floating-point type used for zeta
//! values (`f32`, `f64`). The aliases below pin the common choices.

pub mod arith;
pub mod counting;
mod error;
mod natural;
pub mod verify;
pub mod visibility;
pub mod zeta;

pub use num_bigint::BigUint;

pub use crate::arith::{
    factorize, floor_root, is_perfect_power, mobius, perfect_power_root, sieve_primes,
    Factorization, MobiusTable, PrimeTable,
};
pub use crate::counting::{
    count_in_box, count_visible_bruteforce, count_visible_int, count_visible_rat,
    count_visible_signed, density_report, BoxSpec, Case, DensityReport,
};
pub use crate::error::{Error, ErrorKind, Result};
pub use crate::natural::Natural;
pub use crate::visibility::{
    gcd_is_one_rational, is_visible_int, is_visible_rat, is_visible_signed,
    oracle_visible_parametric, reduce_b, ExponentVector, Exponents, LatticePoint,
    RationalExponentVector, RationalPoint, Witness,
};
pub use crate::zeta::{inv_zeta, zeta, zeta_euler_product, ZetaValue};

/// Lattice point with arbitrary-precision coordinates.
pub type BigLatticePoint = LatticePoint<BigUint>;
/// Lattice point with machine-word coordinates, for dense enumeration.
pub type LatticePoint64 = LatticePoint<u64>;
/// Base tuple of a restricted-lattice point with arbitrary-precision entries.
pub type BigRationalPoint = RationalPoint<BigUint>;
/// Box with arbitrary-precision edges.
pub type BigBox = BoxSpec<BigUint>;
/// Box with machine-word edges.
pub type Box64 = BoxSpec<u64>;
/// Double-precision zeta evaluation.
pub type Zeta64 = ZetaValue<f64>;
/// Single-precision zeta evaluation.
pub type Zeta32 = ZetaValue<f32>;
