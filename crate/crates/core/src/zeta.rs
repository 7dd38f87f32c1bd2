//! `ζ(s)` and `1/ζ(s)` for integer `s >= 2`, with a certified enclosure.
//!
//! The partial sum `S_M = Σ_{n<=M} n^{-s}` is completed by integral bounds on
//! the tail: `∫_{M+1}^∞ x^{-s} dx <= Σ_{n>M} n^{-s} <= ∫_M^∞ x^{-s} dx`. The
//! width of that enclosure is below `M^{-s}`, so `M ≈ tol^{-1/s}` terms
//! suffice.

use num_traits::{Float, FromPrimitive};

use crate::arith::sieve_primes;
use crate::error::{Error, Result};

/// Never sum more terms than this.
pub const MAX_TERMS: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue<F> {
    pub s: u32,
    /// Lower end of the enclosure.
    pub value: F,
    /// `ζ(s) ∈ [value, value + tail_bound]`.
    pub tail_bound: F,
    pub terms: u64,
}

impl<F: Float> ZetaValue<F> {
    pub fn upper(&self) -> F {
        self.value + self.tail_bound
    }

    pub fn contains(&self, x: F) -> bool {
        x >= self.value && x <= self.upper()
    }
}

fn cast<F: FromPrimitive>(x: f64) -> F {
    F::from_f64(x).expect("float conversion")
}

/// `x^{1-s} / (s-1)`.
fn tail_integral<F: Float + FromPrimitive>(x: F, s: u32) -> F {
    let s1 = cast::<F>(f64::from(s - 1));
    x.powf(-s1) / s1
}

pub fn zeta<F: Float + FromPrimitive>(s: u32, tol: F) -> Result<ZetaValue<F>> {
    if s < 2 {
        return Err(Error::Domain { s });
    }
    if tol.is_nan() || tol <= F::zero() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let tol64 = tol.to_f64().expect("finite");
    let terms = (0.5 * tol64).powf(-1.0 / f64::from(s)).ceil().max(1.0);
    if terms > MAX_TERMS as f64 {
        return Err(Error::resource("zeta series terms", terms, MAX_TERMS));
    }
    let terms = terms as u64;

    // Neumaier-compensated, smallest terms first.
    let neg_s = -(s as i32);
    let mut partial = F::zero();
    let mut carry = F::zero();
    for n in (1..=terms).rev() {
        let term = cast::<F>(n as f64).powi(neg_s);
        let t = partial + term;
        carry = carry
            + if partial.abs() >= term {
                (partial - t) + term
            } else {
                (term - t) + partial
            };
        partial = t;
    }
    let partial = partial + carry;
    let m = cast::<F>(terms as f64);
    let lo_tail = tail_integral(m + F::one(), s);
    let hi_tail = tail_integral(m, s);
    // Each term carries at most 2s+2 roundings from `powi`; compensation
    // leaves 2ε plus a second-order term in the sum itself.
    let eps = F::epsilon();
    let per_term = cast::<F>(f64::from(2 * s + 4)) * eps;
    let rounding = (per_term + m * eps * eps) * (partial + hi_tail);
    let tail_bound = (hi_tail - lo_tail) + rounding;
    if tail_bound > tol {
        return Err(Error::InvalidInput(format!(
            "tolerance {tol64:e} is below the attainable precision for zeta({s})"
        )));
    }
    Ok(ZetaValue {
        s,
        value: partial + lo_tail,
        tail_bound,
        terms,
    })
}

/// `1/ζ(s)` within `tol`. Since `ζ(s) >= 1`, an enclosure of width `w` for
/// `ζ` gives one of width at most `w` for the reciprocal; the midpoint of the
/// enclosure is returned.
pub fn inv_zeta<F: Float + FromPrimitive>(s: u32, tol: F) -> Result<F> {
    let z = zeta(s, tol)?;
    let two = F::one() + F::one();
    Ok(F::one() / (z.value + z.tail_bound / two))
}

/// `Π_{p <= prime_limit} (1 - p^{-s})^{-1}`, a lower approximation of `ζ(s)`.
pub fn zeta_euler_product<F: Float + FromPrimitive>(s: u32, prime_limit: u64) -> Result<F> {
    if prime_limit < 2 {
        return Ok(F::one());
    }
    let primes = sieve_primes(prime_limit)?;
    let neg_s = -(s as i32);
    Ok(primes
        .iter()
        .map(|p| F::one() / (F::one() - cast::<F>(p as f64).powi(neg_s)))
        .fold(F::one(), |acc, f| acc * f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_two_encloses_pi_squared_over_six() {
        let z = zeta(2, 1e-9).unwrap();
        let exact = PI * PI / 6.0;
        assert!(z.tail_bound <= 1e-9);
        assert!(z.contains(exact), "{z:?}");
        assert!((z.value - 1.644_934_067).abs() < 1e-9);
    }

    #[test]
    fn zeta_large_s() {
        let z = zeta::<f64>(20, 1e-12).unwrap();
        assert!(z.value > 1.0 && z.upper() < 1.0 + 2.0 * 2f64.powi(-20));
    }

    #[test]
    fn zeta_domain() {
        assert_eq!(zeta::<f64>(1, 1e-6), Err(Error::Domain { s: 1 }));
        assert_eq!(zeta::<f64>(0, 1e-6), Err(Error::Domain { s: 0 }));
        assert!(zeta::<f64>(2, 0.0).is_err());
        assert!(zeta::<f64>(2, -1.0).is_err());
    }

    #[test]
    fn f32_precision_limit_is_reported() {
        assert!(zeta::<f32>(3, 1e-4).is_ok());
        assert!(zeta::<f32>(2, 1e-12).is_err());
    }

    #[test]
    fn inv_zeta_values() {
        // 6/π² and high-precision reciprocals of ζ(3), ζ(5).
        let cases = [
            (2, 6.0 / (PI * PI)),
            (3, 0.831_907_372_580_707),
            (5, 0.964_387_340_429_262),
        ];
        for (s, expected) in cases {
            assert!(
                (inv_zeta(s, 1e-12).unwrap() - expected).abs() < 1e-11,
                "s={s}"
            );
        }
        let single: f32 = inv_zeta(2, 1e-3).unwrap();
        assert!((f64::from(single) - 6.0 / (PI * PI)).abs() < 1e-3);
    }

    #[test]
    fn inv_zeta_increasing() {
        let vals: Vec<f64> = (2..=10).map(|s| inv_zeta(s, 1e-12).unwrap()).collect();
        assert!(vals.iter().all(|&v| v > 0.0 && v <= 1.0));
        assert!(vals.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn euler_product_examples() {
        assert!((zeta_euler_product::<f64>(2, 2).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(zeta_euler_product::<f64>(7, 1).unwrap(), 1.0);
        assert_eq!(zeta_euler_product::<f64>(7, 0).unwrap(), 1.0);
        let e = zeta_euler_product::<f64>(2, 100_000).unwrap();
        assert!((e - PI * PI / 6.0).abs() < 1e-4);
    }

    #[test]
    fn euler_product_bounded_and_monotone() {
        for s in [2, 3, 5] {
            let series = zeta::<f64>(s, 1e-12).unwrap();
            let mut prev = 1.0;
            for limit in [2, 10, 100, 1000, 10_000] {
                let e = zeta_euler_product::<f64>(s, limit).unwrap();
                assert!(e >= prev && e <= series.upper(), "s={s} P={limit}");
                prev = e;
            }
        }
    }
}
