//! Exact integer primitives: prime tables, factorization, the Möbius
//! function, exact roots and perfect-power tests.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::natural::{big_pow, Natural};

/// Largest sieve (in table entries) built without an explicit budget.
pub const DEFAULT_SIEVE_BUDGET: u64 = 1 << 30;

/// Primes kept resident for trial division.
const TRIAL_TABLE_LIMIT: u64 = 1 << 16;

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    /// Membership test; only meaningful for `p <= limit`.
    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    /// Trial division by the table, continuing past `limit` with odd
    /// candidates when the cofactor still has a factor beyond the table.
    ///
    /// # Panics
    ///
    /// Panics if `n` is zero.
    pub fn factorize<T: Natural>(&self, n: &T) -> Factorization<T> {
        assert!(!n.is_zero(), "factorize: n must be positive");
        let mut rest = n.clone();
        let mut factors = Vec::new();

        let mut divide_out = |rest: &mut T, p: &T| {
            let mut mult = 0u32;
            loop {
                let (q, r) = rest.div_rem(p);
                if !r.is_zero() {
                    break;
                }
                *rest = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((p.clone(), mult));
            }
        };

        for &p in &self.primes {
            let p = T::from_u64(p).expect("table prime fits every Natural");
            if p.clone() * p.clone() > rest {
                break;
            }
            divide_out(&mut rest, &p);
        }

        // Beyond the table: odd trial divisors. Composite candidates never
        // divide because their prime factors are already removed.
        let mut cand = T::from_u64(match self.primes.last() {
            Some(&last) if last > 2 => last + 2,
            _ => 3,
        })
        .expect("small constant fits");
        let two = T::from_u8(2).unwrap();
        if self.primes.is_empty() {
            divide_out(&mut rest, &two);
        }
        while cand.clone() * cand.clone() <= rest {
            divide_out(&mut rest, &cand);
            cand = cand + two.clone();
        }

        if !rest.is_one() {
            factors.push((rest, 1));
        }
        Factorization {
            value: n.clone(),
            factors,
        }
    }
}

/// Sieve of Eratosthenes up to `limit` with the default memory budget.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    sieve_primes_with_budget(limit, DEFAULT_SIEVE_BUDGET)
}

pub fn sieve_primes_with_budget(limit: u64, budget: u64) -> Result<PrimeTable> {
    if limit == 0 {
        return Err(Error::InvalidInput(
            "prime sieve limit must be at least 1".into(),
        ));
    }
    if limit > budget {
        return Err(Error::resource("prime sieve limit", limit, budget));
    }
    if limit < 2 {
        return Ok(PrimeTable {
            limit,
            primes: Vec::new(),
        });
    }
    // Index i stands for the odd number 2i + 1.
    let half = (limit as usize - 1) / 2 + 1;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(prime_count_estimate(limit));
    primes.push(2);
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 1),
    );
    Ok(PrimeTable { limit, primes })
}

fn prime_count_estimate(limit: u64) -> usize {
    let x = limit as f64;
    (1.26 * x / x.ln().max(1.0)) as usize + 1
}

fn trial_table() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| sieve_primes(TRIAL_TABLE_LIMIT).expect("trial table within budget"))
}

/// Canonical factorization `value = Π primeᵐᵘˡᵗ`, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization<T> {
    value: T,
    factors: Vec<(T, u32)>,
}

impl<T: Natural> Factorization<T> {
    pub fn value(&self) -> &T {
        &self.value
    }

    pub fn factors(&self) -> &[(T, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &T> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, m)| m == 1)
    }

    /// Recomputes the value from the factor list.
    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .map(|(p, m)| big_pow(&p.to_big(), u64::from(*m)))
            .product()
    }

    pub fn mobius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Factorization by trial division against a shared prime table.
///
/// # Panics
///
/// Panics if `n` is zero.
pub fn factorize<T: Natural>(n: &T) -> Factorization<T> {
    trial_table().factorize(n)
}

/// Möbius function `μ(d)` for `d >= 1`.
pub fn mobius<T: Natural>(d: &T) -> i8 {
    factorize(d).mobius()
}

/// `μ(1..=limit)` from a linear sieve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusTable {
    values: Vec<i8>,
}

impl MobiusTable {
    pub fn sieve(limit: u64) -> Result<Self> {
        Self::sieve_with_budget(limit, DEFAULT_SIEVE_BUDGET)
    }

    pub fn sieve_with_budget(limit: u64, budget: u64) -> Result<Self> {
        if limit > budget {
            return Err(Error::resource("Möbius table limit", limit, budget));
        }
        let n = limit as usize;
        let mut mu = vec![0i8; n + 1];
        let mut is_composite = vec![false; n + 1];
        let mut primes: Vec<usize> = Vec::new();
        if n >= 1 {
            mu[1] = 1;
        }
        for i in 2..=n {
            if !is_composite[i] {
                primes.push(i);
                mu[i] = -1;
            }
            for &p in &primes {
                let ip = i * p;
                if ip > n {
                    break;
                }
                is_composite[ip] = true;
                if i % p == 0 {
                    mu[ip] = 0;
                    break;
                }
                mu[ip] = -mu[i];
            }
        }
        Ok(MobiusTable { values: mu })
    }

    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// `μ(d)`; `d` must lie in `1..=limit`.
    pub fn get(&self, d: u64) -> i8 {
        assert!(
            d >= 1 && d <= self.limit(),
            "Möbius table index {d} out of range"
        );
        self.values[d as usize]
    }
}

/// `⌊n^{a/alpha}⌋`: the largest `m` with `m^alpha <= n^a`, by binary search
/// over exact big-integer powers.
///
/// # Panics
///
/// Panics unless `n >= 1` and `1 <= a <= alpha`.
pub fn floor_root<T: Natural>(n: &T, a: u32, alpha: u32) -> T {
    assert!(!n.is_zero(), "floor_root: n must be positive");
    assert!(a >= 1 && a <= alpha, "floor_root: need 1 <= a <= alpha");
    if a == alpha {
        return n.clone();
    }
    let big_n = n.to_big();
    let target = big_pow(&big_n, u64::from(a));
    let alpha = u64::from(alpha);
    // n < 2^bits, so the root is below 2^ceil(bits * a / alpha).
    let bits = big_n.bits();
    let hi_bits = (bits * u64::from(a)).div_ceil(alpha);
    let mut lo = BigUint::one();
    let mut hi = std::cmp::min(big_n, BigUint::one() << hi_bits);
    while lo < hi {
        let mid: BigUint = (&lo + &hi + 1u32) >> 1;
        if big_pow(&mid, alpha) <= target {
            lo = mid;
        } else {
            hi = mid - 1u32;
        }
    }
    T::from_big(&lo).expect("root does not exceed n")
}

/// The exact `c`-th root of `n` when `n` is a perfect `c`-th power.
///
/// # Panics
///
/// Panics unless `n >= 1` and `c >= 1`.
pub fn perfect_power_root<T: Natural>(n: &T, c: u32) -> Option<T> {
    assert!(c >= 1, "perfect_power_root: c must be positive");
    let m = floor_root(n, 1, c);
    (big_pow(&m.to_big(), u64::from(c)) == n.to_big()).then_some(m)
}

pub fn is_perfect_power<T: Natural>(n: &T, c: u32) -> bool {
    perfect_power_root(n, c).is_some()
}
