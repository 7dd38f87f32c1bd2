//! Visibility predicates for integer, positive-rational and signed-rational
//! exponent vectors, and brute-force parametric oracles that decide the same
//! question straight from the curve definition.
//!
//! Integer case: `n ∈ ℕᵏ` is `b`-visible iff no `0 < t < 1` puts
//! `(n₁t^{b₁}, …, n_k t^{b_k})` in `ℕᵏ`. After dividing `b` by its gcd this is
//! equivalent to: no prime `p` has `p^{bᵢ} | nᵢ` for every `i`.
//!
//! Rational case: with `α = lcm(aᵢ)` only points of the restricted lattice
//! `ℕ_{α/a₁} × … × ℕ_{α/a_k}` are considered, each written as
//! `(ℓ₁^{α/a₁}, …, ℓ_k^{α/a_k})`. Predicates take the base tuple `ℓ`
//! ([`RationalPoint`]); the expanded coordinates can be astronomically large.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::arith::{factorize, perfect_power_root};
use crate::error::{Error, Result};
use crate::natural::{big_pow, checked_pow, Natural};

/// Search-space bound for the parametric oracles: the total number of
/// candidate coordinate values tabulated.
pub const DEFAULT_ORACLE_LIMIT: u64 = 1_000_000;

/// Integer exponent vector `b ∈ ℕᵏ` with its gcd cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    entries: Vec<u32>,
    gcd: u32,
}

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput(
                "exponent vector must be non-empty".into(),
            ));
        }
        if entries.contains(&0) {
            return Err(Error::InvalidInput(
                "integer exponents must be positive".into(),
            ));
        }
        let gcd = entries.iter().fold(0u32, |g, &b| g.gcd(&b));
        Ok(ExponentVector { entries, gcd })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn gcd(&self) -> u32 {
        self.gcd
    }

    pub fn sum(&self) -> u64 {
        self.entries.iter().map(|&b| u64::from(b)).sum()
    }

    pub fn min(&self) -> u32 {
        *self.entries.iter().min().expect("non-empty")
    }

    /// `b / gcd(b)`.
    pub fn reduced(&self) -> ExponentVector {
        ExponentVector {
            entries: self.entries.iter().map(|&b| b / self.gcd).collect(),
            gcd: 1,
        }
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.entries)
    }
}

/// Divides `b` by the gcd of its entries; visibility is unchanged.
pub fn reduce_b(b: &ExponentVector) -> ExponentVector {
    b.reduced()
}

/// Signed rational exponents `bᵢ/aᵢ`, `aᵢ > 0`, each in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalExponentVector {
    entries: Vec<Ratio<i64>>,
    alpha: u32,
    negative: Vec<usize>,
}

impl RationalExponentVector {
    pub fn new(entries: Vec<Ratio<i64>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput(
                "exponent vector must be non-empty".into(),
            ));
        }
        let mut alpha: u64 = 1;
        for r in &entries {
            if r.is_zero() {
                return Err(Error::InvalidInput(
                    "rational exponents must be nonzero".into(),
                ));
            }
            if r.numer().unsigned_abs() > u64::from(u32::MAX) {
                return Err(Error::InvalidInput(format!(
                    "exponent numerator {} too large",
                    r.numer()
                )));
            }
            alpha = alpha.lcm(&r.denom().unsigned_abs());
            if alpha > u64::from(u32::MAX) {
                return Err(Error::InvalidInput(
                    "lcm of exponent denominators too large".into(),
                ));
            }
        }
        let negative = entries
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_negative())
            .map(|(i, _)| i)
            .collect();
        Ok(RationalExponentVector {
            entries,
            alpha: alpha as u32,
            negative,
        })
    }

    /// Builds from `(numerator, denominator)` pairs, reducing each fraction.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        let entries = pairs
            .iter()
            .map(|&(b, a)| {
                if a == 0 {
                    Err(Error::InvalidInput("zero denominator".into()))
                } else {
                    Ok(Ratio::new(b, a))
                }
            })
            .collect::<Result<_>>()?;
        Self::new(entries)
    }

    pub fn entries(&self) -> &[Ratio<i64>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn numerators(&self) -> Vec<i64> {
        self.entries.iter().map(|r| *r.numer()).collect()
    }

    pub fn denominators(&self) -> Vec<u32> {
        self.entries.iter().map(|r| *r.denom() as u32).collect()
    }

    /// `|bᵢ|` for every coordinate.
    pub fn abs_numerators(&self) -> Vec<u32> {
        self.entries
            .iter()
            .map(|r| r.numer().unsigned_abs() as u32)
            .collect()
    }

    /// `α = lcm(a₁, …, a_k)`.
    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// `α / aᵢ`: the power that maps a base entry to its lattice coordinate.
    pub fn lattice_exponents(&self) -> Vec<u32> {
        self.denominators()
            .iter()
            .map(|&a| self.alpha / a)
            .collect()
    }

    /// The index set `J` of negative entries.
    pub fn negative_indices(&self) -> &[usize] {
        &self.negative
    }

    pub fn all_positive(&self) -> bool {
        self.negative.is_empty()
    }

    /// `Σ_{j∈J} |b_j|`.
    pub fn negative_exponent_sum(&self) -> u64 {
        self.negative
            .iter()
            .map(|&j| self.entries[j].numer().unsigned_abs())
            .sum()
    }

    /// `Σ |bᵢ|`.
    pub fn numerator_sum(&self) -> u64 {
        self.entries.iter().map(|r| r.numer().unsigned_abs()).sum()
    }

    /// Integer vector when every entry is a positive integer.
    pub fn as_integer(&self) -> Option<ExponentVector> {
        if self.all_positive() && self.alpha == 1 {
            ExponentVector::new(self.abs_numerators()).ok()
        } else {
            None
        }
    }

    pub fn gcd_is_one(&self) -> bool {
        gcd_is_one_rational(self)
    }

    fn require_gcd_one(&self) -> Result<()> {
        if self.gcd_is_one() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "no integer combination of the entries of {self} equals 1"
            )))
        }
    }
}

impl From<&ExponentVector> for RationalExponentVector {
    fn from(b: &ExponentVector) -> Self {
        RationalExponentVector {
            entries: b
                .entries
                .iter()
                .map(|&e| Ratio::from_integer(i64::from(e)))
                .collect(),
            alpha: 1,
            negative: Vec::new(),
        }
    }
}

impl fmt::Display for RationalExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.entries)
    }
}

/// Whether 1 lies in the integer span of the entries `bᵢ/aᵢ`.
///
/// The span is generated by `g/α` with `g = gcd(bᵢ·α/aᵢ)`, so the answer is
/// `g | α`.
pub fn gcd_is_one_rational(b: &RationalExponentVector) -> bool {
    let alpha = i128::from(b.alpha);
    let g = b
        .entries
        .iter()
        .map(|r| i128::from(r.numer().abs()) * (alpha / i128::from(*r.denom())))
        .fold(0i128, |g, x| g.gcd(&x));
    alpha % g == 0
}

/// Either kind of exponent vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exponents {
    Integer(ExponentVector),
    Rational(RationalExponentVector),
}

impl Exponents {
    pub fn len(&self) -> usize {
        match self {
            Exponents::Integer(b) => b.len(),
            Exponents::Rational(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_rational(&self) -> RationalExponentVector {
        match self {
            Exponents::Integer(b) => b.into(),
            Exponents::Rational(b) => b.clone(),
        }
    }

    /// Entries rendered as `"b"` or `"b/a"`.
    pub fn entry_strings(&self) -> Vec<String> {
        match self {
            Exponents::Integer(b) => b.entries.iter().map(u32::to_string).collect(),
            Exponents::Rational(b) => b.entries.iter().map(Ratio::to_string).collect(),
        }
    }
}

impl fmt::Display for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponents::Integer(b) => b.fmt(f),
            Exponents::Rational(b) => b.fmt(f),
        }
    }
}

/// A point of `ℕᵏ`, all coordinates positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePoint<T> {
    coords: Vec<T>,
}

impl<T: Natural> LatticePoint<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput(
                "lattice point must have at least one coordinate".into(),
            ));
        }
        if coords.iter().any(Zero::is_zero) {
            return Err(Error::InvalidInput(
                "lattice coordinates must be positive".into(),
            ));
        }
        Ok(LatticePoint { coords })
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl<T: fmt::Display> fmt::Display for LatticePoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.coords)
    }
}

/// Base tuple `ℓ` of the restricted-lattice point `(ℓᵢ^{α/aᵢ})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint<T> {
    base: Vec<T>,
}

impl<T: Natural> RationalPoint<T> {
    pub fn new(base: Vec<T>) -> Result<Self> {
        let p = LatticePoint::new(base)?;
        Ok(RationalPoint { base: p.coords })
    }

    /// Recovers the base tuple from expanded coordinates, rejecting points
    /// off `ℕ_{α/a₁} × … × ℕ_{α/a_k}`.
    pub fn from_expanded(point: &LatticePoint<T>, b: &RationalExponentVector) -> Result<Self> {
        check_dim(b.len(), point.dim())?;
        let base = point
            .coords()
            .iter()
            .zip(b.lattice_exponents())
            .enumerate()
            .map(|(i, (n, c))| {
                perfect_power_root(n, c).ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "coordinate {} = {n} is not a perfect {c}-th power, so the point is off the restricted lattice",
                        i + 1
                    ))
                })
            })
            .collect::<Result<_>>()?;
        Ok(RationalPoint { base })
    }

    pub fn base(&self) -> &[T] {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// The lattice point `(ℓᵢ^{α/aᵢ})`.
    pub fn expanded(&self, b: &RationalExponentVector) -> LatticePoint<BigUint> {
        LatticePoint {
            coords: self
                .base
                .iter()
                .zip(b.lattice_exponents())
                .map(|(l, c)| big_pow(&l.to_big(), u64::from(c)))
                .collect(),
        }
    }
}

impl<T: fmt::Display> fmt::Display for RationalPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.base)
    }
}

/// Certificate of invisibility: a prime and the image point it produces.
///
/// For the integer predicate `image` is a lattice point. For the rational
/// and signed predicates it is a base tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<T> {
    pub prime: T,
    pub image: Vec<T>,
}

/// Smallest prime `p` with `p^{eᵢ} | xᵢ` for every `i`. Any such prime
/// divides `gcd(x)`, so only the factors of the gcd are tried.
fn prime_power_witness<T: Natural>(coords: &[T], exps: &[u32]) -> Option<T> {
    let g = coords.iter().fold(T::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return None;
    }
    factorize(&g).primes().find_map(|p| {
        coords
            .iter()
            .zip(exps)
            .all(|(x, &e)| checked_pow(p, e).is_some_and(|q| (x.clone() % q).is_zero()))
            .then(|| p.clone())
    })
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn divide_by_power<T: Natural>(x: &T, p: &T, e: u32) -> T {
    x.clone() / checked_pow(p, e).expect("p^e divides x, so it fits")
}

/// Invisibility witness for an integer exponent vector, after reducing `b`
/// by its gcd. `None` means the point is visible.
pub fn witness_int<T: Natural>(
    n: &LatticePoint<T>,
    b: &ExponentVector,
) -> Result<Option<Witness<T>>> {
    check_dim(b.len(), n.dim())?;
    let reduced = b.reduced();
    Ok(prime_power_witness(n.coords(), reduced.entries()).map(|p| {
        let image = n
            .coords()
            .iter()
            .zip(reduced.entries())
            .map(|(x, &e)| divide_by_power(x, &p, e))
            .collect();
        Witness { prime: p, image }
    }))
}

/// `true` iff no prime `p` has `p^{b'ᵢ} | nᵢ` for all `i`, `b' = b / gcd(b)`.
pub fn is_visible_int<T: Natural>(n: &LatticePoint<T>, b: &ExponentVector) -> Result<bool> {
    witness_int(n, b).map(|w| w.is_none())
}

/// Invisibility witness for positive rational exponents. The image is the
/// base tuple `(ℓᵢ / p^{bᵢ})`.
pub fn witness_rat<T: Natural>(
    l: &RationalPoint<T>,
    b: &RationalExponentVector,
) -> Result<Option<Witness<T>>> {
    check_dim(b.len(), l.dim())?;
    if !b.all_positive() {
        return Err(Error::Precondition(format!(
            "{b} has negative entries; use the signed predicate"
        )));
    }
    b.require_gcd_one()?;
    let exps = b.abs_numerators();
    Ok(prime_power_witness(l.base(), &exps).map(|p| {
        let image = l
            .base()
            .iter()
            .zip(&exps)
            .map(|(x, &e)| divide_by_power(x, &p, e))
            .collect();
        Witness { prime: p, image }
    }))
}

/// Visibility of `(ℓᵢ^{α/aᵢ})` for `b ∈ ℚ_{>0}ᵏ`: the base tuple `ℓ` must be
/// visible for the numerators `(b₁, …, b_k)`.
pub fn is_visible_rat<T: Natural>(
    l: &RationalPoint<T>,
    b: &RationalExponentVector,
) -> Result<bool> {
    witness_rat(l, b).map(|w| w.is_none())
}

/// Invisibility witness for signed exponents. Only coordinates in `J` are
/// constrained; in the image they shrink to `ℓ_j / p^{|b_j|}` while the
/// others grow to `ℓ_h · p^{b_h}`.
pub fn witness_signed<T: Natural>(
    l: &RationalPoint<T>,
    b: &RationalExponentVector,
) -> Result<Option<Witness<T>>> {
    check_dim(b.len(), l.dim())?;
    b.require_gcd_one()?;
    let exps = b.abs_numerators();
    let j_coords: Vec<T> = b
        .negative_indices()
        .iter()
        .map(|&j| l.base()[j].clone())
        .collect();
    let j_exps: Vec<u32> = b.negative_indices().iter().map(|&j| exps[j]).collect();
    // J = ∅ gives a vacuous condition: always visible.
    let Some(p) = prime_power_witness(&j_coords, &j_exps) else {
        return Ok(None);
    };
    let image = l
        .base()
        .iter()
        .zip(&exps)
        .enumerate()
        .map(|(i, (x, &e))| {
            if b.negative_indices().contains(&i) {
                divide_by_power(x, &p, e)
            } else {
                // Saturate instead of overflowing a fixed-width T: the image
                // is informational only.
                checked_pow(&p, e)
                    .and_then(|q| x.checked_mul(&q))
                    .unwrap_or_else(|| x.clone())
            }
        })
        .collect();
    Ok(Some(Witness { prime: p, image }))
}

/// `false` iff some prime `p` has `p^{|b_j|} | ℓ_j` for all `j ∈ J`.
pub fn is_visible_signed<T: Natural>(
    l: &RationalPoint<T>,
    b: &RationalExponentVector,
) -> Result<bool> {
    witness_signed(l, b).map(|w| w.is_none())
}

// ---------------------------------------------------------------------------
// Parametric oracles. These never factor anything: they enumerate candidate
// image points and compare the curve parameter they imply, exactly.

fn oracle_budget(cost: u64, limit: u64) -> Result<()> {
    if cost > limit {
        Err(Error::resource("oracle search space", cost, limit))
    } else {
        Ok(())
    }
}

/// Sorted table `[v^e for v in 1..=n]` (index `v - 1`).
fn power_table(values: impl Iterator<Item = BigUint>, e: u64) -> Vec<BigUint> {
    values.map(|v| big_pow(&v, e)).collect()
}

/// Position of `target` in an increasing table.
fn find_in(table: &[BigUint], target: &BigUint) -> Option<usize> {
    table.binary_search(target).ok()
}

/// Brute-force verdict straight from the curve definition.
///
/// A witness is an image point `m ≠ n` with `1 <= mᵢ <= nᵢ` whose implied
/// parameters `tᵢ = (mᵢ/nᵢ)^{1/bᵢ}` all coincide. With `L = lcm(b)` the
/// comparison is the exact identity `mᵢ^{L/bᵢ} n₀^{L/b₀} = m₀^{L/b₀} nᵢ^{L/bᵢ}`,
/// which also catches irrational `t`. Fixing `m₀` determines every other
/// `mᵢ`, so each is located by binary search in a table of powers.
pub fn oracle_witness_parametric<T: Natural>(
    n: &LatticePoint<T>,
    b: &ExponentVector,
    limit: u64,
) -> Result<Option<Vec<T>>> {
    check_dim(b.len(), n.dim())?;
    let coords: Vec<u64> = n
        .coords()
        .iter()
        .map(|x| x.to_u64().unwrap_or(u64::MAX))
        .collect();
    let cost = coords.iter().fold(0u64, |acc, &x| acc.saturating_add(x));
    oracle_budget(cost, limit)?;

    let lcm = b.entries().iter().fold(1u64, |l, &e| l.lcm(&u64::from(e)));
    let exps: Vec<u64> = b.entries().iter().map(|&e| lcm / u64::from(e)).collect();
    let tables: Vec<Vec<BigUint>> = coords
        .iter()
        .zip(&exps)
        .map(|(&x, &e)| power_table((1..=x).map(BigUint::from), e))
        .collect();
    let top = |i: usize| &tables[i][coords[i] as usize - 1];

    'first: for m0 in 1..coords[0] {
        let lhs0 = &tables[0][m0 as usize - 1];
        let mut image = vec![m0];
        for i in 1..coords.len() {
            // mᵢ^{eᵢ} · n₀^{e₀} = m₀^{e₀} · nᵢ^{eᵢ}
            let rhs = lhs0 * top(i);
            let (q, r) = rhs.div_rem(top(0));
            if !r.is_zero() {
                continue 'first;
            }
            match find_in(&tables[i], &q) {
                Some(idx) => image.push(idx as u64 + 1),
                None => continue 'first,
            }
        }
        return Ok(Some(
            image.into_iter().map(|v| T::from_u64(v).unwrap()).collect(),
        ));
    }
    Ok(None)
}

/// [`oracle_witness_parametric`] with the default search bound.
pub fn oracle_visible_parametric<T: Natural>(
    n: &LatticePoint<T>,
    b: &ExponentVector,
) -> Result<bool> {
    oracle_witness_parametric(n, b, DEFAULT_ORACLE_LIMIT).map(|w| w.is_none())
}

/// Parametric oracle for positive rational exponents, on expanded
/// coordinates `n` of the restricted lattice.
///
/// Candidate images are restricted-lattice points `mᵢ = vᵢ^{α/aᵢ}` with
/// `vᵢ <= ℓᵢ`. The parameter is `t = (mᵢ/nᵢ)^{aᵢ/bᵢ}`; with `L = lcm(bᵢ)` the
/// exponents `eᵢ = aᵢL/bᵢ` are integers and agreement of all `t` is
/// `mᵢ^{eᵢ} n₀^{e₀} = m₀^{e₀} nᵢ^{eᵢ}`.
pub fn oracle_witness_rational<T: Natural>(
    n: &LatticePoint<T>,
    b: &RationalExponentVector,
    limit: u64,
) -> Result<Option<Vec<BigUint>>> {
    check_dim(b.len(), n.dim())?;
    if !b.all_positive() {
        return Err(Error::Precondition(format!("{b} has negative entries")));
    }
    let base = RationalPoint::from_expanded(n, b)?;
    let bases: Vec<u64> = base
        .base()
        .iter()
        .map(|x| x.to_u64().unwrap_or(u64::MAX))
        .collect();
    oracle_budget(bases.iter().fold(0u64, |a, &x| a.saturating_add(x)), limit)?;

    let nums = b.abs_numerators();
    let dens = b.denominators();
    let lattice = b.lattice_exponents();
    let lcm = nums.iter().fold(1u64, |l, &e| l.lcm(&u64::from(e)));
    let exps: Vec<u64> = nums
        .iter()
        .zip(&dens)
        .map(|(&num, &den)| u64::from(den) * lcm / u64::from(num))
        .collect();
    // tables[i][v - 1] = (v^{α/aᵢ})^{eᵢ}, images m written in lattice form.
    let tables: Vec<Vec<BigUint>> = (0..b.len())
        .map(|i| {
            let values = (1..=bases[i]).map(|v| big_pow(&BigUint::from(v), u64::from(lattice[i])));
            power_table(values, exps[i])
        })
        .collect();
    let top: Vec<BigUint> = n
        .coords()
        .iter()
        .zip(&exps)
        .map(|(x, &e)| big_pow(&x.to_big(), e))
        .collect();

    'first: for v0 in 1..bases[0] {
        let lhs0 = &tables[0][v0 as usize - 1];
        let mut image = vec![big_pow(&BigUint::from(v0), u64::from(lattice[0]))];
        for i in 1..b.len() {
            let (q, r) = (lhs0 * &top[i]).div_rem(&top[0]);
            if !r.is_zero() {
                continue 'first;
            }
            match find_in(&tables[i], &q) {
                Some(idx) => image.push(big_pow(
                    &BigUint::from(idx as u64 + 1),
                    u64::from(lattice[i]),
                )),
                None => continue 'first,
            }
        }
        return Ok(Some(image));
    }
    Ok(None)
}

pub fn oracle_visible_rational<T: Natural>(
    n: &LatticePoint<T>,
    b: &RationalExponentVector,
) -> Result<bool> {
    oracle_witness_rational(n, b, DEFAULT_ORACLE_LIMIT).map(|w| w.is_none())
}

/// Parametric oracle for signed exponents, on expanded coordinates.
///
/// Invisibility is witnessed by a parameter `t > 1` moving the point to
/// another restricted-lattice point: coordinates in `J` shrink, the others
/// grow. The first `J` coordinate `j₀` is enumerated over smaller lattice
/// values `m_{j₀}`; that fixes `r = n_{j₀}/m_{j₀} = t^{|b_{j₀}|/a_{j₀}}`. Each
/// other `J` coordinate is located by exact cross-powers and each coordinate
/// `h ∉ J` is computed as `y = n_h · r^{P/Q}` and accepted iff it is an
/// integer and a perfect `α/a_h`-th power. `J = ∅` is reported visible.
pub fn oracle_witness_signed<T: Natural>(
    n: &LatticePoint<T>,
    b: &RationalExponentVector,
    limit: u64,
) -> Result<Option<Vec<BigUint>>> {
    check_dim(b.len(), n.dim())?;
    let Some(&j0) = b.negative_indices().first() else {
        return Ok(None);
    };
    let base = RationalPoint::from_expanded(n, b)?;
    let bases: Vec<u64> = base
        .base()
        .iter()
        .map(|x| x.to_u64().unwrap_or(u64::MAX))
        .collect();
    let cost = b
        .negative_indices()
        .iter()
        .fold(0u64, |a, &j| a.saturating_add(bases[j]));
    oracle_budget(cost, limit)?;

    let nums = b.abs_numerators();
    let dens = b.denominators();
    let lattice = b.lattice_exponents();
    let coords: Vec<BigUint> = n.coords().iter().map(Natural::to_big).collect();
    let j_set = b.negative_indices();
    let lcm = j_set.iter().fold(1u64, |l, &j| l.lcm(&u64::from(nums[j])));
    // (n_j/m_j)^{e_j} agree across J, e_j = a_j L / |b_j|.
    let exps: Vec<u64> = (0..b.len())
        .map(|i| u64::from(dens[i]) * lcm / u64::from(nums[i]))
        .collect();
    let table = |j: usize| -> Vec<BigUint> {
        let values = (1..=bases[j]).map(|v| big_pow(&BigUint::from(v), u64::from(lattice[j])));
        power_table(values, exps[j])
    };
    let tables: Vec<(usize, Vec<BigUint>)> = j_set.iter().map(|&j| (j, table(j))).collect();
    let top = |j: usize| big_pow(&coords[j], exps[j]);
    let top_j0 = top(j0);

    'first: for v0 in 1..bases[j0] {
        let m0 = big_pow(&BigUint::from(v0), u64::from(lattice[j0]));
        let mut image: Vec<Option<BigUint>> = vec![None; b.len()];
        image[j0] = Some(m0.clone());
        let m0_pow = &tables[0].1[v0 as usize - 1];
        for (j, tab) in tables.iter().skip(1) {
            // (n_j/m_j)^{e_j} = (n₀/m₀)^{e₀}  ⇔  m_j^{e_j} · n₀^{e₀} = n_j^{e_j} · m₀^{e₀}
            let (q, r) = (top(*j) * m0_pow).div_rem(&top_j0);
            if !r.is_zero() {
                continue 'first;
            }
            match find_in(tab, &q) {
                Some(idx) => {
                    image[*j] = Some(big_pow(
                        &BigUint::from(idx as u64 + 1),
                        u64::from(lattice[*j]),
                    ))
                }
                None => continue 'first,
            }
        }
        for h in (0..b.len()).filter(|h| !j_set.contains(h)) {
            // y = n_h · (n_{j₀}/m_{j₀})^{P/Q}, P/Q = (b_h a_{j₀}) / (a_h |b_{j₀}|)
            let exponent = Ratio::new(
                u64::from(nums[h]) * u64::from(dens[j0]),
                u64::from(dens[h]) * u64::from(nums[j0]),
            );
            let (p, q) = (*exponent.numer(), *exponent.denom());
            let numer = big_pow(&coords[h], q) * big_pow(&coords[j0], p);
            let denom = big_pow(&m0, p);
            let (y_q, r) = numer.div_rem(&denom);
            if !r.is_zero() {
                continue 'first;
            }
            let Some(y) = perfect_power_root(&y_q, q as u32) else {
                continue 'first;
            };
            if perfect_power_root(&y, lattice[h]).is_none() {
                continue 'first;
            }
            image[h] = Some(y);
        }
        return Ok(Some(image.into_iter().map(Option::unwrap).collect()));
    }
    Ok(None)
}

pub fn oracle_visible_signed<T: Natural>(
    n: &LatticePoint<T>,
    b: &RationalExponentVector,
) -> Result<bool> {
    oracle_witness_signed(n, b, DEFAULT_ORACLE_LIMIT).map(|w| w.is_none())
}

fn write_tuple<D: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[D]) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ev(e: &[u32]) -> ExponentVector {
        ExponentVector::new(e.to_vec()).unwrap()
    }

    fn pt(c: &[u64]) -> LatticePoint<u64> {
        LatticePoint::new(c.to_vec()).unwrap()
    }

    fn rev(p: &[(i64, i64)]) -> RationalExponentVector {
        RationalExponentVector::from_pairs(p).unwrap()
    }

    fn rp(c: &[u64]) -> RationalPoint<u64> {
        RationalPoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_b(&ev(&[2, 4])).entries(), &[1, 2]);
        assert_eq!(reduce_b(&ev(&[1, 1, 1])).entries(), &[1, 1, 1]);
        assert_eq!(reduce_b(&ev(&[6, 9, 15])).entries(), &[2, 3, 5]);
        assert_eq!(ev(&[6, 9, 15]).gcd(), 3);
    }

    #[test]
    fn exponent_vector_rejects_bad_input() {
        assert!(ExponentVector::new(vec![]).is_err());
        assert!(ExponentVector::new(vec![1, 0]).is_err());
        assert!(RationalExponentVector::from_pairs(&[(0, 1)]).is_err());
        assert!(RationalExponentVector::from_pairs(&[(1, 0)]).is_err());
        assert!(LatticePoint::<u64>::new(vec![1, 0]).is_err());
    }

    #[test]
    fn rational_vector_metadata() {
        let b = rev(&[(2, 3), (1, 2), (-4, 6)]);
        assert_eq!(b.numerators(), vec![2, 1, -2]);
        assert_eq!(b.denominators(), vec![3, 2, 3]);
        assert_eq!(b.alpha(), 6);
        assert_eq!(b.negative_indices(), &[2]);
        assert_eq!(b.lattice_exponents(), vec![2, 3, 2]);
        assert_eq!(b.negative_exponent_sum(), 2);
        assert_eq!(b.to_string(), "(2/3,1/2,-2/3)");
    }

    #[test]
    fn gcd_one_examples() {
        assert!(gcd_is_one_rational(&rev(&[(1, 2), (1, 2)])));
        assert!(!gcd_is_one_rational(&rev(&[(2, 1), (4, 1)])));
        assert!(gcd_is_one_rational(&rev(&[(2, 3), (1, 2)])));
        assert!(gcd_is_one_rational(&rev(&[(1, 1), (-2, 1)])));
        assert!(!gcd_is_one_rational(&rev(&[(2, 3), (2, 5)])));
    }

    /// Exhaustive search for integers m with Σ mᵢ·bᵢ = 1.
    fn span_contains_one(b: &RationalExponentVector, range: i64) -> bool {
        let entries = b.entries();
        let mut coeffs = vec![-range; entries.len()];
        loop {
            let s: Ratio<i64> = coeffs
                .iter()
                .zip(entries)
                .map(|(&m, r)| r * Ratio::from_integer(m))
                .sum();
            if s.is_one() {
                return true;
            }
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    return false;
                }
                coeffs[i] += 1;
                if coeffs[i] <= range {
                    break;
                }
                coeffs[i] = -range;
                i += 1;
            }
        }
    }

    #[test]
    fn gcd_one_agrees_with_coefficient_search() {
        let fracs = [
            (1, 1),
            (2, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (-2, 1),
            (4, 3),
            (-3, 2),
            (6, 5),
        ];
        for &x in &fracs {
            for &y in &fracs {
                let b = rev(&[x, y]);
                assert_eq!(gcd_is_one_rational(&b), span_contains_one(&b, 12), "{b}");
            }
        }
    }

    #[test]
    fn integer_predicate_examples() {
        let b = ev(&[2, 4, 3, 7]);
        let w = witness_int(&pt(&[4, 16, 40, 128]), &b).unwrap().unwrap();
        assert_eq!(w.prime, 2);
        assert_eq!(w.image, vec![1, 1, 5, 1]);
        assert!(is_visible_int(&pt(&[1, 1, 5, 1]), &b).unwrap());
        assert!(!is_visible_int(&pt(&[2, 4]), &ev(&[2, 4])).unwrap());
        assert!(is_visible_int(&pt(&[1, 1, 1]), &ev(&[5, 2, 9])).unwrap());
        assert_eq!(
            is_visible_int(&pt(&[1, 1]), &ev(&[1, 1, 1])),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn integer_predicate_big_coordinates() {
        let p = BigUint::from(1_000_003u64);
        let n = LatticePoint::new(vec![p.pow(2u32) * 7u32, p.pow(3u32)]).unwrap();
        let w = witness_int(&n, &ev(&[2, 3])).unwrap().unwrap();
        assert_eq!(w.prime, p);
        assert_eq!(w.image, vec![BigUint::from(7u32), BigUint::one()]);
        let n = LatticePoint::new(vec![p.pow(1u32), p.pow(3u32)]).unwrap();
        assert!(is_visible_int(&n, &ev(&[2, 3])).unwrap());
    }

    #[test]
    fn u32_coordinates_do_not_overflow() {
        // 65521^2 overflows u32; the witness search must treat it as "too big".
        let n = LatticePoint::new(vec![65_521u32, 65_521u32]).unwrap();
        assert!(is_visible_int(&n, &ev(&[2, 1])).unwrap());
        assert!(!is_visible_int(&n, &ev(&[1, 1])).unwrap());
    }

    #[test]
    fn rational_predicate_examples() {
        let b = rev(&[(1, 2), (1, 2)]);
        assert!(!is_visible_rat(&rp(&[2, 4]), &b).unwrap());
        assert!(is_visible_rat(&rp(&[2, 3]), &b).unwrap());
        assert!(is_visible_rat(&rp(&[1, 1]), &rev(&[(2, 3), (1, 2)])).unwrap());
        assert!(matches!(
            is_visible_rat(&rp(&[2, 3]), &rev(&[(2, 1), (4, 1)])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            is_visible_rat(&rp(&[2, 3]), &rev(&[(1, 1), (-2, 1)])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn signed_predicate_examples() {
        let b = rev(&[(1, 1), (-2, 1)]);
        let w = witness_signed(&rp(&[5, 4]), &b).unwrap().unwrap();
        assert_eq!(w.prime, 2);
        assert_eq!(w.image, vec![10, 1]);
        assert!(is_visible_signed(&rp(&[5, 6]), &b).unwrap());
        assert!(is_visible_signed(&rp(&[1, 1, 1]), &rev(&[(3, 1), (-2, 1), (-3, 1)])).unwrap());
        // J = ∅: vacuously visible.
        assert!(is_visible_signed(&rp(&[4, 8]), &rev(&[(1, 1), (1, 1)])).unwrap());
        assert!(matches!(
            is_visible_signed(&rp(&[5, 4]), &rev(&[(2, 1), (-4, 1)])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn expanded_round_trip() {
        let b = rev(&[(2, 3), (1, 2)]);
        let l = rp(&[5, 7]);
        let n = l.expanded(&b);
        assert_eq!(n.coords(), &[BigUint::from(25u32), BigUint::from(343u32)]);
        assert_eq!(
            RationalPoint::from_expanded(&n, &b).unwrap().base(),
            &[5u32.into(), 7u32.into()]
        );
        let off = LatticePoint::new(vec![24u64, 343]).unwrap();
        assert!(matches!(
            RationalPoint::from_expanded(&off, &b),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn oracle_examples() {
        let w =
            oracle_witness_parametric(&pt(&[2, 4]), &ev(&[2, 4]), DEFAULT_ORACLE_LIMIT).unwrap();
        assert_eq!(w, Some(vec![1, 1]));
        let w = oracle_witness_parametric(
            &pt(&[4, 16, 40, 128]),
            &ev(&[2, 4, 3, 7]),
            DEFAULT_ORACLE_LIMIT,
        )
        .unwrap();
        assert_eq!(w, Some(vec![1, 1, 5, 1]));
        assert!(oracle_visible_parametric(&pt(&[3, 5]), &ev(&[1, 1])).unwrap());
        assert!(oracle_visible_parametric(&pt(&[1]), &ev(&[3])).unwrap());
        assert!(!oracle_visible_parametric(&pt(&[2]), &ev(&[3])).unwrap());
    }

    #[test]
    fn oracle_respects_limit() {
        let r = oracle_witness_parametric(&pt(&[600, 600]), &ev(&[1, 1]), 1000);
        assert!(matches!(r, Err(Error::Resource { .. })));
    }

    #[test]
    fn rational_oracle_examples() {
        let b = rev(&[(1, 2), (1, 2)]);
        // α = 2, each aᵢ = 2: unrestricted lattice, base tuple = point.
        let w = oracle_witness_rational(&pt(&[2, 4]), &b, DEFAULT_ORACLE_LIMIT).unwrap();
        assert_eq!(w, Some(vec![BigUint::one(), BigUint::from(2u32)]));
        assert!(oracle_visible_rational(&pt(&[2, 3]), &b).unwrap());
    }

    #[test]
    fn signed_oracle_examples() {
        let b = rev(&[(1, 1), (-2, 1)]);
        let w = oracle_witness_signed(&pt(&[5, 4]), &b, DEFAULT_ORACLE_LIMIT).unwrap();
        assert_eq!(w, Some(vec![BigUint::from(10u32), BigUint::one()]));
        assert!(oracle_visible_signed(&pt(&[5, 6]), &b).unwrap());
    }

    #[test]
    fn oracle_matches_characterization_2d() {
        for b in [[1, 1], [1, 2], [2, 3], [2, 4], [3, 7]] {
            let b = ev(&b);
            for x in 1..=40 {
                for y in 1..=40 {
                    let n = pt(&[x, y]);
                    assert_eq!(
                        oracle_visible_parametric(&n, &b).unwrap(),
                        is_visible_int(&n, &b).unwrap(),
                        "{n} {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn rational_characterization_matches_integer_case() {
        let b = rev(&[(1, 2), (1, 2)]);
        for x in 1..=30 {
            for y in 1..=30 {
                assert_eq!(
                    is_visible_rat(&rp(&[x, y]), &b).unwrap(),
                    is_visible_int(&pt(&[x, y]), &ev(&[1, 1])).unwrap()
                );
            }
        }
    }

    #[test]
    fn rational_oracle_matches_characterization() {
        for pairs in [
            vec![(1, 2), (1, 2)],
            vec![(2, 3), (1, 2)],
            vec![(1, 3), (2, 1)],
            vec![(3, 2), (2, 3)],
        ] {
            let b = rev(&pairs);
            for x in 1..=20u64 {
                for y in 1..=20u64 {
                    let l = rp(&[x, y]);
                    let n = l.expanded(&b);
                    assert_eq!(
                        oracle_visible_rational(&n, &b).unwrap(),
                        is_visible_rat(&l, &b).unwrap(),
                        "{l} {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn signed_oracle_matches_characterization() {
        for pairs in [
            vec![(1, 1), (-2, 1)],
            vec![(-2, 1), (1, 1)],
            vec![(-1, 1), (-1, 1)],
            vec![(1, 2), (-1, 3)],
            vec![(-3, 2), (2, 1)],
        ] {
            let b = rev(&pairs);
            for x in 1..=30u64 {
                for y in 1..=30u64 {
                    let l = rp(&[x, y]);
                    let n = l.expanded(&b);
                    assert_eq!(
                        oracle_visible_signed(&n, &b).unwrap(),
                        is_visible_signed(&l, &b).unwrap(),
                        "{l} {b}"
                    );
                }
            }
        }
        let b = rev(&[(3, 1), (-2, 1), (-3, 1)]);
        for x in 1..=6u64 {
            for y in 1..=20u64 {
                for z in 1..=20u64 {
                    let l = rp(&[x, y, z]);
                    assert_eq!(
                        oracle_visible_signed(&l.expanded(&b), &b).unwrap(),
                        is_visible_signed(&l, &b).unwrap(),
                        "{l}"
                    );
                }
            }
        }
    }

    #[test]
    fn signed_ignores_coordinates_outside_j() {
        for pairs in [[(1, 1), (-2, 1)], [(-2, 1), (1, 1)]] {
            let b = rev(&pairs);
            let j = b.negative_indices()[0];
            for x in 1..=30u64 {
                for y in 1..=30u64 {
                    let reference = is_visible_signed(&rp(&[x, y]), &b).unwrap();
                    for other in 1..=30u64 {
                        let mut c = [x, y];
                        c[1 - j] = other;
                        assert_eq!(is_visible_signed(&rp(&c), &b).unwrap(), reference);
                    }
                }
            }
        }
    }
}
