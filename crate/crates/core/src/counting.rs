//! Exact counts of visible points in finite boxes.
//!
//! A base tuple `x` in the box `[M₁] × … × [M_k]` is invisible for exponents
//! `e` iff some prime `p` has `p^{eᵢ} | xᵢ` for every `i`. Inclusion-exclusion
//! over those events collapses to
//!
//! ```text
//! V = Σ_{d ≥ 1} μ(d) · Π_i ⌊Mᵢ / d^{eᵢ}⌋
//! ```
//!
//! and every term with `d^{eᵢ} > Mᵢ` for some `i` vanishes, so the sum stops at
//! `minᵢ ⌊Mᵢ^{1/eᵢ}⌋`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{floor_root, MobiusTable};
use crate::error::{Error, Result};
use crate::natural::{checked_pow, Natural};
use crate::visibility::{ExponentVector, Exponents, RationalExponentVector};
use crate::zeta::inv_zeta;

/// Enumeration budget for brute-force counts, in points.
pub const DEFAULT_BRUTE_LIMIT: u64 = 10_000_000;

/// Tolerance used for the theoretical density attached to reports.
pub const THEORETICAL_TOL: f64 = 1e-12;

const MOBIUS_CHUNK: u64 = 4096;

/// Per-coordinate upper bounds `[N₁] × … × [N_k]`. A zero edge is allowed
/// and denotes an empty box.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoxSpec<T> {
    edges: Vec<T>,
}

impl<T: Natural> BoxSpec<T> {
    pub fn new(edges: Vec<T>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidInput(
                "box must have at least one edge".into(),
            ));
        }
        Ok(BoxSpec { edges })
    }

    /// The cube `[n]ᵏ`.
    pub fn cube(n: T, k: usize) -> Result<Self> {
        Self::new(vec![n; k])
    }

    pub fn edges(&self) -> &[T] {
        &self.edges
    }

    pub fn dim(&self) -> usize {
        self.edges.len()
    }

    pub fn total(&self) -> BigUint {
        self.edges.iter().map(Natural::to_big).product()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.iter().any(Zero::is_zero)
    }

    pub fn to_big(&self) -> BoxSpec<BigUint> {
        BoxSpec {
            edges: self.edges.iter().map(Natural::to_big).collect(),
        }
    }
}

impl<T: fmt::Display> fmt::Display for BoxSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    Integer,
    Rational,
    Signed,
}

impl Case {
    pub fn as_str(self) -> &'static str {
        match self {
            Case::Integer => "int",
            Case::Rational => "rat",
            Case::Signed => "signed",
        }
    }

    /// The case an exponent vector selects on its own.
    pub fn infer(b: &Exponents) -> Case {
        match b {
            Exponents::Integer(_) => Case::Integer,
            Exponents::Rational(r) if r.all_positive() => Case::Rational,
            Exponents::Rational(_) => Case::Signed,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exact count in a box against the limiting density.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub b: Vec<String>,
    pub case: Case,
    pub box_spec: BoxSpec<BigUint>,
    pub visible: BigUint,
    pub total: BigUint,
    pub empirical: f64,
    /// `s` in `1/ζ(s)`; below 2 no theoretical density is attached.
    pub exponent_sum: u64,
    pub theoretical: Option<f64>,
    pub abs_error: Option<f64>,
}

impl DensityReport {
    fn assemble(
        b: Vec<String>,
        case: Case,
        box_spec: BoxSpec<BigUint>,
        visible: BigUint,
        exponent_sum: u64,
    ) -> Result<Self> {
        let total = box_spec.total();
        let empirical = if total.is_zero() {
            0.0
        } else {
            BigRational::new(BigInt::from(visible.clone()), BigInt::from(total.clone()))
                .to_f64()
                .expect("ratio in [0, 1]")
        };
        let theoretical = if exponent_sum >= 2 {
            let s = u32::try_from(exponent_sum).map_err(|_| {
                Error::InvalidInput(format!("exponent sum {exponent_sum} too large"))
            })?;
            Some(inv_zeta(s, THEORETICAL_TOL)?)
        } else {
            None
        };
        Ok(DensityReport {
            b,
            case,
            box_spec,
            visible,
            total,
            empirical,
            exponent_sum,
            theoretical,
            abs_error: theoretical.map(|t| (empirical - t).abs()),
        })
    }

    /// `visible / total` as an exact fraction.
    pub fn empirical_exact(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.visible.clone()),
            BigInt::from(self.total.clone()),
        )
    }
}

/// `Σ_{d=1}^{d_max} μ(d) · Πᵢ ⌊Mᵢ / d^{eᵢ}⌋`, evaluated in parallel chunks of
/// `d` and summed exactly.
pub fn mobius_partial_sum<T: Natural>(
    edges: &[T],
    exps: &[u32],
    d_max: u64,
    mu: &MobiusTable,
) -> Result<BigInt> {
    if edges.len() != exps.len() {
        return Err(Error::DimensionMismatch {
            expected: exps.len(),
            found: edges.len(),
        });
    }
    if d_max > mu.limit() {
        return Err(Error::InvalidInput(format!(
            "Möbius table covers d <= {}, asked for {d_max}",
            mu.limit()
        )));
    }
    let chunks = d_max.div_ceil(MOBIUS_CHUNK);
    let sum = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * MOBIUS_CHUNK + 1;
            let hi = ((c + 1) * MOBIUS_CHUNK).min(d_max);
            let mut acc = BigInt::zero();
            for d in lo..=hi {
                let m = mu.get(d);
                if m == 0 {
                    continue;
                }
                let Some(term) = box_term(edges, exps, d) else {
                    continue;
                };
                if m > 0 {
                    acc += BigInt::from(term);
                } else {
                    acc -= BigInt::from(term);
                }
            }
            acc
        })
        .reduce(BigInt::zero, |a, b| a + b);
    Ok(sum)
}

/// `Πᵢ ⌊Mᵢ / d^{eᵢ}⌋`, or `None` when a factor is zero.
fn box_term<T: Natural>(edges: &[T], exps: &[u32], d: u64) -> Option<BigUint> {
    let d = T::from_u64(d)?;
    let mut term = BigUint::one();
    for (m, &e) in edges.iter().zip(exps) {
        let q = checked_pow(&d, e)?;
        let f = m.clone() / q;
        if f.is_zero() {
            return None;
        }
        term *= f.to_big();
    }
    Some(term)
}

/// Last `d` that can contribute: `minᵢ ⌊Mᵢ^{1/eᵢ}⌋`.
pub fn truncation_bound<T: Natural>(edges: &[T], exps: &[u32]) -> BigUint {
    edges
        .iter()
        .zip(exps)
        .map(|(m, &e)| {
            if m.is_zero() {
                BigUint::zero()
            } else {
                floor_root(m, 1, e).to_big()
            }
        })
        .min()
        .unwrap_or_default()
}

/// Number of `x ∈ [M₁] × … × [M_k]` with no prime `p` such that
/// `p^{eᵢ} | xᵢ` for all `i`.
pub fn mobius_count<T: Natural>(edges: &[T], exps: &[u32]) -> Result<BigUint> {
    if edges.len() != exps.len() {
        return Err(Error::DimensionMismatch {
            expected: exps.len(),
            found: edges.len(),
        });
    }
    if exps.contains(&0) {
        return Err(Error::InvalidInput("exponents must be positive".into()));
    }
    if edges.iter().any(Zero::is_zero) {
        return Ok(BigUint::zero());
    }
    let bound = truncation_bound(edges, exps);
    let d_max = bound
        .to_u64()
        .ok_or_else(|| Error::resource("Möbius truncation bound", &bound, u64::MAX))?;
    let mu = MobiusTable::sieve(d_max)?;
    let sum = mobius_partial_sum(edges, exps, d_max, &mu)?;
    Ok(sum.to_biguint().expect("visible count is nonnegative"))
}

/// Number of `b`-visible points in `[n]ᵏ`.
pub fn count_visible_int<T: Natural>(n: &T, b: &ExponentVector) -> Result<BigUint> {
    let reduced = b.reduced();
    mobius_count(&vec![n.clone(); b.len()], reduced.entries())
}

/// Restricted-lattice box for `N`: edges `⌊N^{aᵢ/α}⌋` on the base tuples.
pub fn rational_box<T: Natural>(n: &T, b: &RationalExponentVector) -> Result<BoxSpec<T>> {
    if n.is_zero() {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    BoxSpec::new(
        b.denominators()
            .into_iter()
            .map(|a| floor_root(n, a, b.alpha()))
            .collect(),
    )
}

fn require_gcd_one(b: &RationalExponentVector) -> Result<()> {
    if b.gcd_is_one() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "no integer combination of the entries of {b} equals 1"
        )))
    }
}

/// Positive rational exponents: base tuples in the box `⌊N^{aᵢ/α}⌋` that
/// are visible for the numerators, against `1/ζ(Σ bᵢ)`.
pub fn count_visible_rat<T: Natural>(n: &T, b: &RationalExponentVector) -> Result<DensityReport> {
    if !b.all_positive() {
        return Err(Error::Precondition(format!(
            "{b} has negative entries; count it as the signed case"
        )));
    }
    require_gcd_one(b)?;
    let bx = rational_box(n, b)?;
    let visible = mobius_count(bx.edges(), &b.abs_numerators())?;
    DensityReport::assemble(
        b.entries().iter().map(ToString::to_string).collect(),
        Case::Rational,
        bx.to_big(),
        visible,
        b.numerator_sum(),
    )
}

/// Signed exponents: only the `J` coordinates are constrained, so the count
/// factors as `Π_{h∉J} M_h` times a Möbius count over `J` with exponents
/// `|b_j|`. Density `1/ζ(Σ_{j∈J} |b_j|)`; none is attached when `J = ∅`.
pub fn count_visible_signed<T: Natural>(
    n: &T,
    b: &RationalExponentVector,
) -> Result<DensityReport> {
    require_gcd_one(b)?;
    let bx = rational_box(n, b)?;
    let visible = signed_box_count(&bx, b)?;
    DensityReport::assemble(
        b.entries().iter().map(ToString::to_string).collect(),
        Case::Signed,
        bx.to_big(),
        visible,
        b.negative_exponent_sum(),
    )
}

/// `Π_{h∉J} M_h` times the Möbius count over the `J` edges.
fn signed_box_count<T: Natural>(bx: &BoxSpec<T>, b: &RationalExponentVector) -> Result<BigUint> {
    let j_set = b.negative_indices();
    let exps = b.abs_numerators();
    let free: BigUint = (0..b.len())
        .filter(|i| !j_set.contains(i))
        .map(|i| bx.edges()[i].to_big())
        .product();
    if j_set.is_empty() {
        return Ok(free);
    }
    let j_edges: Vec<T> = j_set.iter().map(|&j| bx.edges()[j].clone()).collect();
    let j_exps: Vec<u32> = j_set.iter().map(|&j| exps[j]).collect();
    Ok(free * mobius_count(&j_edges, &j_exps)?)
}

/// Visible points of an arbitrary box. For the rational and signed cases the
/// box holds base tuples.
pub fn count_in_box<T: Natural>(bx: &BoxSpec<T>, b: &Exponents, case: Case) -> Result<BigUint> {
    if bx.dim() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: b.len(),
            found: bx.dim(),
        });
    }
    match case {
        Case::Integer => mobius_count(bx.edges(), integer_exponents(b)?.reduced().entries()),
        Case::Rational => {
            let r = b.to_rational();
            if !r.all_positive() {
                return Err(Error::Precondition(format!(
                    "{r} has negative entries; count it as the signed case"
                )));
            }
            require_gcd_one(&r)?;
            mobius_count(bx.edges(), &r.abs_numerators())
        }
        Case::Signed => {
            let r = b.to_rational();
            require_gcd_one(&r)?;
            signed_box_count(bx, &r)
        }
    }
}

fn integer_exponents(b: &Exponents) -> Result<ExponentVector> {
    match b {
        Exponents::Integer(v) => Ok(v.clone()),
        Exponents::Rational(r) => r.as_integer().ok_or_else(|| {
            Error::InvalidInput(format!("{r} is not a vector of positive integers"))
        }),
    }
}

/// Count by enumerating every point of the box (first coordinate split
/// across threads). The predicate sees coordinates in lexicographic order
/// within each thread.
pub fn count_visible_bruteforce<T, F>(bx: &BoxSpec<T>, limit: u64, predicate: F) -> Result<BigUint>
where
    T: Natural,
    F: Fn(&[T]) -> bool + Sync,
{
    let edges = enumeration_edges(bx, limit)?;
    if edges.contains(&0) {
        return Ok(BigUint::zero());
    }
    let count: u64 = (1..=edges[0])
        .into_par_iter()
        .map(|first| {
            let mut count = 0u64;
            for_each_point(&edges, first, |p| {
                if predicate(p) {
                    count += 1;
                }
            });
            count
        })
        .sum();
    Ok(BigUint::from(count))
}

/// All points of the box accepted by the predicate, in lexicographic order.
pub fn enumerate_visible<T, F>(bx: &BoxSpec<T>, limit: u64, predicate: F) -> Result<Vec<Vec<T>>>
where
    T: Natural,
    F: Fn(&[T]) -> bool + Sync,
{
    let edges = enumeration_edges(bx, limit)?;
    if edges.contains(&0) {
        return Ok(Vec::new());
    }
    let rows: Vec<Vec<Vec<T>>> = (1..=edges[0])
        .into_par_iter()
        .map(|first| {
            let mut rows = Vec::new();
            for_each_point(&edges, first, |p| {
                if predicate(p) {
                    rows.push(p.to_vec());
                }
            });
            rows
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

fn enumeration_edges<T: Natural>(bx: &BoxSpec<T>, limit: u64) -> Result<Vec<u64>> {
    let total = bx.total();
    if total > BigUint::from(limit) {
        return Err(Error::resource("box size", &total, limit));
    }
    Ok(bx
        .edges()
        .iter()
        .map(|e| e.to_u64().expect("edge bounded by limit"))
        .collect())
}

/// Odometer over `{first} × [e₂] × … × [e_k]`.
fn for_each_point<T: Natural>(edges: &[u64], first: u64, mut visit: impl FnMut(&[T])) {
    let k = edges.len();
    let mut digits = vec![1u64; k];
    digits[0] = first;
    let mut point: Vec<T> = digits.iter().map(|&d| T::from_u64(d).unwrap()).collect();
    loop {
        visit(&point);
        let mut i = k - 1;
        loop {
            if i == 0 {
                return;
            }
            if digits[i] < edges[i] {
                digits[i] += 1;
                point[i] = T::from_u64(digits[i]).unwrap();
                break;
            }
            digits[i] = 1;
            point[i] = T::one();
            i -= 1;
        }
    }
}

/// Count and compare against `1/ζ(s)` for any of the three cases.
///
/// The integer case reduces `b` by its gcd first; the exponent sum refers to
/// the reduced vector. An integer vector is accepted for the rational and
/// signed cases (all denominators 1).
pub fn density_report<T: Natural>(n: &T, b: &Exponents, case: Case) -> Result<DensityReport> {
    if n.is_zero() {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    match case {
        Case::Integer => {
            let ints = integer_exponents(b)?;
            let visible = count_visible_int(n, &ints)?;
            let bx = BoxSpec::cube(n.to_big(), ints.len())?;
            DensityReport::assemble(
                b.entry_strings(),
                Case::Integer,
                bx,
                visible,
                ints.reduced().sum(),
            )
        }
        Case::Rational => count_visible_rat(n, &b.to_rational()),
        Case::Signed => count_visible_signed(n, &b.to_rational()),
    }
}
