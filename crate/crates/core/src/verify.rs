//! The verification battery behind `bvis verify` and the acceptance tests.
//!
//! Each check is numbered, carries its own tolerance and runtime budget, and
//! reports one line. Sub-checks of a criterion are listed in `detail`.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::{
    count_visible_bruteforce, count_visible_int, count_visible_rat, count_visible_signed, BoxSpec,
    DEFAULT_BRUTE_LIMIT,
};
use crate::error::Result;
use crate::visibility::{
    is_visible_int, oracle_visible_parametric, oracle_witness_parametric, reduce_b, witness_int,
    ExponentVector, LatticePoint, RationalExponentVector, DEFAULT_ORACLE_LIMIT,
};
use crate::zeta::{inv_zeta, zeta, zeta_euler_product};

pub const DEFAULT_SEED: u64 = 0x5eed_b0b5;

const INV_ZETA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<34} {:>8.3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Accumulates sub-check verdicts for one criterion.
struct Outcome {
    passed: bool,
    parts: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: true,
            parts: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, text: String) {
        self.passed &= ok;
        self.parts
            .push(if ok { text } else { format!("FAILED {text}") });
    }

    /// `|empirical - target| < tol`.
    fn density(&mut self, label: &str, empirical: f64, s: u32, tol: f64) -> Result<()> {
        let target = inv_zeta(s, INV_ZETA_TOL)?;
        let err = (empirical - target).abs();
        self.record(
            err < tol,
            format!("{label}: {empirical:.6} vs 1/zeta({s})={target:.6} err={err:.2e} tol={tol}"),
        );
        Ok(())
    }

    fn finish(
        self,
        id: u8,
        name: &'static str,
        started: Instant,
        budget: Option<Duration>,
    ) -> CheckReport {
        let elapsed = started.elapsed();
        let mut passed = self.passed;
        let mut detail = self.parts.join("; ");
        if let Some(budget) = budget {
            if elapsed > budget {
                passed = false;
                detail.push_str(&format!(
                    "; FAILED runtime over {:.0}s budget",
                    budget.as_secs_f64()
                ));
            }
        }
        CheckReport {
            id,
            name,
            passed,
            detail,
            elapsed,
        }
    }
}

fn failed(id: u8, name: &'static str, started: Instant, err: crate::Error) -> CheckReport {
    CheckReport {
        id,
        name,
        passed: false,
        detail: format!("error: {err}"),
        elapsed: started.elapsed(),
    }
}

fn run_check(
    id: u8,
    name: &'static str,
    budget: Option<Duration>,
    body: impl FnOnce(&mut Outcome) -> Result<()>,
) -> CheckReport {
    let started = Instant::now();
    let mut outcome = Outcome::new();
    match body(&mut outcome) {
        Ok(()) => outcome.finish(id, name, started, budget),
        Err(e) => failed(id, name, started, e),
    }
}

fn ev(entries: &[u32]) -> ExponentVector {
    ExponentVector::new(entries.to_vec()).expect("valid exponent literal")
}

fn rev(pairs: &[(i64, i64)]) -> RationalExponentVector {
    RationalExponentVector::from_pairs(pairs).expect("valid exponent literal")
}

fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    num.to_f64().unwrap() / den.to_f64().unwrap()
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn int_density(out: &mut Outcome, n: u64, b: &[u32], s: u32, tol: f64) -> Result<()> {
    let b = ev(b);
    let visible = count_visible_int(&n, &b)?;
    let total = BigUint::from(n).pow(b.len() as u32);
    out.density(&format!("b={b} N={n}"), ratio(&visible, &total), s, tol)
}

/// Check 1: `(1,1)` at `N = 1000` within 0.002 of `1/ζ(2)`, under 1 s.
pub fn classical_density() -> CheckReport {
    run_check(1, "classical density", secs(1), |out| {
        int_density(out, 1000, &[1, 1], 2, 0.002)
    })
}

/// Check 2: `(1,2)`, `(2,3)`, `(1,1,1)` densities, under 5 s total.
pub fn integer_densities() -> CheckReport {
    run_check(2, "b-visibility densities", secs(5), |out| {
        int_density(out, 1000, &[1, 2], 3, 0.005)?;
        int_density(out, 500, &[2, 3], 5, 0.005)?;
        int_density(out, 200, &[1, 1, 1], 3, 0.01)
    })
}

/// `⌊N^{1/3}⌋ = 200` is the first cube root reaching 200.
pub const MIXED_RATIONAL_N: u64 = 8_000_000;

/// Check 3: Rational exponents: `(1/2,1/2)` at `N = 10⁶` within 0.002 of `1/ζ(2)`
/// (edges `⌊N^{2/2}⌋ = 10⁶`);
/// `(2/3,1/2)` with both box edges at least 200 within 0.01 of `1/ζ(5)`.
pub fn rational_densities() -> CheckReport {
    run_check(3, "rational-exponent densities", secs(5), |out| {
        let r = count_visible_rat(&1_000_000u64, &rev(&[(1, 2), (1, 2)]))?;
        out.parts.push(format!("b=(1/2,1/2) box {}", r.box_spec));
        out.density("b=(1/2,1/2) N=1e6", r.empirical, 2, 0.002)?;

        let r = count_visible_rat(&MIXED_RATIONAL_N, &rev(&[(2, 3), (1, 2)]))?;
        let wide = r
            .box_spec
            .edges()
            .iter()
            .all(|e| *e >= BigUint::from(200u32));
        out.record(wide, format!("b=(2/3,1/2) box {}", r.box_spec));
        out.density(
            &format!("b=(2/3,1/2) N={MIXED_RATIONAL_N}"),
            r.empirical,
            5,
            0.01,
        )?;
        if let Some(t) = r.theoretical {
            out.parts.push(format!(
                "note: numerator sum is {}, 1/zeta({})={t:.6}",
                r.exponent_sum, r.exponent_sum
            ));
        }
        Ok(())
    })
}

/// Check 4: Signed exponents: `(1,-2)` with a `10⁴` edge in the `J` coordinate
/// within 0.005 of `1/ζ(2)`; `(3,-2,-3)` with `J` edges 300 within 0.01 of
/// `1/ζ(5)`. The quick profile uses `N = 2000` for the first part.
pub fn signed_densities(profile: Profile) -> CheckReport {
    run_check(4, "signed-exponent densities", secs(5), |out| {
        let n = match profile {
            Profile::Full => 10_000u64,
            Profile::Quick => 2_000,
        };
        let r = count_visible_signed(&n, &rev(&[(1, 1), (-2, 1)]))?;
        out.density(&format!("b=(1,-2) N={n}"), r.empirical, 2, 0.005)?;
        let r = count_visible_signed(&300u64, &rev(&[(3, 1), (-2, 1), (-3, 1)]))?;
        let wide = r.box_spec.edges()[1..]
            .iter()
            .all(|e| *e >= BigUint::from(300u32));
        out.record(wide, format!("b=(3,-2,-3) box {}", r.box_spec));
        out.density("b=(3,-2,-3) N=300", r.empirical, 5, 0.01)
    })
}

/// Verdict mismatches between the oracle and the characterization.
fn oracle_disagreements(
    points: impl IntoIterator<Item = Vec<u64>>,
    b: &ExponentVector,
) -> Result<(usize, usize)> {
    let mut checked = 0;
    let mut bad = 0;
    for c in points {
        let n = LatticePoint::new(c)?;
        checked += 1;
        if oracle_visible_parametric(&n, b)? != is_visible_int(&n, b)? {
            bad += 1;
        }
    }
    Ok((checked, bad))
}

fn square_grid(edge: u64) -> impl Iterator<Item = Vec<u64>> {
    (1..=edge).flat_map(move |x| (1..=edge).map(move |y| vec![x, y]))
}

/// Check 5: Oracle vs characterization: all of `[1,40]²` for five vectors and 500
/// seeded random points of `[1,20]³` for three vectors, under 60 s.
pub fn oracle_equivalence(seed: u64) -> CheckReport {
    run_check(5, "oracle equivalence", secs(60), |out| {
        for b in [[1, 1], [1, 2], [2, 3], [2, 4], [3, 7]] {
            let b = ev(&b);
            let (checked, bad) = oracle_disagreements(square_grid(40), &b)?;
            out.record(bad == 0, format!("b={b}: {bad}/{checked}"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for b in [[1, 1, 1], [1, 2, 3], [2, 4, 6]] {
            let b = ev(&b);
            let points: Vec<Vec<u64>> = (0..500)
                .map(|_| (0..3).map(|_| rng.gen_range(1..=20)).collect())
                .collect();
            let (checked, bad) = oracle_disagreements(points, &b)?;
            out.record(bad == 0, format!("b={b}: {bad}/{checked}"));
        }
        Ok(())
    })
}

/// Check 6: `b` and `b / gcd(b)` give the same verdicts on `[1,40]²`, the `b` side
/// decided by the oracle; `(2,4)` is `(2,4)`-invisible via the image `(1,1)`.
pub fn gcd_reduction() -> CheckReport {
    run_check(6, "gcd reduction", None, |out| {
        for b in [[2, 4], [3, 6], [2, 2]] {
            let b = ev(&b);
            let reduced = reduce_b(&b);
            let mut bad = 0;
            for c in square_grid(40) {
                let n = LatticePoint::new(c)?;
                if oracle_visible_parametric(&n, &b)? != is_visible_int(&n, &reduced)? {
                    bad += 1;
                }
            }
            out.record(bad == 0, format!("b={b} vs {reduced}: {bad} mismatches"));
        }
        let n = LatticePoint::new(vec![2u64, 4])?;
        let w = oracle_witness_parametric(&n, &ev(&[2, 4]), DEFAULT_ORACLE_LIMIT)?;
        out.record(
            w == Some(vec![1, 1]),
            format!("(2,4) under (2,4): image {w:?}"),
        );
        Ok(())
    })
}

/// Check 7: Möbius counts equal brute-force counts for every `N <= 60`, under 30 s.
pub fn mobius_vs_bruteforce() -> CheckReport {
    run_check(7, "Möbius vs brute force", secs(30), |out| {
        for b in [&[1, 1][..], &[1, 2], &[2, 3], &[1, 1, 1], &[1, 2, 3]] {
            let b = ev(b);
            let mut bad = Vec::new();
            for n in 1..=60u64 {
                let bx = BoxSpec::cube(n, b.len())?;
                let brute = count_visible_bruteforce(&bx, DEFAULT_BRUTE_LIMIT, |p| {
                    LatticePoint::new(p.to_vec())
                        .and_then(|pt| is_visible_int(&pt, &b))
                        .unwrap_or(false)
                })?;
                if brute != count_visible_int(&n, &b)? {
                    bad.push(n);
                }
            }
            out.record(bad.is_empty(), format!("b={b}: mismatches at {bad:?}"));
        }
        Ok(())
    })
}

/// Check 8: `(4,16,40,128)` is `(2,4,3,7)`-invisible with image `(1,1,5,1)`, which
/// is itself visible.
pub fn worked_example() -> CheckReport {
    run_check(8, "worked example", None, |out| {
        let b = ev(&[2, 4, 3, 7]);
        let n = LatticePoint::new(vec![4u64, 16, 40, 128])?;
        let w = witness_int(&n, &b)?;
        let ok = w
            .as_ref()
            .is_some_and(|w| w.prime == 2 && w.image == [1, 1, 5, 1]);
        out.record(ok, format!("witness {w:?}"));
        let oracle = oracle_witness_parametric(&n, &b, DEFAULT_ORACLE_LIMIT)?;
        out.record(
            oracle == Some(vec![1, 1, 5, 1]),
            format!("oracle image {oracle:?}"),
        );
        let image = LatticePoint::new(vec![1u64, 1, 5, 1])?;
        let visible = is_visible_int(&image, &b)?;
        out.record(
            visible && oracle_visible_parametric(&image, &b)?,
            format!("(1,1,5,1) visible: {visible}"),
        );
        Ok(())
    })
}

/// Check 9: `|ζ(2) - π²/6| <= tail_bound <= 1e-9`; Euler product to `10⁵` within
/// `1e-4` of the series for `s ∈ {2,3,5}`.
pub fn zeta_certification() -> CheckReport {
    run_check(9, "zeta certification", None, |out| {
        let z = zeta(2, 1e-9)?;
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        let err = (z.value - exact).abs();
        out.record(
            err <= z.tail_bound && z.tail_bound <= 1e-9,
            format!("zeta(2) err={err:.2e} tail_bound={:.2e}", z.tail_bound),
        );
        for s in [2, 3, 5] {
            let series = zeta(s, 1e-12)?;
            let euler: f64 = zeta_euler_product(s, 100_000)?;
            let gap = (series.value - euler).abs();
            out.record(gap < 1e-4, format!("s={s} euler gap={gap:.2e}"));
        }
        Ok(())
    })
}

/// Every check, in order.
pub fn run(profile: Profile, seed: u64) -> Vec<CheckReport> {
    vec![
        classical_density(),
        integer_densities(),
        rational_densities(),
        signed_densities(profile),
        oracle_equivalence(seed),
        gcd_reduction(),
        mobius_vs_bruteforce(),
        worked_example(),
        zeta_certification(),
    ]
}
