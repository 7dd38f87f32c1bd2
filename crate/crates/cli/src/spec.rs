//! Parsing of the textual arguments: exponent vectors, points, `N`, boxes.

use bvis_core::{BigUint, Case, Error, ExponentVector, Exponents, RationalExponentVector, Result};
use num_rational::Ratio;

/// Comma-separated `[-]digits[/digits]`. All positive integers give the
/// integer case; anything else is parsed as rational.
pub fn parse_b(spec: &str) -> Result<Exponents> {
    let mut fractional = false;
    let mut entries = Vec::new();
    for raw in spec.split(',') {
        let tok = raw.trim();
        let (num, den) = match tok.split_once('/') {
            Some((n, d)) => {
                fractional = true;
                (n, d)
            }
            None => (tok, "1"),
        };
        let digits = num.strip_prefix('-').unwrap_or(num);
        if digits.is_empty()
            || !digits.bytes().all(|c| c.is_ascii_digit())
            || den.is_empty()
            || !den.bytes().all(|c| c.is_ascii_digit())
        {
            return Err(bad_b(spec, tok));
        }
        let n: i64 = num.parse().map_err(|_| bad_b(spec, tok))?;
        let d: i64 = den.parse().map_err(|_| bad_b(spec, tok))?;
        if n == 0 || d == 0 {
            return Err(Error::InvalidInput(format!(
                "exponent {tok:?} must be nonzero"
            )));
        }
        entries.push(Ratio::new(n, d));
    }
    if !fractional && entries.iter().all(|r| *r.numer() > 0) {
        let ints = entries
            .iter()
            .map(|r| u32::try_from(*r.numer()).map_err(|_| bad_b(spec, &r.to_string())))
            .collect::<Result<Vec<_>>>()?;
        return ExponentVector::new(ints).map(Exponents::Integer);
    }
    RationalExponentVector::new(entries).map(Exponents::Rational)
}

fn bad_b(spec: &str, tok: &str) -> Error {
    Error::InvalidInput(format!(
        "malformed exponent {tok:?} in {spec:?}; expected entries like 2, -3 or 2/3"
    ))
}

pub fn parse_natural(s: &str, what: &str) -> Result<BigUint> {
    let t = s.trim();
    if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
        return Err(Error::InvalidInput(format!(
            "{what} must be a positive integer, got {s:?}"
        )));
    }
    let v: BigUint = t.parse().expect("digits");
    if v == BigUint::ZERO {
        return Err(Error::InvalidInput(format!("{what} must be at least 1")));
    }
    Ok(v)
}

/// Comma-separated positive integers.
pub fn parse_tuple(s: &str, what: &str) -> Result<Vec<BigUint>> {
    s.split(',').map(|t| parse_natural(t, what)).collect()
}

/// The requested case, checked against what the spec can express.
pub fn resolve_case(b: &Exponents, requested: Option<Case>) -> Result<Case> {
    let inferred = Case::infer(b);
    match requested {
        None => Ok(inferred),
        Some(Case::Integer) if b.to_rational().as_integer().is_none() => Err(Error::InvalidInput(
            format!("{b} is not an integer exponent vector"),
        )),
        Some(c) => Ok(c),
    }
}
