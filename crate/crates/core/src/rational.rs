//! Exact rational parameters.
//!
//! Expansion thresholds such as 1/(1+phi) are rational, and certifying with
//! floats would mis-classify the edge cases, so alpha and phi are carried as
//! exact integer ratios end to end.

use num::bigint::BigInt;
use num::rational::Ratio;
use num::{BigRational, One, Signed, ToPrimitive};
use thiserror::Error;

/// Exact rational with machine-word numerator and denominator. Large enough
/// for every quantity this crate compares exactly (set sizes, boundary
/// ratios, alpha/phi parameters).
pub type Frac = Ratio<i64>;

/// Largest denominator accepted when converting decimal input to a fraction.
pub const MAX_DENOMINATOR: i64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FracParseError {
    #[error("empty fraction")]
    Empty,
    #[error("invalid fraction `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("`{0}` needs a denominator above the 10^6 cap")]
    DenominatorTooLarge(String),
}

/// Parses `"p/q"`, an integer, or a decimal such as `"0.25"` into an exact
/// rational. Decimals convert exactly (no float round-trip); the reduced
/// denominator must stay within [`MAX_DENOMINATOR`].
pub fn parse_frac(s: &str) -> Result<Frac, FracParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(FracParseError::Empty);
    }
    let invalid = || FracParseError::Invalid(s.to_string());

    let frac = if let Some((num, den)) = s.split_once('/') {
        let p: i64 = num.trim().parse().map_err(|_| invalid())?;
        let q: i64 = den.trim().parse().map_err(|_| invalid())?;
        if q == 0 {
            return Err(FracParseError::ZeroDenominator(s.to_string()));
        }
        Frac::new(p, q)
    } else if let Some((int_part, dec_part)) = s.split_once('.') {
        let int_part = if int_part.is_empty() { "0" } else { int_part };
        if dec_part.is_empty() || !dec_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let whole: i64 = int_part.parse().map_err(|_| invalid())?;
        if dec_part.len() > 12 {
            return Err(FracParseError::DenominatorTooLarge(s.to_string()));
        }
        let digits: i64 = dec_part.parse().map_err(|_| invalid())?;
        let scale = 10i64.pow(dec_part.len() as u32);
        Frac::new(whole * scale + digits, scale)
    } else {
        let p: i64 = s.parse().map_err(|_| invalid())?;
        Frac::from_integer(p)
    };

    if *frac.denom() > MAX_DENOMINATOR {
        return Err(FracParseError::DenominatorTooLarge(s.to_string()));
    }
    Ok(frac)
}

/// Renders a fraction as `"p/q"` (always with an explicit denominator, so
/// report consumers never have to guess).
pub fn format_frac(f: Frac) -> String {
    format!("{}/{}", f.numer(), f.denom())
}

/// floor(f * n) for a nonnegative fraction.
pub fn floor_mul(f: Frac, n: u64) -> u64 {
    debug_assert!(!f.is_negative());
    let prod = Ratio::new(
        BigInt::from(*f.numer()) * BigInt::from(n),
        BigInt::from(*f.denom()),
    );
    prod.floor().to_integer().to_u64().expect("nonnegative")
}

/// ceil(f * n) for a nonnegative fraction.
pub fn ceil_mul(f: Frac, n: u64) -> u64 {
    debug_assert!(!f.is_negative());
    let prod = Ratio::new(
        BigInt::from(*f.numer()) * BigInt::from(n),
        BigInt::from(*f.denom()),
    );
    prod.ceil().to_integer().to_u64().expect("nonnegative")
}

/// Smallest j >= 0 with base^j >= n, i.e. ceil(log_base n), computed exactly.
/// Requires base > 1 and n >= 1.
pub fn ceil_log(base: Frac, n: u64) -> u32 {
    assert!(base > Frac::one(), "ceil_log needs base > 1");
    assert!(n >= 1);
    if n == 1 {
        return 0;
    }
    let b = BigRational::new(BigInt::from(*base.numer()), BigInt::from(*base.denom()));
    let target = BigRational::from_integer(BigInt::from(n));
    // Float guess, then correct with exact powers.
    let bf = (*base.numer() as f64) / (*base.denom() as f64);
    let mut j = ((n as f64).ln() / bf.ln()).ceil().max(1.0) as i32;
    while b.pow(j) < target {
        j += 1;
    }
    while j > 0 && b.pow(j - 1) >= target {
        j -= 1;
    }
    j as u32
}
