//! Exact nonnegative rationals for probability and slack parameters.
//!
//! Accept/reject boundaries in this crate are integer comparisons; the
//! only places a ratio is ever converted to floating point are the
//! logarithms inside sample-size and repeat-count formulas, where the
//! result is ceiled upward anyway.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatioError {
    #[error("ratio denominator must be nonzero")]
    ZeroDenominator,
    #[error("cannot parse `{0}` as a ratio (expected `a/b`, an integer, or a decimal)")]
    Unparseable(String),
}

/// A nonnegative rational number `num/den` kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self, RatioError> {
        if den == 0 {
            return Err(RatioError::ZeroDenominator);
        }
        let g = gcd(num, den);
        Ok(Ratio {
            num: num / g.max(1),
            den: den / g.max(1),
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// True when `0 < self < 1`.
    pub fn is_proper_probability(&self) -> bool {
        self.num > 0 && self.num < self.den
    }

    /// `self / k`, exact.
    pub fn div_int(&self, k: u64) -> Result<Self, RatioError> {
        if k == 0 {
            return Err(RatioError::ZeroDenominator);
        }
        Ratio::new(self.num, self.den.saturating_mul(k))
    }

    /// Natural log of the reciprocal, `ln(den/num)`.
    pub fn ln_reciprocal(&self) -> f64 {
        (self.den as f64 / self.num as f64).ln()
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = RatioError;

    /// Parses `"a/b"`, a plain nonnegative integer, or a decimal such as
    /// `"0.05"` (read exactly as 5/100).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RatioError::Unparseable(s.to_string());
        if let Some((a, b)) = s.split_once('/') {
            let num = a.trim().parse::<u64>().map_err(|_| bad())?;
            let den = b.trim().parse::<u64>().map_err(|_| bad())?;
            return Ratio::new(num, den);
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let int_val = if int_part.is_empty() {
                0
            } else {
                int_part.parse::<u64>().map_err(|_| bad())?
            };
            let scale = 10u64
                .checked_pow(frac_part.len() as u32)
                .ok_or_else(bad)?;
            let frac_val = frac_part.parse::<u64>().map_err(|_| bad())?;
            let num = int_val
                .checked_mul(scale)
                .and_then(|v| v.checked_add(frac_val))
                .ok_or_else(bad)?;
            return Ratio::new(num, scale);
        }
        let num = s.parse::<u64>().map_err(|_| bad())?;
        Ratio::new(num, 1)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
