//! Exact arithmetic helpers: edge levels, additive rounding to multiples of a
//! step, depth bounding, and the rational approximation parameter.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `floor(log2(w))`, computed from the binary exponent so that exact powers
/// of two never round the wrong way.
pub fn level(w: f64) -> Result<i32> {
    if !w.is_finite() || w <= 0.0 {
        return Err(Error::InvalidWeight(w));
    }
    let bits = w.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    if exp == 0 {
        // subnormal: value = mantissa * 2^-1074
        let mant = bits & ((1u64 << 52) - 1);
        return Ok(63 - mant.leading_zeros() as i32 - 1074);
    }
    Ok(exp - 1023)
}

/// Least integer multiple of `beta` strictly greater than `x`.
pub fn round_mult(beta: Ratio<u64>, x: Ratio<u64>) -> Ratio<u64> {
    assert!(!beta.is_zero(), "rounding step must be positive");
    let k = (x / beta).to_integer() + 1;
    beta * Ratio::from_integer(k)
}

/// `x` when `x <= d`, infinity otherwise.
pub fn bound_d(d: f64, x: f64) -> f64 {
    if x <= d {
        x
    } else {
        f64::INFINITY
    }
}

/// Approximation parameter kept as an exact fraction `p/q` in `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Epsilon(Ratio<u64>);

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num >= den {
            return Err(Error::InvalidEpsilon(format!("{num}/{den} is not in (0, 1)")));
        }
        Ok(Epsilon(Ratio::new(num, den)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer()), BigInt::from(self.denom()))
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    /// Accepts `p/q` or a plain decimal such as `0.2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidEpsilon(s.to_string());
        if let Some((p, q)) = s.split_once('/') {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            return Epsilon::new(p, q);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u64.pow(frac.len() as u32);
        let frac_val: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        let g = num.gcd(&den);
        if g == 0 {
            return Err(bad());
        }
        Epsilon::new(num / g, den / g)
    }
}

/// Exact rational value of a finite `f64`.
pub fn exact(w: f64) -> BigRational {
    BigRational::from_float(w).expect("finite weight")
}

/// Nearest `f64` to an exact rational.
pub fn big_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// `true` iff `count >= num/den * 2^level`, evaluated exactly.
pub(crate) fn meets_threshold(count: u64, tau: Ratio<u64>, level: u32) -> bool {
    if level >= 64 {
        return false;
    }
    let lhs = count as u128 * *tau.denom() as u128;
    match (*tau.numer() as u128).checked_mul(1u128 << level) {
        Some(rhs) => lhs >= rhs,
        None => false,
    }
}
