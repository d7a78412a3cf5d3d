//! Cost values for lengths and generator weights.
//!
//! Integer and rational weights compare exactly. Floating-point weights
//! compare with an absolute tolerance of `1e-9`, scaled by the magnitude of
//! the right-hand side once it exceeds one.

use std::fmt::{Debug, Display};
use std::ops::{Add, Sub};

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

/// Tolerance for float-valued axiom checks.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

pub trait Weight:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Whether comparisons on this type are exact.
    const EXACT: bool;

    fn zero() -> Self;

    fn to_f64(self) -> f64;

    /// The weight `i` given to the `i`-th generator of a graded scheme.
    fn from_index(i: u64) -> Self;

    /// `Some(k)` when the value is the integer `k`.
    fn as_integer(self) -> Option<i64>;

    /// Largest integer not exceeding the value.
    fn floor_index(self) -> i64;

    fn is_valid(self) -> bool;

    /// `self <= other`, exactly or within tolerance.
    fn approx_le(self, other: Self) -> bool {
        if Self::EXACT {
            self <= other
        } else {
            let (a, b) = (self.to_f64(), other.to_f64());
            a <= b + FLOAT_TOLERANCE * b.abs().max(1.0)
        }
    }

    fn approx_eq(self, other: Self) -> bool {
        self.approx_le(other) && other.approx_le(self)
    }
}

impl Weight for i64 {
    const EXACT: bool = true;

    fn zero() -> Self {
        0
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn from_index(i: u64) -> Self {
        i as i64
    }

    fn as_integer(self) -> Option<i64> {
        Some(self)
    }

    fn floor_index(self) -> i64 {
        self
    }

    fn is_valid(self) -> bool {
        true
    }
}

impl Weight for Ratio<i64> {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }

    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn from_index(i: u64) -> Self {
        Ratio::from_integer(i as i64)
    }

    fn as_integer(self) -> Option<i64> {
        self.is_integer().then(|| self.to_integer())
    }

    fn floor_index(self) -> i64 {
        self.floor().to_integer()
    }

    fn is_valid(self) -> bool {
        *self.denom() != 0
    }
}

impl Weight for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn from_index(i: u64) -> Self {
        i as f64
    }

    fn as_integer(self) -> Option<i64> {
        (self.is_finite() && self.fract() == 0.0).then_some(self as i64)
    }

    fn floor_index(self) -> i64 {
        self.floor() as i64
    }

    fn is_valid(self) -> bool {
        self.is_finite()
    }
}

/// Parses `"3/5"`, `"0.6"` or `"2"` into an exact rational.
pub fn parse_ratio(text: &str) -> Option<Ratio<i64>> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().ok()?;
        let den: i64 = den.trim().parse().ok()?;
        return (den != 0).then(|| Ratio::new(num, den));
    }
    if text.contains(['e', 'E']) {
        return None;
    }
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text),
    };
    match body.split_once('.') {
        None => body
            .parse::<i64>()
            .ok()
            .map(|v| Ratio::from_integer(sign * v)),
        Some((int, frac)) => {
            if frac.len() > 15 {
                return None;
            }
            let scale = 10i64.pow(frac.len() as u32);
            let int: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
            let frac_val: i64 = if frac.is_empty() {
                0
            } else {
                frac.parse().ok()?
            };
            Some(Ratio::new(sign * (int * scale + frac_val), scale))
        }
    }
}
