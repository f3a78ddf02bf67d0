//! Exponents in `(0, ∞]` with the dual-index conventions `1* = ∞` and
//! `∞* = 1`.

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// A positive exponent, possibly the distinguished value `∞`.
///
/// `∞` stands for the limit convention `f(∞) = lim f(s)`: it selects max
/// norms, and its conjugate index is `1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Self = Exponent(1.0);
    pub const TWO: Self = Exponent(2.0);
    pub const INF: Self = Exponent(f64::INFINITY);

    /// Accepts any finite `p > 0` or `+∞`.
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p <= 0.0 {
            return Err(Error::Domain(alloc::format!(
                "exponent must be positive or inf, got {p}"
            )));
        }
        Ok(Exponent(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn recip(self) -> f64 {
        if self.is_infinite() { 0.0 } else { 1.0 / self.0 }
    }

    /// Conjugate index `p* = p/(p-1)`; defined for `p ≥ 1`, with
    /// `1* = ∞` and `∞* = 1`.
    pub fn conjugate(self) -> Exponent {
        debug_assert!(self.0 >= 1.0, "conjugate index needs p >= 1");
        if self.is_infinite() {
            Exponent::ONE
        } else if self.0 == 1.0 {
            Exponent::INF
        } else {
            Exponent(self.0 / (self.0 - 1.0))
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Parses a decimal number or the literal `inf`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Exponent::INF);
        }
        let p: f64 = s
            .parse()
            .map_err(|_| Error::Usage(alloc::format!("cannot parse exponent {s:?}")))?;
        Exponent::new(p)
    }
}
