//! Nonnegative extended reals `[0, ∞]`, the codomain of every modular.
//!
//! `INFINITY` is a distinguished variant rather than a large float, so
//! comparisons such as `∞ ≤ ∞` or `∞ ≤ c` are decided exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Debug, Clone, Copy)]
pub enum ExtReal {
    Finite(f64),
    Infinity,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);
    pub const INFINITY: ExtReal = ExtReal::Infinity;

    /// Wraps a nonnegative float; `f64::INFINITY` maps to [`ExtReal::Infinity`].
    ///
    /// Panics on NaN or negative input.
    pub fn new(v: f64) -> Self {
        assert!(v >= 0.0, "ExtReal must be nonnegative, got {v}");
        if v == f64::INFINITY {
            ExtReal::Infinity
        } else {
            // normalizes -0.0
            ExtReal::Finite(v + 0.0)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinity)
    }

    pub fn is_zero(self) -> bool {
        matches!(self, ExtReal::Finite(v) if v == 0.0)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinity => None,
        }
    }

    /// Lossy view as `f64`, with `Infinity` mapped to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::Infinity => f64::INFINITY,
        }
    }

    /// Exact `self ≤ c` for a finite threshold; `∞ ≤ c` is always false.
    pub fn le_f64(self, c: f64) -> bool {
        match self {
            ExtReal::Finite(v) => v <= c,
            ExtReal::Infinity => false,
        }
    }

    /// `self ≤ rhs + slack·(1 + rhs)`, with `∞ ≤ ∞` true and `∞ ≤ finite` false.
    pub fn le_with_slack(self, rhs: ExtReal, slack: f64) -> bool {
        match (self, rhs) {
            (_, ExtReal::Infinity) => true,
            (ExtReal::Infinity, ExtReal::Finite(_)) => false,
            (ExtReal::Finite(l), ExtReal::Finite(r)) => l <= r + slack * (1.0 + r),
        }
    }

    /// Ratio `self / rhs` with `∞/∞ = 1`, `0/0 = 0`, `c/0 = ∞` for `c > 0`.
    pub fn ratio(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Infinity, ExtReal::Infinity) => ExtReal::Finite(1.0),
            (ExtReal::Infinity, ExtReal::Finite(_)) => ExtReal::Infinity,
            (ExtReal::Finite(_), ExtReal::Infinity) => ExtReal::ZERO,
            (ExtReal::Finite(l), ExtReal::Finite(r)) => {
                if r == 0.0 {
                    if l == 0.0 {
                        ExtReal::ZERO
                    } else {
                        ExtReal::Infinity
                    }
                } else {
                    ExtReal::new(l / r)
                }
            }
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl Default for ExtReal {
    fn default() -> Self {
        ExtReal::ZERO
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        ExtReal::new(v)
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::Infinity, ExtReal::Infinity) => Ordering::Equal,
            (ExtReal::Infinity, _) => Ordering::Greater,
            (_, ExtReal::Infinity) => Ordering::Less,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.total_cmp(b),
        }
    }
}

impl PartialEq<f64> for ExtReal {
    fn eq(&self, other: &f64) -> bool {
        match self {
            ExtReal::Finite(v) => v == other,
            ExtReal::Infinity => *other == f64::INFINITY,
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::new(a + b),
            _ => ExtReal::Infinity,
        }
    }
}

/// Scaling by a nonnegative finite factor, with `0 · ∞ = 0`.
impl Mul<f64> for ExtReal {
    type Output = ExtReal;

    fn mul(self, c: f64) -> ExtReal {
        assert!(c >= 0.0 && c.is_finite(), "scale factor must be finite and nonnegative");
        match self {
            ExtReal::Finite(v) => ExtReal::new(v * c),
            ExtReal::Infinity if c == 0.0 => ExtReal::ZERO,
            ExtReal::Infinity => ExtReal::Infinity,
        }
    }
}

/// Division by a positive finite divisor; saturates to `∞` on overflow.
impl Div<f64> for ExtReal {
    type Output = ExtReal;

    fn div(self, c: f64) -> ExtReal {
        assert!(c > 0.0 && c.is_finite(), "divisor must be positive and finite");
        match self {
            ExtReal::Finite(v) => ExtReal::new(v / c),
            ExtReal::Infinity => ExtReal::Infinity,
        }
    }
}

impl std::iter::Sum for ExtReal {
    fn sum<I: Iterator<Item = ExtReal>>(iter: I) -> ExtReal {
        iter.fold(ExtReal::ZERO, |acc, v| acc + v)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => fmt::Display::fmt(v, f),
            ExtReal::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => serializer.serialize_f64(*v),
            ExtReal::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExtVisitor;

        impl Visitor<'_> for ExtVisitor {
            type Value = ExtReal;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative number or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtReal, E> {
                if v >= 0.0 {
                    Ok(ExtReal::new(v))
                } else {
                    Err(E::custom(format!("negative value {v}")))
                }
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtReal, E> {
                Ok(ExtReal::new(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtReal, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtReal, E> {
                match v {
                    "inf" | "infinity" | "Infinity" => Ok(ExtReal::Infinity),
                    _ => Err(E::custom(format!("unexpected string {v:?}"))),
                }
            }
        }

        deserializer.deserialize_any(ExtVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_top() {
        assert!(ExtReal::ZERO < ExtReal::INFINITY);
        assert!(ExtReal::new(1e308) < ExtReal::INFINITY);
        assert!(!ExtReal::INFINITY.le_f64(f64::MAX));
        assert!(ExtReal::INFINITY <= ExtReal::INFINITY);
    }

    #[test]
    fn saturating_arithmetic() {
        assert_eq!(ExtReal::new(1.0) + ExtReal::INFINITY, ExtReal::INFINITY);
        assert_eq!(ExtReal::INFINITY * 3.0, ExtReal::INFINITY);
        assert_eq!(ExtReal::INFINITY * 0.0, ExtReal::ZERO);
        assert_eq!(ExtReal::INFINITY / 2.0, ExtReal::INFINITY);
        assert_eq!(ExtReal::new(f64::MAX) + ExtReal::new(f64::MAX), ExtReal::INFINITY);
        assert_eq!(ExtReal::new(4.0) / 2.0, 2.0);
    }

    #[test]
    fn ratio_conventions() {
        assert_eq!(ExtReal::INFINITY.ratio(ExtReal::INFINITY), 1.0);
        assert_eq!(ExtReal::ZERO.ratio(ExtReal::ZERO), 0.0);
        assert_eq!(ExtReal::new(1.0).ratio(ExtReal::ZERO), ExtReal::INFINITY);
        assert_eq!(ExtReal::new(3.0).ratio(ExtReal::new(2.0)), 1.5);
    }

    #[test]
    fn slack_comparison() {
        assert!(ExtReal::INFINITY.le_with_slack(ExtReal::INFINITY, 0.0));
        assert!(!ExtReal::INFINITY.le_with_slack(ExtReal::new(1e300), 1e-12));
        assert!(ExtReal::new(1.0 + 1e-13).le_with_slack(ExtReal::new(1.0), 1e-12));
    }

    #[test]
    #[should_panic]
    fn rejects_nan() {
        let _ = ExtReal::new(f64::NAN);
    }

    #[test]
    fn serde_roundtrip_infinity() {
        let s = serde_json::to_string(&vec![ExtReal::new(0.5), ExtReal::INFINITY]).unwrap();
        assert_eq!(s, "[0.5,\"inf\"]");
        let back: Vec<ExtReal> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![ExtReal::new(0.5), ExtReal::INFINITY]);
    }
}
