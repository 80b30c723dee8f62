//! Convex φ-functions with closed-form inverses.
//!
//! Only families whose inverse is exact are offered; the displacement and
//! modulus-of-continuity estimates evaluate `φ⁻¹` directly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PhiFunction {
    /// `u^p` with `p ≥ 1`.
    Power { p: f64 },
    /// `e^u − 1`; Orlicz, but not Δ₂ at infinity.
    ExpMinusOne,
    /// `u`, the same as `Power { p: 1 }`.
    Linear,
}

impl PhiFunction {
    pub fn power(p: f64) -> Result<Self> {
        if p >= 1.0 && p.is_finite() {
            Ok(PhiFunction::Power { p })
        } else {
            Err(Error::InvalidArgument(format!("power exponent must be >= 1, got {p}")))
        }
    }

    /// `φ(u)`; `+∞` when the value overflows.
    pub fn eval(&self, u: f64) -> f64 {
        debug_assert!(u >= 0.0, "φ is defined on [0, ∞)");
        match *self {
            PhiFunction::Power { p } => u.powf(p),
            PhiFunction::ExpMinusOne => u.exp_m1(),
            PhiFunction::Linear => u,
        }
    }

    /// `φ⁻¹(v)`.
    pub fn inverse(&self, v: f64) -> f64 {
        debug_assert!(v >= 0.0, "φ⁻¹ is defined on [0, ∞)");
        match *self {
            PhiFunction::Power { p } => v.powf(p.recip()),
            PhiFunction::ExpMinusOne => v.ln_1p(),
            PhiFunction::Linear => v,
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiFunction::Power { p } => write!(f, "power:{p}"),
            PhiFunction::ExpMinusOne => f.write_str("exp"),
            PhiFunction::Linear => f.write_str("linear"),
        }
    }
}

impl FromStr for PhiFunction {
    type Err = Error;

    /// Accepts `exp`, `linear`, or `power:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" | "exp_minus_one" => Ok(PhiFunction::ExpMinusOne),
            "linear" => Ok(PhiFunction::Linear),
            _ => {
                let p = s
                    .strip_prefix("power:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown phi function {s:?}")))?;
                PhiFunction::power(p)
            }
        }
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2, "log grid needs 0 < lo < hi and n >= 2");
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Outcome of a finite-grid growth check; a failure carries the grid point
/// that refutes the condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthVerdict {
    pub passed: bool,
    pub witness: Option<f64>,
}

/// `φ(2u) ≤ K·φ(u)` at every grid point `u ≥ u0`.
pub fn check_delta2_at_infinity(phi: &PhiFunction, k: f64, u0: f64, grid: &[f64]) -> GrowthVerdict {
    let witness = grid
        .iter()
        .copied()
        .filter(|&u| u >= u0)
        .find(|&u| !(phi.eval(2.0 * u) <= k * phi.eval(u) * (1.0 + 1e-12)));
    GrowthVerdict {
        passed: witness.is_none(),
        witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrliczVerdict {
    pub passed: bool,
    /// First grid point from which `φ(u)/u` increases strictly to the end.
    pub knee: Option<f64>,
    pub ratio_at_max: f64,
}

/// Refutation check of `φ(u)/u → ∞` on an increasing grid: the ratio must
/// increase strictly from some knee on and exceed `threshold` at the last
/// grid point.
pub fn check_orlicz_condition(phi: &PhiFunction, grid: &[f64], threshold: f64) -> OrliczVerdict {
    let ratios: Vec<f64> = grid.iter().map(|&u| phi.eval(u) / u).collect();
    let ratio_at_max = ratios.last().copied().unwrap_or(f64::NAN);
    // walk back from the end while the ratio keeps strictly increasing
    let mut start = ratios.len().saturating_sub(1);
    while start > 0 && ratios[start - 1] < ratios[start] {
        start -= 1;
    }
    let knee = (ratios.len() >= 2 && start < ratios.len() - 1).then(|| grid[start]);
    OrliczVerdict {
        passed: knee.is_some() && ratio_at_max > threshold,
        knee,
        ratio_at_max,
    }
}

/// `ω_φ(u) = u·φ⁻¹(1/u)`, with `ω_φ(0) = 0`.
pub fn omega_phi(phi: &PhiFunction, u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u * phi.inverse(u.recip())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JensenGap {
    /// `φ(mean of samples)`.
    pub lhs: f64,
    /// mean of `φ(sample)`.
    pub rhs: f64,
}

impl JensenGap {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-12
    }
}

/// Both sides of Jensen's inequality for samples of `|x(t)|` on a uniform grid.
pub fn jensen_gap(phi: &PhiFunction, samples: &[f64]) -> Result<JensenGap> {
    if samples.is_empty() {
        return Err(Error::EmptySample("samples"));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let rhs = samples.iter().map(|&s| phi.eval(s)).sum::<f64>() / n;
    Ok(JensenGap {
        lhs: phi.eval(mean),
        rhs,
    })
}
