//! The two closed-form example families on `[0, 1]` with `φ(u) = e^u − 1`.

use serde::Serialize;

use super::AcFunction;
use crate::{ExtReal, Result};

/// `x_α(t) = αt(1 − ln t)`, with `x_α′(t) = −α ln t` and `x_α(0) = 0`.
pub fn example_x_alpha(alpha: f64, n: usize) -> Result<AcFunction> {
    assert!(alpha > 0.0, "alpha must be positive");
    AcFunction::from_derivative(0.0, 1.0, 0.0, n, move |t| -alpha * t.ln())
}

/// `w_λ(x_α, 0)`: `α/(λ − α)` for `λ > α`, infinite otherwise.
pub fn closed_w_alpha(alpha: f64, lambda: f64) -> ExtReal {
    if lambda <= alpha {
        ExtReal::INFINITY
    } else {
        ExtReal::new(alpha / (lambda - alpha))
    }
}

/// `x_β(t) = t − (t + β)ln(t + β) + β ln β`, with `x_β′(t) = −ln(t + β)`.
/// `β = 0` gives `x₀(t) = t − t ln t`, the base point of the family.
pub fn example_x_beta(beta: f64, n: usize) -> Result<AcFunction> {
    assert!((0.0..=1.0).contains(&beta), "beta must lie in [0, 1]");
    AcFunction::from_derivative(0.0, 1.0, 0.0, n, move |t| -(t + beta).ln())
}

/// Majorants of the two pieces of `w_λ(x_β, x₀) + 1`, split at `t = β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaBounds {
    /// `2^{1/λ}·λβ/(λ − 1)`, bounding the integral over `[0, β]`.
    pub ii1: f64,
    /// `(1 − β) − β ln β`, bounding the integral over `[β, 1]`.
    pub ii2: f64,
}

impl BetaBounds {
    /// Upper bound for `w_λ(x_β, x₀)`.
    pub fn modular_bound(&self) -> f64 {
        self.ii1 + self.ii2 - 1.0
    }
}

/// Requires `λ > 1`.
pub fn closed_w_beta_bound(beta: f64, lambda: f64) -> BetaBounds {
    assert!(lambda > 1.0, "the majorants need lambda > 1");
    let beta_log_beta = if beta == 0.0 { 0.0 } else { beta * beta.ln() };
    BetaBounds {
        ii1: 2f64.powf(lambda.recip()) * lambda * beta / (lambda - 1.0),
        ii2: (1.0 - beta) - beta_log_beta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gv::{gv_integral, gv_partition};
    use crate::phi::PhiFunction;
    use approx::assert_relative_eq;

    const EXP: PhiFunction = PhiFunction::ExpMinusOne;

    #[test]
    fn closed_forms() {
        assert_eq!(closed_w_alpha(1.0, 2.0), ExtReal::new(1.0));
        assert!(closed_w_alpha(1.0, 1.0).is_infinite());
        let b = closed_w_beta_bound(0.0, 2.0);
        assert_eq!((b.ii1, b.ii2), (0.0, 1.0));
    }

    #[test]
    fn alpha_family_values() {
        let x = example_x_alpha(1.0, 4096).unwrap();
        let zero = AcFunction::constant(0.0, 1.0, 0.0, 4096).unwrap();
        let w = gv_integral(&EXP, 2.0, &x, &zero).unwrap().to_f64();
        assert_relative_eq!(w, 1.0, max_relative = 1e-6);
        assert!(gv_integral(&EXP, 1.0, &x, &zero).unwrap().is_infinite());
        assert!(gv_integral(&EXP, 0.7, &x, &zero).unwrap().is_infinite());
        // x_α(1) = α
        assert_relative_eq!(*x.values().last().unwrap(), 1.0, max_relative = 1e-3);
        let p = gv_partition(&EXP, 2.0, &x, &zero, 10).unwrap();
        assert!(p <= w && w - p < 5e-2, "{p} vs {w}");
    }

    #[test]
    fn beta_family_dichotomy() {
        let base = example_x_beta(0.0, 4096).unwrap();
        let x = example_x_beta(0.5, 4096).unwrap();
        assert!(gv_integral(&EXP, 0.8, &x, &base).unwrap().is_infinite());
        assert!(gv_integral(&EXP, 1.0, &x, &base).unwrap().is_infinite());
        let x = example_x_beta(0.1, 4096).unwrap();
        let w = gv_integral(&EXP, 2.0, &x, &base).unwrap().to_f64();
        assert!(w <= closed_w_beta_bound(0.1, 2.0).modular_bound() * 1.02, "{w}");
        // λ = 2: ∫₀¹ (1 + β/t)^{1/2} dt − 1 = √(1+β) − 1 + β·asinh(1/√β)
        let exact = (1.1f64).sqrt() - 1.0 + 0.1 * (1.0 / 0.1f64.sqrt()).asinh();
        assert_relative_eq!(w, exact, max_relative = 1e-6);
    }
}
