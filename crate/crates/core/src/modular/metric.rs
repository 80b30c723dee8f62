//! Metrics induced by a modular, each an infimum over an up-ray of times.
//!
//! Because `λ ↦ w_λ(x, y)` is nonincreasing, each predicate
//! `w_λ(x, y) ≤ κ(λ)` with nondecreasing `κ` holds on an up-ray `[λ*, ∞)` or
//! `(λ*, ∞)`, and bracketed bisection finds `λ*`.

use super::Modular;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectOptions {
    pub tol: f64,
    pub lambda_cap: f64,
}

impl Default for BisectOptions {
    fn default() -> Self {
        BisectOptions {
            tol: 1e-9,
            lambda_cap: 1e9,
        }
    }
}

impl BisectOptions {
    pub fn with_tol(tol: f64) -> Self {
        BisectOptions { tol, ..Self::default() }
    }
}

/// Infimum of the up-ray `{λ > 0 : pred(λ)}`, within `opts.tol`.
///
/// The upper end of the bracket starts at 1 and doubles until the predicate
/// holds; `CapExceeded` if it still fails at `opts.lambda_cap`.
pub fn infimum_of_upray<F>(mut pred: F, opts: BisectOptions) -> Result<f64>
where
    F: FnMut(f64) -> bool,
{
    let BisectOptions { tol, lambda_cap } = opts;
    if !(tol > 0.0) || !(lambda_cap > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tol and lambda_cap must be positive (got {tol}, {lambda_cap})"
        )));
    }

    // Invariant: pred(hi) holds; lo == 0 or pred(lo) fails.
    let mut lo = 0.0;
    let mut hi = 1.0_f64.min(lambda_cap);
    while !pred(hi) {
        if hi >= lambda_cap {
            return Err(Error::CapExceeded { cap: lambda_cap });
        }
        lo = hi;
        hi = (2.0 * hi).min(lambda_cap);
    }

    while hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo + 0.5 * (hi - lo))
}

/// `d_w(x, y) = inf{λ > 0 : w_λ(x, y) ≤ λ}`.
pub fn metric_dw<M>(m: &M, x: &M::Point, y: &M::Point, opts: BisectOptions) -> Result<f64>
where
    M: Modular + ?Sized,
    M::Point: PartialEq,
{
    if x == y {
        return Ok(0.0);
    }
    infimum_of_upray(|lambda| m.eval(lambda, x, y).le_f64(lambda), opts)
}

/// `d*_w(x, y) = inf{λ > 0 : w_λ(x, y) ≤ 1}`.
///
/// For nonconvex modulars only symmetry and `d*(x, x) = 0` are guaranteed;
/// the triangle inequality is not certified there.
pub fn metric_dw_star<M>(m: &M, x: &M::Point, y: &M::Point, opts: BisectOptions) -> Result<f64>
where
    M: Modular + ?Sized,
    M::Point: PartialEq,
{
    if x == y {
        return Ok(0.0);
    }
    infimum_of_upray(|lambda| m.eval(lambda, x, y).le_f64(1.0), opts)
}

/// Grid on which gauges are spot-checked for superadditivity.
fn gauge_grid() -> impl Iterator<Item = f64> + Clone {
    (-12..=12).map(|k| 2f64.powi(k))
}

/// `d_{κ,w}(x, y) = inf{λ > 0 : w_λ(x, y) ≤ κ(λ)}` for a superadditive gauge
/// `κ` with `κ(0+) = 0`.
pub fn metric_kappa<M, K>(m: &M, kappa: K, x: &M::Point, y: &M::Point, opts: BisectOptions) -> Result<f64>
where
    M: Modular + ?Sized,
    M::Point: PartialEq,
    K: Fn(f64) -> f64,
{
    for lambda in gauge_grid() {
        if !(kappa(lambda) > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "gauge must be positive on (0, ∞); kappa({lambda}) = {}",
                kappa(lambda)
            )));
        }
        for mu in gauge_grid() {
            let sum = lambda + mu;
            let (kl, km, ks) = (kappa(lambda), kappa(mu), kappa(sum));
            if kl + km > ks + 1e-12 * ks.abs().max(1.0) {
                return Err(Error::InvalidGauge { lambda, mu, sum });
            }
        }
    }
    if x == y {
        return Ok(0.0);
    }
    infimum_of_upray(|lambda| m.eval(lambda, x, y).le_f64(kappa(lambda)), opts)
}
