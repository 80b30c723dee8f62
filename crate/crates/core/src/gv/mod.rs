//! The generalized φ-variation modular on real functions of an interval.
//!
//! Functions are absolutely continuous and stored by their derivative
//! sampled at the midpoints of a uniform grid, since every modular value is
//! an integral of the derivative. Values at the grid nodes follow by
//! cumulative midpoint quadrature, exact for the piecewise-constant
//! reading of the samples.

mod examples;
mod quadrature;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::modular::{Flags, Modular};
use crate::phi::PhiFunction;
use crate::{Error, ExtReal, Result};

pub use examples::{closed_w_alpha, closed_w_beta_bound, example_x_alpha, example_x_beta, BetaBounds};

use quadrature::{end_block, EndMass};

/// Default grid size for reproducing the worked examples.
pub const DEFAULT_GRID: usize = 4096;

/// Widest end block handled by graded quadrature, in grid cells.
const END_CELLS: usize = 64;

pub type DerivativeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct AcRepr {
    a: f64,
    b: f64,
    x0: f64,
    deriv: Vec<f64>,
}

/// An absolutely continuous function on `[a, b]`: initial value plus
/// derivative samples at the midpoints of `N` uniform cells.
///
/// Functions built from a closed-form derivative keep it, which lets the
/// modular resolve endpoint singularities beyond the grid. Serialization
/// carries only the samples.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "AcRepr", into = "AcRepr")]
pub struct AcFunction {
    a: f64,
    b: f64,
    x0: f64,
    deriv: Vec<f64>,
    source: Option<DerivativeFn>,
}

impl TryFrom<AcRepr> for AcFunction {
    type Error = Error;

    fn try_from(r: AcRepr) -> Result<Self> {
        AcFunction::from_samples(r.a, r.b, r.x0, r.deriv)
    }
}

impl From<AcFunction> for AcRepr {
    fn from(f: AcFunction) -> Self {
        AcRepr {
            a: f.a,
            b: f.b,
            x0: f.x0,
            deriv: f.deriv,
        }
    }
}

impl fmt::Debug for AcFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AcFunction")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("x0", &self.x0)
            .field("n", &self.deriv.len())
            .field("closed_form", &self.source.is_some())
            .finish()
    }
}

/// Equality of the represented functions: same grid, anchor and samples.
impl PartialEq for AcFunction {
    fn eq(&self, other: &Self) -> bool {
        self.comparable(other) && self.deriv == other.deriv
    }
}

fn check_interval(a: f64, b: f64, x0: f64, n: usize) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidArgument(format!("need a < b, got [{a}, {b}]")));
    }
    if !x0.is_finite() {
        return Err(Error::InvalidArgument(format!("initial value {x0} is not finite")));
    }
    if n == 0 {
        return Err(Error::EmptySample("derivative samples"));
    }
    Ok(())
}

impl AcFunction {
    pub fn from_samples(a: f64, b: f64, x0: f64, deriv: Vec<f64>) -> Result<Self> {
        check_interval(a, b, x0, deriv.len())?;
        if let Some(i) = deriv.iter().position(|d| !d.is_finite()) {
            return Err(Error::InvalidArgument(format!("derivative sample {i} is not finite")));
        }
        Ok(AcFunction {
            a,
            b,
            x0,
            deriv,
            source: None,
        })
    }

    /// Samples `derivative` at the `n` cell midpoints and keeps it for
    /// endpoint refinement.
    pub fn from_derivative<F>(a: f64, b: f64, x0: f64, n: usize, derivative: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_interval(a, b, x0, n)?;
        let h = (b - a) / n as f64;
        let deriv: Vec<f64> = (0..n).map(|i| derivative(a + (i as f64 + 0.5) * h)).collect();
        if let Some(i) = deriv.iter().position(|d| !d.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "derivative is not finite at midpoint {i}"
            )));
        }
        Ok(AcFunction {
            a,
            b,
            x0,
            deriv,
            source: Some(Arc::new(derivative)),
        })
    }

    /// The constant function `value` on `[a, b]`.
    pub fn constant(a: f64, b: f64, value: f64, n: usize) -> Result<Self> {
        Self::from_derivative(a, b, value, n, |_| 0.0)
    }

    /// Re-samples on a grid of `n` cells; needs the closed-form derivative.
    pub fn resample(&self, n: usize) -> Result<Self> {
        let source = self
            .source
            .clone()
            .ok_or_else(|| Error::InvalidArgument("resampling needs a closed-form derivative".into()))?;
        let mut out = Self::from_derivative(self.a, self.b, self.x0, n, move |t| source(t))?;
        out.source = self.source.clone();
        Ok(out)
    }

    /// The same samples without the closed-form derivative.
    pub fn sampled_only(&self) -> Self {
        AcFunction {
            source: None,
            ..self.clone()
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn n(&self) -> usize {
        self.deriv.len()
    }

    pub fn step(&self) -> f64 {
        (self.b - self.a) / self.deriv.len() as f64
    }

    pub fn deriv(&self) -> &[f64] {
        &self.deriv
    }

    pub fn has_closed_form(&self) -> bool {
        self.source.is_some()
    }

    /// Same interval, grid size and anchor value (bitwise).
    pub fn comparable(&self, other: &AcFunction) -> bool {
        self.a.to_bits() == other.a.to_bits()
            && self.b.to_bits() == other.b.to_bits()
            && self.x0.to_bits() == other.x0.to_bits()
            && self.deriv.len() == other.deriv.len()
    }

    /// `t_k = a + k·h` for `k = 0..=N`.
    pub fn nodes(&self) -> Vec<f64> {
        let h = self.step();
        (0..=self.n()).map(|k| self.a + k as f64 * h).collect()
    }

    pub fn midpoints(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n()).map(|i| self.a + (i as f64 + 0.5) * h).collect()
    }

    /// Values at the `N + 1` nodes; `values()[0] == x0` exactly.
    pub fn values(&self) -> Vec<f64> {
        let h = self.step();
        let mut out = Vec::with_capacity(self.n() + 1);
        let mut acc = self.x0;
        out.push(acc);
        for d in &self.deriv {
            acc += h * d;
            out.push(acc);
        }
        out
    }

    /// Values at the cell midpoints.
    pub fn midpoint_values(&self) -> Vec<f64> {
        let h = self.step();
        let mut out = Vec::with_capacity(self.n());
        let mut acc = self.x0;
        for d in &self.deriv {
            out.push(acc + 0.5 * h * d);
            acc += h * d;
        }
        out
    }

    /// Value at any `t ∈ [a, b]`, linear inside each cell.
    pub fn value_at(&self, t: f64) -> f64 {
        let h = self.step();
        let k = (((t - self.a) / h).floor().max(0.0) as usize).min(self.n() - 1);
        let left: f64 = self.x0 + self.deriv[..k].iter().map(|d| h * d).sum::<f64>();
        left + (t - (self.a + k as f64 * h)) * self.deriv[k]
    }

    fn node_index(&self, t: f64) -> Result<usize> {
        let pos = (t - self.a) / self.step();
        let k = pos.round();
        if k < 0.0 || k > self.n() as f64 || (pos - k).abs() > 1e-9 * self.n() as f64 {
            return Err(Error::InvalidArgument(format!("t = {t} is not a grid node")));
        }
        Ok(k as usize)
    }
}

/// `w_λ(x, y) = ∫_a^b φ(|x′(t) − y′(t)| / λ) dt`.
///
/// Without closed-form derivatives this is the midpoint sum over the grid.
/// When both functions carry one, the cells next to each end are replaced by
/// graded Gauss–Legendre shells, which resolves integrable endpoint
/// singularities and returns `INFINITY` for nonintegrable ones.
pub fn gv_integral(phi: &PhiFunction, lambda: f64, x: &AcFunction, y: &AcFunction) -> Result<ExtReal> {
    if !x.comparable(y) {
        return Err(Error::IncompatibleGrids);
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    let n = x.n();
    let h = x.step();
    let cell = |i: usize| phi.eval((x.deriv[i] - y.deriv[i]).abs() / lambda);

    let total = match (&x.source, &y.source) {
        (Some(fx), Some(fy)) => {
            let g = |t: f64| phi.eval((fx(t) - fy(t)).abs() / lambda);
            let (k, width) = if n >= 4 {
                let k = (n / 4).min(END_CELLS);
                (k, k as f64 * h)
            } else {
                (0, 0.5 * (x.b - x.a))
            };
            let left = end_block(g, x.a, width, true);
            let right = end_block(g, x.b, width, false);
            match (left, right) {
                (EndMass::Finite(l), EndMass::Finite(r)) => {
                    let interior: f64 = if k > 0 {
                        (k..n - k).map(cell).sum::<f64>() * h
                    } else {
                        0.0
                    };
                    l + interior + r
                }
                _ => return Ok(ExtReal::INFINITY),
            }
        }
        _ => (0..n).map(cell).sum::<f64>() * h,
    };

    if total.is_finite() {
        Ok(ExtReal::new(total.max(0.0)))
    } else {
        Ok(ExtReal::INFINITY)
    }
}

/// Riesz sums `Σ φ(|Δ(x − y)| / (λ·Δt))·Δt` over the dyadic partitions with
/// `2^j` pieces, `j = 0..=depth`, skipping levels the grid cannot resolve.
pub fn gv_partition_levels(
    phi: &PhiFunction,
    lambda: f64,
    x: &AcFunction,
    y: &AcFunction,
    depth: u32,
) -> Result<Vec<f64>> {
    if !x.comparable(y) {
        return Err(Error::IncompatibleGrids);
    }
    let n = x.n();
    let diff: Vec<f64> = x.values().iter().zip(y.values()).map(|(a, b)| a - b).collect();
    let mut sums = Vec::new();
    for j in 0..=depth.min(usize::BITS - 1) {
        let pieces = 1usize << j;
        if pieces > n {
            break;
        }
        if !n.is_multiple_of(pieces) {
            continue;
        }
        let stride = n / pieces;
        let dt = (x.b - x.a) / pieces as f64;
        let s: f64 = (0..pieces)
            .map(|p| {
                let jump = (diff[(p + 1) * stride] - diff[p * stride]).abs();
                phi.eval(jump / (lambda * dt)) * dt
            })
            .sum();
        sums.push(s);
    }
    Ok(sums)
}

/// Largest dyadic Riesz sum up to `depth`: a lower bound for the supremum
/// over all partitions.
pub fn gv_partition(phi: &PhiFunction, lambda: f64, x: &AcFunction, y: &AcFunction, depth: u32) -> Result<f64> {
    Ok(gv_partition_levels(phi, lambda, x, y, depth)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// `λ|t − s|·φ⁻¹(w_λ(x, y) / |t − s|)`, which bounds
/// `|(x − y)(t) − (x − y)(s)|` for grid nodes `t ≠ s`.
pub fn displacement_bound(
    phi: &PhiFunction,
    lambda: f64,
    x: &AcFunction,
    y: &AcFunction,
    t: f64,
    s: f64,
) -> Result<f64> {
    x.node_index(t)?;
    x.node_index(s)?;
    if t == s {
        return Err(Error::InvalidArgument("t and s must differ".into()));
    }
    let w = gv_integral(phi, lambda, x, y)?.finite().ok_or(Error::InfiniteModular)?;
    let span = (t - s).abs();
    Ok(lambda * span * phi.inverse(w / span))
}

/// `|(x − y)(t) − (x − y)(s)|` at grid nodes.
pub fn displacement(x: &AcFunction, y: &AcFunction, t: f64, s: f64) -> Result<f64> {
    if !x.comparable(y) {
        return Err(Error::IncompatibleGrids);
    }
    let (kt, ks) = (x.node_index(t)?, x.node_index(s)?);
    let (vx, vy) = (x.values(), y.values());
    Ok(((vx[kt] - vy[kt]) - (vx[ks] - vy[ks])).abs())
}

/// The φ-variation modular on functions anchored at `base.x0()`.
///
/// Strict and convex on the anchored space, possibly infinite-valued.
/// Evaluating on functions from a different grid panics.
#[derive(Debug, Clone)]
pub struct GvModular {
    phi: PhiFunction,
    base: AcFunction,
}

impl GvModular {
    pub fn new(phi: PhiFunction, base: AcFunction) -> Self {
        GvModular { phi, base }
    }

    /// Modular anchored at the zero function on `[a, b]` with `n` cells.
    pub fn anchored_at_zero(phi: PhiFunction, a: f64, b: f64, n: usize) -> Result<Self> {
        Ok(GvModular::new(phi, AcFunction::constant(a, b, 0.0, n)?))
    }

    pub fn phi(&self) -> &PhiFunction {
        &self.phi
    }

    pub fn try_eval(&self, lambda: f64, x: &AcFunction, y: &AcFunction) -> Result<ExtReal> {
        gv_integral(&self.phi, lambda, x, y)
    }
}

impl Modular for GvModular {
    type Point = AcFunction;

    fn eval(&self, lambda: f64, x: &AcFunction, y: &AcFunction) -> ExtReal {
        match gv_integral(&self.phi, lambda, x, y) {
            Ok(v) => v,
            Err(e) => panic!("GvModular evaluated outside its space: {e}"),
        }
    }

    fn flags(&self) -> Flags {
        Flags {
            convex: true,
            strict: true,
            finite: false,
        }
    }

    fn base_point(&self) -> &AcFunction {
        &self.base
    }
}
