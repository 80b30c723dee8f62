//! Modular contractions and the successive-approximation engine.
//!
//! A map `T` is a modular contraction with factor `k` when
//! `w_{kλ}(Tx, Ty) ≤ w_λ(x, y)` for `0 < λ ≤ λ0`, and a strong one when the
//! right side carries an extra factor `k`. The checks below are
//! refutation-only: a pass means no sampled pair violated the inequality.

use serde::Serialize;

use crate::modular::{metric_dw_star, regularize, BisectOptions, Modular, Side, AXIOM_SLACK};
use crate::{Error, ExtReal, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionSpec {
    pub k: f64,
    pub lambda0: f64,
}

impl ContractionSpec {
    pub fn new(k: f64, lambda0: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "contraction factor must lie in (0, 1), got {k}"
            )));
        }
        if !(lambda0 > 0.0 && lambda0.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "lambda0 must be positive, got {lambda0}"
            )));
        }
        Ok(ContractionSpec { k, lambda0 })
    }

    /// `λ1 = (1 − k)·λ0`, the time at which the seed gap is measured.
    pub fn lambda1(&self) -> f64 {
        (1.0 - self.k) * self.lambda0
    }

    /// `⌈log(ε/C) / log k⌉`: steps after which `k^m·C ≤ ε`.
    pub fn iteration_budget(&self, c: f64, eps: f64) -> u64 {
        if c <= eps {
            return 0;
        }
        ((eps / c).ln() / self.k.ln()).ceil() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionWitness {
    /// Index into the sampled pairs.
    pub pair: usize,
    pub lambda: f64,
    pub lhs: ExtReal,
    pub rhs: ExtReal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionVerdict {
    pub passed: bool,
    pub checked: usize,
    pub violations: usize,
    /// The first violation found.
    pub witness: Option<ContractionWitness>,
}

/// Checks `w_{dilation·λ}(Tx, Ty) ≤ weight·w_λ(x, y)` with `∞ ≤ ∞` allowed.
pub(crate) fn audit_dilation<M, T>(
    m: &M,
    t: T,
    pairs: &[(M::Point, M::Point)],
    lambdas: &[f64],
    dilation: f64,
    weight: f64,
    slack: f64,
) -> Result<ContractionVerdict>
where
    M: Modular + ?Sized,
    T: Fn(&M::Point) -> Result<M::Point>,
{
    let mut verdict = ContractionVerdict {
        passed: true,
        checked: 0,
        violations: 0,
        witness: None,
    };
    for (i, (x, y)) in pairs.iter().enumerate() {
        let (tx, ty) = (t(x)?, t(y)?);
        for &l in lambdas {
            let lhs = m.eval(dilation * l, &tx, &ty);
            let rhs = m.eval(l, x, y) * weight;
            verdict.checked += 1;
            if !lhs.le_with_slack(rhs, slack) {
                verdict.passed = false;
                verdict.violations += 1;
                verdict.witness.get_or_insert(ContractionWitness {
                    pair: i,
                    lambda: l,
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(verdict)
}

fn check_grid(lambdas: &[f64], lambda0: f64) -> Result<()> {
    if lambdas.is_empty() {
        return Err(Error::EmptySample("lambda grid"));
    }
    if let Some(&l) = lambdas.iter().find(|&&l| !(l > 0.0 && l <= lambda0)) {
        return Err(Error::InvalidArgument(format!("grid value {l} outside (0, {lambda0}]")));
    }
    Ok(())
}

/// `w_{kλ}(Tx, Ty) ≤ w_λ(x, y)` for every sampled pair and grid `λ ⊆ (0, λ0]`.
pub fn check_modular_contraction<M, T>(
    m: &M,
    t: T,
    pairs: &[(M::Point, M::Point)],
    spec: ContractionSpec,
    lambdas: &[f64],
) -> Result<ContractionVerdict>
where
    M: Modular + ?Sized,
    T: Fn(&M::Point) -> M::Point,
{
    check_grid(lambdas, spec.lambda0)?;
    audit_dilation(m, |x| Ok(t(x)), pairs, lambdas, spec.k, 1.0, AXIOM_SLACK)
}

/// `w_{kλ}(Tx, Ty) ≤ k·w_λ(x, y)`; implies the plain condition.
pub fn check_strong_contraction<M, T>(
    m: &M,
    t: T,
    pairs: &[(M::Point, M::Point)],
    spec: ContractionSpec,
    lambdas: &[f64],
) -> Result<ContractionVerdict>
where
    M: Modular + ?Sized,
    T: Fn(&M::Point) -> M::Point,
{
    check_grid(lambdas, spec.lambda0)?;
    audit_dilation(m, |x| Ok(t(x)), pairs, lambdas, spec.k, spec.k, AXIOM_SLACK)
}

/// Estimate of `limsup_{λ→0} sup w_{hλ}(Tx, Ty) / w_λ(x, y)`.
///
/// The schedule must decrease; the sup ratio is maximized over its second
/// half, the part closest to zero. `∞/∞` counts as 1 and `0/0` as 0.
pub fn limsup_ratio_probe<M, T>(
    m: &M,
    t: T,
    pairs: &[(M::Point, M::Point)],
    h: f64,
    schedule: &[f64],
) -> Result<ExtReal>
where
    M: Modular + ?Sized,
    T: Fn(&M::Point) -> M::Point,
{
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::InvalidArgument(format!("h must lie in (0, 1), got {h}")));
    }
    if schedule.is_empty() || pairs.is_empty() {
        return Err(Error::EmptySample("schedule or pairs"));
    }
    if !schedule.windows(2).all(|w| w[1] < w[0]) || schedule[0] <= 0.0 || schedule.last().is_some_and(|&l| l <= 0.0) {
        return Err(Error::InvalidArgument(
            "schedule must be positive and strictly decreasing".into(),
        ));
    }
    let images: Vec<_> = pairs.iter().map(|(x, y)| (t(x), t(y))).collect();
    let tail = &schedule[schedule.len() / 2..];
    let mut best = ExtReal::ZERO;
    for &l in tail {
        for ((x, y), (tx, ty)) in pairs.iter().zip(&images) {
            best = best.max(m.eval(h * l, tx, ty).ratio(m.eval(l, x, y)));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LipschitzWitness {
    pub pair: usize,
    /// `None` for the metric side.
    pub lambda: Option<f64>,
    pub lhs: ExtReal,
    pub rhs: ExtReal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipschitzVerdict {
    /// `d_w*(Tx, Ty) ≤ k·d_w*(x, y) + 2·tol` on every pair.
    pub metric_side: bool,
    /// `w_λ(x, y) ≤ 1 ⇒ w_{kλ+0}(Tx, Ty) ≤ 1` on every pair and grid `λ`.
    pub modular_side: bool,
    pub metric_witness: Option<LipschitzWitness>,
    pub modular_witness: Option<LipschitzWitness>,
}

impl LipschitzVerdict {
    pub fn agree(&self) -> bool {
        self.metric_side == self.modular_side
    }
}

/// Both sides of the Lipschitz characterization for a convex modular.
///
/// The right limit `w_{kλ+0}` is approximated by `w_{kλ+tol}`. Bisection
/// failures of `d_w*` propagate as errors.
pub fn lipschitz_equivalence_check<M, T>(
    m: &M,
    t: T,
    pairs: &[(M::Point, M::Point)],
    k: f64,
    lambdas: &[f64],
    opts: BisectOptions,
) -> Result<LipschitzVerdict>
where
    M: Modular + ?Sized,
    M::Point: PartialEq,
    T: Fn(&M::Point) -> M::Point,
{
    let right = regularize(m, Side::Right, opts.tol);
    let mut verdict = LipschitzVerdict {
        metric_side: true,
        modular_side: true,
        metric_witness: None,
        modular_witness: None,
    };
    for (i, (x, y)) in pairs.iter().enumerate() {
        let (tx, ty) = (t(x), t(y));
        let lhs = metric_dw_star(m, &tx, &ty, opts)?;
        let rhs = k * metric_dw_star(m, x, y, opts)?;
        if lhs > rhs + 2.0 * opts.tol {
            verdict.metric_side = false;
            verdict.metric_witness.get_or_insert(LipschitzWitness {
                pair: i,
                lambda: None,
                lhs: ExtReal::new(lhs),
                rhs: ExtReal::new(rhs),
            });
        }
        for &l in lambdas {
            if !m.eval(l, x, y).le_f64(1.0) {
                continue;
            }
            let image = right.eval(k * l, &tx, &ty);
            if !image.le_f64(1.0 + AXIOM_SLACK) {
                verdict.modular_side = false;
                verdict.modular_witness.get_or_insert(LipschitzWitness {
                    pair: i,
                    lambda: Some(l),
                    lhs: image,
                    rhs: ExtReal::new(1.0),
                });
            }
        }
    }
    Ok(verdict)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converged,
    MaxIter,
    Diverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceStep {
    pub iteration: usize,
    /// `w_{λ0}(x_m, x_{m+1})`.
    pub gap: f64,
    /// `k^m·C`.
    pub apriori: f64,
}

/// Record of a successive-approximation run `x_0 = x̄`, `x_{m+1} = T x_m`.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPointTrace<P> {
    pub spec: ContractionSpec,
    pub eps: f64,
    /// `C = w_{λ1}(x̄, T x̄)`.
    pub seed_gap: f64,
    /// Steps after which the a-priori bound alone guarantees `ε`.
    pub iteration_budget: u64,
    pub steps: Vec<TraceStep>,
    pub verdict: Verdict,
    /// Index of the returned fixed point in `iterates`.
    pub fixed_point_index: Option<usize>,
    /// `w_{λ0}(p, T p)` for the returned point `p`.
    pub residual: Option<f64>,
    #[serde(skip)]
    pub iterates: Vec<P>,
}

impl<P> FixedPointTrace<P> {
    pub fn gaps(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.gap).collect()
    }

    pub fn apriori(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.apriori).collect()
    }

    pub fn converged(&self) -> bool {
        self.verdict == Verdict::Converged
    }

    /// `gaps[m] ≤ k^m·C` at every recorded step.
    pub fn within_apriori_bound(&self) -> bool {
        self.steps.iter().all(|s| s.gap <= s.apriori)
    }

    pub fn fixed_point(&self) -> Result<&P> {
        match (self.verdict, self.fixed_point_index) {
            (Verdict::Converged, Some(i)) => Ok(&self.iterates[i]),
            (Verdict::Diverged, _) => Err(Error::Diverged {
                iteration: self.steps.len().saturating_sub(1),
            }),
            _ => Err(Error::MaxIter {
                iterations: self.steps.len(),
                last_gap: self.steps.last().map_or(f64::NAN, |s| s.gap),
            }),
        }
    }
}

/// Steps over which sustained gap growth signals a miscalibrated `k`.
const GROWTH_WINDOW: usize = 5;

fn gaps_blow_up(steps: &[TraceStep]) -> bool {
    if steps.len() <= GROWTH_WINDOW {
        return false;
    }
    let w = &steps[steps.len() - GROWTH_WINDOW - 1..];
    w.windows(2).all(|p| p[1].gap > p[0].gap) && w[GROWTH_WINDOW].gap > 2.0 * w[0].gap
}

/// Successive approximation from `seed`, stopping at the first step with
/// `w_{λ0}(x_m, x_{m+1}) ≤ ε`.
///
/// Under a modular contraction the gaps obey `gaps[m] ≤ k^m·C`. A gap still
/// above `ε` once the bound is below `ε`, or gaps growing more than twofold
/// over five increasing steps, end the run as [`Verdict::Diverged`].
pub fn picard_solve<M, T>(
    m: &M,
    t: T,
    seed: &M::Point,
    spec: ContractionSpec,
    eps: f64,
    max_iter: usize,
) -> Result<FixedPointTrace<M::Point>>
where
    M: Modular + ?Sized,
    M::Point: Clone,
    T: Fn(&M::Point) -> M::Point,
{
    try_picard_solve(m, |x| Ok(t(x)), seed, spec, eps, max_iter)
}

/// [`picard_solve`] for a fallible map; its errors abort the run.
pub fn try_picard_solve<M, T>(
    m: &M,
    t: T,
    seed: &M::Point,
    spec: ContractionSpec,
    eps: f64,
    max_iter: usize,
) -> Result<FixedPointTrace<M::Point>>
where
    M: Modular + ?Sized,
    M::Point: Clone,
    T: Fn(&M::Point) -> Result<M::Point>,
{
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    let first = t(seed)?;
    let c = m
        .eval(spec.lambda1(), seed, &first)
        .finite()
        .ok_or(Error::InfiniteSeed { lambda: spec.lambda1() })?;

    let mut trace = FixedPointTrace {
        spec,
        eps,
        seed_gap: c,
        iteration_budget: spec.iteration_budget(c, eps),
        steps: Vec::new(),
        verdict: Verdict::MaxIter,
        fixed_point_index: None,
        residual: None,
        iterates: vec![seed.clone(), first],
    };
    let mut apriori = c;
    for iteration in 0..max_iter {
        let gap = m
            .eval(spec.lambda0, &trace.iterates[iteration], &trace.iterates[iteration + 1])
            .finite()
            .ok_or(Error::InfiniteGap { iteration })?;
        trace.steps.push(TraceStep {
            iteration,
            gap,
            apriori,
        });

        if gap <= eps {
            trace.verdict = Verdict::Converged;
            trace.fixed_point_index = Some(iteration);
            trace.residual = Some(gap);
            return Ok(trace);
        }
        if apriori <= eps || gaps_blow_up(&trace.steps) {
            trace.verdict = Verdict::Diverged;
            return Ok(trace);
        }
        if iteration + 1 == max_iter {
            break;
        }
        let next = t(&trace.iterates[iteration + 1])?;
        trace.iterates.push(next);
        apriori *= spec.k;
    }
    Ok(trace)
}
