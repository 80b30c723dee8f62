//! Carathéodory initial-value problems `x′ = f(t, x)`, `x(a) = x0`, solved by
//! successive approximation of the integral operator
//! `(Tx)(t) = x0 + ∫_a^t f(s, x(s)) ds` in the φ-variation space.
//!
//! On a segment of length `len` with `L·len < 1` the operator satisfies
//! `w_{L·len·λ}(Tx, Ty) ≤ w_λ(x, y)` for every `λ > 0`. On the grid this
//! holds exactly: `f` is sampled at cell midpoints and Jensen's inequality
//! applies to the cell average of `|(x − y)′|`.

use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::fixed_point::{audit_dilation, try_picard_solve, ContractionSpec, ContractionVerdict, FixedPointTrace};
use crate::gv::{gv_integral, AcFunction, GvModular};
use crate::phi::PhiFunction;
use crate::{Error, Result};

pub type Rhs = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Contraction factor used when `L·len` is zero; any value in `(0, 1)` is
/// valid since `T` is then constant.
pub const MIN_FACTOR: f64 = 1e-2;

/// `λ0` for every segment; the contraction holds for all `λ > 0`.
pub const SOLVER_LAMBDA0: f64 = 1.0;

const MAX_PICARD_STEPS: usize = 1000;

/// Absolute slack of the Lipschitz spot-check.
const LIPSCHITZ_SLACK: f64 = 1e-9;

/// Relative quadrature slack of [`verify_contraction_factor`].
pub const CONTRACTION_SLACK: f64 = 1e-6;

/// Cells used for the integrability check of `f(·, y0)`.
const ANCHOR_CELLS: usize = 1024;

#[derive(Clone)]
pub struct CaratheodoryProblem {
    f: Rhs,
    lipschitz: f64,
    phi: PhiFunction,
    a: f64,
    b: f64,
    x0: f64,
    y0: f64,
}

impl fmt::Debug for CaratheodoryProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CaratheodoryProblem")
            .field("lipschitz", &self.lipschitz)
            .field("phi", &self.phi)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("x0", &self.x0)
            .field("y0", &self.y0)
            .finish_non_exhaustive()
    }
}

impl CaratheodoryProblem {
    /// Builds the problem with `φ(u) = e^u − 1` and `y0 = x0`, then
    /// spot-checks the Lipschitz bound and the integrability of `f(·, y0)`.
    pub fn new<F>(f: F, lipschitz: f64, a: f64, b: f64, x0: f64) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self::with_options(Arc::new(f), lipschitz, PhiFunction::ExpMinusOne, a, b, x0, x0)
    }

    pub fn with_options(f: Rhs, lipschitz: f64, phi: PhiFunction, a: f64, b: f64, x0: f64, y0: f64) -> Result<Self> {
        if !(lipschitz >= 0.0 && lipschitz.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Lipschitz constant must be nonnegative, got {lipschitz}"
            )));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidArgument(format!("need a < b, got [{a}, {b}]")));
        }
        if !(x0.is_finite() && y0.is_finite()) {
            return Err(Error::InvalidArgument("initial value and anchor must be finite".into()));
        }
        let p = CaratheodoryProblem {
            f,
            lipschitz,
            phi,
            a,
            b,
            x0,
            y0,
        };
        p.lipschitz_spot_check()?;
        p.anchor_integrability(ANCHOR_CELLS)?;
        Ok(p)
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn phi(&self) -> PhiFunction {
        self.phi
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn rhs(&self, t: f64, x: f64) -> f64 {
        (self.f)(t, x)
    }

    /// `L·(b − a)`.
    pub fn contraction_factor(&self) -> f64 {
        self.lipschitz * (self.b - self.a)
    }

    /// The same right-hand side on `[a, b]` with initial value `x0`; the
    /// checks made at construction carry over.
    fn restrict(&self, a: f64, b: f64, x0: f64) -> Self {
        CaratheodoryProblem {
            a,
            b,
            x0,
            y0: x0,
            ..self.clone()
        }
    }

    /// `|f(t, x) − f(t, y)| ≤ L|x − y| + 1e-9` on a sample of `(t, x, y)`
    /// around `x0`.
    pub fn lipschitz_spot_check(&self) -> Result<()> {
        let scale = self.x0.abs().max(1.0);
        let offsets = [-2.0, -1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 2.0];
        let xs: Vec<f64> = offsets.iter().map(|o| self.x0 + o * scale).collect();
        for i in 0..=8 {
            let t = self.a + (self.b - self.a) * i as f64 / 8.0;
            for &x in &xs {
                for &y in &xs {
                    let lhs = (self.rhs(t, x) - self.rhs(t, y)).abs();
                    let rhs = self.lipschitz * (x - y).abs() + LIPSCHITZ_SLACK;
                    if !(lhs <= rhs) {
                        return Err(Error::LipschitzViolated { t, lhs, rhs });
                    }
                }
            }
        }
        Ok(())
    }

    /// Smallest `λ2 = 2^j` with `C2 = ∫φ(|f(t, y0)|/λ2) dt ≤ 1` on `n`
    /// cells, searched over `j ∈ [-20, 40]`; returns `(λ2, C2)`.
    pub fn anchor_integrability(&self, n: usize) -> Result<(f64, f64)> {
        let h = (self.b - self.a) / n as f64;
        let samples: Vec<f64> = (0..n)
            .map(|i| self.rhs(self.a + (i as f64 + 0.5) * h, self.y0).abs())
            .collect();
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotOrlicz);
        }
        (-20..=40)
            .map(|j| 2f64.powi(j))
            .map(|l2| (l2, samples.iter().map(|&v| self.phi.eval(v / l2)).sum::<f64>() * h))
            .find(|&(_, c2)| c2 <= 1.0)
            .ok_or(Error::NotOrlicz)
    }

    /// Cells `n` on `[a, b]` anchored at `x0` with zero derivative.
    pub fn constant_seed(&self, n: usize) -> Result<AcFunction> {
        AcFunction::from_samples(self.a, self.b, self.x0, vec![0.0; n])
    }

    fn check_grid(&self, x: &AcFunction) -> Result<()> {
        if x.a() != self.a || x.b() != self.b || x.x0() != self.x0 {
            return Err(Error::IncompatibleGrids);
        }
        Ok(())
    }
}

/// `Tx` with derivative samples `f(m_i, x(m_i))` at the cell midpoints and
/// value `x0` at `a`.
pub fn integral_operator(problem: &CaratheodoryProblem, x: &AcFunction) -> Result<AcFunction> {
    problem.check_grid(x)?;
    let deriv = x
        .midpoints()
        .into_iter()
        .zip(x.midpoint_values())
        .map(|(t, v)| {
            let d = problem.rhs(t, v);
            if d.is_finite() {
                Ok(d)
            } else {
                Err(Error::NonFiniteRhs { t, x: v })
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    AcFunction::from_samples(x.a(), x.b(), problem.x0, deriv)
}

/// `w_{factor·λ}(Tx, Ty) ≤ w_λ(x, y)` on every pair and grid `λ`, with
/// relative slack [`CONTRACTION_SLACK`]. Pairs are compared through their
/// grid samples.
pub fn contraction_audit(
    problem: &CaratheodoryProblem,
    factor: f64,
    pairs: &[(AcFunction, AcFunction)],
    lambdas: &[f64],
) -> Result<ContractionVerdict> {
    if !(factor > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "dilation factor must be positive, got {factor}"
        )));
    }
    let mut sampled = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        problem.check_grid(x)?;
        problem.check_grid(y)?;
        if !x.comparable(y) {
            return Err(Error::IncompatibleGrids);
        }
        sampled.push((x.sampled_only(), y.sampled_only()));
    }
    let Some((first, _)) = sampled.first() else {
        return Err(Error::EmptySample("pairs"));
    };
    let m = GvModular::new(problem.phi, problem.constant_seed(first.n())?);
    audit_dilation(
        &m,
        |x| integral_operator(problem, x),
        &sampled,
        lambdas,
        factor,
        1.0,
        CONTRACTION_SLACK,
    )
}

/// [`contraction_audit`] at the factor `L·(b − a)`, or [`MIN_FACTOR`] when
/// that is zero.
pub fn verify_contraction_factor(
    problem: &CaratheodoryProblem,
    pairs: &[(AcFunction, AcFunction)],
    lambdas: &[f64],
) -> Result<ContractionVerdict> {
    contraction_audit(problem, problem.contraction_factor().max(MIN_FACTOR), pairs, lambdas)
}

/// Both sides of the seed estimate `w_{λ0}(x0, T x0) ≤ C0` at
/// `λ0 = L(b − a) + 1 + λ2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeedBound {
    pub lambda0: f64,
    pub lambda2: f64,
    pub c2: f64,
    pub c0: f64,
    pub observed: f64,
}

impl SeedBound {
    pub fn holds(&self) -> bool {
        self.observed <= self.c0 * (1.0 + CONTRACTION_SLACK)
    }
}

pub fn seed_bound(problem: &CaratheodoryProblem, n: usize) -> Result<SeedBound> {
    let (lambda2, c2) = problem.anchor_integrability(n)?;
    let len = problem.b - problem.a;
    let lambda0 = problem.lipschitz * len + 1.0 + lambda2;
    let c0 =
        len / lambda0 * problem.phi.eval(problem.lipschitz * (problem.x0 - problem.y0).abs()) + lambda2 / lambda0 * c2;
    let seed = problem.constant_seed(n)?;
    let image = integral_operator(problem, &seed)?;
    let observed = gv_integral(&problem.phi, lambda0, &seed, &image)?
        .finite()
        .ok_or(Error::InfiniteModular)?;
    Ok(SeedBound {
        lambda0,
        lambda2,
        c2,
        c0,
        observed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    /// Contraction factor used by the run.
    pub k: f64,
    #[serde(skip)]
    pub solution: AcFunction,
    pub trace: FixedPointTrace<AcFunction>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SegmentedSolution {
    pub segments: Vec<Segment>,
    /// Initial value of each segment followed by the final value.
    pub knots: Vec<f64>,
}

impl SegmentedSolution {
    /// `(t, x(t))` at every grid node, knots listed once.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for (i, seg) in self.segments.iter().enumerate() {
            let skip = usize::from(i > 0);
            out.extend(seg.solution.nodes().into_iter().zip(seg.solution.values()).skip(skip));
        }
        out
    }

    /// `max |x(t_i) − exact(t_i)|` over all nodes.
    pub fn max_error<F: Fn(f64) -> f64>(&self, exact: F) -> f64 {
        self.nodes()
            .iter()
            .map(|&(t, x)| (x - exact(t)).abs())
            .fold(0.0, f64::max)
    }

    /// `max |x(t_i) − x0 − Σ h·f(m_j, x(m_j))|` over all nodes, the sum
    /// running over the cells left of `t_i`.
    pub fn residual(&self, problem: &CaratheodoryProblem) -> f64 {
        let mut integral = 0.0;
        let mut worst: f64 = 0.0;
        for seg in &self.segments {
            let x = &seg.solution;
            let h = x.step();
            let values = x.values();
            for (i, (t, v)) in x.midpoints().into_iter().zip(x.midpoint_values()).enumerate() {
                integral += h * problem.rhs(t, v);
                worst = worst.max((values[i + 1] - problem.x0 - integral).abs());
            }
        }
        worst
    }

    pub fn total_iterations(&self) -> usize {
        self.segments.iter().map(|s| s.trace.steps.len()).sum()
    }

    /// Header `t,x`, one row per node.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x\n");
        for (t, x) in self.nodes() {
            writeln!(out, "{t},{x}").unwrap();
        }
        out
    }
}

/// Solves on `⌈L(b − a)/safety⌉` equal segments with `n` cells each.
///
/// Each segment runs successive approximation from the constant function at
/// its initial value with `k = L·len`, `λ0 = 1`, and stops once
/// `w_1(x_m, x_{m+1}) ≤ len·φ(ε)`, which bounds the node residual of the
/// segment by `len·ε`. The assembled solution therefore has node residual at
/// most `ε(b − a)`.
pub fn solve_ivp(problem: &CaratheodoryProblem, eps: f64, n: usize, safety: f64) -> Result<SegmentedSolution> {
    if !(safety > 0.0 && safety < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "safety must lie in (0, 1), got {safety}"
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let total = problem.b - problem.a;
    let count = ((problem.lipschitz * total / safety).ceil() as usize).max(1);
    let len = total / count as f64;
    let k = (problem.lipschitz * len).max(MIN_FACTOR);
    let spec = ContractionSpec::new(k, SOLVER_LAMBDA0)?;
    let seg_eps = len * problem.phi.eval(eps);

    let mut segments = Vec::with_capacity(count);
    let mut knots = vec![problem.x0];
    for s in 0..count {
        let a = problem.a + s as f64 * len;
        let b = if s + 1 == count { problem.b } else { a + len };
        let local = problem.restrict(a, b, *knots.last().unwrap());
        let wrap = |e: Error| Error::Segment {
            segment: s,
            source: Box::new(e),
        };
        let seed = local.constant_seed(n).map_err(wrap)?;
        let m = GvModular::new(local.phi, seed.clone());
        let trace = try_picard_solve(
            &m,
            |x| integral_operator(&local, x),
            &seed,
            spec,
            seg_eps,
            MAX_PICARD_STEPS,
        )
        .map_err(wrap)?;
        let solution = trace.fixed_point().map_err(wrap)?.clone();
        knots.push(*solution.values().last().unwrap());
        segments.push(Segment {
            a,
            b,
            k,
            solution,
            trace,
        });
    }
    Ok(SegmentedSolution { segments, knots })
}

/// Problems addressable by name, with their exact solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegistryProblem {
    /// `x′ = −x`, `x(0) = 1`, `L = 1`.
    Decay,
    /// `x′ = 1`, `x(0) = 0`, `L = 0`.
    Constant,
    /// `x′ = cos t`, `x(0) = 0`, `L = 0`.
    Cosine,
    /// `x′ = x(1 − x)`, `x(0) = 1/2`, with `x` clamped to the state box
    /// `[0, 1]` where `L = 1`.
    Logistic,
}

impl RegistryProblem {
    pub const ALL: [RegistryProblem; 4] = [
        RegistryProblem::Decay,
        RegistryProblem::Constant,
        RegistryProblem::Cosine,
        RegistryProblem::Logistic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegistryProblem::Decay => "decay",
            RegistryProblem::Constant => "constant",
            RegistryProblem::Cosine => "cosine",
            RegistryProblem::Logistic => "logistic",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown problem {name:?}")))
    }

    pub fn default_end(self) -> f64 {
        match self {
            RegistryProblem::Cosine => 2.0,
            RegistryProblem::Logistic => 4.0,
            _ => 1.0,
        }
    }

    /// The problem on `[0, t_end]`.
    pub fn problem(self, t_end: f64) -> Result<CaratheodoryProblem> {
        match self {
            RegistryProblem::Decay => CaratheodoryProblem::new(|_, x| -x, 1.0, 0.0, t_end, 1.0),
            RegistryProblem::Constant => CaratheodoryProblem::new(|_, _| 1.0, 0.0, 0.0, t_end, 0.0),
            RegistryProblem::Cosine => CaratheodoryProblem::new(|t: f64, _| t.cos(), 0.0, 0.0, t_end, 0.0),
            RegistryProblem::Logistic => CaratheodoryProblem::new(
                |_, x: f64| {
                    let x = x.clamp(0.0, 1.0);
                    x * (1.0 - x)
                },
                1.0,
                0.0,
                t_end,
                0.5,
            ),
        }
    }

    pub fn exact(self, t: f64) -> f64 {
        match self {
            RegistryProblem::Decay => (-t).exp(),
            RegistryProblem::Constant => t,
            RegistryProblem::Cosine => t.sin(),
            RegistryProblem::Logistic => 1.0 / (1.0 + (-t).exp()),
        }
    }
}
