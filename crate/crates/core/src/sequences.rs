//! Finite-resolution verdicts for modular convergence, the modular Cauchy
//! property and the sequential Δ₂-condition.
//!
//! Limits are not decidable from finitely many terms. Every verdict here is
//! relative to an explicit threshold `eps` and a `tail` window of the last
//! terms of the sequence: a column "tends to zero" when its tail is
//! nonincreasing and its last entry is at most `eps`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::modular::{metric_dw_star, BisectOptions, Modular};
use crate::ExtReal;

/// Relative slack when comparing consecutive entries of a column.
const TREND_SLACK: f64 = 1e-12;

/// `rows[n][j] = w_{λ_j}(x_n, x)` over a sorted grid of positive `λ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaProfile {
    pub lambdas: Vec<f64>,
    pub rows: Vec<Vec<ExtReal>>,
}

impl LambdaProfile {
    pub fn column(&self, j: usize) -> Vec<ExtReal> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Every row nonincreasing in `λ`.
    pub fn rows_monotone(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.windows(2).all(|p| p[1].le_with_slack(p[0], TREND_SLACK)))
    }

    /// CSV with header `n,<λ_1>,…`; `n` counts from 1 and infinite entries
    /// print as `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n");
        for l in &self.lambdas {
            write!(out, ",{l}").unwrap();
        }
        out.push('\n');
        for (n, row) in self.rows.iter().enumerate() {
            write!(out, "{}", n + 1).unwrap();
            for v in row {
                write!(out, ",{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Panics unless `lambdas` is nonempty, positive and strictly increasing.
fn assert_grid(lambdas: &[f64]) {
    assert!(
        !lambdas.is_empty() && lambdas[0] > 0.0 && lambdas.windows(2).all(|p| p[0] < p[1]),
        "lambda grid must be positive and strictly increasing"
    );
}

fn tail_of<T>(items: &[T], tail: usize) -> &[T] {
    assert!(tail >= 1 && tail <= items.len(), "tail must lie in 1..=len");
    &items[items.len() - tail..]
}

/// Nonincreasing over the window and last entry at most `eps`.
fn tends_to_zero(window: &[ExtReal], eps: f64) -> bool {
    window.windows(2).all(|p| p[1].le_with_slack(p[0], TREND_SLACK)) && window.last().is_some_and(|v| v.le_f64(eps))
}

pub fn lambda_profile<M>(m: &M, seq: &[M::Point], x: &M::Point, lambdas: &[f64]) -> LambdaProfile
where
    M: Modular + ?Sized,
{
    assert!(!seq.is_empty(), "sequence must be nonempty");
    assert_grid(lambdas);
    LambdaProfile {
        lambdas: lambdas.to_vec(),
        rows: seq
            .iter()
            .map(|xn| lambdas.iter().map(|&l| m.eval(l, xn, x)).collect())
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CauchyVerdict {
    pub passed: bool,
    pub max_value: ExtReal,
    /// Sequence indices of a pair attaining `max_value`.
    pub witness: Option<(usize, usize)>,
}

/// `max w_λ(x_n, x_m)` over pairs among the last `tail` terms, against `eps`.
pub fn modular_cauchy_verdict<M>(m: &M, seq: &[M::Point], lambda: f64, eps: f64, tail: usize) -> CauchyVerdict
where
    M: Modular + ?Sized,
{
    let start = seq.len() - tail_of(seq, tail).len();
    let mut max_value = ExtReal::ZERO;
    let mut witness = None;
    for i in start..seq.len() {
        for j in i + 1..seq.len() {
            let v = m.eval(lambda, &seq[i], &seq[j]);
            if witness.is_none() || v > max_value {
                max_value = v;
                witness = Some((i, j));
            }
        }
    }
    CauchyVerdict {
        passed: max_value.le_f64(eps),
        max_value,
        witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Delta2Probe {
    /// Tail values of `w_{λ0}(x_n, x)` are all at most `eps`.
    pub premise_holds: bool,
    /// The same at `λ0/2`.
    pub conclusion_holds: bool,
}

impl Delta2Probe {
    /// The sampled sequence refutes the Δ₂-condition.
    pub fn refutes(&self) -> bool {
        self.premise_holds && !self.conclusion_holds
    }
}

pub fn delta2_probe<M>(m: &M, seq: &[M::Point], x: &M::Point, lambda0: f64, eps: f64, tail: usize) -> Delta2Probe
where
    M: Modular + ?Sized,
{
    let window = tail_of(seq, tail);
    let holds_at = |l: f64| window.iter().all(|xn| m.eval(l, xn, x).le_f64(eps));
    Delta2Probe {
        premise_holds: holds_at(lambda0),
        conclusion_holds: holds_at(0.5 * lambda0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConvergenceVerdicts {
    /// `d_w*(x_n, x) → 0`.
    pub metric_converges: bool,
    /// `w_λ(x_n, x) → 0` for some sampled `λ`.
    pub modular_converges: bool,
    /// `w_λ(x_n, x) → 0` for every sampled `λ`.
    pub all_lambda_converges: bool,
}

impl ConvergenceVerdicts {
    pub fn agree(&self) -> bool {
        self.metric_converges == self.all_lambda_converges
    }
}

/// Metric convergence in `d_w*` against modular convergence on the `λ` grid.
///
/// A `d_w*` bisection that hits the cap counts as an infinite distance.
/// The metric column tolerates `2·opts.tol` of bisection noise in its trend.
pub fn metric_vs_modular_convergence<M>(
    m: &M,
    seq: &[M::Point],
    x: &M::Point,
    lambdas: &[f64],
    eps: f64,
    tail: usize,
    opts: BisectOptions,
) -> ConvergenceVerdicts
where
    M: Modular + ?Sized,
    M::Point: PartialEq,
{
    let window = tail_of(seq, tail);
    let profile = lambda_profile(m, window, x, lambdas);
    let columns: Vec<bool> = (0..lambdas.len())
        .map(|j| tends_to_zero(&profile.column(j), eps))
        .collect();

    let metric: Vec<Option<f64>> = window.iter().map(|xn| metric_dw_star(m, xn, x, opts).ok()).collect();
    let metric_converges = metric.iter().all(Option::is_some) && {
        let d: Vec<f64> = metric.iter().flatten().copied().collect();
        d.windows(2).all(|p| p[1] <= p[0] + 2.0 * opts.tol) && d.last().is_some_and(|&v| v <= eps)
    };

    ConvergenceVerdicts {
        metric_converges,
        modular_converges: columns.iter().any(|&c| c),
        all_lambda_converges: columns.iter().all(|&c| c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gv::{example_x_beta, GvModular};
    use crate::modular::{canonical_modular, CanonicalKind};
    use crate::phi::PhiFunction;

    fn dist(a: &f64, b: &f64) -> f64 {
        (a - b).abs()
    }

    fn velocity() -> impl Modular<Point = f64> {
        canonical_modular(dist, CanonicalKind::Velocity, 0.0)
    }

    #[test]
    fn constant_sequence() {
        let m = velocity();
        let seq = vec![3.0; 5];
        let p = lambda_profile(&m, &seq, &3.0, &[0.5, 1.0, 2.0]);
        assert!(p.rows.iter().flatten().all(|v| v.is_zero()));
        assert!(modular_cauchy_verdict(&m, &seq, 1.0, 1e-300, 5).passed);
        let d = delta2_probe(&m, &seq, &3.0, 1.0, 1e-9, 3);
        assert!(d.premise_holds && d.conclusion_holds);
        let c = metric_vs_modular_convergence(&m, &seq, &3.0, &[0.5, 1.0], 1e-9, 5, BisectOptions::default());
        assert!(c.metric_converges && c.modular_converges && c.all_lambda_converges);
    }

    #[test]
    fn velocity_profile_is_a_quotient() {
        let m = velocity();
        let seq: Vec<f64> = (1..=6).map(|n| 1.0 / n as f64).collect();
        let p = lambda_profile(&m, &seq, &0.0, &[1.0]);
        for (n, row) in p.rows.iter().enumerate() {
            assert_eq!(row[0], 1.0 / (n + 1) as f64);
        }
        assert!(p.to_csv().starts_with("n,1\n1,1\n2,0.5\n"));
    }

    #[test]
    fn separated_sequence_is_not_cauchy() {
        let m = velocity();
        let seq: Vec<f64> = (0..6).map(f64::from).collect();
        let v = modular_cauchy_verdict(&m, &seq, 1.0, 0.5, 4);
        assert!(!v.passed);
        assert_eq!(v.witness, Some((2, 5)));
    }

    #[test]
    fn beta_sequence_profile() {
        let n = 1024;
        let m = GvModular::new(PhiFunction::ExpMinusOne, example_x_beta(0.0, n).unwrap());
        let base = example_x_beta(0.0, n).unwrap();
        let seq: Vec<_> = [2, 4, 8, 16]
            .iter()
            .map(|&k| example_x_beta(1.0 / k as f64, n).unwrap())
            .collect();
        let p = lambda_profile(&m, &seq, &base, &[0.5, 1.0, 2.0]);
        assert!(p.column(0).iter().chain(&p.column(1)).all(|v| v.is_infinite()));
        let c2 = p.column(2);
        assert!(c2.windows(2).all(|w| w[1] < w[0]));
        assert!(p.rows_monotone());
        assert!(p.to_csv().contains("inf"));
    }
}
