//! Desk-scale refutation of the modular axioms on finite samples.

use std::fmt;

use serde::Serialize;

use super::Modular;
use crate::{Error, ExtReal, Result};

/// Relative slack absorbing floating-point rounding in inequality checks.
pub const AXIOM_SLACK: f64 = 1e-12;

/// Violations kept per axiom; the verdict counts all of them.
const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    /// (i′) `w_λ(x, x) = 0`.
    Reflexive,
    /// (i) `x ≠ y` ⇒ `w_λ(x, y) > 0` for some `λ`.
    NonDegenerate,
    /// (i_s) `w_λ(x, y) = 0` for one `λ` ⇒ `x = y`.
    Strict,
    /// (ii) `w_λ(x, y) = w_λ(y, x)`.
    Symmetric,
    /// `λ ↦ w_λ(x, y)` nonincreasing.
    Monotone,
    /// (iii) `w_{λ+μ}(x, y) ≤ w_λ(x, z) + w_μ(y, z)`.
    Triangle,
    /// (iv) `w_{λ+μ}(x, y) ≤ λ/(λ+μ)·w_λ(x, z) + μ/(λ+μ)·w_μ(y, z)`.
    Convex,
}

impl Axiom {
    pub fn label(self) -> &'static str {
        match self {
            Axiom::Reflexive => "i'",
            Axiom::NonDegenerate => "i",
            Axiom::Strict => "i_s",
            Axiom::Symmetric => "ii",
            Axiom::Monotone => "monotone",
            Axiom::Triangle => "iii",
            Axiom::Convex => "iv",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomMode {
    Pseudomodular,
    Modular,
    Strict,
    Convex,
}

impl AxiomMode {
    pub fn axioms(self) -> &'static [Axiom] {
        use Axiom::*;
        match self {
            AxiomMode::Pseudomodular => &[Reflexive, Symmetric, Monotone, Triangle],
            AxiomMode::Modular => &[Reflexive, NonDegenerate, Symmetric, Monotone, Triangle],
            AxiomMode::Strict => &[Reflexive, Strict, Symmetric, Monotone, Triangle],
            AxiomMode::Convex => &[Reflexive, NonDegenerate, Symmetric, Monotone, Convex],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomVerdict {
    Pass,
    Fail,
    /// No sampled tuple exercised the axiom.
    Vacuous,
}

/// Indices into the sampled point list plus the sampled times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub x: usize,
    pub y: usize,
    pub z: Option<usize>,
    pub lambda: f64,
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Witness,
    pub lhs: ExtReal,
    pub rhs: ExtReal,
}

impl Violation {
    /// Re-evaluates the witness; true when it still violates its axiom.
    pub fn replay<M>(&self, m: &M, points: &[M::Point]) -> bool
    where
        M: Modular + ?Sized,
    {
        let w = self.witness;
        let (x, y) = (&points[w.x], &points[w.y]);
        match self.axiom {
            Axiom::Reflexive => !m.eval(w.lambda, x, x).is_zero(),
            // witness λ is the smallest sampled time, where w is largest
            Axiom::NonDegenerate | Axiom::Strict => m.eval(w.lambda, x, y).is_zero(),
            Axiom::Symmetric => m.eval(w.lambda, x, y) != m.eval(w.lambda, y, x),
            Axiom::Monotone => {
                let mu = w.mu.expect("monotone witness carries two times");
                !m.eval(mu, x, y).le_with_slack(m.eval(w.lambda, x, y), AXIOM_SLACK)
            }
            Axiom::Triangle | Axiom::Convex => {
                let z = &points[w.z.expect("three-point witness")];
                let mu = w.mu.expect("two-time witness");
                let (lhs, rhs) = three_point_sides(m, self.axiom, w.lambda, mu, x, y, z);
                !lhs.le_with_slack(rhs, AXIOM_SLACK)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub mode: AxiomMode,
    pub checked: usize,
    pub verdicts: Vec<(Axiom, AxiomVerdict)>,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn verdict(&self, axiom: Axiom) -> Option<AxiomVerdict> {
        self.verdicts.iter().find(|(a, _)| *a == axiom).map(|(_, v)| *v)
    }

    /// No axiom failed (vacuous verdicts count as passing).
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|(_, v)| *v != AxiomVerdict::Fail)
    }

    pub fn violations_of(&self, axiom: Axiom) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }
}

fn three_point_sides<M>(
    m: &M,
    axiom: Axiom,
    lambda: f64,
    mu: f64,
    x: &M::Point,
    y: &M::Point,
    z: &M::Point,
) -> (ExtReal, ExtReal)
where
    M: Modular + ?Sized,
{
    let lhs = m.eval(lambda + mu, x, y);
    let (a, b) = (m.eval(lambda, x, z), m.eval(mu, y, z));
    let rhs = match axiom {
        Axiom::Convex => {
            let s = lambda + mu;
            a * (lambda / s) + b * (mu / s)
        }
        _ => a + b,
    };
    (lhs, rhs)
}

struct Tally {
    checked: usize,
    failures: usize,
    kept: Vec<Violation>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            failures: 0,
            kept: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, violation: impl FnOnce() -> Violation) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.kept.len() < MAX_WITNESSES {
                self.kept.push(violation());
            }
        }
    }

    fn verdict(&self) -> AxiomVerdict {
        if self.checked == 0 {
            AxiomVerdict::Vacuous
        } else if self.failures > 0 {
            AxiomVerdict::Fail
        } else {
            AxiomVerdict::Pass
        }
    }
}

/// Checks the axioms selected by `mode` on every sampled tuple.
///
/// Refutation only: a pass means no violation was found on the sample.
/// `lambdas` must be positive and strictly ascending.
pub fn check_axioms<M>(m: &M, points: &[M::Point], lambdas: &[f64], mode: AxiomMode) -> Result<AxiomReport>
where
    M: Modular + ?Sized,
    M::Point: PartialEq,
{
    if points.is_empty() {
        return Err(Error::EmptySample("points"));
    }
    if lambdas.is_empty() {
        return Err(Error::EmptySample("lambdas"));
    }
    if lambdas[0] <= 0.0 || lambdas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "lambdas must be positive and strictly ascending".into(),
        ));
    }

    let n = points.len();
    let mut verdicts = Vec::new();
    let mut violations = Vec::new();
    let mut checked = 0;

    for &axiom in mode.axioms() {
        let mut t = Tally::new();
        match axiom {
            Axiom::Reflexive => {
                for (i, p) in points.iter().enumerate() {
                    for &l in lambdas {
                        let v = m.eval(l, p, p);
                        t.record(v.is_zero(), || Violation {
                            axiom,
                            witness: Witness {
                                x: i,
                                y: i,
                                z: None,
                                lambda: l,
                                mu: None,
                            },
                            lhs: v,
                            rhs: ExtReal::ZERO,
                        });
                    }
                }
            }
            Axiom::NonDegenerate => {
                for i in 0..n {
                    for j in 0..n {
                        if points[i] == points[j] {
                            continue;
                        }
                        let vals: Vec<ExtReal> = lambdas.iter().map(|&l| m.eval(l, &points[i], &points[j])).collect();
                        let ok = vals.iter().any(|v| !v.is_zero());
                        t.record(ok, || Violation {
                            axiom,
                            witness: Witness {
                                x: i,
                                y: j,
                                z: None,
                                lambda: lambdas[0],
                                mu: None,
                            },
                            lhs: vals[0],
                            rhs: ExtReal::ZERO,
                        });
                    }
                }
            }
            Axiom::Strict => {
                for i in 0..n {
                    for j in 0..n {
                        if points[i] == points[j] {
                            continue;
                        }
                        for &l in lambdas {
                            let v = m.eval(l, &points[i], &points[j]);
                            t.record(!v.is_zero(), || Violation {
                                axiom,
                                witness: Witness {
                                    x: i,
                                    y: j,
                                    z: None,
                                    lambda: l,
                                    mu: None,
                                },
                                lhs: v,
                                rhs: ExtReal::ZERO,
                            });
                        }
                    }
                }
            }
            Axiom::Symmetric => {
                for i in 0..n {
                    for j in (i + 1)..n {
                        for &l in lambdas {
                            let a = m.eval(l, &points[i], &points[j]);
                            let b = m.eval(l, &points[j], &points[i]);
                            t.record(a == b, || Violation {
                                axiom,
                                witness: Witness {
                                    x: i,
                                    y: j,
                                    z: None,
                                    lambda: l,
                                    mu: None,
                                },
                                lhs: a,
                                rhs: b,
                            });
                        }
                    }
                }
            }
            Axiom::Monotone => {
                for i in 0..n {
                    for j in 0..n {
                        let vals: Vec<ExtReal> = lambdas.iter().map(|&l| m.eval(l, &points[i], &points[j])).collect();
                        for k in 1..lambdas.len() {
                            let (small, large) = (vals[k - 1], vals[k]);
                            t.record(large.le_with_slack(small, AXIOM_SLACK), || Violation {
                                axiom,
                                witness: Witness {
                                    x: i,
                                    y: j,
                                    z: None,
                                    lambda: lambdas[k - 1],
                                    mu: Some(lambdas[k]),
                                },
                                lhs: large,
                                rhs: small,
                            });
                        }
                    }
                }
            }
            Axiom::Triangle | Axiom::Convex => {
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            for &l in lambdas {
                                for &mu in lambdas {
                                    let (lhs, rhs) =
                                        three_point_sides(m, axiom, l, mu, &points[i], &points[j], &points[k]);
                                    t.record(lhs.le_with_slack(rhs, AXIOM_SLACK), || Violation {
                                        axiom,
                                        witness: Witness {
                                            x: i,
                                            y: j,
                                            z: Some(k),
                                            lambda: l,
                                            mu: Some(mu),
                                        },
                                        lhs,
                                        rhs,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        checked += t.checked;
        verdicts.push((axiom, t.verdict()));
        violations.extend(t.kept);
    }

    Ok(AxiomReport {
        mode,
        checked,
        verdicts,
        violations,
    })
}

/// Both sides of the chain inequality for convex modulars:
/// `(Σλᵢ)·w_{Σλᵢ}(x₁, x_{N+1}) ≤ Σ λᵢ·w_{λᵢ}(xᵢ, x_{i+1})`.
///
/// `chain` holds `N + 1` points and `lambdas` holds `N` times.
pub fn chain_inequality<M>(m: &M, chain: &[M::Point], lambdas: &[f64]) -> (ExtReal, ExtReal)
where
    M: Modular + ?Sized,
{
    assert!(
        !lambdas.is_empty() && chain.len() == lambdas.len() + 1,
        "a chain of N links needs N + 1 points"
    );
    let total: f64 = lambdas.iter().sum();
    let lhs = m.eval(total, &chain[0], &chain[chain.len() - 1]) * total;
    let rhs = lambdas
        .iter()
        .zip(chain.windows(2))
        .map(|(&l, pair)| m.eval(l, &pair[0], &pair[1]) * l)
        .sum();
    (lhs, rhs)
}
