use serde::{Deserialize, Serialize};

use super::{Flags, Modular};
use crate::ExtReal;

/// The three modulars obtained directly from a metric `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CanonicalKind {
    /// `w_λ = d(x, y)`, independent of `λ`; a nonconvex modular.
    Constant,
    /// `w_λ = d(x, y) / λ`, the average velocity.
    Velocity,
    /// `w_λ = ∞` if `λ ≤ d(x, y)`, else `0`.
    Threshold,
}

#[derive(Clone)]
pub struct MetricModular<P, D> {
    metric: D,
    kind: CanonicalKind,
    base: P,
}

pub fn canonical_modular<P, D>(metric: D, kind: CanonicalKind, base_point: P) -> MetricModular<P, D>
where
    D: Fn(&P, &P) -> f64,
{
    MetricModular {
        metric,
        kind,
        base: base_point,
    }
}

impl<P, D> MetricModular<P, D>
where
    D: Fn(&P, &P) -> f64,
{
    pub fn kind(&self) -> CanonicalKind {
        self.kind
    }

    pub fn distance(&self, x: &P, y: &P) -> f64 {
        (self.metric)(x, y)
    }
}

impl<P, D> Modular for MetricModular<P, D>
where
    D: Fn(&P, &P) -> f64,
{
    type Point = P;

    fn eval(&self, lambda: f64, x: &P, y: &P) -> ExtReal {
        let d = (self.metric)(x, y);
        match self.kind {
            CanonicalKind::Constant => ExtReal::new(d),
            CanonicalKind::Velocity => ExtReal::new(d / lambda),
            CanonicalKind::Threshold => {
                if lambda <= d {
                    ExtReal::INFINITY
                } else {
                    ExtReal::ZERO
                }
            }
        }
    }

    fn flags(&self) -> Flags {
        match self.kind {
            CanonicalKind::Constant => Flags {
                convex: false,
                strict: true,
                finite: true,
            },
            CanonicalKind::Velocity => Flags {
                convex: true,
                strict: true,
                finite: true,
            },
            // (iv) holds: λ + μ ≤ d(x,y) forces λ ≤ d(x,z) or μ ≤ d(z,y).
            CanonicalKind::Threshold => Flags {
                convex: true,
                strict: false,
                finite: false,
            },
        }
    }

    fn base_point(&self) -> &P {
        &self.base
    }
}
