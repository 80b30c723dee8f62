//! Metric modulars `w_λ(x, y)` and the machinery built directly on them.
//!
//! A modular assigns to every "time" `λ > 0` and pair of points an
//! extended-nonnegative "velocity". Everything here is generic over the
//! [`Modular`] trait, so the same audits, metrics and transforms apply to the
//! canonical metric modulars and to the φ-variation modular on functions.

mod axioms;
mod canonical;
mod metric;
mod space;
mod transform;

use serde::Serialize;

use crate::ExtReal;

pub use axioms::{
    chain_inequality, check_axioms, Axiom, AxiomMode, AxiomReport, AxiomVerdict, Violation, Witness, AXIOM_SLACK,
};
pub use canonical::{canonical_modular, CanonicalKind, MetricModular};
pub use metric::{infimum_of_upray, metric_dw, metric_dw_star, metric_kappa, BisectOptions};
pub use space::{in_modular_space, Membership, SpaceVariant};
pub use transform::{convexify, hat, regularize, Convexified, Hat, Regularized, Side};

/// Structural claims a modular makes about itself. Audits check them; nothing
/// trusts them blindly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub convex: bool,
    pub strict: bool,
    pub finite: bool,
}

pub trait Modular {
    type Point;

    /// `w_λ(x, y)` for `λ > 0`.
    fn eval(&self, lambda: f64, x: &Self::Point, y: &Self::Point) -> ExtReal;

    fn flags(&self) -> Flags;

    /// The fixed point `x₀` around which modular spaces are built.
    fn base_point(&self) -> &Self::Point;
}

impl<M: Modular + ?Sized> Modular for &M {
    type Point = M::Point;

    fn eval(&self, lambda: f64, x: &Self::Point, y: &Self::Point) -> ExtReal {
        (**self).eval(lambda, x, y)
    }

    fn flags(&self) -> Flags {
        (**self).flags()
    }

    fn base_point(&self) -> &Self::Point {
        (**self).base_point()
    }
}
