use serde::{Deserialize, Serialize};

use super::{Flags, Modular};
use crate::ExtReal;

/// `v_λ = w_λ / λ`. Convex whenever `w` satisfies the triangle axiom (iii).
#[derive(Debug, Clone)]
pub struct Convexified<M>(pub M);

/// `ŵ_λ = λ · w_λ`. A modular in the sense of (i)–(iii) when `w` is convex.
#[derive(Debug, Clone)]
pub struct Hat<M>(pub M);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Finite-resolution stand-in for the one-sided limits `w_{λ±0}`:
/// the right side evaluates at `λ + δ`, the left side at `max(λ − δ, λ/2)`.
#[derive(Debug, Clone)]
pub struct Regularized<M> {
    inner: M,
    side: Side,
    delta: f64,
}

pub fn convexify<M: Modular>(m: M) -> Convexified<M> {
    Convexified(m)
}

pub fn hat<M: Modular>(m: M) -> Hat<M> {
    Hat(m)
}

pub fn regularize<M: Modular>(m: M, side: Side, delta: f64) -> Regularized<M> {
    assert!(delta > 0.0 && delta.is_finite(), "delta must be positive");
    Regularized { inner: m, side, delta }
}

impl<M: Modular> Modular for Convexified<M> {
    type Point = M::Point;

    fn eval(&self, lambda: f64, x: &M::Point, y: &M::Point) -> ExtReal {
        self.0.eval(lambda, x, y) / lambda
    }

    fn flags(&self) -> Flags {
        Flags {
            convex: true,
            ..self.0.flags()
        }
    }

    fn base_point(&self) -> &M::Point {
        self.0.base_point()
    }
}

impl<M: Modular> Modular for Hat<M> {
    type Point = M::Point;

    fn eval(&self, lambda: f64, x: &M::Point, y: &M::Point) -> ExtReal {
        self.0.eval(lambda, x, y) * lambda
    }

    fn flags(&self) -> Flags {
        Flags {
            convex: false,
            ..self.0.flags()
        }
    }

    fn base_point(&self) -> &M::Point {
        self.0.base_point()
    }
}

impl<M: Modular> Regularized<M> {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    fn shifted(&self, lambda: f64) -> f64 {
        match self.side {
            Side::Right => lambda + self.delta,
            // keep the shifted time strictly positive
            Side::Left => (lambda - self.delta).max(0.5 * lambda),
        }
    }
}

impl<M: Modular> Modular for Regularized<M> {
    type Point = M::Point;

    fn eval(&self, lambda: f64, x: &M::Point, y: &M::Point) -> ExtReal {
        self.inner.eval(self.shifted(lambda), x, y)
    }

    fn flags(&self) -> Flags {
        self.inner.flags()
    }

    fn base_point(&self) -> &M::Point {
        self.inner.base_point()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{canonical_modular, CanonicalKind};

    fn dist(a: &f64, b: &f64) -> f64 {
        (a - b).abs()
    }

    #[test]
    fn convexify_divides_by_time() {
        let v = convexify(canonical_modular(dist, CanonicalKind::Constant, 0.0));
        assert_eq!(v.eval(2.0, &0.0, &4.0), 2.0);
        assert_eq!(v.eval(0.5, &0.0, &4.0), 8.0);
        assert!(v.flags().convex);
        let t = convexify(canonical_modular(dist, CanonicalKind::Threshold, 0.0));
        assert_eq!(t.eval(1.0, &0.0, &4.0), ExtReal::INFINITY);
    }

    #[test]
    fn hat_of_velocity_is_the_metric() {
        let h = hat(canonical_modular(dist, CanonicalKind::Velocity, 0.0));
        assert_eq!(h.eval(2.0, &0.0, &4.0), 4.0);
        assert_eq!(h.eval(5.0, &0.0, &4.0), 4.0);
        assert!(h.eval(5.0, &1.0, &1.0).is_zero());
    }

    #[test]
    fn threshold_one_sided_limits() {
        let m = canonical_modular(dist, CanonicalKind::Threshold, 0.0);
        let left = regularize(&m, Side::Left, 1e-6);
        let right = regularize(&m, Side::Right, 1e-6);
        assert_eq!(left.eval(1.0, &0.0, &1.0), ExtReal::INFINITY);
        assert_eq!(right.eval(1.0, &0.0, &1.0), ExtReal::ZERO);
    }

    #[test]
    fn velocity_regularizations_are_close() {
        let m = canonical_modular(dist, CanonicalKind::Velocity, 0.0);
        let delta = 1e-6;
        let w = m.eval(2.0, &0.0, &3.0).to_f64();
        let l = regularize(&m, Side::Left, delta).eval(2.0, &0.0, &3.0).to_f64();
        let r = regularize(&m, Side::Right, delta).eval(2.0, &0.0, &3.0).to_f64();
        assert!(r <= w && w <= l);
        assert!((l - r).abs() < 10.0 * delta);
    }

    #[test]
    fn left_shift_stays_positive() {
        let m = canonical_modular(dist, CanonicalKind::Velocity, 0.0);
        let left = regularize(&m, Side::Left, 10.0);
        assert_eq!(left.eval(1.0, &0.0, &1.0), 2.0);
    }
}
