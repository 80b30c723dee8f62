//! Endpoint-graded quadrature for integrands with a possible singularity at
//! an end of the interval.
//!
//! An end block `[e, e + W]` (or `[e − W, e]`) is split into dyadic shells
//! `W·2^{-j-1} ≤ |t − e| ≤ W·2^{-j}`, each integrated by Gauss–Legendre. For
//! an integrable power singularity the shell masses decay geometrically; a
//! ratio that fails to drop below one marks a nonintegrable endpoint.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

/// Deepest shell; `2^-80` is far below any grid resolution in use.
const MAX_SHELLS: usize = 80;

/// Shell ratios at or above this are treated as nonintegrable.
const DIVERGENCE_RATIO: f64 = 1.0 - 1e-9;

const GAUSS_DEGREE: usize = 10;

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(GAUSS_DEGREE).unwrap()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum EndMass {
    Finite(f64),
    Divergent,
}

/// Integral of `g` over the block of width `width` adjacent to `end`,
/// extending to the right when `rightward` and to the left otherwise.
pub(crate) fn end_block<G>(g: G, end: f64, width: f64, rightward: bool) -> EndMass
where
    G: Fn(f64) -> f64,
{
    let at = |offset: f64| if rightward { end + offset } else { end - offset };
    let mut total = 0.0;
    let mut prev = f64::NAN;
    let mut last = f64::NAN;
    let mut outer = width;
    for _ in 0..MAX_SHELLS {
        let inner = 0.5 * outer;
        let (p, q) = (at(inner), at(outer));
        // the shell collapsed below the resolution of `end`
        if p == q || p == end {
            break;
        }
        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
        let mass = rule().integrate(lo, hi, &g);
        if !mass.is_finite() {
            return EndMass::Divergent;
        }
        total += mass;
        prev = last;
        last = mass;
        outer = inner;
    }

    if !(prev > 0.0) || !(last > 0.0) {
        // integrand vanishes near the end or too few shells to estimate a tail
        return if total.is_finite() {
            EndMass::Finite(total)
        } else {
            EndMass::Divergent
        };
    }
    let ratio = last / prev;
    if ratio >= DIVERGENCE_RATIO {
        return EndMass::Divergent;
    }
    let tail = last * ratio / (1.0 - ratio);
    let value = total + tail;
    if value.is_finite() {
        EndMass::Finite(value)
    } else {
        EndMass::Divergent
    }
}
