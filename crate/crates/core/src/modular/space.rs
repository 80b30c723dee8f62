use serde::{Deserialize, Serialize};

use super::Modular;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceVariant {
    /// `w_λ(x, x₀) → 0` as `λ → ∞`.
    Xw,
    /// `w_λ(x, x₀) < ∞` for some `λ > 0`.
    XwStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub witness_lambda: Option<f64>,
}

/// Powers of two from `2^-30` up to the cap, with the cap itself appended.
fn search_grid(lambda_cap: f64) -> Vec<f64> {
    let mut grid: Vec<f64> = (-30..).map(|k| 2f64.powi(k)).take_while(|&l| l < lambda_cap).collect();
    grid.push(lambda_cap);
    grid
}

/// Semi-decision of membership in the modular spaces around `m.base_point()`.
///
/// `XwStar` returns the first grid time with a finite modular. `Xw` further
/// requires `w ≤ tol` at `lambda_cap` and reports the first grid time where
/// that holds; by monotonicity in `λ` a positive verdict is never wrong, but a
/// cap that is too small can produce a false negative.
pub fn in_modular_space<M>(m: &M, x: &M::Point, variant: SpaceVariant, lambda_cap: f64, tol: f64) -> Membership
where
    M: Modular + ?Sized,
{
    let base = m.base_point();
    let grid = search_grid(lambda_cap);
    let first = |pred: &dyn Fn(f64) -> bool| grid.iter().copied().find(|&l| pred(l));

    let star_witness = first(&|l| m.eval(l, x, base).is_finite());
    match variant {
        SpaceVariant::XwStar => Membership {
            member: star_witness.is_some(),
            witness_lambda: star_witness,
        },
        SpaceVariant::Xw => {
            if star_witness.is_none() || !m.eval(lambda_cap, x, base).le_f64(tol) {
                return Membership {
                    member: false,
                    witness_lambda: None,
                };
            }
            Membership {
                member: true,
                witness_lambda: first(&|l| m.eval(l, x, base).le_f64(tol)),
            }
        }
    }
}
