use modspace::phi::{jensen_gap, omega_phi, PhiFunction};
use proptest::prelude::*;

fn phi() -> impl Strategy<Value = PhiFunction> {
    prop_oneof![
        Just(PhiFunction::ExpMinusOne),
        Just(PhiFunction::Linear),
        (1.0..6.0f64).prop_map(|p| PhiFunction::power(p).unwrap()),
    ]
}

/// Log-uniform on `[1e-6, 1e2]`, where every registry member stays finite.
fn arg() -> impl Strategy<Value = f64> {
    (-6.0..2.0f64).prop_map(|e| 10f64.powf(e))
}

const REL: f64 = 1e-12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn inverse_round_trip(phi in phi(), u in arg()) {
        let back = phi.inverse(phi.eval(u));
        prop_assert!((back - u).abs() <= REL * u * 10.0, "{} -> {}", u, back);
    }

    #[test]
    fn positive_and_increasing(phi in phi(), u in arg(), v in arg()) {
        prop_assert_eq!(phi.eval(0.0), 0.0);
        prop_assert!(phi.eval(u) > 0.0);
        let (lo, hi) = (u.min(v), u.max(v));
        prop_assert!(phi.eval(lo) <= phi.eval(hi));
    }

    #[test]
    fn midpoint_convexity(phi in phi(), u in arg(), v in arg()) {
        let lhs = phi.eval(0.5 * u + 0.5 * v);
        let rhs = 0.5 * phi.eval(u) + 0.5 * phi.eval(v);
        prop_assert!(lhs <= rhs * (1.0 + REL));
    }

    #[test]
    fn superadditivity(phi in phi(), u in arg(), v in arg()) {
        prop_assert!(phi.eval(u) + phi.eval(v) <= phi.eval(u + v) * (1.0 + REL));
    }

    #[test]
    fn inverse_subadditivity(phi in phi(), u in arg(), v in arg()) {
        prop_assert!(phi.inverse(u + v) <= (phi.inverse(u) + phi.inverse(v)) * (1.0 + REL));
    }

    #[test]
    fn omega_subadditivity(phi in phi(), u in arg(), v in arg()) {
        let lhs = omega_phi(&phi, u + v);
        let rhs = omega_phi(&phi, u) + omega_phi(&phi, v);
        prop_assert!(lhs <= rhs * (1.0 + REL), "{} > {}", lhs, rhs);
    }

    #[test]
    fn jensen_holds(phi in phi(), samples in prop::collection::vec(0.0..5.0f64, 1..40)) {
        let g = jensen_gap(&phi, &samples).unwrap();
        prop_assert!(g.lhs <= g.rhs * (1.0 + REL) + 1e-12, "{:?}", g);
    }

    #[test]
    fn display_round_trip(phi in phi()) {
        prop_assert_eq!(phi.to_string().parse::<PhiFunction>().unwrap(), phi);
    }
}
