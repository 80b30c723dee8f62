use modspace::gv::{displacement, displacement_bound, example_x_alpha, gv_integral, gv_partition_levels};
use modspace::modular::{check_axioms, AxiomMode};
use modspace::phi::omega_phi;
use modspace::{AcFunction, GvModular, Modular, PhiFunction};
use proptest::prelude::*;

const N: usize = 32;
const EXP: PhiFunction = PhiFunction::ExpMinusOne;

fn phi() -> impl Strategy<Value = PhiFunction> {
    prop_oneof![
        Just(PhiFunction::ExpMinusOne),
        Just(PhiFunction::Linear),
        (1.0..4.0f64).prop_map(|p| PhiFunction::power(p).unwrap()),
    ]
}

fn sampled(scale: f64) -> impl Strategy<Value = AcFunction> {
    prop::collection::vec(-scale..scale, N).prop_map(|d| AcFunction::from_samples(0.0, 1.0, 0.0, d).unwrap())
}

fn lambda() -> impl Strategy<Value = f64> {
    (-2.0..4.0f64).prop_map(|e| 2f64.powf(e))
}

fn shifted(x: &AcFunction, slope: f64) -> AcFunction {
    let d = x.deriv().iter().map(|v| v + slope).collect();
    AcFunction::from_samples(x.a(), x.b(), x.x0(), d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn partitions_stay_below_the_integral(phi in phi(), x in sampled(3.0), y in sampled(3.0), l in lambda()) {
        let w = gv_integral(&phi, l, &x, &y).unwrap().to_f64();
        for s in gv_partition_levels(&phi, l, &x, &y, 5).unwrap() {
            prop_assert!(s <= w * (1.0 + 1e-12) + 1e-12, "{} > {}", s, w);
        }
    }

    #[test]
    fn partitions_grow_with_depth(phi in phi(), x in sampled(3.0), y in sampled(3.0), l in lambda()) {
        let sums = gv_partition_levels(&phi, l, &x, &y, 5).unwrap();
        for p in sums.windows(2) {
            prop_assert!(p[0] <= p[1] * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn monotone_and_convex_in_lambda(phi in phi(), x in sampled(3.0), y in sampled(3.0), l1 in lambda(), l2 in lambda()) {
        let (mu, l) = (l1.min(l2), l1.max(l2));
        let w_l = gv_integral(&phi, l, &x, &y).unwrap();
        let w_mu = gv_integral(&phi, mu, &x, &y).unwrap();
        prop_assert!(w_l <= w_mu);
        prop_assert!(w_l.le_with_slack(w_mu * (mu / l), 1e-12));
    }

    #[test]
    fn translation_anchor(phi in phi(), x in sampled(3.0), y in sampled(3.0), slope in -5.0..5.0f64, l in lambda()) {
        let w = gv_integral(&phi, l, &x, &y).unwrap().to_f64();
        let ws = gv_integral(&phi, l, &shifted(&x, slope), &shifted(&y, slope)).unwrap().to_f64();
        prop_assert!((w - ws).abs() <= 1e-9 * (1.0 + w), "{} vs {}", w, ws);
    }

    #[test]
    fn strict_on_the_anchored_space(x in sampled(3.0), y in sampled(3.0), l in lambda()) {
        let w = gv_integral(&EXP, l, &x, &y).unwrap();
        prop_assert_eq!(w.is_zero(), x.deriv() == y.deriv());
    }

    #[test]
    fn displacement_contract(phi in phi(), x in sampled(3.0), y in sampled(3.0), l in lambda(),
                             i in 0..=N, j in 0..=N) {
        prop_assume!(i != j);
        let (t, s) = (i as f64 / N as f64, j as f64 / N as f64);
        let bound = displacement_bound(&phi, l, &x, &y, t, s).unwrap();
        let actual = displacement(&x, &y, t, s).unwrap();
        prop_assert!(actual <= bound + 1e-9, "{} > {}", actual, bound);
        // linear in λ for a fixed modular value
        let w = gv_integral(&phi, l, &x, &y).unwrap().to_f64();
        let span = (t - s).abs();
        let doubled = 2.0 * l * span * phi.inverse(w / span);
        prop_assert!((doubled - 2.0 * bound).abs() <= 1e-12 * (1.0 + doubled));
    }

    #[test]
    fn json_round_trip(x in sampled(10.0)) {
        let back: AcFunction = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sampled_triples_pass_the_convex_audit(points in prop::collection::vec(sampled(2.0), 3..5)) {
        let m = GvModular::anchored_at_zero(EXP, 0.0, 1.0, N).unwrap();
        let lambdas = [0.25, 0.5, 1.0, 2.0, 4.0];
        for mode in [AxiomMode::Strict, AxiomMode::Convex] {
            let r = check_axioms(&m, &points, &lambdas, mode).unwrap();
            prop_assert!(r.passed(), "{:?}", r.violations);
        }
    }

    #[test]
    fn modulus_of_continuity(alpha in 0.1..2.0f64, i in 0usize..=256, j in 0usize..=256) {
        prop_assume!(i != j);
        let n = 256;
        let x = example_x_alpha(alpha, n).unwrap();
        let zero = AcFunction::constant(0.0, 1.0, 0.0, n).unwrap();
        let m = GvModular::new(EXP, zero.clone());
        // d_w*(x_α, 0) = 2α
        let c = 2.0 * alpha;
        prop_assert!(m.eval(c * (1.0 + 1e-6), &x, &zero).le_f64(1.0));
        let (t, s) = (i as f64 / n as f64, j as f64 / n as f64);
        let v = x.values();
        let lhs = (v[i] - v[j]).abs();
        prop_assert!(lhs <= c * omega_phi(&EXP, (t - s).abs()) + 1e-9, "{} at {} {}", lhs, t, s);
    }
}
