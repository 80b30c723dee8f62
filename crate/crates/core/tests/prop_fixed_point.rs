use modspace::fixed_point::{
    check_modular_contraction, check_strong_contraction, lipschitz_equivalence_check, picard_solve, ContractionSpec,
};
use modspace::modular::{canonical_modular, convexify, BisectOptions, CanonicalKind};
use modspace::Modular;
use proptest::prelude::*;

fn dist(a: &f64, b: &f64) -> f64 {
    (a - b).abs()
}

fn max_dist(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - b[0]).abs().max((a[1] - b[1]).abs())
}

fn kind() -> impl Strategy<Value = CanonicalKind> {
    prop_oneof![
        Just(CanonicalKind::Constant),
        Just(CanonicalKind::Velocity),
        Just(CanonicalKind::Threshold),
    ]
}

fn pairs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 1..6)
}

fn grid(lambda0: f64) -> Vec<f64> {
    (0..12).map(|i| lambda0 * 2f64.powi(-i)).collect()
}

const REL: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn iterates_obey_the_apriori_bound(k in 0.05..0.95f64, s in -1.0..1.0f64, b in -5.0..5.0f64,
                                       seed in -50.0..50.0f64, lambda0 in 0.25..4.0f64, e in -9.0..-2.0f64) {
        let m = canonical_modular(dist, CanonicalKind::Velocity, 0.0);
        let a = k * s;
        let spec = ContractionSpec::new(k, lambda0).unwrap();
        prop_assume!((seed - (a * seed + b)).abs() > 1e-12);
        let trace = picard_solve(&m, |x| a * x + b, &seed, spec, 10f64.powf(e), 10_000).unwrap();
        prop_assert!(trace.converged(), "{:?}", trace.verdict);
        prop_assert!(trace.within_apriori_bound());
        let c = trace.seed_gap;
        let xs = &trace.iterates;
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                let w = m.eval(lambda0, &xs[i], &xs[j]).to_f64();
                let bound = k.powi(i as i32) * c;
                prop_assert!(w <= bound * (1.0 + REL) + 1e-15, "w({}, {}) = {} > {}", i, j, w, bound);
            }
        }
        prop_assert!(trace.steps.len() as u64 <= trace.iteration_budget + 1);
    }

    #[test]
    fn strong_contraction_implies_contraction(kd in kind(), k in 0.05..0.95f64, a in -1.5..1.5f64, b in -3.0..3.0f64,
                                              pairs in pairs(), lambda0 in 0.25..4.0f64) {
        let m = canonical_modular(dist, kd, 0.0);
        let spec = ContractionSpec::new(k, lambda0).unwrap();
        let t = |x: &f64| a * x + b;
        let strong = check_strong_contraction(&m, t, &pairs, spec, &grid(lambda0)).unwrap();
        let plain = check_modular_contraction(&m, t, &pairs, spec, &grid(lambda0)).unwrap();
        prop_assert!(!strong.passed || plain.passed);
        prop_assert!(plain.violations <= strong.violations);
    }

    #[test]
    fn strong_contraction_transfers_to_the_convexification(kd in kind(), k in 0.05..0.95f64, a in -1.5..1.5f64,
                                                           b in -3.0..3.0f64, pairs in pairs(), lambda0 in 0.25..4.0f64) {
        let m = canonical_modular(dist, kd, 0.0);
        let spec = ContractionSpec::new(k, lambda0).unwrap();
        let t = |x: &f64| a * x + b;
        let strong = check_strong_contraction(&m, t, &pairs, spec, &grid(lambda0)).unwrap();
        let bridged = check_modular_contraction(&convexify(&m), t, &pairs, spec, &grid(lambda0)).unwrap();
        prop_assert!(!strong.passed || bridged.passed, "{:?}", bridged.witness);
    }

    #[test]
    fn two_seeds_reach_the_same_point(k in 0.05..0.95f64, s in -1.0..1.0f64, b in -5.0..5.0f64,
                                      seeds in (-50.0..50.0f64, -50.0..50.0f64), e in -9.0..-2.0f64) {
        let m = canonical_modular(dist, CanonicalKind::Velocity, 0.0);
        let (a, eps) = (k * s, 10f64.powf(e));
        let spec = ContractionSpec::new(k, 1.0).unwrap();
        let t = |x: &f64| a * x + b;
        let p = picard_solve(&m, t, &seeds.0, spec, eps, 10_000);
        let q = picard_solve(&m, t, &seeds.1, spec, eps, 10_000);
        // a zero seed gap leaves nothing to iterate
        prop_assume!(p.is_ok() && q.is_ok());
        let (p, q) = (p.unwrap(), q.unwrap());
        let (p, q) = (*p.fixed_point().unwrap(), *q.fixed_point().unwrap());
        // each stopped iterate lies within ε/(1 − k) of the fixed point
        let w = m.eval(1.0, &p, &q).to_f64();
        prop_assert!(w <= 2.0 * eps / (1.0 - k) * (1.0 + REL), "{} vs {}", w, eps);
        let exact = b / (1.0 - a);
        prop_assert!((p - exact).abs() <= eps / (1.0 - k) * (1.0 + REL) + 1e-12);
    }

    #[test]
    fn fixed_point_of_the_square_is_fixed(c1 in 0.1..3.0f64, q in 0.05..0.9f64, b in (-5.0..5.0f64, -5.0..5.0f64),
                                          seed in (-20.0..20.0f64, -20.0..20.0f64), e in -9.0..-3.0f64) {
        // T(u, v) = (c1·v, c2·u) + b squares to q·I plus a shift
        let c2 = q / c1;
        let t = move |p: &[f64; 2]| [c1 * p[1] + b.0, c2 * p[0] + b.1];
        let t2 = move |p: &[f64; 2]| t(&t(p));
        let m = canonical_modular(max_dist, CanonicalKind::Velocity, [0.0; 2]);
        let spec = ContractionSpec::new(q, 1.0).unwrap();
        let pairs = [([seed.0, seed.1], [seed.1, seed.0]), ([0.0, 0.0], [1.0, -1.0])];
        prop_assert!(check_modular_contraction(&m, t2, &pairs, spec, &grid(1.0)).unwrap().passed);

        let eps = 10f64.powf(e);
        let trace = picard_solve(&m, t2, &[seed.0, seed.1], spec, eps, 10_000);
        prop_assume!(trace.is_ok());
        let trace = trace.unwrap();
        let p = *trace.fixed_point().unwrap();
        let lip = c1.max(c2);
        let w = m.eval(1.0, &t(&p), &p).to_f64();
        prop_assert!(w <= (1.0 + lip) * eps / (1.0 - q) * (1.0 + REL), "{} vs {}", w, eps);
        let exact = [(b.0 + c1 * b.1) / (1.0 - q), (b.1 + c2 * b.0) / (1.0 - q)];
        prop_assert!(max_dist(&t(&exact), &exact) <= 1e-9 * (1.0 + exact[0].abs().max(exact[1].abs())));
    }

    #[test]
    fn lipschitz_sides_agree_on_velocity(k in 0.05..0.9f64, s in 0.0..1.0f64, expand in prop::bool::ANY,
                                         b in -3.0..3.0f64, pairs in pairs()) {
        // factors are kept out of (k, 2.5k) so a dyadic λ grid sees every violation
        let a = if expand { k * (2.5 + 4.0 * s) } else { k * s };
        let m = canonical_modular(dist, CanonicalKind::Velocity, 0.0);
        let lambdas: Vec<f64> = (-12..8).map(|i| 2f64.powi(i)).collect();
        prop_assume!(pairs.iter().any(|(x, y)| (x - y).abs() > 1e-3));
        let v = lipschitz_equivalence_check(&m, |x| a * x + b, &pairs, k, &lambdas, BisectOptions::default()).unwrap();
        prop_assert!(v.agree(), "{:?}", v);
        prop_assert_eq!(v.metric_side, !expand);
    }
}
