//! Invariants of signals, the spatial kernels and the online monitor.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use strel_core::offline::{Domain, Lattice};
use strel_core::testkit::{
    covering_updates, oracle_escape, oracle_reach, perturb, random_formula, random_interval,
    random_model, random_signal, truncate, FormulaParams, SignalParams, DENSE_STEP,
};
use strel_core::{signal_distance, Interval, Monitor, PCSignal, SpatialModel};

fn signal(seed: u64) -> PCSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_signal(
        &mut rng,
        &SignalParams {
            locations: 2,
            ..Default::default()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_a_pseudometric(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), delta in 0.0..2.0f64) {
        let (x, y, z) = (signal(a), signal(b), signal(c));
        prop_assert_eq!(signal_distance(&x, &x).unwrap(), 0.0);
        prop_assert_eq!(signal_distance(&x, &y).unwrap(), signal_distance(&y, &x).unwrap());
        let (xy, yz, xz) = (
            signal_distance(&x, &y).unwrap(),
            signal_distance(&y, &z).unwrap(),
            signal_distance(&x, &z).unwrap(),
        );
        prop_assert!(xz <= xy + yz + 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(a ^ c);
        let w = perturb(&mut rng, &x, delta);
        prop_assert!(signal_distance(&x, &w).unwrap() <= 2.0 * delta + 1e-9);
    }

    #[test]
    fn update_order_does_not_matter(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_model(&mut rng, 4);
        let p = SignalParams { locations: model.len(), dims: 2, ..Default::default() };
        let target = random_signal(&mut rng, &p);
        let f = random_formula(&mut rng, &FormulaParams { derived: true, ..Default::default() });
        let mut updates = covering_updates(&mut rng, &target, 9.0);
        let mut results = Vec::new();
        for _ in 0..2 {
            updates.shuffle(&mut rng);
            let mut m = Monitor::new(model.clone(), &f, model.len(), p.dims).unwrap();
            for u in &updates {
                m.apply(u).unwrap();
            }
            prop_assert_eq!(m.input(), &truncate(&target, 9.0));
            results.push(m.robustness().clone());
        }
        prop_assert_eq!(&results[0], &results[1]);
    }

    #[test]
    fn changes_stay_inside_emitted_spans(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_model(&mut rng, 4);
        let p = SignalParams { locations: model.len(), dims: 2, ..Default::default() };
        let target = random_signal(&mut rng, &p);
        let f = random_formula(&mut rng, &FormulaParams { derived: true, unbounded: true, ..Default::default() });
        let mut updates = covering_updates(&mut rng, &target, 9.0);
        updates.shuffle(&mut rng);
        let mut m = Monitor::new(model.clone(), &f, model.len(), p.dims).unwrap();
        for u in &updates {
            let before = m.robustness().clone();
            let emitted = m.apply(u).unwrap();
            let after = m.robustness();
            for e in &emitted {
                for l in 0..model.len() {
                    prop_assert_eq!(after.value_at(l, e.t_a).unwrap()[0], e.values.get(l, 0));
                }
            }
            for k in 0..=(12.0 / DENSE_STEP) as usize {
                let t = k as f64 * DENSE_STEP;
                for l in 0..model.len() {
                    if before.value_at(l, t).unwrap() != after.value_at(l, t).unwrap() {
                        prop_assert!(emitted.iter().any(|e| e.t_a <= t && t < e.t_b), "change at {} outside {:?}", t, emitted);
                    }
                }
            }
        }
    }
}

fn reach_over(
    m: &SpatialModel,
    d: f64,
    lhs: &[Interval],
    rhs: &[Interval],
    src: usize,
    visits: usize,
) -> Interval {
    let mut best = Interval::BOTTOM;
    for route in m.enumerate_routes(src, d, visits) {
        let mut prefix = Interval::TOP;
        for &l in route.locations() {
            best = best.join(rhs[l].meet(prefix));
            prefix = prefix.meet(lhs[l]);
        }
    }
    best
}

fn escape_over(m: &SpatialModel, d: f64, arg: &[Interval], src: usize, visits: usize) -> Interval {
    let mut best = Interval::BOTTOM;
    for route in m.enumerate_routes(src, f64::INFINITY, visits) {
        let mut prefix = Interval::TOP;
        for &l in route.locations() {
            if m.distance(src, l) >= d {
                best = best.join(prefix);
            }
            prefix = prefix.meet(arg[l]);
        }
    }
    best
}

#[test]
fn simple_routes_suffice() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let p = SignalParams::default();
    for _ in 0..150 {
        let model = random_model(&mut rng, 4);
        let n = model.len();
        let lhs: Vec<Interval> = (0..n).map(|_| random_interval(&mut rng, &p)).collect();
        let rhs: Vec<Interval> = (0..n).map(|_| random_interval(&mut rng, &p)).collect();
        for d in [0.0, 1.0, 2.5, 4.0] {
            let reach = Interval::reach(&model, d, &lhs, &rhs, false);
            let escape = Interval::escape(&model, d, &lhs, false);
            for src in 0..n {
                let simple = oracle_reach(&model, d, &lhs, &rhs, src);
                assert_eq!(simple, reach_over(&model, d, &lhs, &rhs, src, 2));
                assert_eq!(simple, reach[src]);
                let simple = oracle_escape(&model, d, &lhs, src);
                assert_eq!(simple, escape_over(&model, d, &lhs, src, 2));
                assert_eq!(simple, escape[src]);
            }
        }
    }
}
