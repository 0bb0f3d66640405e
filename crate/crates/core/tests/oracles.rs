//! Offline evaluation against brute-force evaluation on a dense time grid.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use strel_core::offline::Domain;
use strel_core::testkit::{
    dense_eval, random_formula, random_model, random_signal, FormulaParams, SignalParams,
    DENSE_STEP,
};
use strel_core::{evaluate, Interval, Verdict3};

fn check<D: Domain>(seed: u64, cases: usize, params: FormulaParams) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let model = random_model(&mut rng, 4);
        let p = SignalParams {
            locations: model.len(),
            dims: 2,
            max_pieces: 6,
            max_time: 5.0,
            ..Default::default()
        };
        let s = random_signal(&mut rng, &p);
        let f = random_formula(&mut rng, &params);
        let horizon = 6.0;
        let fast = evaluate::<D>(&s, &model, &f, false).unwrap();
        let slow = dense_eval::<D>(&s, &model, &f, horizon);
        for (l, row) in slow.iter().enumerate() {
            for (k, expected) in row.iter().enumerate() {
                let t = k as f64 * DENSE_STEP;
                let got = fast.value_at(l, t).unwrap()[0];
                assert_eq!(&got, expected, "case {case}: {f} at l={l}, t={t}");
            }
        }
    }
}

#[test]
fn robust_semantics_matches_dense_grid() {
    check::<Interval>(1, 250, FormulaParams::default());
}

#[test]
fn derived_operators_match_dense_grid() {
    check::<Interval>(
        2,
        250,
        FormulaParams {
            derived: true,
            ..Default::default()
        },
    );
}

#[test]
fn boolean_semantics_matches_dense_grid() {
    check::<Verdict3>(
        3,
        250,
        FormulaParams {
            derived: true,
            ..Default::default()
        },
    );
}
