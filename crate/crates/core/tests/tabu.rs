mod common;

use common::{params, random_move, replay_random_moves};
use cwbc::oracle::recompute_penalty;
use cwbc::tabu::run_tabu_observed;
use cwbc::{run_tabu, verify, Budget, CwcError, Move, RngStream, StepOutcome, TabuConfig, TabuOutcome, TabuState};
use proptest::prelude::*;

#[test]
fn evaluate_move_matches_recomputation() {
    let mut rng = RngStream::new(99);
    let shapes = [(10, 4, 4, 30), (18, 6, 6, 119), (22, 8, 10, 24), (12, 5, 6, 14), (31, 14, 16, 20)];
    let mut samples = 0;
    for (k, &(n, w, d, s)) in shapes.iter().cycle().take(200).enumerate() {
        let st = TabuState::init_random(params(n, w, d, s), &mut rng.substream(&[k as u64])).unwrap();
        for _ in 0..50 {
            let m = random_move(&st, &mut rng);
            let mut words = st.words();
            words[m.word].0 ^= (1 << m.clear) | (1 << m.set);
            assert_eq!(st.evaluate_move(m).unwrap(), recompute_penalty(&words, d).1);
            samples += 1;
        }
    }
    assert_eq!(samples, 10_000);
}

#[test]
fn replayed_moves_keep_bookkeeping_exact() {
    replay_random_moves(20, 500, 1).unwrap();
}

#[test]
fn invalid_moves_are_rejected() {
    let p = params(10, 4, 4, 2);
    let mut st = TabuState::init_random(p, &mut RngStream::new(0)).unwrap();
    let c = st.words()[0];
    let one = (0..10).find(|&i| c.bit(i)).unwrap();
    let zero = (0..10).find(|&i| !c.bit(i)).unwrap();
    for m in [
        Move { word: 0, clear: zero, set: one },
        Move { word: 0, clear: one, set: one },
        Move { word: 2, clear: one, set: zero },
        Move { word: 0, clear: one, set: 10 },
    ] {
        assert!(matches!(st.evaluate_move(m), Err(CwcError::InvalidMove { .. })), "{m:?}");
        assert!(st.apply_move(m).is_err());
    }
}

#[test]
fn small_dev_rows_solve() {
    for (n, w, d, s) in [(10, 4, 4, 30), (13, 5, 6, 18), (14, 6, 6, 42), (15, 7, 6, 69)] {
        let p = params(n, w, d, s);
        let out = run_tabu(&p, &TabuConfig::default(), &mut RngStream::new(1), Budget::seconds(60.0)).unwrap();
        let code = out.code().unwrap_or_else(|| panic!("({n},{d},{w},{s}) timed out"));
        assert_eq!(code.len(), s);
        assert!(verify(&code.words, &p).valid);
    }
}

#[test]
fn single_word_returns_immediately() {
    let p = params(20, 8, 8, 1);
    match run_tabu(&p, &TabuConfig::default(), &mut RngStream::new(0), Budget::iterations(0)).unwrap() {
        TabuOutcome::Solved { code, stats } => {
            assert_eq!(code.len(), 1);
            assert_eq!(stats.steps, 0);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn infeasible_size() {
    let p = params(6, 3, 2, 21);
    assert!(matches!(
        run_tabu(&p, &TabuConfig::default(), &mut RngStream::new(0), Budget::unlimited()),
        Err(CwcError::Infeasible { .. })
    ));
}

#[test]
fn timeout_reports_progress() {
    // 24 words is far beyond what a few thousand steps reach.
    let p = params(31, 14, 16, 24);
    let cfg = TabuConfig {
        report_every: 500,
        ..TabuConfig::default()
    };
    let mut lines = Vec::new();
    let out = run_tabu_observed(&p, &cfg, &mut RngStream::new(0), Budget::iterations(5_000), |pr| lines.push(*pr)).unwrap();
    assert!(matches!(out, TabuOutcome::Timeout { .. }));
    assert_eq!(out.stats().steps, 5_000);
    assert_eq!(lines.len(), 10);
    assert!(lines.iter().all(|l| l.min_penalty <= l.penalty && l.step % 500 == 0));
    assert!(out.stats().best_penalty <= lines[0].min_penalty);
}

#[test]
fn restart_threshold_restarts() {
    let p = params(31, 14, 16, 24);
    let cfg = TabuConfig {
        max_no_improve_restart: 200,
        ..TabuConfig::default()
    };
    let out = run_tabu(&p, &cfg, &mut RngStream::new(2), Budget::iterations(20_000)).unwrap();
    assert!(out.stats().restarts > 0);
}

#[test]
fn bad_tenure_range() {
    let cfg = TabuConfig {
        t_min: 9,
        t_max: 3,
        ..TabuConfig::default()
    };
    assert!(run_tabu(&params(10, 4, 4, 5), &cfg, &mut RngStream::new(0), Budget::unlimited()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn steps_preserve_invariants(seed in any::<u64>(), shape in 0usize..4) {
        let (n, w, d, s) = [(10, 4, 4, 30), (12, 5, 6, 14), (16, 6, 8, 12), (20, 9, 10, 16)][shape];
        let p = params(n, w, d, s);
        let cfg = TabuConfig::default();
        let mut rng = RngStream::new(seed);
        let mut st = TabuState::init_random(p, &mut rng).unwrap();
        prop_assert_eq!(st.min_penalty(), st.penalty());
        for _ in 0..300 {
            if st.penalty() == 0 {
                break;
            }
            let before = st.words();
            let outcome = st.step(&cfg, &mut rng);
            st.assert_consistent();
            prop_assert!(st.min_penalty() <= st.penalty());
            let after = st.words();
            let changed: Vec<usize> = (0..s).filter(|&i| before[i] != after[i]).collect();
            match outcome {
                StepOutcome::Moved => {
                    prop_assert_eq!(changed.len(), 1);
                    let i = changed[0];
                    prop_assert_eq!((before[i].0 ^ after[i].0).count_ones(), 2);
                    prop_assert_eq!(after[i].weight(), w);
                }
                StepOutcome::NoValidMove => prop_assert!(changed.is_empty()),
            }
        }
    }

    #[test]
    fn same_seed_same_trajectory(seed in any::<u64>()) {
        let p = params(14, 6, 6, 42);
        let run = || {
            let mut rng = RngStream::new(seed);
            let mut st = TabuState::init_random(p, &mut rng).unwrap();
            let mut trace = Vec::new();
            for _ in 0..200 {
                if st.penalty() == 0 {
                    break;
                }
                st.step(&TabuConfig::default(), &mut rng);
                trace.push((st.penalty(), st.words()));
            }
            trace
        };
        prop_assert_eq!(run(), run());
    }
}
