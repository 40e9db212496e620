use discrepancy::duality::{
    alexiewicz_dual, apply_functional, boundedness_check, dual_discrepancy_fast,
    dual_discrepancy_oracle, dual_report, monotonicity_measure, OracleMode,
};
use discrepancy::events::event_discrepancy;
use discrepancy::norms::{alexiewicz_norm, total_variation};
use discrepancy::{Error, Rational64, RationalWeights, Weights};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rational(xs: &[i64]) -> RationalWeights {
    RationalWeights::from_values(xs.iter().map(|&x| Rational64::from_integer(x)).collect()).unwrap()
}

/// All vectors of length `n` over `alphabet`.
fn words(alphabet: &[i64], n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn fast_path_matches_oracle_exhaustively() {
    for n in 1..=6 {
        for f in words(&[-1, 0, 1, 2], n) {
            let w = rational(&f);
            let oracle = dual_discrepancy_oracle(&w, OracleMode::Ternary).unwrap();
            assert_eq!(dual_discrepancy_fast(&w).0, oracle, "f={f:?}");
        }
    }
}

#[test]
fn extended_oracle_finds_nothing_larger() {
    for n in 1..=5 {
        for f in words(&[-1, 0, 2], n) {
            let w = rational(&f);
            let ternary = dual_discrepancy_oracle(&w, OracleMode::Ternary).unwrap();
            let extended = dual_discrepancy_oracle(&w, OracleMode::Extended).unwrap();
            assert_eq!(ternary, extended, "f={f:?}");
        }
    }
}

#[test]
fn fast_path_matches_oracle_on_random_floats() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let n = rng.gen_range(1..=10);
        let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let w = Weights::from_values(f.clone()).unwrap();
        let oracle = dual_discrepancy_oracle(&w, OracleMode::Ternary).unwrap();
        let fast = dual_discrepancy_fast(&w).0;
        assert!(
            (fast - oracle).abs() < 1e-9,
            "f={f:?} fast={fast} oracle={oracle}"
        );
    }
}

#[test]
fn oracle_refuses_long_inputs() {
    let w = Weights::from_values(vec![0.0; 13]).unwrap();
    assert!(matches!(
        dual_discrepancy_oracle(&w, OracleMode::Ternary),
        Err(Error::TooLarge { .. })
    ));
}

#[test]
fn dual_report_example() {
    let r = dual_report(&rational(&[0, 1, 0])).unwrap();
    assert_eq!(r.dual_d, Rational64::from_integer(1));
    assert_eq!(r.bv, Rational64::from_integer(2));
    assert_eq!(r.dual_a, Rational64::from_integer(2));
    assert_eq!(r.mu_mon, Some(Rational64::new(1, 2)));
}

#[test]
fn monotone_sequences_have_unit_measure() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.gen_range(2..40);
        let mut f: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        f.sort_by(f64::total_cmp);
        if f[0] == f[n - 1] {
            continue;
        }
        let up = Weights::from_values(f.clone()).unwrap();
        f.reverse();
        let down = Weights::from_values(f).unwrap();
        assert!((monotonicity_measure(&up).unwrap() - 1.0).abs() < 1e-9);
        assert!((monotonicity_measure(&down).unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn boundedness_holds_with_variation_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let n = rng.gen_range(2..30);
        let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let w = Weights::from_values(f).unwrap();
        let check = boundedness_check(&w, 50, &mut rng).unwrap();
        assert!(check.holds, "{check:?}");
        assert!(check.worst_ratio <= check.bound + 1e-9);
    }
}

fn weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, 1..40)
}

proptest! {
    #[test]
    fn dual_norm_sandwich(f in weights()) {
        let w = Weights::from_values(f.clone()).unwrap();
        let bv = total_variation(&f).unwrap();
        let (d, _) = dual_discrepancy_fast(&w);
        prop_assert!(bv / 2.0 <= d + 1e-9);
        prop_assert!(d <= bv + 1e-9);
    }

    #[test]
    fn dual_witness_is_a_unit_event_sequence(f in weights()) {
        let w = Weights::from_values(f).unwrap();
        let (d, eta) = dual_discrepancy_fast(&w);
        prop_assert_eq!(eta.iter().sum::<i64>(), 0);
        let events = w.events_at(&eta);
        if w.len() >= 2 {
            prop_assert_eq!(event_discrepancy(&events), 1);
        }
        let value = apply_functional(&w, &events).unwrap();
        prop_assert!((value.abs() - d).abs() < 1e-9);
    }

    #[test]
    fn alexiewicz_dual_is_variation(f in weights()) {
        let w = Weights::from_values(f.clone()).unwrap();
        let (a, eta) = alexiewicz_dual(&w).unwrap();
        let bv = total_variation(&f).unwrap();
        prop_assert!((a - bv).abs() < 1e-9);
        if bv > 0.0 {
            prop_assert_eq!(alexiewicz_norm(&eta), 1);
            let value = apply_functional(&w, &w.events_at(&eta)).unwrap();
            prop_assert!((value - bv).abs() < 1e-6 * (1.0 + bv));
        }
    }

    #[test]
    fn monotonicity_is_affine_invariant(
        f in prop::collection::vec(-10.0f64..10.0, 2..30),
        scale in 0.01f64..100.0,
        shift in -1000.0f64..1000.0,
    ) {
        let base = Weights::from_values(f.clone()).unwrap();
        let moved = Weights::from_values(f.iter().map(|x| scale * x + shift).collect()).unwrap();
        match monotonicity_measure(&base) {
            Ok(mu) => {
                prop_assert!((0.5 - 1e-9..=1.0 + 1e-9).contains(&mu));
                let mu2 = monotonicity_measure(&moved).unwrap();
                prop_assert!((mu - mu2).abs() < 1e-6, "{} vs {}", mu, mu2);
            }
            Err(e) => prop_assert_eq!(e, Error::ConstantInput),
        }
    }

    #[test]
    fn rational_and_float_agree(f in prop::collection::vec(-20i64..20, 1..12)) {
        let exact = dual_discrepancy_fast(&rational(&f)).0;
        let approx = dual_discrepancy_fast(
            &Weights::from_values(f.iter().map(|&x| x as f64).collect()).unwrap()
        ).0;
        prop_assert_eq!(Rational64::from_integer(approx as i64), exact);
    }
}
