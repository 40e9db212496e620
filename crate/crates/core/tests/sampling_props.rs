use discrepancy::events::event_discrepancy;
use discrepancy::sampling::{
    if_encode, if_encode_with, input_distance, quasi_isometry_check, sod_encode,
    sod_hypercube_image,
};
use discrepancy::{EventSequence, IfMode, SamplerConfig, Scheme, Signal64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Piecewise-linear signal through `knots` random values on `[0, 1]`.
fn piecewise_linear(rng: &mut ChaCha8Rng, knots: usize, n: usize, amp: f64) -> Signal64 {
    let ys: Vec<f64> = (0..knots).map(|_| rng.gen_range(-amp..amp)).collect();
    let dt = 1.0 / n as f64;
    Signal64::from_fn(0.0, dt, n, |t| {
        let s = t * (knots - 1) as f64;
        let k = (s.floor() as usize).min(knots - 2);
        let frac = s - k as f64;
        ys[k] + (ys[k + 1] - ys[k]) * frac
    })
    .unwrap()
}

/// Net event count up to and including each sample.
fn running_count(eta: &EventSequence, times: &[f64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(times.len());
    let mut acc = 0;
    let mut it = eta.events().iter().peekable();
    for &t in times {
        while let Some(e) = it.next_if(|e| e.time <= t) {
            acc += e.value;
        }
        out.push(acc);
    }
    out
}

#[test]
fn if_matches_integer_recurrence() {
    // integer samples, unit step and threshold: the accumulator never keeps a residual
    let xs = [0.0, 3.0, -2.0, 0.0, 1.0, -1.0, 4.0];
    let f = Signal64::new(0.0, 1.0, xs.to_vec()).unwrap();
    let eta = if_encode(&f, 1.0).unwrap();
    let mut expected = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        let sign = if x > 0.0 { 1 } else { -1 };
        for _ in 0..(x.abs() as usize) {
            expected.push((i as f64, sign));
        }
    }
    let got: Vec<(f64, i64)> = eta.events().iter().map(|e| (e.time, e.value)).collect();
    assert_eq!(got, expected);
}

#[test]
fn if_reset_loses_the_residual() {
    // 0.75 + 0.75 fires once and keeps 0.5 with carry, drops it with reset
    let f = Signal64::new(0.0, 1.0, vec![0.75; 5]).unwrap();
    let carry = if_encode_with(&f, 1.0, IfMode::Carry).unwrap();
    let reset = if_encode_with(&f, 1.0, IfMode::Reset).unwrap();
    assert_eq!(carry.values().iter().sum::<i64>(), 3);
    assert_eq!(reset.values().iter().sum::<i64>(), 2);
}

#[test]
fn quasi_isometry_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for theta in [1.0, 0.5, 0.1, 0.01] {
        for _ in 0..50 {
            let f = piecewise_linear(&mut rng, 6, 400, 3.0);
            let g = piecewise_linear(&mut rng, 6, 400, 3.0);
            for scheme in [Scheme::Sod, Scheme::If] {
                let cfg = SamplerConfig::new(scheme, theta).unwrap();
                let r = quasi_isometry_check(&f, &g, &cfg).unwrap();
                assert!(r.holds(), "{scheme:?} theta={theta} {r:?}");
                assert!((r.d_output - r.d_input).abs() <= 4.0 * theta + 1e-9);
            }
        }
    }
}

#[test]
fn output_distance_converges_to_input_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = piecewise_linear(&mut rng, 8, 2000, 2.0);
    let g = piecewise_linear(&mut rng, 8, 2000, 2.0);
    for scheme in [Scheme::Sod, Scheme::If] {
        let d_in = input_distance(scheme, &f, &g).unwrap();
        let errs: Vec<f64> = [1.0, 0.1, 0.01, 0.001]
            .iter()
            .map(|&theta| {
                let cfg = SamplerConfig::new(scheme, theta).unwrap();
                let r = quasi_isometry_check(&f, &g, &cfg).unwrap();
                (r.d_output - d_in).abs()
            })
            .collect();
        assert!(errs[3] < 4e-3, "{scheme:?} {errs:?}");
    }
}

#[test]
fn hypercube_images_are_alternating_units() {
    for n in 1..=8 {
        let images = sod_hypercube_image(n).unwrap();
        for img in &images {
            assert_eq!(img.len(), n - 1);
            let nonzero: Vec<i64> = img.iter().copied().filter(|&v| v != 0).collect();
            assert!(nonzero.iter().all(|v| v.abs() == 1), "{img:?}");
            assert!(nonzero.windows(2).all(|w| w[0] != w[1]), "{img:?}");
            assert!(discrepancy::norms::discrepancy_fast(img) <= 1);
        }
    }
    assert!(sod_hypercube_image(13).is_err());
}

proptest! {
    #[test]
    fn sod_level_tracks_signal(
        xs in prop::collection::vec(-50.0f64..50.0, 1..60),
        theta in 0.05f64..5.0,
    ) {
        let f = Signal64::new(0.0, 1.0, xs.clone()).unwrap();
        let eta = sod_encode(&f, theta).unwrap();
        let times: Vec<f64> = (0..xs.len()).map(|i| i as f64).collect();
        for (i, net) in running_count(&eta, &times).into_iter().enumerate() {
            let level = xs[0] + theta * net as f64;
            prop_assert!((xs[i] - level).abs() < theta + 1e-9, "i={} level={}", i, level);
        }
    }

    #[test]
    fn if_residual_below_threshold(
        xs in prop::collection::vec(-20.0f64..20.0, 1..80),
        dt in 0.01f64..1.0,
        theta in 0.05f64..3.0,
    ) {
        let f = Signal64::new(0.0, dt, xs).unwrap();
        let eta = if_encode(&f, theta).unwrap();
        let cum = f.cumulative_integral();
        let times: Vec<f64> = (0..f.len()).map(|i| f.time(i)).collect();
        for (i, net) in running_count(&eta, &times).into_iter().enumerate() {
            let residual = cum[i + 1] - theta * net as f64;
            prop_assert!(residual.abs() < theta + 1e-9);
        }
    }

    #[test]
    fn sod_ignores_offsets(
        steps in prop::collection::vec(-40i32..40, 1..40),
        shift in -100i32..100,
        theta_eighths in 1u32..16,
    ) {
        // dyadic values keep the shifted arithmetic exact
        let xs: Vec<f64> = steps.iter().map(|&s| f64::from(s) / 8.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x + f64::from(shift) / 8.0).collect();
        let theta = f64::from(theta_eighths) / 8.0;
        let a = sod_encode(&Signal64::new(0.0, 1.0, xs).unwrap(), theta).unwrap();
        let b = sod_encode(&Signal64::new(0.0, 1.0, ys).unwrap(), theta).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn encoders_are_quasi_isometric(
        xs in prop::collection::vec(-5.0f64..5.0, 2..50),
        ys in prop::collection::vec(-5.0f64..5.0, 2..50),
        theta in 0.05f64..2.0,
        dt in 0.05f64..1.0,
    ) {
        let n = xs.len().min(ys.len());
        let f = Signal64::new(0.0, dt, xs[..n].to_vec()).unwrap();
        let g = Signal64::new(0.0, dt, ys[..n].to_vec()).unwrap();
        for scheme in [Scheme::Sod, Scheme::If] {
            let cfg = SamplerConfig::new(scheme, theta).unwrap();
            let r = quasi_isometry_check(&f, &g, &cfg).unwrap();
            prop_assert!(r.holds(), "{:?} {:?}", scheme, r);
        }
    }

    #[test]
    fn encoded_norm_bounded_by_input(
        xs in prop::collection::vec(-5.0f64..5.0, 1..50),
        theta in 0.1f64..2.0,
    ) {
        let f = Signal64::new(0.0, 1.0, xs).unwrap();
        let eta = sod_encode(&f, theta).unwrap();
        let range = discrepancy::sampling::range_seminorm(&f);
        prop_assert!(theta * event_discrepancy(&eta) as f64 <= range + 1e-9);
    }
}
