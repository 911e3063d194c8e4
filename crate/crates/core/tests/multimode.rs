use gaussent::sample::rng_from_seed;
use gaussent::separability::{is_ppt, log_negativity, pt_spectrum, Bipartition};
use gaussent::state::reduce;
use gaussent::symmetric::{
    assemble_bisymmetric, asymptotic_1k_bound, block_log_negativity, fully_symmetric_mixed, fully_symmetric_pure, ole,
    one_by_k_log_negativity, unitary_localization, BisymmetricSpec, FullySymmetricSpec,
};
use gaussent::state::two_mode_squeezed;
use nalgebra::Matrix2;
use rand::Rng;

fn all_bipartitions(n: usize) -> impl Iterator<Item = Bipartition> {
    (1..(1u32 << n) - 1)
        .filter(|mask| mask & 1 == 1)
        .map(move |mask| Bipartition::split((0..n).filter(|i| mask >> i & 1 == 1).collect(), n).unwrap())
}

#[test]
fn pure_fully_symmetric_states_are_npt_everywhere() {
    for n in 2..=5 {
        let st = fully_symmetric_pure(n, 1.3).unwrap();
        for part in all_bipartitions(n) {
            assert!(!is_ppt(st.cm(), &part, 1e-9).unwrap(), "n={n} {part}");
        }
    }
}

#[test]
fn one_by_k_cascade() {
    for n in 3..=10 {
        for b in [1.2, 1.5, 2.0, 3.0] {
            let st = fully_symmetric_pure(n, b).unwrap();
            let mut last = 0.0;
            for k in 1..n {
                let e = one_by_k_log_negativity(&st, k).unwrap();
                assert!(e >= last - 1e-12, "n={n} b={b} K={k}");
                last = e;
            }
        }
    }
}

#[test]
fn block_entanglement_grows_towards_balanced_split() {
    let st = fully_symmetric_pure(10, 1.5).unwrap();
    let values: Vec<f64> = (1..10).map(|k| block_log_negativity(&st, k).unwrap()).collect();
    for k in 1..5 {
        assert!(values[k] >= values[k - 1] - 1e-12);
    }
    let best = values.iter().copied().fold(f64::MIN, f64::max);
    assert!((ole(&st).unwrap() - best).abs() < 1e-12);
    assert!(block_log_negativity(&st, 0).is_err());
    assert!(block_log_negativity(&st, 10).is_err());
}

#[test]
fn ole_nondecreasing_in_modes() {
    let mut last = 0.0;
    for n in 2..=12 {
        let e = ole(&fully_symmetric_pure(n, 1.5).unwrap()).unwrap();
        assert!(e >= last - 1e-12, "n={n}");
        last = e;
    }
    let two = fully_symmetric_pure(2, 1.5).unwrap();
    assert_eq!(ole(&two).unwrap(), block_log_negativity(&two, 1).unwrap());
}

#[test]
fn scaling_with_total_modes() {
    for b in [1.2, 2.0] {
        let (mut last_11, mut last_1k) = (f64::INFINITY, 0.0);
        for big_n in 2..=10 {
            let st = fully_symmetric_pure(1 + big_n, b).unwrap();
            let e11 = one_by_k_log_negativity(&st, 1).unwrap();
            let e1k = one_by_k_log_negativity(&st, big_n - 1).unwrap();
            assert!(e11 <= last_11 + 1e-12, "E11 b={b} N={big_n}");
            assert!(e1k >= last_1k - 1e-12, "E1(N-1) b={b} N={big_n}");
            (last_11, last_1k) = (e11, e1k);
        }
    }
}

#[test]
fn large_squeezing_limit_of_one_by_k() {
    for (big_n, k) in [(9, 3), (5, 2), (4, 1), (8, 7)] {
        let st = fully_symmetric_pure(1 + big_n, 1e3).unwrap();
        let e = one_by_k_log_negativity(&st, k).unwrap();
        let bound = asymptotic_1k_bound(big_n, k).unwrap();
        assert!((e - bound).abs() < 2e-2, "N={big_n} K={k}: {e} vs {bound}");
        assert!(bound <= 5f64.sqrt().ln());
    }
}

#[test]
fn traced_states_stay_finite_at_large_squeezing() {
    for (n, q) in [(4, 2), (6, 3)] {
        for k in 1..n {
            let lo = block_log_negativity(&fully_symmetric_mixed(n, q, 1e3).unwrap(), k).unwrap();
            let hi = block_log_negativity(&fully_symmetric_mixed(n, q, 1e4).unwrap(), k).unwrap();
            assert!(lo.is_finite() && (lo - hi).abs() < 1e-2, "n={n} q={q} K={k}: {lo} {hi}");
        }
    }
}

#[test]
fn localization_on_mixed_fully_symmetric_state() {
    let st = fully_symmetric_mixed(4, 2, 2.0).unwrap();
    let part = Bipartition::split(vec![0, 1], 4).unwrap();
    let loc = unitary_localization(&st, &part).unwrap();
    assert!(loc.leakage < 1e-8);
    let before = pt_spectrum(st.cm(), &part).unwrap();
    let after = pt_spectrum(&loc.transformed, &part).unwrap();
    for (x, y) in before.values().iter().zip(after.values()) {
        assert!((x - y).abs() < 1e-8);
    }
    let e2 = log_negativity(&loc.two_mode, &Bipartition::split(vec![0], 2).unwrap()).unwrap();
    assert!((log_negativity(st.cm(), &part).unwrap() - e2).abs() < 1e-7);
}

#[test]
fn localization_of_tms_is_identity() {
    let st = two_mode_squeezed(0.6);
    let loc = unitary_localization(&st, &Bipartition::split(vec![0], 2).unwrap()).unwrap();
    assert!((loc.two_mode.matrix() - st.cm().matrix()).amax() < 1e-14);
    assert!(loc.residual.is_empty());
}

#[test]
fn random_bisymmetric_states_localize() {
    let mut rng = rng_from_seed(3);
    let mut done = 0;
    while done < 50 {
        let (m, n) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let block = |k: usize, rng: &mut rand_chacha::ChaCha8Rng| {
            let b = rng.random_range(1.5..3.0);
            FullySymmetricSpec::new(k, b, rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4)).unwrap()
        };
        let spec = BisymmetricSpec {
            block_a: block(m, &mut rng),
            block_b: block(n, &mut rng),
            gamma: Matrix2::new(
                rng.random_range(-0.6..0.6),
                rng.random_range(-0.2..0.2),
                rng.random_range(-0.2..0.2),
                rng.random_range(-0.6..0.6),
            ),
        };
        let Ok(st) = assemble_bisymmetric(&spec) else { continue };
        let part = Bipartition::split((0..m).collect(), m + n).unwrap();
        let loc = unitary_localization(&st, &part).unwrap();
        assert!(loc.leakage < 1e-8);
        let e = log_negativity(st.cm(), &part).unwrap();
        let e2 = log_negativity(&loc.two_mode, &Bipartition::split(vec![0], 2).unwrap()).unwrap();
        assert!((e - e2).abs() < 1e-7);
        done += 1;
    }
}

#[test]
fn fully_symmetric_is_bisymmetric_for_any_split() {
    let st = fully_symmetric_pure(5, 1.7).unwrap();
    for part in all_bipartitions(5) {
        assert!(unitary_localization(&st, &part).is_ok(), "{part}");
    }
    let reduced = reduce(&st, &[0, 2, 4]).unwrap();
    assert!(unitary_localization(&reduced, &Bipartition::split(vec![1], 3).unwrap()).is_ok());
}
