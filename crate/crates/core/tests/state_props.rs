mod common;

use freestein::ncalg::Word;
use freestein::states::{
    catalan, cumulants_to_moment, inner_matrix, inner_matrix_via_product, mc_moment_table,
    moments_to_cumulants, validate_state, CumulantSpec, CumulantState, MatrixEnsembleConfig,
    MomentFunctional, MomentTable,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn random_spec(seed: u64, nvars: usize, order: usize) -> CumulantSpec {
    let mut r = common::rng(seed);
    let mut entries = Vec::new();
    for w in Word::all_up_to(nvars, order).into_iter().skip(1) {
        if r.random_bool(0.5) {
            entries.push((
                w,
                Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)),
            ));
        }
    }
    CumulantSpec::from_entries(nvars, entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cumulant_round_trip(seed in any::<u64>(), nvars in 1usize..=2) {
        let spec = random_spec(seed, nvars, 8);
        let phi = CumulantState::with_max_order(spec.clone(), 8).unwrap();
        let back = moments_to_cumulants(&phi, 8).unwrap();
        for w in Word::all_up_to(nvars, 8).iter().filter(|w| !w.is_empty()) {
            let (a, b) = (spec.get(w), back.get(w));
            prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0), "{w}: {a} vs {b}");
        }
    }

    #[test]
    fn recursion_matches_enumeration(seed in any::<u64>()) {
        let spec = random_spec(seed, 2, 6);
        let phi = CumulantState::new(spec.clone());
        for w in Word::all_up_to(2, 6) {
            let d = phi.moment(&w).unwrap() - cumulants_to_moment(&spec, &w).unwrap();
            prop_assert!(d.norm() < 1e-10);
        }
    }

    #[test]
    fn pairing_is_positive(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let phi = common::tracial_state(&mut r, 2, 8);
        let a = common::kernel_matrix(&mut r, 2, 2, 3);
        let v = inner_matrix(&phi, &a, &a).unwrap();
        prop_assert!(v.re >= -1e-10 && v.im.abs() < 1e-9 * v.re.max(1.0));
        let w = inner_matrix_via_product(&phi, &a, &a).unwrap();
        prop_assert!((v - w).norm() < 1e-9 * v.norm().max(1.0));
    }

    #[test]
    fn random_tracial_states_are_valid(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let phi = common::tracial_state(&mut r, 2, 8);
        let check = validate_state(&phi, 8, 1e-8).unwrap();
        prop_assert!(check.cyclic_defect.unwrap() < 1e-12);
        let table = MomentTable::from_functional(&phi, 8).unwrap();
        validate_state(&table, 8, 1e-8).unwrap();
        for i in 0..2 {
            prop_assert!(phi.moment(&Word::letter(i)).unwrap().norm() < 1e-14);
            for j in 0..2 {
                let c = phi.moment(&Word::from_letters([i, j])).unwrap().re;
                let target = f64::from(u8::from(i == j));
                prop_assert!((c - target).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn semicircular_moments() {
    let phi = CumulantState::new(CumulantSpec::semicircular(2));
    for m in 0..=8 {
        let v = phi.moment(&Word::power(0, m)).unwrap();
        let expected = if m % 2 == 0 {
            catalan(m / 2) as f64
        } else {
            0.0
        };
        assert_eq!(v, Complex64::new(expected, 0.0));
    }
    for k in 1..=4 {
        let alternating = Word::from_letters((0..2 * k).map(|p| p % 2));
        assert_eq!(phi.moment(&alternating).unwrap(), Complex64::new(0.0, 0.0));
    }
}

#[test]
fn matrix_backend_is_a_state() {
    let cfg = MatrixEnsembleConfig::gue(2, 30, 8, 11);
    let t = mc_moment_table(&cfg, 8).unwrap();
    let check = validate_state(&t, 8, 1e-8).unwrap();
    assert!(check.min_gram_eigenvalue > -1e-8);
}
