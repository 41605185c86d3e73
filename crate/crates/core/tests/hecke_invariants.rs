//! Hecke integration formula and error-term properties across the allowlist.

use ilz::arakelov::{mean_count_mc, DEFAULT_ALLOWLIST};
use ilz::cyclo_field::create_field;
use ilz::hecke::{error_term, hecke_lhs_mc, hecke_rhs, ErrorTermEngine, DEFAULT_T};
use proptest::prelude::*;

#[test]
fn monte_carlo_matches_closed_form_up_to_degree_8() {
    let mut report = Vec::new();
    for n in DEFAULT_ALLOWLIST {
        let k = create_field(n).unwrap();
        if k.degree() > 8 {
            continue;
        }
        // degree-8 samples are ~50× dearer; fewer of them still give a valid 3σ test
        let samples = if k.degree() == 8 { 300 } else { 2000 };
        for s in [2.0, 3.0] {
            let rhs = hecke_rhs(&k, s).unwrap();
            let lhs = hecke_lhs_mc(&k, s, samples, 100 + n).unwrap();
            let scale = lhs.stderr.max(1e-12 * rhs);
            let z = (lhs.mean - rhs) / scale;
            report.push(format!("n={n} s={s} z={z:.2}"));
            assert!(z.abs() < 3.0, "{}", report.join("\n"));
        }
    }
}

#[test]
fn rhs_rejects_non_convergent_s() {
    let k = create_field(5).unwrap();
    assert!(hecke_rhs(&k, 1.0).is_err());
    assert!(hecke_rhs(&k, 0.9).is_err());
    assert!(hecke_lhs_mc(&k, 1.0, 10, 0).is_err());
}

#[test]
fn error_term_predicts_mean_count_for_conductor_15() {
    let k = create_field(15).unwrap();
    for volume in [4.0, 12.0] {
        let et = error_term(&k, volume, 0.5, DEFAULT_T).unwrap();
        let mc = mean_count_mc(&k, volume, 20_000, 4).unwrap();
        let diff = (mc.mean - 1.0 - volume - et.epsilon).abs();
        assert!(diff < 3.0 * mc.stderr + et.quad_error_est + et.tail_bound, "V={volume}: {mc:?} {et:?}");
    }
}

#[test]
fn error_term_refines_with_t_and_sigma_for_conductor_20() {
    let k = create_field(20).unwrap();
    let base = error_term(&k, 10.0, 0.5, 60.0).unwrap();
    let longer = error_term(&k, 10.0, 0.5, 120.0).unwrap();
    let shifted = error_term(&k, 10.0, 0.8, 60.0).unwrap();
    let slack = |a: &ilz::hecke::ErrorTermResult, b: &ilz::hecke::ErrorTermResult| {
        a.quad_error_est + a.tail_bound + b.quad_error_est + b.tail_bound
    };
    assert!((base.epsilon - longer.epsilon).abs() <= slack(&base, &longer));
    assert!((base.epsilon - shifted.epsilon).abs() <= slack(&base, &shifted));
    assert!(longer.tail_bound < base.tail_bound);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn raw_integral_is_real(volume in 0.5f64..16.0) {
        thread_local! {
            static ENGINE: ErrorTermEngine =
                ErrorTermEngine::new(&create_field(16).unwrap(), 0.5, DEFAULT_T, (0.5, 16.0)).unwrap();
        }
        let r = ENGINE.with(|e| e.evaluate(volume));
        prop_assert!(r.imag_part < 1e-8 * (1.0 + r.epsilon.abs()), "{:?}", r);
        prop_assert!(r.quad_error_est < 1e-8 * (1.0 + r.epsilon.abs()));
    }
}
