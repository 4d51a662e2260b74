use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use std::f64::consts::TAU;

use rpq::calculus::{rpq_antiderivative, rpq_derivative, PowerSeries};
use rpq::coherent::{coherent_vector, mandel_q, mean_photon_number, overlap, photon_distribution};
use rpq::fock::build_ladder;
use rpq::hopf::{build_hopf_rep, hopf_axiom_suite, HopfSpec};
use rpq::numbers::{rpq_binomial_with, rpq_number};
use rpq::polynomials::{builtin_phis, hermite_continuous, rs_direct, rs_recursive};
use rpq::special::{exp_difference_residual, exp_series, radius_estimate, rpq_exp, trig_series, SeriesEvalConfig, Trig};
use rpq::structure::builtin_phi;
use rpq::{DeformationSpec, Kind, PrecisionPolicy};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, rng_seed: RngSeed::Fixed(0x5eed_2024), failure_persistence: None, ..ProptestConfig::default() }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `(p, q)` with `1 < p < 2`, `0.3 < q < 0.95` and `pq < 0.98` (HN needs `pq < 1`).
fn pq() -> impl Strategy<Value = (f64, f64)> {
    (1.05f64..2.0, 0.0f64..1.0).prop_map(|(p, u)| (p, 0.3 + u * ((0.98 / p).min(0.95) - 0.3)))
}

fn kind_spec(kind: Kind, p: f64, q: f64) -> DeformationSpec {
    match kind {
        Kind::HounkonnouNgompe => DeformationSpec::with_extras(kind, p, q, &[("mu", 1.0), ("nu", 1.5)]).unwrap(),
        _ => DeformationSpec::new(kind, p, q).unwrap(),
    }
}

const FOUR: [Kind; 4] = [Kind::JagannathanSrinivasa, Kind::ChakrabartiJagannathan, Kind::Quesne, Kind::HounkonnouNgompe];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn js_numbers_positive_and_geometric((p, q) in pq(), n in 1usize..40) {
        let s = kind_spec(Kind::JagannathanSrinivasa, p, q);
        prop_assert_eq!(rpq_number(&s, 0).unwrap(), 0.0);
        let v = rpq_number(&s, n).unwrap();
        prop_assert!(v > 0.0);
        let geo: f64 = (0..n).map(|k| p.powi((n - 1 - k) as i32) * q.powi(k as i32)).sum();
        prop_assert!(rel(v, geo) < 1e-12);
    }

    #[test]
    fn cj_is_js_with_inverted_p((p, q) in pq(), n in 0usize..40) {
        let cj = rpq_number(&kind_spec(Kind::ChakrabartiJagannathan, p, q), n).unwrap();
        let js = rpq_number(&kind_spec(Kind::JagannathanSrinivasa, 1.0 / p, q), n).unwrap();
        prop_assert!((cj - js).abs() <= 1e-12 * js.abs().max(1e-300));
    }

    #[test]
    fn quesne_and_hn_closed_forms((p, q) in pq(), n in 0usize..30) {
        let qs = rpq_number(&kind_spec(Kind::Quesne, p, q), n).unwrap();
        let closed = (p.powi(n as i32) - q.powi(-(n as i32))) / (q - 1.0 / p);
        prop_assert!((qs - closed).abs() <= 1e-12 * closed.abs().max(1.0));
        let hn = rpq_number(&kind_spec(Kind::HounkonnouNgompe, p, q), n).unwrap();
        let expect = q.powf(1.5 * n as f64) * p.powi(-(n as i32)) * qs;
        prop_assert!((hn - expect).abs() <= 1e-12 * expect.abs().max(1e-300));
    }

    #[test]
    fn binomial_symmetry_log_space((p, q) in pq(), n in 0usize..20, k in 0usize..20) {
        prop_assume!(k <= n);
        let s = kind_spec(Kind::JagannathanSrinivasa, p, q);
        let pol = PrecisionPolicy::log_space();
        let a = rpq_binomial_with(&s, n, k, &pol).unwrap();
        let b = rpq_binomial_with(&s, n, n - k, &pol).unwrap();
        prop_assert!(rel(a, b) < 1e-12);
    }

    #[test]
    fn phi_vanishes_at_zero((p, q) in pq(), i in 0usize..4) {
        prop_assert_eq!(builtin_phi(&kind_spec(FOUR[i], p, q), 0).unwrap(), 0.0);
    }

    #[test]
    fn kalnins_phi_strictly_increasing(q in 0.2f64..3.0, l in 0.5f64..2.0, lambda in -1.0f64..1.0) {
        prop_assume!((q - 1.0).abs() > 1e-3);
        let s = DeformationSpec::with_extras(Kind::Kalnins, 1.0, q, &[("l", l), ("lambda", lambda)]).unwrap();
        // For q > 1 phi saturates at the bound; stop before q^-n drops below eps.
        let n_max = if q > 1.0 { ((14.0 / q.log10()) as usize).min(40) } else { 40 };
        for n in 0..n_max {
            prop_assert!(builtin_phi(&s, n + 1).unwrap() > builtin_phi(&s, n).unwrap());
        }
    }

    #[test]
    fn monomial_action_and_round_trip((p, q) in pq(), i in 0usize..4, n in 1usize..=32) {
        let s = kind_spec(FOUR[i], p, q);
        let d = rpq_derivative(&s, &PowerSeries::monomial(n)).unwrap();
        prop_assert_eq!(d.coeff(n - 1), c(rpq_number(&s, n).unwrap()));
        // (z d)(z^n) = R(n) z^n and (d z)(z^n) = R(n+1) z^n.
        let zd = d.shift_up();
        prop_assert_eq!(zd.coeff(n), c(rpq_number(&s, n).unwrap()));
        let dz = rpq_derivative(&s, &PowerSeries::monomial(n).shift_up()).unwrap();
        prop_assert_eq!(dz.coeff(n), c(rpq_number(&s, n + 1).unwrap()));
    }

    #[test]
    fn antiderivative_round_trip((p, q) in pq(), i in 0usize..4, coeffs in prop::collection::vec(-1.0f64..1.0, 1..17)) {
        let s = kind_spec(FOUR[i], p, q);
        let f = PowerSeries::from_real(&coeffs);
        let back = rpq_derivative(&s, &rpq_antiderivative(&s, &f).unwrap()).unwrap();
        prop_assert!(back.max_diff(&f) < 1e-12);
    }

    #[test]
    fn js_at_p_one_is_jackson(q in 0.1f64..0.95, n in 1usize..30) {
        let s = kind_spec(Kind::JagannathanSrinivasa, 1.0, q);
        let d = rpq_derivative(&s, &PowerSeries::monomial(n)).unwrap();
        let jackson = (1.0 - q.powi(n as i32)) / (1.0 - q);
        prop_assert!((d.coeff(n - 1).re - jackson).abs() < 1e-12);
    }

    #[test]
    fn exp_real_and_at_least_one((p, q) in pq(), x in 0.0f64..2.0) {
        let s = kind_spec(Kind::JagannathanSrinivasa, p, q);
        let v = rpq_exp(&s, c(x), &SeriesEvalConfig::default()).unwrap().value;
        prop_assert_eq!(v.im, 0.0);
        prop_assert!(v.re >= 1.0);
    }

    #[test]
    fn cosh_plus_sinh_is_exp((p, q) in pq(), i in 0usize..4) {
        let s = kind_spec(FOUR[i], p, q);
        let e = exp_series(&s, 30).unwrap();
        let sum = &trig_series(&s, Trig::Cosh, c(1.0), 30).unwrap() + &trig_series(&s, Trig::Sinh, c(1.0), 30).unwrap();
        prop_assert!(sum.max_diff(&e) <= 1e-12 * e.max_abs().max(1.0));
        prop_assert!(exp_difference_residual(&s, 30).unwrap() <= 1e-12 * e.max_abs().max(1.0));
    }

    #[test]
    fn ladder_transpose_and_zero_diagonals((p, q) in pq(), i in 0usize..4, d in 3usize..40) {
        let s = kind_spec(FOUR[i], p, q);
        let (a, ad, _) = build_ladder(&s, d).unwrap();
        prop_assert_eq!(&a.transpose(), &ad);
        let x = a.entries() + ad.entries();
        let pm = a.entries() - ad.entries();
        for k in 0..d {
            prop_assert_eq!(x[(k, k)], 0.0);
            prop_assert_eq!(pm[(k, k)], 0.0);
        }
    }

    #[test]
    fn coherent_overlap_and_continuity(
        (p, q) in (1.05f64..1.6, 0.5f64..0.95),
        r1 in 0.0f64..0.5, t1 in 0.0f64..TAU, r2 in 0.0f64..0.5, t2 in 0.0f64..TAU,
    ) {
        let s = kind_spec(Kind::JagannathanSrinivasa, p, q);
        let cfg = SeriesEvalConfig::default();
        let (z1, z2) = (Complex64::from_polar(r1, t1), Complex64::from_polar(r2, t2));
        let (direct, closed) = overlap(&s, z1, z2, 80, &cfg).unwrap();
        prop_assert!((direct - closed).norm() < 1e-8);
        let a = coherent_vector(&s, z1, 80, &cfg).unwrap().coeffs;
        let b = coherent_vector(&s, z2, 80, &cfg).unwrap().coeffs;
        let dist: f64 = a.iter().zip(&b).map(|(u, v)| (u - v).norm_sqr()).sum();
        prop_assert!((dist - 2.0 * (1.0 - direct.re)).abs() < 1e-10);
    }

    #[test]
    fn mean_photon_number_matches_distribution((p, q) in pq(), x in 0.01f64..1.0) {
        let s = kind_spec(Kind::JagannathanSrinivasa, p, q);
        let cfg = SeriesEvalConfig::default();
        let pn = photon_distribution(&s, x, 200, &cfg).unwrap();
        let from_p: f64 = pn.iter().enumerate().map(|(n, v)| n as f64 * v).sum();
        prop_assert!((mean_photon_number(&s, x, &cfg).unwrap() - from_p).abs() < 1e-8);
    }

    #[test]
    fn kalnins_sub_poissonian(q in 0.2f64..0.9, frac in 0.01f64..1.0) {
        let s = DeformationSpec::with_extras(Kind::Kalnins, 1.0, q, &[("l", 1.0), ("lambda", 0.0)]).unwrap();
        let cfg = SeriesEvalConfig::default();
        let r = radius_estimate(&s, &cfg);
        let x = if r.is_infinite() { 2.0 * frac } else { 0.5 * r.value * frac };
        prop_assert!(mandel_q(&s, x, &cfg).unwrap() < 0.0);
    }

    #[test]
    fn rs_dual_path_and_symmetry((p, q) in pq(), i in 0usize..4, n in 0usize..=12) {
        let s = kind_spec(FOUR[i], p, q);
        let direct = rs_direct(&s, n).unwrap();
        let rec = rs_recursive(&s, &builtin_phis(&s).unwrap(), n).unwrap();
        prop_assert!(rec.max_rel_diff(&direct) < 1e-10);
        if FOUR[i] != Kind::HounkonnouNgompe {
            for k in 0..=n {
                prop_assert!(rel(direct.coeffs[k], direct.coeffs[n - k]) < 1e-12);
            }
        }
    }

    #[test]
    fn hermite_real_for_symmetric_kinds((p, q) in pq(), i in 0usize..3, n in 0usize..10, theta in 0.0f64..TAU) {
        let h = hermite_continuous(&kind_spec(FOUR[i], p, q), n, theta).unwrap();
        prop_assert!(h.asymmetry_warning.is_none());
        prop_assert!(h.imag.abs() < 1e-10 * h.value.abs().max(1.0));
    }

    #[test]
    fn primitive_hopf_axioms((p, q) in pq(), i in 0usize..3, tau in -1.0f64..1.0) {
        let h = HopfSpec::builtin(kind_spec(FOUR[i], p, q), tau).unwrap();
        let r = hopf_axiom_suite(&h, 5).unwrap();
        prop_assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        prop_assert!(r.max_residual() < 1e-12);
    }

    #[test]
    fn antipode_of_n_is_exact((p, q) in pq(), tau in -1.0f64..1.0, d in 3usize..10) {
        let h = HopfSpec::builtin(kind_spec(Kind::HounkonnouNgompe, p, q), tau).unwrap();
        let rep = build_hopf_rep(&h, d).unwrap();
        for k in 0..d {
            prop_assert_eq!(rep.s_n.get(k, k), -(k as f64) - 2.0 * tau);
        }
        prop_assert_eq!(rep.eps_n, -tau);
    }
}
