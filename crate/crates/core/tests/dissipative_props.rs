mod common;

use std::f64::consts::PI;

use common::rng;
use nhqb::dissipative::{
    lab_frame_probabilities, occupation_probabilities, rabi_passage_time, regime, RabiRegime,
    RabiSystem,
};
use proptest::prelude::*;
use rand::Rng;

/// Random resonant system in the requested regime, with `λ ≥ |δ|`.
fn random_system(rng: &mut impl Rng, kind: usize) -> RabiSystem {
    let delta: f64 = rng.gen_range(0.2..2.0) * if rng.gen_bool(0.8) { 1.0 } else { -1.0 };
    let rho = match kind {
        0 => delta.abs() * rng.gen_range(1.1..4.0),
        1 => delta.abs() * rng.gen_range(0.1..0.9),
        _ => delta.abs(),
    };
    let lambda = delta.abs() + rng.gen_range(0.0..0.5);
    RabiSystem::resonant(rho, delta, lambda).unwrap()
}

fn window(r: &RabiSystem) -> f64 {
    match rabi_passage_time(r) {
        Ok(p) if !p.diverged => 4.0 * p.tau,
        _ => 8.0 / r.delta_half().abs(),
    }
}

#[test]
fn closed_forms_match_lab_frame_integration() {
    let mut rng = rng(71);
    let mut seen = [0usize; 3];
    for n in 0..100 {
        let r = random_system(&mut rng, n % 3);
        let tag = regime(&r, r.default_tolerance());
        seen[tag as usize] += 1;
        let t_end = window(&r);
        for k in 0..=20 {
            let t = t_end * k as f64 / 20.0;
            let p = occupation_probabilities(&r, t);
            let (up, down) = lab_frame_probabilities(&r, t, 1e-13).unwrap();
            assert!((p.p_up_up - up).abs() < 1e-8 && (p.p_down_up - down).abs() < 1e-8, "{r:?} t={t}");
        }
    }
    assert!(seen.iter().all(|&n| n > 0), "{seen:?}");
}

#[test]
fn detuned_systems_match_lab_frame_integration() {
    let mut rng = rng(73);
    for _ in 0..20 {
        let delta = rng.gen_range(0.1..1.0);
        let r = RabiSystem::new(
            delta + 1.0,
            1.0 - delta,
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(0.1..1.5),
        )
        .unwrap();
        for k in 0..=10 {
            let t = 0.8 * k as f64;
            let p = occupation_probabilities(&r, t);
            let (up, down) = lab_frame_probabilities(&r, t, 1e-13).unwrap();
            assert!((p.p_up_up - up).abs() < 1e-8 && (p.p_down_up - down).abs() < 1e-8, "{r:?} t={t}");
        }
    }
}

#[test]
fn exceptional_point_polynomial() {
    for (delta, lambda) in [(0.5, 0.5), (1.0, 1.2), (2.0, 3.0)] {
        let r = RabiSystem::resonant(delta, delta, lambda).unwrap();
        assert_eq!(regime(&r, r.default_tolerance()), RabiRegime::ExceptionalPoint);
        for k in 0..=50 {
            let t = 0.1 * k as f64;
            let p = occupation_probabilities(&r, t);
            let decay = (-lambda * t).exp();
            assert!((p.p_down_up - (delta * t / 2.0).powi(2) * decay).abs() < 1e-14);
            assert!((p.p_up_up - (1.0 - delta * t / 2.0).powi(2) * decay).abs() < 1e-14);
            let (up, down) = lab_frame_probabilities(&r, t, 1e-13).unwrap();
            assert!((p.p_up_up - up).abs() < 1e-8 && (p.p_down_up - down).abs() < 1e-8);
        }
    }
}

#[test]
fn regimes_approach_the_polynomial_form() {
    let omega0: f64 = 1e-4;
    for delta in [0.5f64, 1.0, 2.0] {
        let coherent = RabiSystem::resonant(delta.hypot(omega0), delta, delta).unwrap();
        let incoherent = RabiSystem::resonant((delta * delta - omega0 * omega0).sqrt(), delta, delta).unwrap();
        let ep = RabiSystem::resonant(delta, delta, delta).unwrap();
        for k in 0..=40 {
            let t = 2.0 / delta * k as f64 / 40.0;
            let e = occupation_probabilities(&ep, t);
            for r in [&coherent, &incoherent] {
                let p = occupation_probabilities(r, t);
                assert!((p.p_up_up - e.p_up_up).abs() < 1e-6 && (p.p_down_up - e.p_down_up).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn first_zero_is_the_passage_time() {
    let mut rng = rng(79);
    for _ in 0..200 {
        let delta: f64 = rng.gen_range(-2.0..2.0);
        let rho = delta.abs() * rng.gen_range(1.05..5.0) + 0.05;
        let r = RabiSystem::resonant(rho, delta, delta.abs() + 0.1).unwrap();
        let w0 = (rho * rho - delta * delta).sqrt();
        // amplitude of |u↑⟩ without decay
        let amp = |t: f64| (w0 * t / 2.0).cos() - delta * (w0 * t / 2.0).sin() / w0;
        let (mut lo, mut hi) = (0.0, 0.0);
        let dt = 1e-3 / w0;
        while amp(hi) > 0.0 {
            lo = hi;
            hi += dt;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if amp(mid) > 0.0 { lo = mid } else { hi = mid }
        }
        let tau = rabi_passage_time(&r).unwrap().tau;
        assert!((tau - 0.5 * (lo + hi)).abs() < 1e-10, "{r:?}: {tau} {lo}");
    }
}

#[test]
fn passage_time_examples() {
    let r = RabiSystem::resonant(2.0, 1.0, 1.0).unwrap();
    let tau = rabi_passage_time(&r).unwrap().tau;
    assert!((tau - 2.0 * PI / (3.0 * 3f64.sqrt())).abs() < 1e-12);
    let r = RabiSystem::resonant(1.0, 1.0, 1.0).unwrap();
    assert!((rabi_passage_time(&r).unwrap().tau - 2.0).abs() < 1e-12);
    let r = RabiSystem::resonant(1.0, 1e-9, 1.0).unwrap();
    assert!((rabi_passage_time(&r).unwrap().tau - PI).abs() < 1e-8);
}

proptest! {
    #[test]
    fn symmetric_decay_is_pure_envelope(rho in 0.01..5.0f64, lambda in 0.0..2.0f64, t in 0.0..10.0f64) {
        let r = RabiSystem::resonant(rho, 0.0, lambda).unwrap();
        let p = occupation_probabilities(&r, t);
        prop_assert!((p.p_up_up + p.p_down_up - (-lambda * t).exp()).abs() < 1e-12);
    }

    #[test]
    fn probabilities_are_bounded(rho in 0.01..5.0f64, delta in -2.0..2.0f64, extra in 0.0..1.0f64, t in 0.0..10.0f64) {
        let r = RabiSystem::resonant(rho, delta, delta.abs() + extra).unwrap();
        let p = occupation_probabilities(&r, t);
        prop_assert!(p.p_up_up >= 0.0 && p.p_down_up >= 0.0);
        prop_assert!(p.p_up_up + p.p_down_up <= 1.0 + 1e-12);
    }
}
