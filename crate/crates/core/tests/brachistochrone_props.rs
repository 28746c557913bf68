mod common;

use std::f64::consts::PI;

use common::*;
use nhqb::brachistochrone::{
    evolution_time, exceptional_point_time, optimal_hamiltonian, passage_time_coherent,
    passage_time_general, passage_time_incoherent, spin_flip_times, verify_against_oracle,
    BoundaryStates,
};
use nhqb::evolution::{propagate_pair_closed, AdjointStatePair};
use nhqb::hamiltonian::SphericalParams;
use nhqb::C64;
use proptest::prelude::*;
use rand::Rng;

/// Independent evaluation of `arctan(i sin²(α/2)/D)` through the logarithm.
fn bracket(alpha: C64, theta: C64) -> C64 {
    let (sa, ca, ct) = ((alpha / 2.0).sin(), (alpha / 2.0).cos(), theta.cos());
    let d = ca * (ct * ct - sa * sa).sqrt() - ct;
    let x = c(0.0, 1.0) * sa * sa / d;
    // arctan x = (i/2) ln((1 − ix)/(1 + ix))
    c(0.0, 0.5) * ((c(1.0, 0.0) - c(0.0, 1.0) * x) / (c(1.0, 0.0) + c(0.0, 1.0) * x)).ln()
}

#[test]
fn general_and_angular_routes_agree() {
    let mut rng = rng(5);
    let mut n = 0;
    while n < 200 {
        let theta = c(rng.gen_range(0.05..PI - 0.05), rng.gen_range(-3.0..3.0));
        let omega = C64::from_polar(rng.gen_range(0.2..5.0), rng.gen_range(-PI..PI));
        let a = passage_time_general(omega * theta.cos(), omega).unwrap();
        let b = evolution_time(c(PI, 0.0), theta, omega.norm()).unwrap();
        if a.diverged || b.diverged {
            continue;
        }
        assert!((a.tau - b.tau).abs() <= 1e-10 * a.tau.max(1.0), "{theta} {omega}: {} {}", a.tau, b.tau);
        n += 1;
    }
}

#[test]
fn coherent_bounds_on_grid() {
    for i in 1..=100 {
        for j in 1..=100 {
            let (w0, d) = (0.05 * i as f64, 0.05 * j as f64);
            let tau = passage_time_coherent(w0, d).unwrap().tau;
            let lower = 2.0 / w0.hypot(d);
            let upper = (PI / w0).min(2.0 / d);
            assert!(lower < tau && tau < upper, "w0={w0} d={d}: {lower} < {tau} < {upper}");
        }
    }
}

#[test]
fn incoherent_exceeds_exceptional_time() {
    for j in 1..=100 {
        let d = 0.05 * j as f64;
        for i in 1..100 {
            let w0 = d * i as f64 / 100.0;
            let tau = passage_time_incoherent(w0, d).unwrap().tau;
            assert!(tau > 2.0 / d, "w0={w0} d={d}: {tau}");
        }
    }
}

#[test]
fn regimes_meet_at_exceptional_point() {
    for d in [0.5, 1.0, 2.0] {
        let ep = exceptional_point_time(d, c(PI, 0.0)).unwrap();
        assert!((ep - 2.0 / d).abs() < 1e-15);
        let coh = passage_time_coherent(1e-4, d).unwrap().tau;
        let inc = passage_time_incoherent(1e-4, d).unwrap().tau;
        assert!((coh - ep).abs() < 1e-6 && (inc - ep).abs() < 1e-6, "{coh} {inc} {ep}");
    }
}

#[test]
fn shrinking_time_along_pt_line() {
    let mut prev = f64::INFINITY;
    for k in 0..=600 {
        let eta = 0.01 * k as f64;
        let tau = evolution_time(c(PI, 0.0), c(PI / 2.0, eta), 1.0).unwrap().tau;
        assert!(tau < prev, "eta={eta}");
        prev = tau;
    }
    let eta: f64 = 20.0;
    let tau = evolution_time(c(PI, 0.0), c(PI / 2.0, eta), 1.0).unwrap().tau;
    let cos_theta = c(PI / 2.0, eta).cos().norm();
    assert!((tau * cos_theta / 2.0 - 1.0).abs() < 1e-12);
}

#[test]
fn oracle_on_pt_family() {
    let b = BoundaryStates::new(c(PI, 0.0), c(0.0, 0.0));
    for eta in [0.0, 0.5, 1.5, 3.0] {
        let p = SphericalParams::new(c(PI / 2.0, eta), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let cmp = verify_against_oracle(&p, &b, 1e-12).unwrap();
        assert!(cmp.residual < 1e-6, "eta={eta}: {cmp:?}");
    }
}

#[test]
fn optimal_generator_reaches_the_target() {
    let mut rng = rng(17);
    for _ in 0..50 {
        let alpha = c(rng.gen_range(0.3..PI), 0.0);
        let beta = c(rng.gen_range(0.0..2.0 * PI), 0.0);
        let theta = c(rng.gen_range(0.3..PI - 0.3), rng.gen_range(-1.5..1.5));
        let p = SphericalParams::new(theta, c(0.0, 0.0), c(rng.gen_range(0.5..2.0), 0.0), c(0.0, 0.0));
        let b = BoundaryStates::new(alpha, beta);
        let Ok((h, res)) = optimal_hamiltonian(&p, &b) else { continue };
        let s = propagate_pair_closed(&h, &AdjointStatePair::initial(), res.tau);
        // component along |ψᵢ⟩ in the {ψᵢ, ψ_f} basis
        let k = (-c(0.0, 1.0) * beta).exp() * (alpha / 2.0).cos() / (alpha / 2.0).sin();
        let along_i = s.u[0] - k * s.u[1];
        let scale = s.u[0].norm().max(s.u[1].norm()).max(1.0);
        assert!(along_i.norm() < 1e-9 * scale, "{p:?} {b:?}: {along_i}");
    }
}

proptest! {
    #[test]
    fn spin_flip_sum(omega in 1e-3..1e3f64, delta in 0.0..1e3f64) {
        let s = spin_flip_times(omega, delta).unwrap();
        prop_assert!((s.tau_down + s.tau_up - 2.0 * PI / omega).abs() <= 1e-12 * (2.0 * PI / omega).max(1.0));
        prop_assert!((s.tau_down - (PI - 2.0 * s.kappa) / omega).abs() <= 1e-12 * (PI / omega).max(1.0));
    }

    #[test]
    fn omega_arg_makes_the_time_real(
        a in 0.2..PI, th_re in 0.1..PI - 0.1, th_im in -3.0..3.0f64, mag in 0.1..10.0f64
    ) {
        let (alpha, theta) = (c(a, 0.0), c(th_re, th_im));
        let res = evolution_time(alpha, theta, mag).unwrap();
        prop_assume!(!res.diverged);
        let omega = C64::from_polar(mag, res.omega_arg);
        let tau = bracket(alpha, theta) * 2.0 / omega;
        prop_assert!(tau.im.abs() <= 1e-10 * tau.norm().max(1.0), "{tau}");
        prop_assert!((tau.re.abs() - res.tau).abs() <= 1e-10 * res.tau.max(1.0));
    }

    #[test]
    fn passage_time_is_parity_symmetric(z in complex(5.0), omega in complex(5.0)) {
        prop_assume!(omega.norm() > 0.1);
        let a = passage_time_general(z, omega).unwrap();
        let b = passage_time_general(-z, omega).unwrap();
        prop_assume!(!a.diverged && !b.diverged);
        prop_assert!((a.tau - b.tau).abs() <= 1e-12 * a.tau.max(1.0), "{} {}", a.tau, b.tau);
    }
}
