mod common;

use std::f64::consts::PI;

use common::*;
use nhqb::evolution::{
    bloch_trajectory_numeric, bloch_vector, propagate_closed, propagate_hamiltonian,
    propagate_numeric, propagate_pair_closed, AdjointStatePair, BlochVector,
};
use nhqb::hamiltonian::{from_spherical, SphericalParams};
use nhqb::C64;
use proptest::prelude::*;
use rand::Rng;

const STEPS: usize = 24;

fn random_params(rng: &mut impl Rng) -> SphericalParams {
    let theta = c(rng.gen_range(0.05..PI - 0.05), rng.gen_range(-3.0..3.0));
    let phi = c(rng.gen_range(0.0..2.0 * PI), 0.0);
    let omega = C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-0.1..0.1));
    let lambda0 = c(rng.gen_range(-2.0..2.0), rng.gen_range(-0.1..0.1));
    SphericalParams::new(theta, phi, omega, lambda0)
}

fn pair_diff(a: &AdjointStatePair, b: &AdjointStatePair) -> f64 {
    max_diff(&[a.u[0], a.u[1], a.u_tilde[0], a.u_tilde[1]], &[b.u[0], b.u[1], b.u_tilde[0], b.u_tilde[1]])
}

/// Steps the ODE through `STEPS` equally spaced times and reports the worst
/// deviation from the closed form and the worst pseudo-norm drift.
fn oracle_run(p: &SphericalParams) -> (f64, f64) {
    let h = from_spherical(p);
    let t_end = 4.0 * PI / p.omega.norm();
    let mut s = AdjointStatePair::initial();
    let mut t = 0.0;
    let (mut dev, mut drift) = (0.0f64, 0.0f64);
    for k in 1..=STEPS {
        let t_next = t_end * k as f64 / STEPS as f64;
        let next = propagate_numeric(&h, &s, t_next - t, 1e-13).unwrap();
        let closed = propagate_closed(p, t_next).to_pair();
        dev = dev.max(pair_diff(&next, &closed));
        drift = drift.max((next.pseudo_norm() - 1.0).norm());
        s = next;
        t = t_next;
    }
    (dev, drift)
}

#[test]
fn closed_form_matches_integrated_pair() {
    let mut rng = rng(2024);
    let mut worst = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let p = random_params(&mut rng);
        let (dev, drift) = oracle_run(&p);
        worst = (worst.0.max(dev), worst.1.max(drift));
    }
    assert!(worst.0 < 1e-8, "max deviation {:e}", worst.0);
    assert!(worst.1 < 1e-9, "max pseudo-norm drift {:e}", worst.1);
}

#[test]
fn bloch_routes_agree_and_stay_on_the_complex_sphere() {
    let mut rng = rng(99);
    for _ in 0..100 {
        let p = random_params(&mut rng);
        let h = from_spherical(&p);
        let t_end = 4.0 * PI / p.omega.norm();
        let n0 = bloch_vector(&AdjointStatePair::initial()).unwrap();
        let mut n = n0;
        let mut t = 0.0;
        for k in 1..=8 {
            let t_next = t_end * k as f64 / 8.0;
            n = bloch_trajectory_numeric(&h, &n, t_next - t, 1e-13).unwrap();
            t = t_next;
            let s = propagate_closed(&p, t).to_pair();
            let from_state = bloch_vector(&s).unwrap();
            let d = max_diff(&from_state.as_array(), &n.as_array());
            assert!(d < 1e-7, "{p:?} t={t}: {d:e}");
            assert!((from_state.dot() - 1.0).norm() < 1e-9);
        }
    }
}

#[test]
fn exceptional_limit_is_linear() {
    let omega0: f64 = 1e-8;
    for delta in [0.5, 1.0, 2.0] {
        let eta = (delta / omega0).asinh();
        let p = SphericalParams::new(c(PI / 2.0, eta), c(0.0, 0.0), c(omega0, 0.0), c(0.0, 0.0));
        for k in 0..=100 {
            let t = 2.0 / delta * k as f64 / 100.0;
            let s = propagate_closed(&p, t);
            let ep = [c(1.0 - delta * t / 2.0, 0.0), c(0.0, -delta * t / 2.0)];
            let d = max_diff(&[s.c1, s.c2], &ep);
            assert!(d <= 1e-6, "delta={delta} t={t}: {d:e}");
        }
    }
}

#[test]
fn bloch_vector_of_basis_states() {
    let up = bloch_vector(&AdjointStatePair::initial()).unwrap();
    assert_eq!(up, BlochVector::new([c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
}

proptest! {
    #[test]
    fn pseudo_norm_is_exact_in_closed_form(h in hamiltonian(2.0), t in 0.0..5.0f64) {
        let s = propagate_hamiltonian(&h, t);
        let scale = (s.c1.norm() + s.c2.norm()) * (s.c1_tilde.norm() + s.c2_tilde.norm());
        prop_assert!((s.pseudo_norm() - 1.0).norm() <= 1e-13 * scale.max(1.0));
    }

    #[test]
    fn closed_pair_propagation_is_a_group(h in hamiltonian(1.0), t1 in 0.0..2.0f64, t2 in 0.0..2.0f64) {
        let s0 = AdjointStatePair::initial();
        let direct = propagate_pair_closed(&h, &s0, t1 + t2);
        let stepped = propagate_pair_closed(&h, &propagate_pair_closed(&h, &s0, t1), t2);
        let scale = direct.u.iter().chain(&direct.u_tilde).map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(pair_diff(&direct, &stepped) <= 1e-12 * scale);
    }

    #[test]
    fn propagator_matches_dense_exponential(h in hamiltonian(1.0), t in 0.0..3.0f64) {
        let u = to_dense(&nhqb::evolution::propagator(&h, t));
        let reference = (dense(&h) * c(0.0, -t)).exp();
        prop_assert!((u - reference).norm() <= 1e-10 * reference.norm().max(1.0));
    }

    #[test]
    fn bloch_unit_length_along_closed_flow(h in hamiltonian(1.0), t in 0.0..3.0f64) {
        let s = propagate_pair_closed(&h, &AdjointStatePair::initial(), t);
        let n = BlochVector::from_pair_unchecked(&s);
        let pn = s.pseudo_norm();
        // n·n = (ũ·u)² for any pair
        prop_assert!((n.dot() - pn * pn).norm() <= 1e-10 * pn.norm().max(1.0).powi(2) * 10.0);
    }
}
