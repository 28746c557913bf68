#![allow(dead_code)]

use nhqb::hamiltonian::{EffectiveHamiltonian, Matrix2};
use nhqb::C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_c64(rng: &mut impl Rng, scale: f64) -> C64 {
    c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

pub fn rand_h(rng: &mut impl Rng, scale: f64) -> EffectiveHamiltonian {
    EffectiveHamiltonian::new(
        rand_c64(rng, scale),
        [rand_c64(rng, scale), rand_c64(rng, scale), rand_c64(rng, scale)],
    )
}

pub fn complex(scale: f64) -> impl Strategy<Value = C64> {
    (-scale..scale, -scale..scale).prop_map(|(re, im)| c(re, im))
}

pub fn hamiltonian(scale: f64) -> impl Strategy<Value = EffectiveHamiltonian> {
    (complex(scale), complex(scale), complex(scale), complex(scale))
        .prop_map(|(l, x, y, z)| EffectiveHamiltonian::new(l, [x, y, z]))
}

/// Independent dense representation, built from the Pauli matrices.
pub fn dense(h: &EffectiveHamiltonian) -> nalgebra::Matrix2<C64> {
    let i = c(0.0, 1.0);
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let id = nalgebra::Matrix2::new(one, zero, zero, one);
    let sx = nalgebra::Matrix2::new(zero, one, one, zero);
    let sy = nalgebra::Matrix2::new(zero, -i, i, zero);
    let sz = nalgebra::Matrix2::new(one, zero, zero, -one);
    (id * h.lambda0 + sx * h.omega_x + sy * h.omega_y + sz * h.omega_z) * c(0.5, 0.0)
}

pub fn to_dense(m: &Matrix2) -> nalgebra::Matrix2<C64> {
    nalgebra::Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
