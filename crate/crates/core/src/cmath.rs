//! Principal-branch complex helpers.
//!
//! `num_complex` honours signed zeros, so `sqrt(-1 - 0i) = -i` and
//! `ln(-1 - 0i) = -iπ`. Everything here folds `-0.0` imaginary parts to
//! `+0.0` first, which pins arguments to `(-π, π]`.

use num_complex::Complex64 as C64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// `|wt| / 2` below which [`half_sinc`] switches to its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

#[inline]
fn unsign_zero(z: C64) -> C64 {
    if z.im == 0.0 {
        C64::new(z.re, 0.0)
    } else {
        z
    }
}

/// Principal square root, `arg ∈ (-π/2, π/2]`.
#[inline]
pub fn sqrt(z: C64) -> C64 {
    unsign_zero(z).sqrt()
}

/// Principal logarithm, `Im ∈ (-π, π]`.
#[inline]
pub fn ln(z: C64) -> C64 {
    unsign_zero(z).ln()
}

/// Principal argument in `(-π, π]`.
#[inline]
pub fn arg(z: C64) -> f64 {
    unsign_zero(z).arg()
}

/// `arctan(num / den)` on the principal branch, evaluated as
/// `ln((den + i·num) / (den − i·num)) / 2i` so that `den → 0` stays finite.
///
/// The real part of the result lies in `(-π/2, π/2]`, which makes it the
/// member of `arctan + kπ` with the smallest modulus.
pub fn atan_ratio(num: C64, den: C64) -> C64 {
    let ratio = (den + I * num) / (den - I * num);
    ln(ratio) / (2.0 * I)
}

/// `sin(w t / 2) / w`, smooth through `w = 0` (where it equals `t/2`).
///
/// A 6-term Taylor series is used once `|w t| < 1e-4`.
pub fn half_sinc(w: C64, t: f64) -> C64 {
    let x = w * (t / 2.0);
    if (w * t).norm() < SERIES_THRESHOLD {
        // sin(x)/x = Σ (-1)^k x^{2k} / (2k+1)!
        let x2 = x * x;
        let mut term = ONE;
        let mut sum = ONE;
        for k in 1..6 {
            term = -term * x2 / ((2 * k) as f64 * (2 * k + 1) as f64);
            sum += term;
        }
        sum * (t / 2.0)
    } else {
        x.sin() / w
    }
}

/// Complex dot product without conjugation, `a·b = Σ aᵢbᵢ`.
#[inline]
pub fn dot3(a: &[C64; 3], b: &[C64; 3]) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Complex cross product `a × b`.
#[inline]
pub fn cross3(a: &[C64; 3], b: &[C64; 3]) -> [C64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
