//! Adaptive Dormand–Prince 5(4) integrator for real systems `y' = f(t, y)`.
//!
//! Complex systems are integrated on their real/imaginary split; see
//! [`pack`] and [`unpack`].

use crate::{Error, Result, C64};

/// Components larger than this abort the integration.
pub const GROWTH_GUARD: f64 = 1e12;

const MAX_STEPS: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Tolerance {
    pub fn uniform(tol: f64) -> Self {
        Self { rtol: tol, atol: tol }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::uniform(1e-10)
    }
}

// Butcher tableau (Dormand & Prince 1980).
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b* (fifth minus fourth order weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += c * k[i];
        }
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `t1` (`t1 ≥ t0`).
///
/// Steps are accepted when the embedded error estimate satisfies
/// `max_i |err_i| / (atol + rtol·max(|y_i|, |y_new_i|)) ≤ 1`.
pub fn integrate<const N: usize, F>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    tol: Tolerance,
) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    if !(t1 >= t0) {
        return Err(Error::DomainError(format!(
            "integration interval [{t0}, {t1}] is reversed"
        )));
    }
    if t1 == t0 {
        return Ok(y0);
    }
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&mut f, t, &y, &k1, tol).min(span);

    for _ in 0..MAX_STEPS {
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        let k2 = f(t + C2 * h, &axpy(&y, &[(h * A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, &[(h * A31, &k1), (h * A32, &k2)]));
        let k4 = f(
            t + C4 * h,
            &axpy(&y, &[(h * A41, &k1), (h * A42, &k2), (h * A43, &k3)]),
        );
        let k5 = f(
            t + C5 * h,
            &axpy(
                &y,
                &[(h * A51, &k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)],
            ),
        );
        let k6 = f(
            t + h,
            &axpy(
                &y,
                &[
                    (h * A61, &k1),
                    (h * A62, &k2),
                    (h * A63, &k3),
                    (h * A64, &k4),
                    (h * A65, &k5),
                ],
            ),
        );
        let y_new = axpy(
            &y,
            &[(h * B1, &k1), (h * B3, &k3), (h * B4, &k4), (h * B5, &k5), (h * B6, &k6)],
        );
        let k7 = f(t + h, &y_new);

        let mut err = 0.0f64;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max(e.abs() / scale);
        }
        if !err.is_finite() {
            return Err(Error::StepSizeUnderflow { t, reason: "non-finite error estimate" });
        }

        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            y = y_new;
            k1 = k7;
            if y.iter().any(|v| v.abs() > GROWTH_GUARD) {
                return Err(Error::StepSizeUnderflow { t, reason: "growth guard exceeded" });
            }
            if last {
                return Ok(y);
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
        }

        if h <= 1e-14 * t.abs().max(span) {
            return Err(Error::StepSizeUnderflow { t, reason: "step below resolution" });
        }
    }
    Err(Error::StepSizeUnderflow { t, reason: "step budget exhausted" })
}

// Hairer, Nørsett & Wanner, "Solving ODEs I", II.4.
fn initial_step<const N: usize, F>(
    f: &mut F,
    t: f64,
    y: &[f64; N],
    dy: &[f64; N],
    tol: Tolerance,
) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let scaled_norm = |v: &[f64; N]| {
        let s: f64 = (0..N)
            .map(|i| {
                let sc = tol.atol + tol.rtol * y[i].abs();
                (v[i] / sc).powi(2)
            })
            .sum();
        (s / N as f64).sqrt()
    };
    let d0 = scaled_norm(y);
    let d1 = scaled_norm(dy);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = axpy(y, &[(h0, dy)]);
    let dy1 = f(t + h0, &y1);
    let diff: [f64; N] = std::array::from_fn(|i| dy1[i] - dy[i]);
    let d2 = scaled_norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}

/// Splits `M` complex numbers into `N = 2M` reals, `[re₀, im₀, re₁, im₁, …]`.
pub fn pack<const M: usize, const N: usize>(z: &[C64; M]) -> [f64; N] {
    assert_eq!(N, 2 * M);
    let mut out = [0.0; N];
    for (i, v) in z.iter().enumerate() {
        out[2 * i] = v.re;
        out[2 * i + 1] = v.im;
    }
    out
}

pub fn unpack<const M: usize, const N: usize>(y: &[f64; N]) -> [C64; M] {
    assert_eq!(N, 2 * M);
    std::array::from_fn(|i| C64::new(y[2 * i], y[2 * i + 1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let y = integrate(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 5.0, Tolerance::uniform(1e-12))
            .unwrap();
        assert!((y[0] - (-5.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn harmonic_oscillator_period() {
        let tau = 2.0 * std::f64::consts::PI;
        let y = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            3.0 * tau,
            Tolerance::uniform(1e-12),
        )
        .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10 && y[1].abs() < 1e-10);
    }

    #[test]
    fn time_dependent_rhs() {
        // y' = cos t  =>  y = sin t
        let y = integrate(|t, _: &[f64; 1]| [t.cos()], 0.0, [0.0], 2.0, Tolerance::default())
            .unwrap();
        assert!((y[0] - 2.0f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn zero_length_interval_is_identity() {
        let y = integrate(|_, y: &[f64; 2]| *y, 1.0, [3.0, 4.0], 1.0, Tolerance::default());
        assert_eq!(y.unwrap(), [3.0, 4.0]);
    }

    #[test]
    fn growth_guard_aborts() {
        let r = integrate(|_, y: &[f64; 1]| [10.0 * y[0]], 0.0, [1.0], 10.0, Tolerance::default());
        assert!(matches!(r, Err(Error::StepSizeUnderflow { .. })));
    }

    #[test]
    fn pack_roundtrip() {
        let z = [C64::new(1.0, -2.0), C64::new(0.5, 3.0)];
        let y: [f64; 4] = pack(&z);
        assert_eq!(y, [1.0, -2.0, 0.5, 3.0]);
        assert_eq!(unpack::<2, 4>(&y), z);
    }
}
