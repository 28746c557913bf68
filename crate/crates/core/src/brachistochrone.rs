//! Time-optimal transfer `|ψᵢ⟩ → |ψ_f⟩`.
//!
//! Targets are written `|ψ_f⟩ = cos(α/2)|ψᵢ⟩ + e^{iβ} sin(α/2)|ψ₀⟩` with complex
//! `α`, `β`. For a generator `(θ, φ, Ω)` the optimal phase is fixed by
//! `e^{i(φ−β)}`, the evolution time by
//!
//! ```text
//! τ = | (2/Ω) arctan( i sin²(α/2) / (cos(α/2)√(cos²θ − sin²(α/2)) − cosθ) ) |
//! ```
//!
//! with `arg Ω` chosen so that the bracket is real and positive.

use crate::cmath::{self, I, ONE};
use crate::evolution::AdjointStatePair;
use crate::hamiltonian::{EffectiveHamiltonian, SphericalParams};
use crate::ode::{self, Tolerance};
use crate::{Error, Result, C64};

/// `|sin(α/2)|` at or below this means the target is the initial state.
pub const DEGENERATE_TARGET_TOL: f64 = 1e-12;

/// `|sinθ|` at or below this makes the phase equation singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Relative width of the `Z = ±Ω` divergence band.
pub const DIVERGENCE_TOL: f64 = 1e-9;

/// Initial samples of the oracle's bracketing scan.
pub const ORACLE_SAMPLES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryStates {
    pub alpha: C64,
    pub beta: C64,
    /// Adjoint target `⟨ψ̃_f| = cos(α̃/2)⟨ψ̃ᵢ| + e^{−iβ̃} sin(α̃/2)⟨ψ̃₀|`.
    pub alpha_tilde: C64,
    pub beta_tilde: C64,
}

impl BoundaryStates {
    /// Target with the matching adjoint, `α̃ = α`, `β̃ = β`.
    pub fn new(alpha: C64, beta: C64) -> Self {
        Self { alpha, beta, alpha_tilde: alpha, beta_tilde: beta }
    }

    /// `(cos(α/2), e^{iβ} sin(α/2))`.
    pub fn coefficients(&self) -> [C64; 2] {
        [(self.alpha / 2.0).cos(), (I * self.beta).exp() * (self.alpha / 2.0).sin()]
    }

    /// `(cos(α̃/2), e^{−iβ̃} sin(α̃/2))`.
    pub fn adjoint_coefficients(&self) -> [C64; 2] {
        [(self.alpha_tilde / 2.0).cos(), (-I * self.beta_tilde).exp() * (self.alpha_tilde / 2.0).sin()]
    }

    /// `⟨ψ̃_f|ψ_f⟩`.
    pub fn pseudo_norm(&self) -> C64 {
        let (f, g) = (self.coefficients(), self.adjoint_coefficients());
        f[0] * g[0] + f[1] * g[1]
    }

    /// Recovers `(α, β)` from `(f₁, f₂)` with `f₁² + f₂²e^{−2iβ} = 1` implied.
    ///
    /// `α/2 = arccos f₁` (principal), `β = −i ln(f₂ / sin(α/2))`; `β = 0` when
    /// `sin(α/2) = 0`.
    pub fn from_coefficients(f1: C64, f2: C64) -> Self {
        let half = f1.acos();
        let sa = half.sin();
        let beta = if sa.norm() <= DEGENERATE_TARGET_TOL {
            C64::new(0.0, 0.0)
        } else {
            -I * cmath::ln(f2 / sa)
        };
        Self::new(2.0 * half, beta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    Generic,
    Coherent,
    Incoherent,
    ExceptionalPoint,
    Hermitian,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Generic => "generic",
            Regime::Coherent => "coherent",
            Regime::Incoherent => "incoherent",
            Regime::ExceptionalPoint => "exceptional_point",
            Regime::Hermitian => "hermitian",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Root choice of the quadratic for `e^{i(φ−β)}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Sign {
    #[default]
    Upper,
    Lower,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Upper => 1.0,
            Sign::Lower => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PassageTimeResult {
    pub tau: f64,
    pub regime: Regime,
    /// `arg Ω` making `τ` real and positive.
    pub omega_arg: f64,
    pub diverged: bool,
}

impl PassageTimeResult {
    fn finite(tau: f64, regime: Regime, omega_arg: f64) -> Self {
        Self { tau, regime, omega_arg, diverged: false }
    }

    fn divergent(regime: Regime, omega_arg: f64) -> Self {
        Self { tau: f64::INFINITY, regime, omega_arg, diverged: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinFlipTimes {
    pub tau_down: f64,
    pub tau_up: f64,
    pub kappa: f64,
}

fn check_angles(alpha: C64, theta: C64) -> Result<(C64, C64, C64, C64)> {
    let (sa, ca) = ((alpha / 2.0).sin(), (alpha / 2.0).cos());
    let (st, ct) = (theta.sin(), theta.cos());
    if st.norm() <= SINGULAR_TOL {
        return Err(Error::SingularGeometry("sin(theta) vanishes"));
    }
    if sa.norm() <= DEGENERATE_TARGET_TOL {
        return Err(Error::SingularGeometry("sin(alpha/2) vanishes"));
    }
    Ok((sa, ca, st, ct))
}

/// `φ − β` with `e^{i(φ−β)} = (−cosθ cos(α/2) ± √(cos²θ − sin²(α/2))) / (sinθ sin(α/2))`.
pub fn solve_phase(alpha: C64, theta: C64, sign: Sign) -> Result<C64> {
    let (sa, ca, st, ct) = check_angles(alpha, theta)?;
    let root = cmath::sqrt(ct * ct - sa * sa);
    let e = (-ct * ca + sign.value() * root) / (st * sa);
    Ok(-I * cmath::ln(e))
}

/// `arctan(i sin²(α/2) / D)` with `D = ±cos(α/2)√(cos²θ − sin²(α/2)) − cosθ`,
/// or `None` inside the divergence band.
fn time_bracket(alpha: C64, theta: C64, sign: Sign) -> Result<Option<C64>> {
    let (sa, ca, _, ct) = check_angles(alpha, theta)?;
    let sa2 = sa * sa;
    let d = sign.value() * ca * cmath::sqrt(ct * ct - sa2) - ct;
    let band = DIVERGENCE_TOL * (d.norm() + sa2.norm());
    if (d - sa2).norm() <= band || (d + sa2).norm() <= band {
        return Ok(None);
    }
    Ok(Some(cmath::atan_ratio(I * sa2, d)))
}

fn check_magnitude(omega_mag: f64) -> Result<()> {
    if !(omega_mag > 0.0 && omega_mag.is_finite()) {
        return Err(Error::DomainError(format!("|Omega| must be positive and finite, got {omega_mag}")));
    }
    Ok(())
}

/// Optimal evolution time for `|ψᵢ⟩ → |ψ_f(α)⟩` at fixed `θ` and `|Ω|`.
///
/// Divergent inputs return `tau = inf` with `diverged = true`.
pub fn evolution_time(alpha: C64, theta: C64, omega_mag: f64) -> Result<PassageTimeResult> {
    evolution_time_with_sign(alpha, theta, omega_mag, Sign::Upper)
}

pub fn evolution_time_with_sign(
    alpha: C64,
    theta: C64,
    omega_mag: f64,
    sign: Sign,
) -> Result<PassageTimeResult> {
    check_magnitude(omega_mag)?;
    let regime = if theta.im == 0.0 && alpha.im == 0.0 { Regime::Hermitian } else { Regime::Generic };
    match time_bracket(alpha, theta, sign)? {
        None => Ok(PassageTimeResult::divergent(regime, 0.0)),
        Some(a) => Ok(PassageTimeResult::finite(2.0 * a.norm() / omega_mag, regime, cmath::arg(a))),
    }
}

/// `τ_p = |(i/Ω) ln((Z − Ω)/(Z + Ω))|`, the `α = π` case in terms of `Z` and `Ω`.
pub fn passage_time_general(z: C64, omega: C64) -> Result<PassageTimeResult> {
    if omega.norm() == 0.0 || !omega.norm().is_finite() || !z.norm().is_finite() {
        return Err(Error::DomainError(format!("need finite nonzero Omega, got {omega}")));
    }
    let regime = if z.im == 0.0 && omega.im == 0.0 { Regime::Hermitian } else { Regime::Generic };
    let omega_arg = cmath::arg(omega);
    let band = DIVERGENCE_TOL * (z.norm() + omega.norm());
    if (z - omega).norm() <= band || (z + omega).norm() <= band {
        return Ok(PassageTimeResult::divergent(regime, omega_arg));
    }
    let tau = (I / omega * cmath::ln((z - omega) / (z + omega))).norm();
    Ok(PassageTimeResult::finite(tau, regime, omega_arg))
}

fn check_rates(omega0: f64, delta: f64) -> Result<()> {
    if !(omega0 > 0.0 && omega0.is_finite()) {
        return Err(Error::DomainError(format!("Omega0 must be positive, got {omega0}")));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::DomainError(format!("delta must be non-negative, got {delta}")));
    }
    Ok(())
}

/// `τ_p = (2/Ω₀) arctan(Ω₀/δ)`; `δ = 0` gives the Hermitian `π/Ω₀`.
pub fn passage_time_coherent(omega0: f64, delta: f64) -> Result<PassageTimeResult> {
    check_rates(omega0, delta)?;
    let tau = 2.0 / omega0 * omega0.atan2(delta);
    Ok(PassageTimeResult::finite(tau, Regime::Coherent, 0.0))
}

/// `τ_p = (2/Ω₀) artanh(Ω₀/δ)`, requiring `Ω₀ < δ`.
pub fn passage_time_incoherent(omega0: f64, delta: f64) -> Result<PassageTimeResult> {
    check_rates(omega0, delta)?;
    if omega0 >= delta {
        return Err(Error::DomainError(format!(
            "incoherent regime needs Omega0 < delta, got {omega0} >= {delta}"
        )));
    }
    let tau = 2.0 / omega0 * (omega0 / delta).atanh();
    Ok(PassageTimeResult::finite(tau, Regime::Incoherent, 0.0))
}

/// `τ = (2/δ)|1 − cos(α/2)|`.
pub fn exceptional_point_time(delta: f64, alpha: C64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::DomainError(format!("delta must be positive, got {delta}")));
    }
    Ok(2.0 / delta * (ONE - (alpha / 2.0).cos()).norm())
}

/// `κ = arctan(δ/Ω)`, `τ↓ = (π − 2κ)/Ω`, `τ↑ = (π + 2κ)/Ω`.
pub fn spin_flip_times(omega: f64, delta: f64) -> Result<SpinFlipTimes> {
    check_rates(omega, delta)?;
    let kappa = delta.atan2(omega);
    let pi = std::f64::consts::PI;
    Ok(SpinFlipTimes {
        tau_down: (pi - 2.0 * kappa) / omega,
        tau_up: (pi + 2.0 * kappa) / omega,
        kappa,
    })
}

/// `τ_p = (2/Ω) arctan(Ω/√(ω² − Ω²))` for a fixed energy spread `ω = 2ΔE ≥ Ω`.
pub fn passage_time_constrained(omega_variance: f64, omega_gap: f64) -> Result<PassageTimeResult> {
    check_rates(omega_gap, omega_variance)?;
    if omega_variance < omega_gap {
        return Err(Error::DomainError(format!(
            "need omega >= Omega, got {omega_variance} < {omega_gap}"
        )));
    }
    let root = ((omega_variance - omega_gap) * (omega_variance + omega_gap)).sqrt();
    let tau = 2.0 / omega_gap * omega_gap.atan2(root);
    let regime = if root == 0.0 { Regime::Hermitian } else { Regime::Generic };
    Ok(PassageTimeResult::finite(tau, regime, 0.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleComparison {
    pub tau_closed: f64,
    pub tau_numeric: f64,
    pub residual: f64,
}

/// Generator realising the optimal transfer: `θ`, `|Ω|` and `λ₀` from `p`,
/// `φ = β + (φ − β)` from [`solve_phase`], `arg Ω` from [`evolution_time`].
pub fn optimal_hamiltonian(
    p: &SphericalParams,
    b: &BoundaryStates,
) -> Result<(EffectiveHamiltonian, PassageTimeResult)> {
    let omega_mag = p.omega.norm();
    let res = evolution_time(b.alpha, p.theta, omega_mag)?;
    if res.diverged {
        return Err(Error::Diverged);
    }
    let phi = b.beta + solve_phase(b.alpha, p.theta, Sign::Upper)?;
    let omega = C64::from_polar(omega_mag, res.omega_arg);
    let q = SphericalParams::new(p.theta, phi, omega, p.lambda0);
    Ok((q.to_hamiltonian(), res))
}

/// Checks the closed-form time against direct integration: the state is
/// evolved under [`optimal_hamiltonian`] and the first zero of its
/// `|ψᵢ⟩`-coefficient `f = u₁ − e^{−iβ}cot(α/2)u₂` is located.
///
/// Zeros of `f` are minima of `|f|²`, so the scan brackets sign changes
/// (− to +) of `Re(f̄ f')` over `(0, 8π/|Ω|]` and bisects them; a bracket is
/// accepted when `|f|` at the minimum is at the integration noise level.
pub fn verify_against_oracle(
    p: &SphericalParams,
    b: &BoundaryStates,
    tol: f64,
) -> Result<OracleComparison> {
    let (h, res) = optimal_hamiltonian(p, b)?;
    let window = 8.0 * std::f64::consts::PI / p.omega.norm();
    let tau_numeric = first_crossing(&h, b, window, tol)?;
    Ok(OracleComparison {
        tau_closed: res.tau,
        tau_numeric,
        residual: (res.tau - tau_numeric).abs(),
    })
}

fn first_crossing(h: &EffectiveHamiltonian, b: &BoundaryStates, window: f64, tol: f64) -> Result<f64> {
    let m = h.matrix();
    let k = (-I * b.beta).exp() * (b.alpha / 2.0).cos() / (b.alpha / 2.0).sin();
    let rhs = |_: f64, y: &[f64; 4]| -> [f64; 4] {
        let u: [C64; 2] = ode::unpack(y);
        ode::pack(&[
            -I * (m[0][0] * u[0] + m[0][1] * u[1]),
            -I * (m[1][0] * u[0] + m[1][1] * u[1]),
        ])
    };
    let f = |u: &[C64; 2]| u[0] - k * u[1];
    // ½ d|f|²/dt
    let g = |u: &[C64; 2]| {
        let hu = [m[0][0] * u[0] + m[0][1] * u[1], m[1][0] * u[0] + m[1][1] * u[1]];
        let df = -I * (hu[0] - k * hu[1]);
        (f(u).conj() * df).re
    };
    let tol = Tolerance::uniform(tol);
    let step = |t0: f64, y0: [f64; 4], t1: f64| ode::integrate(rhs, t0, y0, t1, tol);

    let init = AdjointStatePair::initial();
    let dt = window / ORACLE_SAMPLES as f64;
    let mut t_prev = 0.0;
    let mut y_prev: [f64; 4] = ode::pack(&init.u);
    let mut g_prev = g(&init.u);
    for i in 1..=ORACLE_SAMPLES {
        let t = dt * i as f64;
        let y = step(t_prev, y_prev, t)?;
        let u: [C64; 2] = ode::unpack(&y);
        let g_now = g(&u);
        if g_prev < 0.0 && g_now >= 0.0 {
            let (mut lo, mut hi) = (t_prev, t);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi || hi - lo <= 1e-14 * hi {
                    break;
                }
                let u_mid: [C64; 2] = ode::unpack(&step(t_prev, y_prev, mid)?);
                if g(&u_mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t_root = 0.5 * (lo + hi);
            let u_root: [C64; 2] = ode::unpack(&step(t_prev, y_prev, t_root)?);
            let scale = (u_root[0].norm_sqr() + u_root[1].norm_sqr()).sqrt().max(1.0);
            if f(&u_root).norm() <= 1e-6 * scale {
                return Ok(t_root);
            }
        }
        t_prev = t;
        y_prev = y;
        g_prev = g_now;
    }
    Err(Error::NoCrossing { window })
}
