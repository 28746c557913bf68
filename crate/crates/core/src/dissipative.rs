//! Driven two-level system with level decay, in the rotating wave
//! approximation:
//!
//! ```text
//!   d  ⎡u₁⎤   1 ⎡ −iλ + Δ − iδ     2V₀e^{−iωt} ⎤ ⎡u₁⎤
//! i ── ⎢  ⎥ = ─ ⎢                               ⎥ ⎢  ⎥
//!   dt ⎣u₂⎦   2 ⎣ 2V₀e^{iωt}      −iλ − Δ + iδ ⎦ ⎣u₂⎦
//! ```
//!
//! `λ = (γa + γb)/2`, `δ = (γa − γb)/2`, `ρ = 2V₀`. In the co-rotating frame
//! the generator is traceless with `Ω·σ = (ρ, 0, Δ − ω − iδ)·σ`; the common
//! decay `e^{−λt}` is reapplied to probabilities.

use crate::brachistochrone::{self, PassageTimeResult, Regime};
use crate::cmath::{self, I, ZERO};
use crate::csv::{Field, Table};
use crate::evolution;
use crate::hamiltonian::EffectiveHamiltonian;
use crate::ode::{self, Tolerance};
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiSystem {
    pub gamma_a: f64,
    pub gamma_b: f64,
    /// `Δ = E_a − E_b − ν`
    pub delta_detuning: f64,
    pub nu_drive: f64,
    /// `ω` in `V(t) = V₀e^{iωt}`
    pub omega_mod: f64,
    pub v0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RabiRegime {
    Coherent,
    Incoherent,
    ExceptionalPoint,
}

impl RabiRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            RabiRegime::Coherent => "coherent",
            RabiRegime::Incoherent => "incoherent",
            RabiRegime::ExceptionalPoint => "exceptional_point",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TunnelingProbabilities {
    pub p_up_up: f64,
    pub p_down_up: f64,
    pub regime: RabiRegime,
}

impl RabiSystem {
    pub fn new(gamma_a: f64, gamma_b: f64, delta_detuning: f64, omega_mod: f64, v0: f64) -> Result<Self> {
        let r = Self { gamma_a, gamma_b, delta_detuning, nu_drive: 0.0, omega_mod, v0 };
        r.validate()?;
        Ok(r)
    }

    /// Resonant system (`ω = Δ = 0`) with prescribed `ρ`, `δ` and `λ`.
    pub fn resonant(rho: f64, delta: f64, lambda: f64) -> Result<Self> {
        Self::new(lambda + delta, lambda - delta, 0.0, 0.0, rho / 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.gamma_a, self.gamma_b, self.delta_detuning, self.nu_drive, self.omega_mod, self.v0]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::DomainError("non-finite Rabi parameter".into()));
        }
        if self.gamma_a < 0.0 || self.gamma_b < 0.0 {
            return Err(Error::DomainError(format!(
                "decay rates must be non-negative, got {} and {}",
                self.gamma_a, self.gamma_b
            )));
        }
        if !(self.v0 > 0.0) {
            return Err(Error::DomainError(format!("V0 must be positive, got {}", self.v0)));
        }
        Ok(())
    }

    /// `λ = (γa + γb)/2`
    pub fn lambda_avg(&self) -> f64 {
        0.5 * (self.gamma_a + self.gamma_b)
    }

    /// `δ = (γa − γb)/2`
    pub fn delta_half(&self) -> f64 {
        0.5 * (self.gamma_a - self.gamma_b)
    }

    /// `ρ = 2V₀`
    pub fn rho_drive(&self) -> f64 {
        2.0 * self.v0
    }

    /// `Δ − ω − iδ`
    pub fn z_eff(&self) -> C64 {
        C64::new(self.delta_detuning - self.omega_mod, -self.delta_half())
    }

    /// `Ω_c = √(ρ² + (Δ − ω − iδ)²)`
    pub fn omega_c(&self) -> C64 {
        let z = self.z_eff();
        cmath::sqrt(self.rho_drive() * self.rho_drive() + z * z)
    }

    pub fn at_resonance(&self) -> bool {
        self.delta_detuning == self.omega_mod
    }

    /// `Ω₀ = |ρ² − δ²|^{1/2}`
    pub fn rabi_frequency(&self) -> f64 {
        let (rho, d) = (self.rho_drive(), self.delta_half().abs());
        ((rho - d) * (rho + d)).abs().sqrt()
    }

    /// `1e-9·(ρ + |δ|)`
    pub fn default_tolerance(&self) -> f64 {
        1e-9 * (self.rho_drive() + self.delta_half().abs())
    }
}

pub fn rotating_frame_hamiltonian(r: &RabiSystem) -> EffectiveHamiltonian {
    EffectiveHamiltonian::new(ZERO, [C64::new(r.rho_drive(), 0.0), ZERO, r.z_eff()])
}

/// At resonance: `ρ` against `|δ|`. Off resonance: sign of
/// `Re Ω_c² = ρ² + (Δ − ω)² − δ²`, with a band of width `tol·(ρ + |δ| + |Δ − ω|)`.
pub fn regime(r: &RabiSystem, tol: f64) -> RabiRegime {
    let (rho, d) = (r.rho_drive(), r.delta_half().abs());
    let (gap, band) = if r.at_resonance() {
        (rho - d, tol)
    } else {
        let det = r.delta_detuning - r.omega_mod;
        (rho * rho + det * det - d * d, tol * (rho + d + det.abs()))
    };
    if gap > band {
        RabiRegime::Coherent
    } else if -gap > band {
        RabiRegime::Incoherent
    } else {
        RabiRegime::ExceptionalPoint
    }
}

/// `P↑↑` and `P↓↑` starting from `|u↑⟩`.
pub fn occupation_probabilities(r: &RabiSystem, t: f64) -> TunnelingProbabilities {
    let tag = regime(r, r.default_tolerance());
    let decay = (-r.lambda_avg() * t).exp();
    let (rho, delta) = (r.rho_drive(), r.delta_half());

    let (up, down) = if !r.at_resonance() {
        let c = evolution::propagate_hamiltonian(&rotating_frame_hamiltonian(r), t);
        (c.c1.norm_sqr(), c.c2.norm_sqr())
    } else {
        let w0 = r.rabi_frequency();
        match tag {
            RabiRegime::Coherent => {
                let s = cmath::half_sinc(C64::new(w0, 0.0), t).re;
                let c = (w0 * t / 2.0).cos();
                ((c - delta * s).powi(2), (rho * s).powi(2))
            }
            RabiRegime::Incoherent => {
                // sinh(Ω₀t/2)/Ω₀
                let s = cmath::half_sinc(C64::new(0.0, w0), t).re;
                let c = (w0 * t / 2.0).cosh();
                ((c - delta * s).powi(2), (rho * s).powi(2))
            }
            RabiRegime::ExceptionalPoint => ((1.0 - delta * t / 2.0).powi(2), (delta * t / 2.0).powi(2)),
        }
    };
    TunnelingProbabilities { p_up_up: up * decay, p_down_up: down * decay, regime: tag }
}

/// First time `P↑↑` vanishes at resonance.
///
/// Coherent: `(2/Ω₀) arctan(Ω₀/δ)` (for `δ < 0` the next branch,
/// `(2/Ω₀)(π − arctan(Ω₀/|δ|))`). Incoherent: `(2/Ω₀) artanh(Ω₀/δ)`.
/// Exceptional point: `2/δ`. With `δ ≤ 0` outside the coherent regime `P↑↑`
/// never vanishes and the result is flagged divergent.
pub fn rabi_passage_time(r: &RabiSystem) -> Result<PassageTimeResult> {
    r.validate()?;
    if !r.at_resonance() {
        return Err(Error::DomainError(format!(
            "passage time is defined at resonance only (Delta = {}, omega = {})",
            r.delta_detuning, r.omega_mod
        )));
    }
    let delta = r.delta_half();
    let w0 = r.rabi_frequency();
    let divergent = |regime| PassageTimeResult { tau: f64::INFINITY, regime, omega_arg: 0.0, diverged: true };
    match regime(r, r.default_tolerance()) {
        RabiRegime::Coherent if delta >= 0.0 => brachistochrone::passage_time_coherent(w0, delta),
        RabiRegime::Coherent => Ok(PassageTimeResult {
            tau: 2.0 / w0 * w0.atan2(delta),
            regime: Regime::Coherent,
            omega_arg: 0.0,
            diverged: false,
        }),
        RabiRegime::Incoherent if delta > 0.0 => brachistochrone::passage_time_incoherent(w0, delta),
        RabiRegime::Incoherent => Ok(divergent(Regime::Incoherent)),
        RabiRegime::ExceptionalPoint if delta > 0.0 => Ok(PassageTimeResult {
            tau: brachistochrone::exceptional_point_time(delta, C64::new(std::f64::consts::PI, 0.0))?,
            regime: Regime::ExceptionalPoint,
            omega_arg: 0.0,
            diverged: false,
        }),
        RabiRegime::ExceptionalPoint => Ok(divergent(Regime::ExceptionalPoint)),
    }
}

/// `(P↑↑, P↓↑)` by direct integration of the time-dependent lab-frame
/// equation from `u = (1, 0)`.
pub fn lab_frame_probabilities(r: &RabiSystem, t: f64, tol: f64) -> Result<(f64, f64)> {
    let (lam, del, det, w, v0) = (r.lambda_avg(), r.delta_half(), r.delta_detuning, r.omega_mod, r.v0);
    let d11 = C64::new(det, -lam - del) / 2.0;
    let d22 = C64::new(-det, -lam + del) / 2.0;
    let rhs = |s: f64, y: &[f64; 4]| -> [f64; 4] {
        let u: [C64; 2] = ode::unpack(y);
        let e = (I * (w * s)).exp();
        let hu = [d11 * u[0] + v0 * e.conj() * u[1], v0 * e * u[0] + d22 * u[1]];
        ode::pack(&[-I * hu[0], -I * hu[1]])
    };
    let y = ode::integrate(rhs, 0.0, [1.0, 0.0, 0.0, 0.0], t, Tolerance::uniform(tol))?;
    let u: [C64; 2] = ode::unpack(&y);
    Ok((u[0].norm_sqr(), u[1].norm_sqr()))
}

pub const FIG2_HEADER: [&str; 5] = ["delta", "tau_coherent", "tau_incoherent", "bound_lower", "bound_2_over_delta"];

/// Passage times against `δ` at fixed `Ω₀`: the coherent curve with its
/// bounds `2/√(Ω₀² + δ²)` and `2/δ`, and the incoherent curve where
/// `Ω₀ < δ` (`nan` elsewhere).
pub fn fig2_table(omega0: f64, deltas: &[f64]) -> Result<Table> {
    let mut table = Table::new(&FIG2_HEADER);
    for &d in deltas {
        let coh = brachistochrone::passage_time_coherent(omega0, d)?.tau;
        let inc = if omega0 < d { brachistochrone::passage_time_incoherent(omega0, d)?.tau } else { f64::NAN };
        table.push(vec![
            Field::Float(d),
            Field::Float(coh),
            Field::Float(inc),
            Field::Float(2.0 / omega0.hypot(d)),
            Field::Float(2.0 / d),
        ]);
    }
    Ok(table)
}
