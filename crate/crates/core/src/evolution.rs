//! Joint evolution of a right state `u` and its adjoint row vector `ũ`.
//!
//! `i du/dt = H u` and `−i dũ/dt = ũ H`, so `⟨ũ|u⟩ = ũ·u` is conserved.
//! Closed forms are written through the components of `Ω`, which keeps them
//! finite and smooth as `R → 0`.

use crate::brachistochrone::{BoundaryStates, DEGENERATE_TARGET_TOL};
use crate::cmath::{self, cross3, dot3, I, ONE, ZERO};
use crate::csv::{push_complex, Field, Table};
use crate::hamiltonian::{EffectiveHamiltonian, Matrix2, SphericalParams};
use crate::ode::{self, Tolerance};
use crate::{Error, Result, C64};

/// Precondition slack on `⟨ũ|u⟩ = 1` and `n·n = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdjointStatePair {
    pub u: [C64; 2],
    pub u_tilde: [C64; 2],
}

impl AdjointStatePair {
    pub fn new(u: [C64; 2], u_tilde: [C64; 2]) -> Self {
        Self { u, u_tilde }
    }

    /// `u = ũ = (1, 0)`, i.e. the state `|ψᵢ⟩`.
    pub fn initial() -> Self {
        Self { u: [ONE, ZERO], u_tilde: [ONE, ZERO] }
    }

    pub fn pseudo_norm(&self) -> C64 {
        self.u_tilde[0] * self.u[0] + self.u_tilde[1] * self.u[1]
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = self.pseudo_norm();
        if (n - ONE).norm() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { re: n.re, im: n.im });
        }
        Ok(())
    }

    fn to_real(self) -> [f64; 8] {
        ode::pack::<4, 8>(&[self.u[0], self.u[1], self.u_tilde[0], self.u_tilde[1]])
    }

    fn from_real(y: &[f64; 8]) -> Self {
        let z: [C64; 4] = ode::unpack(y);
        Self { u: [z[0], z[1]], u_tilde: [z[2], z[3]] }
    }
}

/// Coefficients of `|ψ(t)⟩` and `⟨ψ̃(t)|` started from `|ψᵢ⟩`, without the
/// trace phase, which is kept in `phase_factor` / `phase_factor_tilde`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateCoefficients {
    pub c1: C64,
    pub c2: C64,
    pub c1_tilde: C64,
    pub c2_tilde: C64,
    /// `e^{−iλ₀t/2}`
    pub phase_factor: C64,
    /// `e^{+iλ₀t/2}`
    pub phase_factor_tilde: C64,
}

impl StateCoefficients {
    /// `c₁c̃₁ + c₂c̃₂`, identically 1.
    pub fn pseudo_norm(&self) -> C64 {
        self.c1 * self.c1_tilde + self.c2 * self.c2_tilde
    }

    /// Multiplies the trace phases back in.
    pub fn to_pair(&self) -> AdjointStatePair {
        AdjointStatePair {
            u: [self.phase_factor * self.c1, self.phase_factor * self.c2],
            u_tilde: [
                self.phase_factor_tilde * self.c1_tilde,
                self.phase_factor_tilde * self.c2_tilde,
            ],
        }
    }
}

/// Complex Bloch vector `n = ⟨ũ|σ|u⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    pub n1: C64,
    pub n2: C64,
    pub n3: C64,
}

impl BlochVector {
    pub fn new(n: [C64; 3]) -> Self {
        Self { n1: n[0], n2: n[1], n3: n[2] }
    }

    pub fn as_array(&self) -> [C64; 3] {
        [self.n1, self.n2, self.n3]
    }

    /// `n·n` without conjugation.
    pub fn dot(&self) -> C64 {
        let n = self.as_array();
        dot3(&n, &n)
    }

    /// Components from the pair, with no normalization check.
    pub fn from_pair_unchecked(s: &AdjointStatePair) -> Self {
        let [u1, u2] = s.u;
        let [v1, v2] = s.u_tilde;
        Self { n1: u1 * v2 + u2 * v1, n2: I * (u1 * v2 - u2 * v1), n3: u1 * v1 - u2 * v2 }
    }
}

fn closed_coefficients(lambda0: C64, r: C64, z: C64, q: C64, p: C64, t: f64) -> StateCoefficients {
    let s = cmath::half_sinc(r, t);
    let c = (r * (t / 2.0)).cos();
    StateCoefficients {
        c1: c - I * z * s,
        c2: -I * q * s,
        c1_tilde: c + I * z * s,
        c2_tilde: I * p * s,
        phase_factor: (-I * lambda0 * (t / 2.0)).exp(),
        phase_factor_tilde: (I * lambda0 * (t / 2.0)).exp(),
    }
}

/// Closed-form coefficients from spherical parameters:
/// `C₁ = cos(Ωt/2) − i cosθ sin(Ωt/2)`, `C₂ = −i e^{iφ} sinθ sin(Ωt/2)` and
/// their adjoints.
pub fn propagate_closed(p: &SphericalParams, t: f64) -> StateCoefficients {
    let (st, ct) = (p.theta.sin(), p.theta.cos());
    let w = p.omega;
    closed_coefficients(
        p.lambda0,
        w,
        w * ct,
        w * st * (I * p.phi).exp(),
        w * st * (-I * p.phi).exp(),
        t,
    )
}

/// Same closed form written directly in terms of `(λ₀, X, Y, Z)`; defined
/// at every `H`, degenerate ones included.
pub fn propagate_hamiltonian(h: &EffectiveHamiltonian, t: f64) -> StateCoefficients {
    closed_coefficients(
        h.lambda0,
        h.r(),
        h.omega_z,
        h.omega_x + I * h.omega_y,
        h.omega_x - I * h.omega_y,
        t,
    )
}

/// `U(t) = e^{−iHt} = e^{−iλ₀t/2} [cos(Rt/2)·1 − i sin(Rt/2)/R · Ω·σ]`.
pub fn propagator(h: &EffectiveHamiltonian, t: f64) -> Matrix2 {
    let s = cmath::half_sinc(h.r(), t);
    let c = (h.r() * (t / 2.0)).cos();
    let ph = (-I * h.lambda0 * (t / 2.0)).exp();
    let (x, y, z) = (h.omega_x, h.omega_y, h.omega_z);
    [
        [ph * (c - I * s * z), ph * (-I * s * (x - I * y))],
        [ph * (-I * s * (x + I * y)), ph * (c + I * s * z)],
    ]
}

/// Closed-form evolution of an arbitrary pair: `u(t) = U(t)u`, `ũ(t) = ũU(−t)`.
pub fn propagate_pair_closed(h: &EffectiveHamiltonian, s0: &AdjointStatePair, t: f64) -> AdjointStatePair {
    let fwd = propagator(h, t);
    let back = propagator(h, -t);
    let (u, v) = (s0.u, s0.u_tilde);
    AdjointStatePair {
        u: [fwd[0][0] * u[0] + fwd[0][1] * u[1], fwd[1][0] * u[0] + fwd[1][1] * u[1]],
        u_tilde: [
            v[0] * back[0][0] + v[1] * back[1][0],
            v[0] * back[0][1] + v[1] * back[1][1],
        ],
    }
}

fn pair_rhs(m: &Matrix2, y: &[f64; 8]) -> [f64; 8] {
    let s = AdjointStatePair::from_real(y);
    let (u, v) = (s.u, s.u_tilde);
    let hu = [m[0][0] * u[0] + m[0][1] * u[1], m[1][0] * u[0] + m[1][1] * u[1]];
    let vh = [v[0] * m[0][0] + v[1] * m[1][0], v[0] * m[0][1] + v[1] * m[1][1]];
    AdjointStatePair { u: [-I * hu[0], -I * hu[1]], u_tilde: [I * vh[0], I * vh[1]] }.to_real()
}

/// Integrates the pair numerically from 0 to `t` (Dormand–Prince 5(4),
/// relative and absolute tolerance `tol`).
pub fn propagate_numeric(
    h: &EffectiveHamiltonian,
    s0: &AdjointStatePair,
    t: f64,
    tol: f64,
) -> Result<AdjointStatePair> {
    if !(tol > 0.0) {
        return Err(Error::DomainError(format!("tolerance must be positive, got {tol}")));
    }
    let m = h.matrix();
    let y = ode::integrate(|_, y| pair_rhs(&m, y), 0.0, s0.to_real(), t, Tolerance::uniform(tol))?;
    Ok(AdjointStatePair::from_real(&y))
}

/// `n₁ = u₁ũ₂ + u₂ũ₁`, `n₂ = i(u₁ũ₂ − u₂ũ₁)`, `n₃ = u₁ũ₁ − u₂ũ₂`.
pub fn bloch_vector(s: &AdjointStatePair) -> Result<BlochVector> {
    s.check_normalized()?;
    Ok(BlochVector::from_pair_unchecked(s))
}

/// Integrates `dn/dt = Ω × n` from 0 to `t`.
pub fn bloch_trajectory_numeric(
    h: &EffectiveHamiltonian,
    n0: &BlochVector,
    t: f64,
    tol: f64,
) -> Result<BlochVector> {
    let nn = n0.dot();
    if (nn - ONE).norm() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { re: nn.re, im: nn.im });
    }
    if !(tol > 0.0) {
        return Err(Error::DomainError(format!("tolerance must be positive, got {tol}")));
    }
    let om = h.omega();
    let rhs = |_: f64, y: &[f64; 6]| -> [f64; 6] {
        let n: [C64; 3] = ode::unpack(y);
        ode::pack(&cross3(&om, &n))
    };
    let y = ode::integrate(rhs, 0.0, ode::pack(&n0.as_array()), t, Tolerance::uniform(tol))?;
    Ok(BlochVector::new(ode::unpack(&y)))
}

/// Coefficients of `|ψ(t)⟩` along `|ψᵢ⟩` and `|ψ_f⟩`:
/// `(C₁ − e^{−iβ}cot(α/2)C₂)e^{−iλ₀t/2}` and `e^{−iβ}C₂ e^{−iλ₀t/2} / sin(α/2)`.
pub fn state_in_if_basis(c: &StateCoefficients, b: &BoundaryStates) -> Result<(C64, C64)> {
    let sa = (b.alpha / 2.0).sin();
    if sa.norm() <= DEGENERATE_TARGET_TOL {
        return Err(Error::DegenerateTarget { sin_half_alpha: sa.norm() });
    }
    let ca = (b.alpha / 2.0).cos();
    let eb = (-I * b.beta).exp();
    let along_i = (c.c1 - eb * ca / sa * c.c2) * c.phase_factor;
    let along_f = eb / sa * c.c2 * c.phase_factor;
    Ok((along_i, along_f))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub pair: AdjointStatePair,
    pub bloch: BlochVector,
}

/// Closed-form trajectory of `s0` at the given times.
pub fn sample_trajectory(
    h: &EffectiveHamiltonian,
    s0: &AdjointStatePair,
    times: &[f64],
) -> Vec<TrajectoryPoint> {
    times
        .iter()
        .map(|&t| {
            let pair = propagate_pair_closed(h, s0, t);
            TrajectoryPoint { t, pair, bloch: BlochVector::from_pair_unchecked(&pair) }
        })
        .collect()
}

pub const TRAJECTORY_HEADER: [&str; 15] = [
    "t", "u1_re", "u1_im", "u2_re", "u2_im", "ut1_re", "ut1_im", "ut2_re", "ut2_im", "n1_re",
    "n1_im", "n2_re", "n2_im", "n3_re", "n3_im",
];

pub fn trajectory_table(points: &[TrajectoryPoint]) -> Table {
    let mut table = Table::new(&TRAJECTORY_HEADER);
    for p in points {
        let mut row = vec![Field::Float(p.t)];
        for z in p.pair.u.iter().chain(&p.pair.u_tilde).chain(&p.bloch.as_array()) {
            push_complex(&mut row, *z);
        }
        table.push(row);
    }
    table
}
