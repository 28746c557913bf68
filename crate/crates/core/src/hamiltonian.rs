//! Effective two-level generators `H = λ₀/2 · 1 + Ω·σ/2`.
//!
//! Matrix form, in the bi-orthonormal basis `{ψᵢ, ψ₀}`:
//!
//! ```text
//!       1 ⎡ λ₀ + Z   X − iY ⎤
//! H  =  ─ ⎢                 ⎥
//!       2 ⎣ X + iY   λ₀ − Z ⎦
//! ```
//!
//! `R = √(X² + Y² + Z²)` (principal root) is the complex eigenvalue gap.
//! `R = 0` is a degeneracy: diabolic when `Ω = 0`, exceptional otherwise.

use std::collections::BTreeMap;

use crate::cmath::{self, I, ONE, ZERO};
use crate::{Error, Result, C64};

pub type Matrix2 = [[C64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveHamiltonian {
    pub lambda0: C64,
    pub omega_x: C64,
    pub omega_y: C64,
    pub omega_z: C64,
}

/// Keys of the flat record used by config files and CSV layers.
pub const RECORD_KEYS: [&str; 8] =
    ["lambda0_re", "lambda0_im", "x_re", "x_im", "y_re", "y_im", "z_re", "z_im"];

impl EffectiveHamiltonian {
    pub fn new(lambda0: C64, omega: [C64; 3]) -> Self {
        Self { lambda0, omega_x: omega[0], omega_y: omega[1], omega_z: omega[2] }
    }

    pub fn omega(&self) -> [C64; 3] {
        [self.omega_x, self.omega_y, self.omega_z]
    }

    /// `R² = X² + Y² + Z²`.
    pub fn omega_squared(&self) -> C64 {
        cmath::dot3(&self.omega(), &self.omega())
    }

    /// `R`, principal square root of [`omega_squared`](Self::omega_squared).
    pub fn r(&self) -> C64 {
        cmath::sqrt(self.omega_squared())
    }

    /// `‖Ω‖∞` over the three complex components.
    pub fn omega_inf_norm(&self) -> f64 {
        self.omega().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Default degeneracy tolerance, `1e-9 · max(1, ‖Ω‖∞)`.
    pub fn default_tolerance(&self) -> f64 {
        1e-9 * self.omega_inf_norm().max(1.0)
    }

    pub fn matrix(&self) -> Matrix2 {
        let (l, x, y, z) = (self.lambda0, self.omega_x, self.omega_y, self.omega_z);
        [[(l + z) / 2.0, (x - I * y) / 2.0], [(x + I * y) / 2.0, (l - z) / 2.0]]
    }

    /// Inverse of [`matrix`](Self::matrix): any 2×2 complex matrix has this form.
    pub fn from_matrix(m: &Matrix2) -> Self {
        build_effective(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    pub fn to_record(&self) -> Vec<(&'static str, f64)> {
        let vals = [
            self.lambda0.re,
            self.lambda0.im,
            self.omega_x.re,
            self.omega_x.im,
            self.omega_y.re,
            self.omega_y.im,
            self.omega_z.re,
            self.omega_z.im,
        ];
        RECORD_KEYS.iter().copied().zip(vals).collect()
    }

    /// Reads the flat record; absent keys default to zero.
    pub fn from_record(record: &BTreeMap<String, f64>) -> Self {
        let get = |k: &str| record.get(k).copied().unwrap_or(0.0);
        Self {
            lambda0: C64::new(get("lambda0_re"), get("lambda0_im")),
            omega_x: C64::new(get("x_re"), get("x_im")),
            omega_y: C64::new(get("y_re"), get("y_im")),
            omega_z: C64::new(get("z_re"), get("z_im")),
        }
    }

    pub fn to_spherical(&self) -> Result<SphericalParams> {
        to_spherical(self, self.default_tolerance())
    }
}

/// Builds `H_eff` from the four matrix elements
/// `h_ii = ⟨ψ̃ᵢ|H|ψᵢ⟩`, `h_i0 = ⟨ψ̃ᵢ|H|ψ₀⟩`, `h_0i = ⟨ψ̃₀|H|ψᵢ⟩`, `h_00 = ⟨ψ̃₀|H|ψ₀⟩`.
pub fn build_effective(h_ii: C64, h_i0: C64, h_0i: C64, h_00: C64) -> EffectiveHamiltonian {
    EffectiveHamiltonian {
        lambda0: h_ii + h_00,
        omega_x: h_i0 + h_0i,
        omega_y: I * (h_i0 - h_0i),
        omega_z: h_ii - h_00,
    }
}

/// Complex spherical coordinates of `Ω`:
/// `X = ω sinθ cosφ`, `Y = ω sinθ sinφ`, `Z = ω cosθ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalParams {
    pub theta: C64,
    pub phi: C64,
    /// `ω = R`, the complex gap.
    pub omega: C64,
    pub lambda0: C64,
    /// Set when `R² − Z² = 0`; `φ` is then fixed to 0 by convention.
    pub polar_axis: bool,
}

impl SphericalParams {
    pub fn new(theta: C64, phi: C64, omega: C64, lambda0: C64) -> Self {
        Self { theta, phi, omega, lambda0, polar_axis: false }
    }

    pub fn cos_half_theta(&self) -> C64 {
        (self.theta / 2.0).cos()
    }

    pub fn sin_half_theta(&self) -> C64 {
        (self.theta / 2.0).sin()
    }

    pub fn to_hamiltonian(&self) -> EffectiveHamiltonian {
        from_spherical(self)
    }
}

/// Chart `H → (θ, φ, ω)`.
///
/// `cos(θ/2) = √((R+Z)/2R)`, `sin(θ/2) = √((R−Z)/2R)` with principal roots;
/// `θ = −2i·ln(cos(θ/2) + i·sin(θ/2))`. `e^{iφ}` is taken as
/// `(X + iY) / (R sinθ)`, which equals `(X + iY)/√(R² − Z²)` on the branch
/// where `R sinθ = √(R² − Z²)` and makes the round trip exact on every branch.
pub fn to_spherical(h: &EffectiveHamiltonian, tol: f64) -> Result<SphericalParams> {
    let r = h.r();
    if r.norm() <= tol {
        return Err(Error::DegenerateHamiltonian { r_abs: r.norm() });
    }
    let z = h.omega_z;
    let q = h.omega_x + I * h.omega_y;
    let xy2 = h.omega_x * h.omega_x + h.omega_y * h.omega_y; // R² − Z²

    // R ± Z with the small one recovered from (R+Z)(R−Z) = X² + Y².
    let (mut r_plus, mut r_minus) = (r + z, r - z);
    if r_plus.norm() < r_minus.norm() {
        r_plus = xy2 / r_minus;
    } else if r_minus.norm() < r_plus.norm() {
        r_minus = xy2 / r_plus;
    }
    let c = cmath::sqrt(r_plus / (2.0 * r));
    let s = cmath::sqrt(r_minus / (2.0 * r));
    let theta = -2.0 * I * cmath::ln(c + I * s);

    let polar_axis = xy2.norm() <= tol * h.omega_inf_norm().max(1.0);
    let phi = if polar_axis {
        ZERO
    } else {
        let w = 2.0 * c * s * r;
        -I * cmath::ln(q / w)
    };
    Ok(SphericalParams { theta, phi, omega: r, lambda0: h.lambda0, polar_axis })
}

pub fn from_spherical(p: &SphericalParams) -> EffectiveHamiltonian {
    let st = p.theta.sin();
    EffectiveHamiltonian {
        lambda0: p.lambda0,
        omega_x: p.omega * st * p.phi.cos(),
        omega_y: p.omega * st * p.phi.sin(),
        omega_z: p.omega * p.theta.cos(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    None,
    /// `Ω = 0`: eigenvalues coincide, two independent eigenvectors remain.
    Diabolic,
    /// `Ω·Ω = 0` with `Ω ≠ 0`: eigenvectors merge.
    Exceptional,
}

/// Degeneracy test on `R² = Ω·Ω`.
///
/// The criterion is `|R²| ≤ tol·max(1, ‖Ω‖∞)`, i.e. `tol` bounds `|R|²` in
/// units of `‖Ω‖`. A bound on `|R|` itself would sit below `√ε·‖Ω‖`, the
/// rounding floor of `|R|` for points on the exceptional locus.
pub fn classify_degeneracy(h: &EffectiveHamiltonian, tol: f64) -> Degeneracy {
    if h.omega_squared().norm() > tol * h.omega_inf_norm().max(1.0) {
        return Degeneracy::None;
    }
    let split = split_form(h);
    if norm3(&split.r_vec) <= tol && norm3(&split.delta_vec) <= tol {
        Degeneracy::Diabolic
    } else {
        Degeneracy::Exceptional
    }
}

/// `Ω = r − iδ` with real `r`, `δ`, plus cylindrical coordinates of `r`
/// about the `δ` axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitForm {
    pub r_vec: [f64; 3],
    pub delta_vec: [f64; 3],
    /// Angle between `r` and `δ`; 0 if either vanishes.
    pub gamma_angle: f64,
    pub rho: f64,
    pub z: f64,
    pub phi_c: f64,
    /// Cylinder axis: `δ̂`, or `ẑ` when `δ = 0`.
    pub axis: [f64; 3],
}

impl SplitForm {
    pub fn delta(&self) -> f64 {
        norm3(&self.delta_vec)
    }

    pub fn omega(&self) -> [C64; 3] {
        std::array::from_fn(|i| C64::new(self.r_vec[i], -self.delta_vec[i]))
    }

    /// `Ω² = ρ² + z² − δ² − 2izδ`.
    pub fn omega_squared_cylindrical(&self) -> C64 {
        let d = self.delta();
        C64::new(self.rho * self.rho + self.z * self.z - d * d, -2.0 * self.z * d)
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn split_form(h: &EffectiveHamiltonian) -> SplitForm {
    let om = h.omega();
    let r_vec = [om[0].re, om[1].re, om[2].re];
    let delta_vec = [-om[0].im, -om[1].im, -om[2].im];
    let (nr, nd) = (norm3(&r_vec), norm3(&delta_vec));

    let gamma_angle = if nr == 0.0 || nd == 0.0 {
        0.0
    } else {
        // atan2 form stays accurate near 0 and π
        norm3(&cross(&r_vec, &delta_vec)).atan2(dot(&r_vec, &delta_vec))
    };

    let axis = if nd == 0.0 {
        [0.0, 0.0, 1.0]
    } else {
        [delta_vec[0] / nd, delta_vec[1] / nd, delta_vec[2] / nd]
    };
    // e1 ⟂ axis; reduces to (x̂, ŷ) when the axis is ẑ
    let helper = if axis[0].abs() > 0.9 { [0.0, 1.0, 0.0] } else { [1.0, 0.0, 0.0] };
    let hp = dot(&helper, &axis);
    let e1 = {
        let v = [helper[0] - hp * axis[0], helper[1] - hp * axis[1], helper[2] - hp * axis[2]];
        let n = norm3(&v);
        [v[0] / n, v[1] / n, v[2] / n]
    };
    let e2 = cross(&axis, &e1);

    let z = dot(&r_vec, &axis);
    let (a, b) = (dot(&r_vec, &e1), dot(&r_vec, &e2));
    SplitForm {
        r_vec,
        delta_vec,
        gamma_angle,
        rho: a.hypot(b),
        z,
        phi_c: b.atan2(a),
        axis,
    }
}

/// Right (column) and left (row) eigenvectors of `H_eff`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenSystem {
    pub lambda_plus: C64,
    pub lambda_minus: C64,
    pub right_plus: [C64; 2],
    pub right_minus: [C64; 2],
    pub left_plus: [C64; 2],
    pub left_minus: [C64; 2],
    pub degeneracy: Degeneracy,
    /// At an exceptional point: `κ` with `u₊ = e^{iκ} u₋`, when the two
    /// numerically coalescing eigenvectors can be formed (`R ≠ 0`).
    pub ep_phase: Option<C64>,
    /// `|R| < 1e3·tol`: `κ` is ill-conditioned.
    pub ep_phase_ill_conditioned: bool,
}

impl EigenSystem {
    /// `Σₖ |uₖ⟩⟨ũₖ| / ⟨ũₖ|uₖ⟩`; the identity for a non-degenerate system.
    pub fn completeness(&self) -> Matrix2 {
        let mut out = [[ZERO; 2]; 2];
        for (u, ut) in [(self.right_plus, self.left_plus), (self.right_minus, self.left_minus)] {
            let norm = ut[0] * u[0] + ut[1] * u[1];
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] += u[i] * ut[j] / norm;
                }
            }
        }
        out
    }
}

/// Eigen-decomposition of `H_eff`. Degenerate cases are tagged, never errors.
pub fn eigensystem(h: &EffectiveHamiltonian, tol: f64) -> EigenSystem {
    let r = h.r();
    let degeneracy = classify_degeneracy(h, tol);
    let lambda_plus = (h.lambda0 + r) / 2.0;
    let lambda_minus = (h.lambda0 - r) / 2.0;
    let base = EigenSystem {
        lambda_plus,
        lambda_minus,
        right_plus: [ONE, ZERO],
        right_minus: [ZERO, ONE],
        left_plus: [ONE, ZERO],
        left_minus: [ZERO, ONE],
        degeneracy,
        ep_phase: None,
        ep_phase_ill_conditioned: false,
    };

    match degeneracy {
        Degeneracy::Diabolic => base,
        Degeneracy::Exceptional => {
            let (right, left) = kernel_pair(h, ZERO);
            let ep_phase = if r != ZERO {
                let (up, _) = kernel_pair(h, r / 2.0);
                let (um, _) = kernel_pair(h, -r / 2.0);
                let overlap = um[0].conj() * up[0] + um[1].conj() * up[1];
                let norm = um[0].norm_sqr() + um[1].norm_sqr();
                Some(-I * cmath::ln(overlap / norm))
            } else {
                None
            };
            EigenSystem {
                right_plus: right,
                right_minus: right,
                left_plus: left,
                left_minus: left,
                ep_phase,
                ep_phase_ill_conditioned: r.norm() < 1e3 * tol,
                ..base
            }
        }
        Degeneracy::None => {
            let diagonal = h.omega_x.norm() <= tol && h.omega_y.norm() <= tol;
            let chart = to_spherical(h, tol).ok().filter(|p| !p.polar_axis || diagonal);
            let Some(p) = chart else {
                // triangular: the half-angle chart has no φ here
                let (rp, lp) = normalized_pair(h, r / 2.0);
                let (rm, lm) = normalized_pair(h, -r / 2.0);
                return EigenSystem {
                    right_plus: rp,
                    right_minus: rm,
                    left_plus: lp,
                    left_minus: lm,
                    ..base
                };
            };
            let c = p.cos_half_theta();
            let s = p.sin_half_theta();
            // e^{±iφ} as in `to_spherical`; any phase works when X = Y = 0
            let (e_plus, e_minus) = if diagonal {
                (ONE, ONE)
            } else {
                let w = 2.0 * c * s * r;
                ((h.omega_x + I * h.omega_y) / w, (h.omega_x - I * h.omega_y) / w)
            };
            EigenSystem {
                right_plus: [c, e_plus * s],
                right_minus: [-e_minus * s, c],
                left_plus: [c, e_minus * s],
                left_minus: [-e_plus * s, c],
                ..base
            }
        }
    }
}

/// Right and left null vectors of `Ω·σ/2 − μ`, each of unit Euclidean norm.
///
/// For `A = ½[[Z, P], [Q, −Z]]` (`P = X − iY`, `Q = X + iY`) the right kernel
/// is spanned by `(P, 2μ − Z)` or `(2μ + Z, Q)`, the left by `(Q, 2μ − Z)` or
/// `(2μ + Z, P)`; the better-conditioned candidate is used.
fn kernel_pair(h: &EffectiveHamiltonian, mu: C64) -> ([C64; 2], [C64; 2]) {
    let z = h.omega_z;
    let p = h.omega_x - I * h.omega_y;
    let q = h.omega_x + I * h.omega_y;
    let pick = |a: [C64; 2], b: [C64; 2]| {
        let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
        let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
        if na >= nb {
            [a[0] / na, a[1] / na]
        } else {
            [b[0] / nb, b[1] / nb]
        }
    };
    let two_mu = 2.0 * mu;
    let right = pick([p, two_mu - z], [two_mu + z, q]);
    let left = pick([q, two_mu - z], [two_mu + z, p]);
    (right, left)
}

/// Kernel pair rescaled to `⟨ũ|u⟩ = 1`, the scale split evenly.
fn normalized_pair(h: &EffectiveHamiltonian, mu: C64) -> ([C64; 2], [C64; 2]) {
    let (u, ut) = kernel_pair(h, mu);
    let k = cmath::sqrt(ut[0] * u[0] + ut[1] * u[1]);
    ([u[0] / k, u[1] / k], [ut[0] / k, ut[1] / k])
}
