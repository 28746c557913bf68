//! Complex Fubini–Study geometry of adjoint state pairs.
//!
//! `ds²_FS = ⟨dψ̃|(1 − P)|dψ⟩` with `P = |ψ⟩⟨ψ̃|`, and `ds² = dn·dn = 4 ds²_FS`.
//! Along a flow generated by `H` this is `4 ΔE² dt²`. The metric is complex
//! and not positive; magnitudes are taken only where lengths are defined
//! (`|ΔE|`).

use crate::brachistochrone::{self, Sign};
use crate::cmath::{self, ONE, I};
use crate::evolution::{self, AdjointStatePair, BlochVector};
use crate::hamiltonian::EffectiveHamiltonian;
use crate::{Error, Result, C64};

use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSample {
    pub ds2: C64,
    pub ds2_fs: C64,
    /// `ΔE²` of the generating flow, when the differential came from one.
    pub energy_variance_sq: Option<C64>,
}

/// First-order change `(du, dũ)` of a pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairDifferential {
    pub du: [C64; 2],
    pub du_tilde: [C64; 2],
}

impl PairDifferential {
    pub fn scale(&self, k: C64) -> Self {
        Self {
            du: [self.du[0] * k, self.du[1] * k],
            du_tilde: [self.du_tilde[0] * k, self.du_tilde[1] * k],
        }
    }
}

/// Complex chart `n = (sinζ cosν, sinζ sinν, cosζ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPoint {
    pub zeta: C64,
    pub nu: C64,
}

impl ChartPoint {
    pub fn new(zeta: C64, nu: C64) -> Self {
        Self { zeta, nu }
    }

    /// Point of the one-sheeted hyperboloid: `ζ = π/2 + iρ`, real `ν`.
    pub fn hyperbolic(rho_h: f64, nu_h: f64) -> Self {
        Self { zeta: C64::new(PI / 2.0, rho_h), nu: C64::new(nu_h, 0.0) }
    }

    /// `(ρ, ν)` when the point lies on the hyperboloid.
    pub fn hyperbolic_coords(&self) -> Option<(f64, f64)> {
        (self.zeta.re == PI / 2.0 && self.nu.im == 0.0).then_some((self.zeta.im, self.nu.re))
    }

    pub fn to_bloch(&self) -> BlochVector {
        let sz = self.zeta.sin();
        BlochVector::new([sz * self.nu.cos(), sz * self.nu.sin(), self.zeta.cos()])
    }
}

/// PT-symmetric family: `θ = π/2 + iη` with real `λ₀`, `φ` and gap `Ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PTParams {
    pub eta: f64,
    pub omega_gap: f64,
    /// `ω = Ω cosh η`
    pub omega_variance: f64,
    /// `λ₀ = r cosγ`, `δ = r sinγ`
    pub r_mag: f64,
    pub gamma_pt: f64,
    /// `arctan(δ/Ω) = arctan(sinh η)`
    pub kappa: f64,
}

impl PTParams {
    pub fn new(eta: f64, omega_gap: f64, lambda0: f64) -> Self {
        let delta = omega_gap * eta.sinh();
        Self {
            eta,
            omega_gap,
            omega_variance: omega_gap * eta.cosh(),
            r_mag: lambda0.hypot(delta),
            gamma_pt: delta.atan2(lambda0),
            kappa: eta.sinh().atan(),
        }
    }

    pub fn delta(&self) -> f64 {
        self.omega_gap * self.eta.sinh()
    }

    pub fn lambda0(&self) -> f64 {
        self.r_mag * self.gamma_pt.cos()
    }

    pub fn theta(&self) -> C64 {
        C64::new(PI / 2.0, self.eta)
    }

    /// `½[[r e^{−iγ}, ω e^{−iφ}], [ω e^{iφ}, r e^{iγ}]]`.
    pub fn hamiltonian(&self, phi: f64) -> EffectiveHamiltonian {
        EffectiveHamiltonian::new(
            C64::new(self.lambda0(), 0.0),
            [
                C64::new(self.omega_variance * phi.cos(), 0.0),
                C64::new(self.omega_variance * phi.sin(), 0.0),
                C64::new(0.0, -self.delta()),
            ],
        )
    }
}

fn apply(m: &[[C64; 2]; 2], u: &[C64; 2]) -> [C64; 2] {
    [m[0][0] * u[0] + m[0][1] * u[1], m[1][0] * u[0] + m[1][1] * u[1]]
}

fn row(v: &[C64; 2], u: &[C64; 2]) -> C64 {
    v[0] * u[0] + v[1] * u[1]
}

/// `ΔE² = ⟨ψ̃|H²|ψ⟩ − ⟨ψ̃|H|ψ⟩²`.
pub fn energy_variance(h: &EffectiveHamiltonian, s: &AdjointStatePair) -> Result<C64> {
    s.check_normalized()?;
    let m = h.matrix();
    let hu = apply(&m, &s.u);
    let h2u = apply(&m, &hu);
    let e = row(&s.u_tilde, &hu);
    Ok(row(&s.u_tilde, &h2u) - e * e)
}

/// `ds²_FS = dũ·du − (dũ·u)(ũ·du)`, `ds² = 4 ds²_FS`.
pub fn fs_line_element(s: &AdjointStatePair, d: &PairDifferential) -> Result<MetricSample> {
    s.check_normalized()?;
    let ds2_fs = row(&d.du_tilde, &d.du) - row(&d.du_tilde, &s.u) * row(&s.u_tilde, &d.du);
    Ok(MetricSample { ds2: 4.0 * ds2_fs, ds2_fs, energy_variance_sq: None })
}

/// Exact tangent of the flow over `dt`: `du = −iHu dt`, `dũ = iũH dt`.
pub fn flow_differential(h: &EffectiveHamiltonian, s: &AdjointStatePair, dt: f64) -> PairDifferential {
    let m = h.matrix();
    let hu = apply(&m, &s.u);
    let v = s.u_tilde;
    let vh = [v[0] * m[0][0] + v[1] * m[1][0], v[0] * m[0][1] + v[1] * m[1][1]];
    let k = C64::new(dt, 0.0);
    PairDifferential { du: [-I * hu[0] * k, -I * hu[1] * k], du_tilde: [I * vh[0] * k, I * vh[1] * k] }
}

/// Line element of the flow of `h` through `s`, with `ΔE²` attached.
pub fn flow_line_element(h: &EffectiveHamiltonian, s: &AdjointStatePair, dt: f64) -> Result<MetricSample> {
    let mut sample = fs_line_element(s, &flow_differential(h, s, dt))?;
    sample.energy_variance_sq = Some(energy_variance(h, s)?);
    Ok(sample)
}

fn central_difference<const N: usize>(f: &impl Fn(f64) -> [C64; N], t: f64, h: f64) -> [C64; N] {
    let (a, b) = (f(t + h), f(t - h));
    std::array::from_fn(|i| (a[i] - b[i]) / (2.0 * h))
}

/// `d/dt` by central differences with step `1e-6·timescale` and one
/// Richardson extrapolation.
pub fn richardson_derivative<const N: usize>(f: impl Fn(f64) -> [C64; N], t: f64, timescale: f64) -> [C64; N] {
    let h = 1e-6 * timescale;
    let coarse = central_difference(&f, t, h);
    let fine = central_difference(&f, t, h / 2.0);
    std::array::from_fn(|i| (4.0 * fine[i] - coarse[i]) / 3.0)
}

/// Differential per unit time of a trajectory `t ↦ (u(t), ũ(t))`.
pub fn trajectory_differential(
    path: impl Fn(f64) -> AdjointStatePair,
    t: f64,
    timescale: f64,
) -> PairDifferential {
    let d = richardson_derivative(
        |t| {
            let s = path(t);
            [s.u[0], s.u[1], s.u_tilde[0], s.u_tilde[1]]
        },
        t,
        timescale,
    );
    PairDifferential { du: [d[0], d[1]], du_tilde: [d[2], d[3]] }
}

/// `dn/dt` of the Bloch embedding along a trajectory.
pub fn bloch_derivative(path: impl Fn(f64) -> AdjointStatePair, t: f64, timescale: f64) -> [C64; 3] {
    richardson_derivative(|t| BlochVector::from_pair_unchecked(&path(t)).as_array(), t, timescale)
}

/// `ds² = dζ² + sin²ζ dν²`.
pub fn chart_metric(p: &ChartPoint, d_zeta: C64, d_nu: C64) -> C64 {
    let sz = p.zeta.sin();
    d_zeta * d_zeta + sz * sz * d_nu * d_nu
}

/// `ds² = cosh²ρ dν² − dρ²`, the chart metric at `ζ = π/2 + iρ`.
pub fn hyperboloid_metric(rho: f64, d_nu: f64, d_rho: f64) -> f64 {
    let c = rho.cosh();
    c * c * d_nu * d_nu - d_rho * d_rho
}

/// Closed-form flow of `h` from `start` over `[0, duration]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Trajectory {
    pub h: EffectiveHamiltonian,
    pub start: AdjointStatePair,
    pub duration: f64,
}

impl Trajectory {
    pub fn new(h: EffectiveHamiltonian, start: AdjointStatePair, duration: f64) -> Self {
        Self { h, start, duration }
    }

    pub fn at(&self, t: f64) -> AdjointStatePair {
        evolution::propagate_pair_closed(&self.h, &self.start, t)
    }

    /// `n + 1` equally spaced samples including both ends.
    pub fn sample(&self, n: usize) -> Vec<(f64, AdjointStatePair)> {
        (0..=n)
            .map(|k| {
                let t = self.duration * k as f64 / n as f64;
                (t, self.at(t))
            })
            .collect()
    }
}

/// Composite Simpson rule on `n` (even) uniform intervals.
fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * k as f64);
    }
    sum * h / 3.0
}

/// `s = 2∫|ΔE(t)| dt` by composite Simpson, doubling the sample count until
/// the relative change drops below `1e-8`.
///
/// `|ΔE|` is a square root, so roundoff in `ΔE² ≈ 0` shows up at the
/// `√ε·‖H‖` level; changes below that floor also count as converged.
pub fn path_length(traj: &Trajectory) -> Result<f64> {
    let f = |t: f64| {
        let s = traj.at(t);
        energy_variance(&traj.h, &s).map(|v| 2.0 * cmath::sqrt(v).norm()).unwrap_or(f64::NAN)
    };
    if traj.duration == 0.0 {
        return Ok(0.0);
    }
    energy_variance(&traj.h, &traj.start)?;
    let floor = 1e-7 * traj.duration * traj.h.omega_inf_norm().max(traj.h.lambda0.norm());
    let mut n = 16;
    let mut prev = simpson(&f, 0.0, traj.duration, n);
    while n < 1 << 20 {
        n *= 2;
        let next = simpson(&f, 0.0, traj.duration, n);
        if !next.is_finite() {
            return Err(Error::NotNormalized { re: f64::NAN, im: f64::NAN });
        }
        if (next - prev).abs() <= (1e-8 * next.abs()).max(floor) {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

/// `L = |2 sinθ · arctan(i sin²(α/2) / (cos(α/2)√(cos²θ − sin²(α/2)) − cosθ))|`.
pub fn brachistochrone_length(alpha: C64, theta: C64) -> Result<f64> {
    let res = brachistochrone::evolution_time_with_sign(alpha, theta, 1.0, Sign::Upper)?;
    if res.diverged {
        return Err(Error::Diverged);
    }
    // τ·|Ω| = 2|arctan(·)|
    Ok(theta.sin().norm() * res.tau)
}

/// `L_p = (π − 2κ)/cos κ` on `[0, π/2)`, written as `2ε/sin ε` with
/// `ε = π/2 − κ` and expanded in series for small `ε`.
pub fn spin_flip_length(kappa: f64) -> Result<f64> {
    if !(0.0..PI / 2.0).contains(&kappa) {
        return Err(Error::DomainError(format!("kappa must lie in [0, pi/2), got {kappa}")));
    }
    let eps = PI / 2.0 - kappa;
    if eps < cmath::SERIES_THRESHOLD {
        let e2 = eps * eps;
        return Ok(2.0 * (1.0 + e2 / 6.0 + 7.0 * e2 * e2 / 360.0));
    }
    Ok(2.0 * eps / eps.sin())
}

/// `(v, v_g) = (|Ω sinθ|, |Ω|)`.
pub fn evolution_speed(theta: C64, omega: C64) -> (f64, f64) {
    ((omega * theta.sin()).norm(), omega.norm())
}

/// `Im θ₀ = arsinh|cos Re θ|`; above it `|sinθ| ≥ 1`.
pub fn speed_threshold(re_theta: f64) -> f64 {
    re_theta.cos().abs().asinh()
}

/// `u → e^{iα}u`, `ũ → e^{−iα}ũ`.
pub fn gauge_transform(s: &AdjointStatePair, alpha_phase: C64) -> AdjointStatePair {
    let (p, q) = ((I * alpha_phase).exp(), (-I * alpha_phase).exp());
    AdjointStatePair {
        u: [p * s.u[0], p * s.u[1]],
        u_tilde: [q * s.u_tilde[0], q * s.u_tilde[1]],
    }
}

/// Same transformation applied to a whole trajectory with a time-dependent
/// phase `α(t)`.
pub fn gauge_path(
    path: impl Fn(f64) -> AdjointStatePair,
    phase: impl Fn(f64) -> C64,
) -> impl Fn(f64) -> AdjointStatePair {
    move |t| gauge_transform(&path(t), phase(t))
}

/// `|v| / |Ω|` grid over `(Re θ, Im θ)`.
pub fn speed_surface(re: &[f64], im: &[f64]) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(re.len() * im.len());
    for &x in re {
        for &y in im {
            let (v, vg) = evolution_speed(C64::new(x, y), ONE);
            out.push((x, y, v / vg));
        }
    }
    out
}
