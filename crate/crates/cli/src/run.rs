//! Command execution. Every command produces one CSV table; numerical and
//! verification problems are reported after the table has been built so the
//! partial output can still be written.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nhqb::brachistochrone::{self, BoundaryStates, PassageTimeResult};
use nhqb::csv::Table;
use nhqb::dissipative::{self, RabiSystem};
use nhqb::evolution::{self, AdjointStatePair};
use nhqb::geometry;
use nhqb::hamiltonian::{from_spherical, EffectiveHamiltonian, SphericalParams};
use nhqb::C64;
use rayon::prelude::*;

use crate::config::{set_axis, Command, Model, RunConfig, Value};
use crate::CliError;

#[derive(Debug)]
pub enum Status {
    Ok,
    /// Reported after the table is written.
    Failed(CliError),
}

#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    /// Human-readable check results, printed to stderr.
    pub notes: Vec<String>,
    pub status: Status,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Self { table, notes: Vec::new(), status: Status::Ok }
    }
}

pub const SWEEP_HEADER: [&str; 7] =
    ["param1", "param2", "tau_closed", "tau_numeric", "residual", "regime", "diverged"];

pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match cfg.command {
        Command::Compute => compute(cfg),
        Command::Sweep => sweep(cfg),
        Command::Trajectory => trajectory(cfg),
        Command::Verify => verify(cfg),
        Command::Fig1 => fig1(cfg),
        Command::Fig2 => fig2(cfg),
        Command::Fig3 => fig3(cfg),
    }
}

fn numerical(context: impl Into<String>, source: nhqb::Error) -> CliError {
    match source {
        nhqb::Error::DomainError(msg) => CliError::Validation(format!("{}: {msg}", context.into())),
        source => CliError::Numerical { context: context.into(), source },
    }
}

/// Parameter lookup with model defaults, for one evaluation.
struct Params<'a> {
    map: &'a BTreeMap<String, Value>,
    model: Model,
}

impl Params<'_> {
    fn value(&self, name: &str) -> Result<Value, CliError> {
        if let Some(v) = self.map.get(name) {
            return Ok(v.clone());
        }
        self.model
            .parameters()
            .iter()
            .find(|(n, _)| *n == name)
            .and_then(|(_, d)| d.map(Value::Complex))
            .ok_or_else(|| CliError::Validation(format!("missing parameter `{name}`")))
    }

    fn complex(&self, name: &str) -> Result<C64, CliError> {
        self.value(name)?
            .as_complex()
            .ok_or_else(|| CliError::Validation(format!("`{name}` must be numeric")))
    }

    fn real(&self, name: &str) -> Result<f64, CliError> {
        self.value(name)?
            .as_real()
            .ok_or_else(|| CliError::Validation(format!("`{name}` must be real")))
    }
}

/// One evaluated cell of a model.
#[derive(Clone, Debug, PartialEq)]
struct Cell {
    tau_closed: f64,
    tau_numeric: f64,
    residual: f64,
    regime: &'static str,
    diverged: bool,
    omega_arg: f64,
}

impl Cell {
    fn closed(res: &PassageTimeResult) -> Self {
        Self {
            tau_closed: res.tau,
            tau_numeric: f64::NAN,
            residual: f64::NAN,
            regime: res.regime.as_str(),
            diverged: res.diverged,
            omega_arg: res.omega_arg,
        }
    }

    fn with_oracle(mut self, cmp: &brachistochrone::OracleComparison) -> Self {
        self.tau_numeric = cmp.tau_numeric;
        self.residual = cmp.residual;
        self
    }
}

fn oracle_params(theta: C64, omega_mag: f64, lambda0: C64) -> SphericalParams {
    SphericalParams::new(theta, C64::new(0.0, 0.0), C64::new(omega_mag, 0.0), lambda0)
}

fn rabi_system(p: &Params) -> Result<RabiSystem, CliError> {
    let (rho, delta, lambda) = (p.real("rho")?, p.real("delta")?, p.real("lambda")?);
    RabiSystem::new(lambda + delta, lambda - delta, p.real("detuning")?, p.real("omega_mod")?, rho / 2.0)
        .map_err(|e| numerical("rabi", e))
}

fn evaluate(p: &Params, oracle: bool, ode_tol: f64, context: &str) -> Result<Cell, CliError> {
    let fail = |e| numerical(context, e);
    match p.model {
        Model::General => {
            let (z, omega) = (p.complex("z")?, p.complex("omega")?);
            let cell = Cell::closed(&brachistochrone::passage_time_general(z, omega).map_err(fail)?);
            if !oracle || cell.diverged {
                return Ok(cell);
            }
            // Z = Ω cosθ
            let theta = (z / omega).acos();
            if !theta.is_finite() {
                return Ok(cell);
            }
            let b = BoundaryStates::new(C64::new(PI, 0.0), C64::new(0.0, 0.0));
            let p = oracle_params(theta, omega.norm(), C64::new(0.0, 0.0));
            let cmp = brachistochrone::verify_against_oracle(&p, &b, ode_tol).map_err(fail)?;
            Ok(cell.with_oracle(&cmp))
        }
        Model::Angular => {
            let (theta, alpha) = (p.complex("theta")?, p.complex("alpha")?);
            let omega_mag = p.real("omega_mag")?;
            let res = brachistochrone::evolution_time(alpha, theta, omega_mag).map_err(fail)?;
            let cell = Cell::closed(&res);
            if !oracle || cell.diverged {
                return Ok(cell);
            }
            let b = BoundaryStates::new(alpha, p.complex("beta")?);
            let q = oracle_params(theta, omega_mag, p.complex("lambda0")?);
            let cmp = brachistochrone::verify_against_oracle(&q, &b, ode_tol).map_err(fail)?;
            Ok(cell.with_oracle(&cmp))
        }
        Model::Rabi => {
            let r = rabi_system(p)?;
            let res = dissipative::rabi_passage_time(&r).map_err(fail)?;
            Ok(Cell { regime: dissipative::regime(&r, r.default_tolerance()).as_str(), ..Cell::closed(&res) })
        }
        Model::SpinFlip => {
            let s = brachistochrone::spin_flip_times(p.real("omega")?, p.real("delta")?).map_err(fail)?;
            Ok(Cell {
                tau_closed: s.tau_down,
                tau_numeric: f64::NAN,
                residual: f64::NAN,
                regime: "pt_symmetric",
                diverged: false,
                omega_arg: 0.0,
            })
        }
    }
}

fn compute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = Params { map: &cfg.params, model: cfg.model };
    let mut table;
    let diverged;
    match cfg.model {
        Model::General => {
            let cell = evaluate(&p, false, cfg.ode_tol, "compute")?;
            let (z, omega) = (p.complex("z")?, p.complex("omega")?);
            table = Table::new(&["z_re", "z_im", "omega_re", "omega_im", "tau_p", "omega_arg", "regime", "diverged"]);
            table.push(vec![
                z.re.into(),
                z.im.into(),
                omega.re.into(),
                omega.im.into(),
                cell.tau_closed.into(),
                cell.omega_arg.into(),
                cell.regime.into(),
                cell.diverged.into(),
            ]);
            diverged = cell.diverged;
        }
        Model::Angular => {
            let cell = evaluate(&p, false, cfg.ode_tol, "compute")?;
            let (theta, alpha) = (p.complex("theta")?, p.complex("alpha")?);
            let length = if cell.diverged {
                f64::INFINITY
            } else {
                geometry::brachistochrone_length(alpha, theta).map_err(|e| numerical("compute", e))?
            };
            let (v, vg) = geometry::evolution_speed(theta, C64::new(p.real("omega_mag")?, 0.0));
            table = Table::new(&["tau", "omega_arg", "length", "v_over_vg", "regime", "diverged"]);
            table.push(vec![
                cell.tau_closed.into(),
                cell.omega_arg.into(),
                length.into(),
                (v / vg).into(),
                cell.regime.into(),
                cell.diverged.into(),
            ]);
            diverged = cell.diverged;
        }
        Model::Rabi => {
            let r = rabi_system(&p)?;
            let cell = evaluate(&p, false, cfg.ode_tol, "compute")?;
            table = Table::new(&["tau_p", "rabi_frequency", "regime", "diverged"]);
            table.push(vec![
                cell.tau_closed.into(),
                r.rabi_frequency().into(),
                cell.regime.into(),
                cell.diverged.into(),
            ]);
            diverged = cell.diverged;
        }
        Model::SpinFlip => {
            let s = brachistochrone::spin_flip_times(p.real("omega")?, p.real("delta")?)
                .map_err(|e| numerical("compute", e))?;
            let length = geometry::spin_flip_length(s.kappa).map_err(|e| numerical("compute", e))?;
            table = Table::new(&["tau_down", "tau_up", "kappa", "length"]);
            table.push(vec![s.tau_down.into(), s.tau_up.into(), s.kappa.into(), length.into()]);
            diverged = false;
        }
    }
    let mut out = Outcome::ok(table);
    if diverged {
        out.status = Status::Failed(numerical("row 0", nhqb::Error::Diverged));
    }
    Ok(out)
}

fn run_parallel<T: Send, R: Send>(
    jobs: usize,
    items: Vec<T>,
    f: impl Fn(T) -> R + Sync + Send,
) -> Result<Vec<R>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Validation(format!("cannot start {jobs} workers: {e}")))?;
    // indexed collect keeps grid order
    Ok(pool.install(|| items.into_par_iter().map(f).collect()))
}

fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (g1, g2) = (&cfg.grids[0], &cfg.grids[1]);
    let default = |axis: &str| {
        let base = crate::config::axis_base(axis);
        cfg.model.parameters().iter().find(|(n, _)| *n == base).and_then(|(_, d)| *d)
    };
    let cells: Vec<(usize, f64, f64)> = (0..g1.count)
        .flat_map(|i| (0..g2.count).map(move |j| (i, j)))
        .enumerate()
        .map(|(row, (i, j))| (row, g1.value(i), g2.value(j)))
        .collect();
    let results = run_parallel(cfg.jobs, cells.clone(), |(row, x, y)| {
        let mut map = cfg.params.clone();
        set_axis(&mut map, default(&g1.name), &g1.name, x);
        set_axis(&mut map, default(&g2.name), &g2.name, y);
        let p = Params { map: &map, model: cfg.model };
        evaluate(&p, cfg.oracle, cfg.ode_tol, &format!("row {row}, {}={x}, {}={y}", g1.name, g2.name))
    })?;

    let mut table = Table::new(&SWEEP_HEADER);
    let mut status = Status::Ok;
    for ((_, x, y), res) in cells.iter().zip(results) {
        let cell = match res {
            Ok(cell) => cell,
            Err(e) => {
                status = Status::Failed(e);
                break;
            }
        };
        table.push(vec![
            (*x).into(),
            (*y).into(),
            cell.tau_closed.into(),
            cell.tau_numeric.into(),
            cell.residual.into(),
            cell.regime.into(),
            cell.diverged.into(),
        ]);
    }
    Ok(Outcome { table, notes: Vec::new(), status })
}

fn trajectory(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = Params { map: &cfg.params, model: Model::Angular };
    let get = |name: &str, default: C64| -> Result<C64, CliError> {
        match cfg.params.get(name) {
            Some(v) => v.as_complex().ok_or_else(|| CliError::Validation(format!("`{name}` must be numeric"))),
            None => Ok(default),
        }
    };
    let zero = C64::new(0.0, 0.0);
    let lambda0 = get("lambda0", zero)?;
    let (h, natural_stop): (EffectiveHamiltonian, f64) =
        if ["omega_x", "omega_y", "omega_z"].iter().any(|k| cfg.params.contains_key(*k)) {
            let h = EffectiveHamiltonian::new(
                lambda0,
                [get("omega_x", zero)?, get("omega_y", zero)?, get("omega_z", zero)?],
            );
            let r = h.r().norm();
            (h, if r > 0.0 { 2.0 * PI / r } else { 1.0 })
        } else if cfg.params.contains_key("alpha") {
            let q = oracle_params(p.complex("theta")?, p.real("omega_mag")?, lambda0);
            let b = BoundaryStates::new(p.complex("alpha")?, p.complex("beta")?);
            let (h, res) = brachistochrone::optimal_hamiltonian(&q, &b).map_err(|e| numerical("trajectory", e))?;
            (h, res.tau)
        } else {
            let omega = get("omega", C64::new(p.real("omega_mag")?, 0.0))?;
            let sp = SphericalParams::new(p.complex("theta")?, get("phi", zero)?, omega, lambda0);
            (from_spherical(&sp), 2.0 * PI / omega.norm())
        };
    let t_stop = cfg.t_stop.unwrap_or(natural_stop);
    let n = cfg.samples.unwrap_or(201);
    let times: Vec<f64> = (0..n).map(|k| t_stop * k as f64 / (n - 1) as f64).collect();
    let points = evolution::sample_trajectory(&h, &AdjointStatePair::initial(), &times);
    let mut out = Outcome::ok(evolution::trajectory_table(&points));
    if let Some(bad) = points.iter().find(|pt| !pt.pair.u.iter().chain(&pt.pair.u_tilde).all(|z| z.is_finite())) {
        out.status = Status::Failed(numerical(format!("t = {}", bad.t), nhqb::Error::Diverged));
    }
    Ok(out)
}

/// One oracle comparison of the `verify` suite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyCase {
    pub name: &'static str,
    pub theta: C64,
    pub alpha: C64,
    pub beta: C64,
    pub omega_mag: f64,
}

/// Fifty cases: Hermitian angles, the PT line `θ = π/2 + iη` for
/// `η ∈ [0, 3]`, and points close to the exceptional point.
pub fn default_suite() -> Vec<VerifyCase> {
    let c = C64::new;
    let mut cases = Vec::new();
    for th in [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0, 5.0 * PI / 6.0] {
        for a in [PI / 3.0, PI / 2.0, PI] {
            cases.push(VerifyCase { name: "hermitian", theta: c(th, 0.0), alpha: c(a, 0.0), beta: c(0.0, 0.0), omega_mag: 1.0 });
        }
    }
    for k in 0..25 {
        let eta = 3.0 * k as f64 / 24.0;
        let alpha = if k % 3 == 2 { PI / 2.0 } else { PI };
        cases.push(VerifyCase { name: "pt", theta: c(PI / 2.0, eta), alpha: c(alpha, 0.0), beta: c(0.0, 0.0), omega_mag: 1.0 });
    }
    for omega0 in [1e-3, 2e-3, 5e-3, 1e-2, 2e-2] {
        for delta in [0.5f64, 1.0] {
            cases.push(VerifyCase {
                name: "near_ep",
                theta: c(PI / 2.0, (delta / omega0).asinh()),
                alpha: c(PI, 0.0),
                beta: c(0.0, 0.0),
                omega_mag: omega0,
            });
        }
    }
    cases
}

fn verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let cases = if cfg.params.contains_key("theta") {
        let p = Params { map: &cfg.params, model: Model::Angular };
        vec![VerifyCase {
            name: "custom",
            theta: p.complex("theta")?,
            alpha: p.complex("alpha")?,
            beta: p.complex("beta")?,
            omega_mag: p.real("omega_mag")?,
        }]
    } else {
        default_suite()
    };
    let results = run_parallel(cfg.jobs, cases.clone(), |case| {
        let q = oracle_params(case.theta, case.omega_mag, C64::new(0.0, 0.0));
        let b = BoundaryStates::new(case.alpha, case.beta);
        brachistochrone::verify_against_oracle(&q, &b, cfg.ode_tol)
    })?;

    let mut table = Table::new(&[
        "case", "theta_re", "theta_im", "alpha_re", "alpha_im", "omega_mag", "tau_closed",
        "tau_numeric", "residual", "pass",
    ]);
    let (mut status, mut worst) = (Status::Ok, 0.0f64);
    let mut failed = 0;
    for (row, (case, res)) in cases.iter().zip(results).enumerate() {
        let cmp = match res {
            Ok(cmp) => cmp,
            Err(e) => {
                status = Status::Failed(numerical(format!("row {row}, case {}", case.name), e));
                break;
            }
        };
        let pass = cmp.residual < cfg.tol;
        failed += usize::from(!pass);
        worst = worst.max(cmp.residual);
        table.push(vec![
            case.name.into(),
            case.theta.re.into(),
            case.theta.im.into(),
            case.alpha.re.into(),
            case.alpha.im.into(),
            case.omega_mag.into(),
            cmp.tau_closed.into(),
            cmp.tau_numeric.into(),
            cmp.residual.into(),
            pass.into(),
        ]);
    }
    let note = format!("verify: {} cases, worst residual {worst:.3e}, tolerance {:.1e}", table.rows.len(), cfg.tol);
    if matches!(status, Status::Ok) && failed > 0 {
        status = Status::Failed(CliError::Verification(format!("{failed} residual(s) above {:e}", cfg.tol)));
    }
    Ok(Outcome { table, notes: vec![note], status })
}

/// Named numeric assertions on a figure table.
struct Checks {
    notes: Vec<String>,
    failed: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self { notes: Vec::new(), failed: Vec::new() }
    }

    fn check(&mut self, name: &str, ok: bool, detail: String) {
        let line = format!("{} {name}: {detail}", if ok { "ok  " } else { "FAIL" });
        if !ok {
            self.failed.push(name.to_string());
        }
        self.notes.push(line);
    }

    fn finish(self, table: Table) -> Outcome {
        let status = if self.failed.is_empty() {
            Status::Ok
        } else {
            Status::Failed(CliError::Verification(format!("figure checks failed: {}", self.failed.join(", "))))
        };
        Outcome { table, notes: self.notes, status }
    }
}

pub const FIG1_PANELS: [(f64, f64); 2] = [(1.0, 0.1), (1.0, 10.0)];

/// `τ_p` over the `Z` plane for each panel, on `±1.5·|Re Ω|` by
/// `±1.5·|Im Ω|` so that `Z = 0` and `Z = ±Ω` are grid nodes when
/// `samples − 1` is a multiple of 6.
fn fig1(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let n = cfg.samples.unwrap_or(121);
    let mut table = Table::new(&["panel", "omega_re", "omega_im", "re_z", "im_z", "tau_p", "diverged"]);
    let mut checks = Checks::new();
    for (k, &(wr, wi)) in FIG1_PANELS.iter().enumerate() {
        let omega = C64::new(wr, wi);
        let re = crate::Grid { name: "re_z".into(), start: -1.5 * wr, stop: 1.5 * wr, count: n };
        let im = crate::Grid { name: "im_z".into(), start: -1.5 * wi, stop: 1.5 * wi, count: n };
        let cells: Vec<(f64, f64)> =
            re.values().into_iter().flat_map(|x| im.values().into_iter().map(move |y| (x, y))).collect();
        let results = run_parallel(cfg.jobs, cells.clone(), |(x, y)| {
            brachistochrone::passage_time_general(C64::new(x, y), omega)
        })?;
        let (mut saddle, mut singular, mut corner) = (None, Vec::new(), f64::NAN);
        for ((x, y), res) in cells.iter().zip(results) {
            let res = res.map_err(|e| numerical(format!("panel {k}, z = {x}{y:+}j"), e))?;
            let z = C64::new(*x, *y);
            if z == C64::new(0.0, 0.0) {
                saddle = Some(res.tau);
            }
            if (z - omega).norm() < 1e-12 || (z + omega).norm() < 1e-12 {
                singular.push(res.diverged);
            }
            if *x == re.stop && *y == im.stop {
                corner = res.tau;
            }
            table.push(vec![k.into(), wr.into(), wi.into(), (*x).into(), (*y).into(), res.tau.into(), res.diverged.into()]);
        }
        let expected = PI / omega.norm();
        match saddle {
            Some(tau) => checks.check(
                &format!("panel {k} saddle"),
                (tau - expected).abs() <= 1e-12 * expected,
                format!("tau_p(0) = {tau:.15}, pi/|Omega| = {expected:.15}"),
            ),
            None => checks.notes.push(format!("skip panel {k} saddle: Z = 0 is not a grid node")),
        }
        if (n - 1).is_multiple_of(6) {
            checks.check(
                &format!("panel {k} singular points"),
                singular.len() == 2 && singular.iter().all(|&d| d),
                format!("{} of 2 nodes at Z = +-Omega flagged diverged", singular.iter().filter(|&&d| d).count()),
            );
        } else {
            checks.notes.push(format!("skip panel {k} singular points: Z = +-Omega are not grid nodes"));
        }
        checks.check(
            &format!("panel {k} decay"),
            corner < expected,
            format!("tau_p at grid corner {corner:.6} < saddle {expected:.6}"),
        );
    }
    Ok(checks.finish(table))
}

/// Passage times against `δ` at fixed `Ω₀`, both regimes and their bounds.
fn fig2(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let omega0 = cfg.figure.get("omega0").copied().unwrap_or(1.0);
    let delta_max = cfg.figure.get("delta_max").copied().unwrap_or(10.0);
    let n = cfg.samples.unwrap_or(200);
    let deltas: Vec<f64> = (1..=n).map(|k| delta_max * k as f64 / n as f64).collect();
    let table = dissipative::fig2_table(omega0, &deltas).map_err(|e| numerical("fig2", e))?;

    let col = |name: &str| -> Vec<f64> {
        let i = table.column(name).expect("fig2 column");
        table.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect()
    };
    let (d, coh, inc, lower, upper) =
        (col("delta"), col("tau_coherent"), col("tau_incoherent"), col("bound_lower"), col("bound_2_over_delta"));
    let mut checks = Checks::new();
    let inside = (0..d.len()).filter(|&i| lower[i] < coh[i] && coh[i] < upper[i].min(PI / omega0)).count();
    checks.check("coherent bounds", inside == d.len(), format!("{inside}/{} rows strictly inside", d.len()));
    let defined: Vec<usize> = (0..d.len()).filter(|&i| d[i] > omega0).collect();
    let above = defined.iter().filter(|&&i| inc[i] > upper[i]).count();
    let nan_ok = (0..d.len()).all(|i| inc[i].is_nan() == (d[i] <= omega0));
    checks.check(
        "incoherent above 2/delta",
        above == defined.len() && nan_ok,
        format!("{above}/{} defined rows above 2/delta", defined.len()),
    );
    let last = d.len() - 1;
    let x2 = (omega0 / d[last]).powi(2);
    let (rc, ri) = (coh[last] / upper[last] - 1.0, inc[last] / upper[last] - 1.0);
    checks.check(
        "asymptote 2/delta",
        rc.abs() <= x2 / 3.0 + 1e-12 && ri.abs() <= x2 / 3.0 * (1.0 + x2) + 1e-12,
        format!("relative gaps {rc:.3e}, {ri:.3e} at delta = {}", d[last]),
    );
    Ok(checks.finish(table))
}

/// `|v|/|Ω| = |sinθ|` over `Re θ ∈ [0, π]`, `Im θ ∈ [−im_max, im_max]`,
/// checked against the threshold `arsinh|cos Re θ|`.
fn fig3(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let im_max = cfg.figure.get("im_max").copied().unwrap_or(3.0);
    let n = cfg.samples.unwrap_or(101);
    let re = crate::Grid { name: "re_theta".into(), start: 0.0, stop: PI, count: n };
    let im = crate::Grid { name: "im_theta".into(), start: -im_max, stop: im_max, count: n };
    let surface = geometry::speed_surface(&re.values(), &im.values());
    let mut table = Table::new(&["re_theta", "im_theta", "v_over_vg"]);
    let mut checks = Checks::new();
    let (mut above, mut violations, mut real_axis_bad) = (0usize, 0usize, 0usize);
    for &(x, y, v) in &surface {
        let t = geometry::speed_threshold(x);
        if y.abs() >= t {
            above += 1;
            if v < 1.0 - 1e-12 {
                violations += 1;
            }
        }
        if y == 0.0 && v > 1.0 + 1e-15 {
            real_axis_bad += 1;
        }
        table.push(vec![x.into(), y.into(), v.into()]);
    }
    checks.check("speed above threshold", violations == 0, format!("{violations} violations in {above} points"));
    checks.check("hermitian bound", real_axis_bad == 0, format!("{real_axis_bad} real-axis points above v_g"));
    Ok(checks.finish(table))
}
