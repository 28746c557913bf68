//! Flat `key = value` run configuration.
//!
//! ```text
//! # passage-time surface
//! command = sweep
//! model   = general
//! omega   = 1+0.1j
//! grid.re_z = -3:3:121
//! grid.im_z = -3:3:121
//! ```
//!
//! Reals accept `pi` tokens (`pi`, `-pi/2`, `3*pi/4`); complex values are
//! written `re+imj`. `--set key=value` lines are applied after the file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Compute,
    Sweep,
    Trajectory,
    Verify,
    Fig1,
    Fig2,
    Fig3,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Compute => "compute",
            Command::Sweep => "sweep",
            Command::Trajectory => "trajectory",
            Command::Verify => "verify",
            Command::Fig1 => "fig1",
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
        }
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        <Command as clap::ValueEnum>::from_str(s, true)
            .map_err(|_| CliError::Validation(format!("unknown command `{s}`")))
    }
}

/// Physical model a `compute` or `sweep` evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// `τ_p` from `Z` and `Ω`.
    General,
    /// `τ` from `α`, `β`, `θ` and `|Ω|`.
    Angular,
    /// Driven dissipative two-level system at resonance.
    Rabi,
    /// PT-symmetric spin flip from `Ω` and `δ`.
    SpinFlip,
}

impl Model {
    pub fn as_str(&self) -> &'static str {
        match self {
            Model::General => "general",
            Model::Angular => "angular",
            Model::Rabi => "rabi",
            Model::SpinFlip => "spin_flip",
        }
    }

    /// Parameter names with their defaults (`None` = required).
    pub fn parameters(&self) -> &'static [(&'static str, Option<C64>)] {
        const ONE: Option<C64> = Some(C64::new(1.0, 0.0));
        const ZERO: Option<C64> = Some(C64::new(0.0, 0.0));
        const PI: Option<C64> = Some(C64::new(std::f64::consts::PI, 0.0));
        match self {
            Model::General => &[("z", None), ("omega", ONE)],
            Model::Angular => &[
                ("theta", None),
                ("alpha", PI),
                ("beta", ZERO),
                ("omega_mag", ONE),
                ("lambda0", ZERO),
            ],
            Model::Rabi => &[
                ("rho", None),
                ("delta", None),
                ("lambda", None),
                ("detuning", ZERO),
                ("omega_mod", ZERO),
            ],
            Model::SpinFlip => &[("omega", None), ("delta", None)],
        }
    }
}

impl FromStr for Model {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "general" => Ok(Model::General),
            "angular" => Ok(Model::Angular),
            "rabi" => Ok(Model::Rabi),
            "spin_flip" => Ok(Model::SpinFlip),
            _ => Err(CliError::Validation(format!(
                "unknown model `{s}` (general, angular, rabi, spin_flip)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Real(f64),
    Complex(C64),
    Text(String),
}

impl Value {
    pub fn parse(s: &str) -> Value {
        let s = s.trim();
        if let Ok(x) = parse_real(s) {
            Value::Real(x)
        } else if let Ok(z) = parse_complex(s) {
            Value::Complex(z)
        } else {
            Value::Text(s.to_string())
        }
    }

    pub fn as_complex(&self) -> Option<C64> {
        match self {
            Value::Real(x) => Some(C64::new(*x, 0.0)),
            Value::Complex(z) => Some(*z),
            Value::Text(_) => None,
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Value::Real(x) => Some(*x),
            Value::Complex(z) if z.im == 0.0 => Some(z.re),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(x) => write!(f, "{x}"),
            Value::Complex(z) => write!(f, "{}{:+}j", z.re, z.im),
            Value::Text(s) => f.write_str(s),
        }
    }
}

fn bad(s: &str, what: &str) -> CliError {
    CliError::Validation(format!("cannot parse `{s}` as {what}"))
}

/// Real literal or a rational multiple of `pi`.
pub fn parse_real(s: &str) -> Result<f64, CliError> {
    let t = s.trim();
    if !t.contains("pi") {
        return t.parse::<f64>().map_err(|_| bad(s, "a real number"));
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad(s, "a real number"))?),
        None => (body, 1.0),
    };
    let factor = match num {
        "pi" => 1.0,
        _ => num
            .strip_suffix("*pi")
            .and_then(|k| k.parse::<f64>().ok())
            .ok_or_else(|| bad(s, "a real number"))?,
    };
    Ok(sign * factor * std::f64::consts::PI / den)
}

/// `re+imj`, `re-imj`, `imj` or a plain real.
pub fn parse_complex(s: &str) -> Result<C64, CliError> {
    let t = s.trim();
    let Some(body) = t.strip_suffix('j') else {
        return parse_real(t).map(|x| C64::new(x, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |p: &str| match p {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(p),
    };
    match split {
        Some(i) => Ok(C64::new(parse_real(&body[..i])?, imag(&body[i..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
    .map_err(|_: CliError| bad(s, "a complex number"))
}

/// One swept axis: `count` equally spaced values from `start` to `stop`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn parse(name: &str, spec: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(CliError::Validation(format!("grid.{name}: expected start:stop:count, got `{spec}`")));
        };
        let count = count
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Validation(format!("grid.{name}: bad count `{count}`")))?;
        Ok(Self { name: name.to_string(), start: parse_real(start)?, stop: parse_real(stop)?, count })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.count < 2 {
            return Err(CliError::Validation(format!("grid.{}: count must be >= 2", self.name)));
        }
        if !(self.start < self.stop) {
            return Err(CliError::Validation(format!("grid.{}: need start < stop", self.name)));
        }
        Ok(())
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.count {
            return self.stop;
        }
        self.start + (self.stop - self.start) * k as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.value(k)).collect()
    }
}

/// Keys that are not model parameters.
const SETTINGS: &[&str] = &[
    "command", "model", "out", "tol", "jobs", "ode_tol", "oracle", "samples", "t_stop", "omega0",
    "delta_max", "im_max",
];

/// Every name a model accepts, plus the trajectory generator components.
const EXTRA_PARAMS: &[&str] = &["phi", "omega_x", "omega_y", "omega_z"];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub model: Model,
    pub params: BTreeMap<String, Value>,
    /// Swept axes in declaration order.
    pub grids: Vec<Grid>,
    pub output: Option<PathBuf>,
    /// Residual threshold for `verify`.
    pub tol: f64,
    /// Integrator tolerance.
    pub ode_tol: f64,
    pub jobs: usize,
    pub oracle: bool,
    pub samples: Option<usize>,
    pub t_stop: Option<f64>,
    /// Figure settings (`omega0`, `delta_max`, `im_max`).
    pub figure: BTreeMap<String, f64>,
}

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_ODE_TOL: f64 = 1e-12;

/// Raw `key = value` pairs in order of appearance.
pub fn parse_lines(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Validation(format!("line {}: expected key = value", n + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(CliError::Validation(format!("line {}: empty key or value", n + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

impl RunConfig {
    /// Builds a config from ordered entries; later keys override earlier ones.
    pub fn from_entries(command: Option<Command>, entries: &[(String, String)]) -> Result<Self, CliError> {
        let mut raw: BTreeMap<String, String> = BTreeMap::new();
        let mut grids: Vec<Grid> = Vec::new();
        for (k, v) in entries {
            if let Some(axis) = k.strip_prefix("grid.") {
                let g = Grid::parse(axis, v)?;
                match grids.iter_mut().find(|g| g.name == axis) {
                    Some(slot) => *slot = g,
                    None => grids.push(g),
                }
            } else {
                raw.insert(k.clone(), v.clone());
            }
        }

        let command = match (command, raw.get("command")) {
            (Some(c), _) => c,
            (None, Some(c)) => c.parse()?,
            (None, None) => return Err(CliError::Validation("no command given".into())),
        };
        let model = raw.get("model").map(|m| m.parse()).transpose()?.unwrap_or(Model::General);

        let real = |key: &str| raw.get(key).map(|v| parse_real(v)).transpose();
        let positive = |key: &str| -> Result<Option<f64>, CliError> {
            match real(key)? {
                Some(x) if !(x > 0.0 && x.is_finite()) => {
                    Err(CliError::Validation(format!("{key} must be positive, got {x}")))
                }
                x => Ok(x),
            }
        };
        let count = |key: &str| -> Result<Option<usize>, CliError> {
            raw.get(key)
                .map(|v| v.parse::<usize>().map_err(|_| bad(v, "a count")))
                .transpose()
        };

        let mut params = BTreeMap::new();
        let mut figure = BTreeMap::new();
        for (k, v) in &raw {
            if SETTINGS.contains(&k.as_str()) {
                if ["omega0", "delta_max", "im_max"].contains(&k.as_str()) {
                    figure.insert(k.clone(), positive(k)?.unwrap_or(f64::NAN));
                }
                continue;
            }
            let known = EXTRA_PARAMS.contains(&k.as_str())
                || [Model::General, Model::Angular, Model::Rabi, Model::SpinFlip]
                    .iter()
                    .any(|m| m.parameters().iter().any(|(n, _)| n == k));
            if !known {
                return Err(CliError::Validation(format!("unknown key `{k}`")));
            }
            match Value::parse(v) {
                Value::Text(_) => return Err(bad(v, "a number")),
                value => {
                    params.insert(k.clone(), value);
                }
            }
        }

        let oracle = match raw.get("oracle").map(String::as_str) {
            None | Some("0") | Some("false") => false,
            Some("1") | Some("true") => true,
            Some(other) => return Err(bad(other, "a boolean")),
        };

        let cfg = Self {
            command,
            model,
            params,
            grids,
            output: raw.get("out").map(PathBuf::from),
            tol: positive("tol")?.unwrap_or(DEFAULT_TOL),
            ode_tol: positive("ode_tol")?.unwrap_or(DEFAULT_ODE_TOL),
            jobs: count("jobs")?.unwrap_or(0),
            oracle,
            samples: count("samples")?,
            t_stop: positive("t_stop")?,
            figure,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads `path` (if any), then applies `overrides` (`key=value`).
    pub fn load(
        command: Option<Command>,
        path: Option<&std::path::Path>,
        overrides: &[String],
    ) -> Result<Self, CliError> {
        let mut entries = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?;
                parse_lines(&text)?
            }
            None => Vec::new(),
        };
        for o in overrides {
            entries.extend(parse_lines(o).map_err(|_| {
                CliError::Validation(format!("--set expects key=value, got `{o}`"))
            })?);
        }
        Self::from_entries(command, &entries)
    }

    /// Parameter value with the model default filled in.
    pub fn param(&self, name: &str) -> Option<Value> {
        if let Some(v) = self.params.get(name) {
            return Some(v.clone());
        }
        self.model
            .parameters()
            .iter()
            .find(|(n, _)| *n == name)
            .and_then(|(_, d)| d.map(Value::Complex))
    }

    fn require(&self, names: &[&str]) -> Result<(), CliError> {
        for n in names {
            if self.param(n).is_none() {
                return Err(CliError::Validation(format!(
                    "{} needs parameter `{n}`",
                    self.command.as_str()
                )));
            }
        }
        Ok(())
    }

    fn require_model(&self, swept: &[&str]) -> Result<(), CliError> {
        let missing: Vec<&str> = self
            .model
            .parameters()
            .iter()
            .filter(|(n, d)| d.is_none() && !swept.contains(n))
            .map(|(n, _)| *n)
            .collect();
        self.require(&missing)?;
        if self.model == Model::Rabi && !swept.contains(&"lambda") && self.param("lambda").is_none() {
            return Err(CliError::Validation("rabi needs parameter `lambda`".into()));
        }
        Ok(())
    }

    /// Checks grids, required parameters and counts before anything runs.
    pub fn validate(&self) -> Result<(), CliError> {
        for g in &self.grids {
            g.validate()?;
        }
        if let Some(n) = self.samples {
            if n < 2 {
                return Err(CliError::Validation("samples must be >= 2".into()));
            }
        }
        match self.command {
            Command::Compute => self.require_model(&[]),
            Command::Sweep => {
                if self.grids.len() != 2 {
                    return Err(CliError::Validation(format!(
                        "sweep needs exactly two grid axes, got {}",
                        self.grids.len()
                    )));
                }
                let mut swept = Vec::new();
                for g in &self.grids {
                    let base = axis_base(&g.name);
                    if !self.model.parameters().iter().any(|(n, _)| *n == base) {
                        return Err(CliError::Validation(format!(
                            "grid.{}: `{base}` is not a {} parameter",
                            g.name,
                            self.model.as_str()
                        )));
                    }
                    swept.push(base);
                }
                self.require_model(&swept)
            }
            Command::Trajectory => {
                let components = ["omega_x", "omega_y", "omega_z"];
                if !components.iter().any(|k| self.params.contains_key(*k)) {
                    self.require(&["theta"])?;
                }
                Ok(())
            }
            Command::Verify | Command::Fig1 | Command::Fig2 | Command::Fig3 => Ok(()),
        }
    }
}

/// `re_z` and `im_z` sweep the components of `z`; other names are the
/// parameter itself.
pub fn axis_base(name: &str) -> &str {
    name.strip_prefix("re_").or_else(|| name.strip_prefix("im_")).unwrap_or(name)
}

/// Writes `x` into the parameter or component named by `axis`.
pub fn set_axis(params: &mut BTreeMap<String, Value>, default: Option<C64>, axis: &str, x: f64) {
    let base = axis_base(axis).to_string();
    if base == axis {
        params.insert(base, Value::Real(x));
        return;
    }
    let current = params.get(&base).and_then(Value::as_complex).or(default).unwrap_or_default();
    let z = if axis.starts_with("re_") { C64::new(x, current.im) } else { C64::new(current.re, x) };
    params.insert(base, Value::Complex(z));
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn entries(text: &str) -> Vec<(String, String)> {
        parse_lines(text).unwrap()
    }

    #[test]
    fn real_tokens() {
        assert_eq!(parse_real("1.5").unwrap(), 1.5);
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_real("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert!(parse_real("pie").is_err());
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1+2j").unwrap(), C64::new(1.0, 2.0));
        assert_eq!(parse_complex("1e-3-2.5e+1j").unwrap(), C64::new(1e-3, -25.0));
        assert_eq!(parse_complex("-j").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("0.5j").unwrap(), C64::new(0.0, 0.5));
        assert_eq!(parse_complex("pi/2+1j").unwrap(), C64::new(PI / 2.0, 1.0));
        assert_eq!(parse_complex("2").unwrap(), C64::new(2.0, 0.0));
        assert!(parse_complex("1+2i").is_err());
    }

    #[test]
    fn comments_and_overrides() {
        let e = entries("command = compute # saddle\nz = 0\n\nz = 1+1j\n");
        let cfg = RunConfig::from_entries(None, &e).unwrap();
        assert_eq!(cfg.command, Command::Compute);
        assert_eq!(cfg.params["z"], Value::Complex(C64::new(1.0, 1.0)));
        assert_eq!(cfg.param("omega"), Some(Value::Complex(C64::new(1.0, 0.0))));
    }

    #[test]
    fn validation_failures() {
        let bad = [
            "command = sweep\ngrid.re_z = 0:1:1\ngrid.im_z = 0:1:3",
            "command = sweep\ngrid.re_z = 1:0:3\ngrid.im_z = 0:1:3",
            "command = sweep\ngrid.re_z = 0:1:3",
            "command = sweep\ngrid.theta = 0:1:3\ngrid.im_z = 0:1:3",
            "command = compute",
            "command = compute\nz = 0\nzz = 1",
            "command = launch",
            "z = 0",
            "command = compute\nz = 0\ntol = -1",
            "command = compute\nz",
        ];
        for text in bad {
            let r = parse_lines(text).and_then(|e| RunConfig::from_entries(None, &e));
            assert!(matches!(r, Err(CliError::Validation(_))), "{text}");
        }
    }

    #[test]
    fn grid_values_hit_both_ends() {
        let g = Grid::parse("x", "-1.5:1.5:121").unwrap();
        let v = g.values();
        assert_eq!(v[0], -1.5);
        assert_eq!(v[120], 1.5);
        assert_eq!(v[60], 0.0);
    }

    #[test]
    fn axis_updates_components() {
        let mut p = BTreeMap::new();
        set_axis(&mut p, Some(C64::new(1.0, 0.0)), "im_omega", 0.5);
        assert_eq!(p["omega"], Value::Complex(C64::new(1.0, 0.5)));
        set_axis(&mut p, None, "delta", 2.0);
        assert_eq!(p["delta"], Value::Real(2.0));
    }
}
