//! Flat `key = value` scenario files.
//!
//! ```text
//! # single photon on a resonant qubit
//! scenario = single_photon
//! pulse = rising_exponential
//! t_max = 10
//! ```
//!
//! Several pairs may share a line when separated by whitespace
//! (`scenario=coherent pulse=square`). Times and rates are absolute; the
//! defaults for `dt`, `t_max` and the rising-exponential `rate` scale with
//! the configured `gamma`.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pulse::{Pulse, Shape};
use crate::qubit::QubitState;
use crate::units::{TimeGrid, UnitsConvention};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Coherent,
    SinglePhoton,
    /// Qubit decaying into the empty waveguide.
    Spontaneous,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Coherent => "coherent",
            ScenarioKind::SinglePhoton => "single_photon",
            ScenarioKind::Spontaneous => "spontaneous",
        }
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "coherent" => Ok(ScenarioKind::Coherent),
            "single_photon" => Ok(ScenarioKind::SinglePhoton),
            "spontaneous" => Ok(ScenarioKind::Spontaneous),
            _ => Err(format!(
                "unknown scenario `{s}` (coherent, single_photon, spontaneous)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitKind {
    Trajectory,
    Fig2,
    Convergence,
}

impl EmitKind {
    pub fn name(self) -> &'static str {
        match self {
            EmitKind::Trajectory => "trajectory",
            EmitKind::Fig2 => "fig2",
            EmitKind::Convergence => "convergence",
        }
    }
}

impl FromStr for EmitKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "trajectory" => Ok(EmitKind::Trajectory),
            "fig2" => Ok(EmitKind::Fig2),
            "convergence" => Ok(EmitKind::Convergence),
            _ => Err(format!(
                "unknown output `{s}` (trajectory, fig2, convergence)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptions {
    pub enabled: bool,
    /// Bin width; a multiple of the solver step.
    pub dt: f64,
    /// Fock cutoff; `None` picks one from the Poisson tail.
    pub n_max: Option<usize>,
    /// Also run the brute-force check on the first few bins.
    pub full_fock: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    /// `None` only for [`ScenarioKind::Spontaneous`].
    pub shape: Option<Shape>,
    /// Truncation window of the envelope.
    pub support: Option<(f64, f64)>,
    /// Coherent only: renormalize the truncated pulse to this mean photon
    /// number.
    pub photon_number: Option<f64>,
    pub t0: f64,
    pub t_max: f64,
    pub dt: f64,
    pub initial: QubitState,
    pub oracle: OracleOptions,
    pub emit: EmitKind,
    /// Step sizes for the convergence sweep, largest first.
    pub sweep_dt: Vec<f64>,
    pub gamma: f64,
    pub omega0: f64,
}

const KEYS: &[&str] = &[
    "scenario",
    "pulse",
    "rate",
    "center",
    "width",
    "start",
    "duration",
    "t_start",
    "t_stop",
    "photon_number",
    "t0",
    "t_max",
    "dt",
    "initial_x",
    "initial_y",
    "initial_z",
    "oracle",
    "oracle_dt",
    "oracle_n_max",
    "oracle_full_fock",
    "emit",
    "sweep_dt",
    "gamma",
    "omega0",
];

const PULSE_KEYS: &[&str] = &[
    "pulse",
    "rate",
    "center",
    "width",
    "start",
    "duration",
    "t_start",
    "t_stop",
    "photon_number",
];

struct Entry {
    line: usize,
    value: String,
}

struct Entries(Vec<(String, Entry)>);

impl Entries {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, e)| e)
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|err| Error::config(e.line, format!("`{key}`: {err}"))),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>> {
        match self.parse::<f64>(key)? {
            Some(v) if !v.is_finite() => Err(Error::config(
                self.line(key),
                format!("`{key}` must be finite"),
            )),
            v => Ok(v),
        }
    }

    fn required_float(&self, key: &str, context: &str) -> Result<f64> {
        self.float(key)?
            .ok_or_else(|| Error::config(0, format!("missing required key `{key}` for {context}")))
    }

    fn line(&self, key: &str) -> usize {
        self.get(key).map_or(0, |e| e.line)
    }
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("expected a boolean, got `{s}`")),
    }
}

fn tokenize(text: &str) -> Result<Entries> {
    let mut out: Vec<(String, Entry)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let pairs: Vec<(&str, &str)> = if body.matches('=').count() == 1 {
            let (k, v) = body.split_once('=').unwrap();
            vec![(k, v)]
        } else {
            body.split_whitespace()
                .map(|tok| {
                    tok.split_once('=').ok_or_else(|| {
                        Error::config(line, format!("expected `key = value`, got `{tok}`"))
                    })
                })
                .collect::<Result<_>>()?
        };
        if pairs.is_empty() {
            return Err(Error::config(
                line,
                format!("expected `key = value`, got `{body}`"),
            ));
        }
        for (k, v) in pairs {
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(Error::config(line, format!("unknown key `{k}`")));
            }
            if v.is_empty() {
                return Err(Error::config(line, format!("key `{k}` has no value")));
            }
            if let Some((_, prev)) = out.iter().find(|(key, _)| key == k) {
                return Err(Error::config(
                    line,
                    format!("duplicate key `{k}` (first set on line {})", prev.line),
                ));
            }
            out.push((
                k.to_string(),
                Entry {
                    line,
                    value: v.to_string(),
                },
            ));
        }
    }
    Ok(Entries(out))
}

/// Parse and validate a scenario file, filling in defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let e = tokenize(text)?;
    let kind: ScenarioKind = e
        .parse("scenario")?
        .ok_or_else(|| Error::config(0, "missing required key `scenario`"))?;

    let gamma = e.float("gamma")?.unwrap_or(1.0);
    let omega0 = e.float("omega0")?.unwrap_or(1.0);
    UnitsConvention::new(gamma, omega0)
        .map_err(|err| Error::config(e.line("gamma").max(e.line("omega0")), err.to_string()))?;

    let (shape, support, photon_number) = match kind {
        ScenarioKind::Spontaneous => {
            if let Some(k) = PULSE_KEYS.iter().find(|k| e.get(k).is_some()) {
                return Err(Error::config(
                    e.line(k),
                    format!("`{k}` is meaningless for a spontaneous scenario"),
                ));
            }
            (None, None, None)
        }
        _ => {
            let name = e.get("pulse").ok_or_else(|| {
                Error::config(
                    0,
                    format!("missing required key `pulse` for scenario {}", kind.name()),
                )
            })?;
            let shape = match name.value.as_str() {
                "rising_exponential" => Shape::RisingExponential {
                    rate: e.float("rate")?.unwrap_or(gamma),
                },
                "gaussian" => Shape::Gaussian {
                    center: e.float("center")?.unwrap_or(0.0),
                    width: e.required_float("width", "a gaussian pulse")?,
                },
                "square" => Shape::Square {
                    start: e.required_float("start", "a square pulse")?,
                    duration: e.required_float("duration", "a square pulse")?,
                },
                other => {
                    return Err(Error::config(
                        name.line,
                        format!("unknown pulse `{other}` (rising_exponential, gaussian, square)"),
                    ))
                }
            };
            let unused: &[&str] = match shape {
                Shape::RisingExponential { .. } => &["center", "width", "start", "duration"],
                Shape::Gaussian { .. } => &["rate", "start", "duration"],
                _ => &["rate", "center", "width"],
            };
            if let Some(k) = unused.iter().find(|k| e.get(k).is_some()) {
                return Err(Error::config(
                    e.line(k),
                    format!("`{k}` does not apply to a {} pulse", name.value),
                ));
            }
            shape
                .validate()
                .map_err(|err| Error::config(name.line, err.to_string()))?;
            let default = shape.default_support();
            let support = (
                e.float("t_start")?.unwrap_or(default.0),
                e.float("t_stop")?.unwrap_or(default.1),
            );
            if support.1 <= support.0 {
                return Err(Error::config(
                    e.line("t_stop").max(e.line("t_start")),
                    "t_stop must exceed t_start",
                ));
            }
            let photon_number = e.float("photon_number")?;
            if let Some(n) = photon_number {
                if kind != ScenarioKind::Coherent {
                    return Err(Error::config(
                        e.line("photon_number"),
                        "photon_number applies to coherent pulses only",
                    ));
                }
                if !(n > 0.0) {
                    return Err(Error::config(
                        e.line("photon_number"),
                        "photon_number must be positive",
                    ));
                }
            }
            (Some(shape), Some(support), photon_number)
        }
    };

    let t0 = e.float("t0")?.unwrap_or(support.map_or(0.0, |s| s.0));
    let t_max = e.float("t_max")?.unwrap_or(10.0 / gamma);
    let dt = e.float("dt")?.unwrap_or(1e-3 / gamma);
    if !(dt > 0.0) {
        return Err(Error::config(e.line("dt"), "dt must be positive"));
    }
    if t_max <= t0 {
        return Err(Error::config(
            e.line("t_max").max(e.line("t0")),
            "t_max must exceed t0",
        ));
    }

    let default_z = match kind {
        ScenarioKind::Spontaneous => 1.0,
        _ => -1.0,
    };
    let (x, y, z) = (
        e.float("initial_x")?.unwrap_or(0.0),
        e.float("initial_y")?.unwrap_or(0.0),
        e.float("initial_z")?.unwrap_or(default_z),
    );
    let bloch_line = e
        .line("initial_x")
        .max(e.line("initial_y"))
        .max(e.line("initial_z"));
    let initial =
        QubitState::new(x, y, z).map_err(|err| Error::config(bloch_line, err.to_string()))?;
    if kind == ScenarioKind::SinglePhoton && initial != QubitState::GROUND {
        return Err(Error::config(
            bloch_line,
            "single_photon scenarios start from the ground state",
        ));
    }

    let oracle = OracleOptions {
        enabled: e.parse_with("oracle", parse_bool)?.unwrap_or(false),
        dt: e.float("oracle_dt")?.unwrap_or(1e-2 / gamma),
        n_max: e.parse("oracle_n_max")?,
        full_fock: e
            .parse_with("oracle_full_fock", parse_bool)?
            .unwrap_or(false),
    };
    if !(oracle.dt > 0.0) {
        return Err(Error::config(
            e.line("oracle_dt"),
            "oracle_dt must be positive",
        ));
    }
    if oracle.n_max == Some(0) {
        return Err(Error::config(
            e.line("oracle_n_max"),
            "oracle_n_max must be at least 1",
        ));
    }

    let emit = e.parse("emit")?.unwrap_or(EmitKind::Trajectory);
    let sweep_dt = match e.get("sweep_dt") {
        None => vec![0.1 / gamma, 0.05 / gamma, 0.025 / gamma, 0.0125 / gamma],
        Some(entry) => entry
            .value
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|err| Error::config(entry.line, format!("`sweep_dt`: {err}")))?,
    };
    if sweep_dt.len() < 3
        || sweep_dt.windows(2).any(|w| !(w[1] < w[0]))
        || sweep_dt.iter().any(|d| !(*d > 0.0))
    {
        return Err(Error::config(
            e.line("sweep_dt"),
            "sweep_dt needs at least three positive, strictly decreasing step sizes",
        ));
    }

    let cfg = ScenarioConfig {
        kind,
        shape,
        support,
        photon_number,
        t0,
        t_max,
        dt,
        initial,
        oracle,
        emit,
        sweep_dt,
        gamma,
        omega0,
    };
    // Surface grid and breakpoint problems now rather than mid-run.
    let grid = cfg
        .grid()
        .map_err(|err| Error::config(e.line("dt").max(e.line("t_max")), err.to_string()))?;
    if let Some(p) = cfg
        .pulse()
        .map_err(|err| Error::config(e.line("pulse"), err.to_string()))?
    {
        grid.pieces(&p.breakpoints()).map_err(|err| {
            Error::config(e.line("t_start").max(e.line("t_stop")), err.to_string())
        })?;
    }
    Ok(cfg)
}

impl Entries {
    fn parse_with<T>(
        &self,
        key: &str,
        f: impl Fn(&str) -> std::result::Result<T, String>,
    ) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => f(&e.value)
                .map(Some)
                .map_err(|err| Error::config(e.line, format!("`{key}`: {err}"))),
        }
    }
}

impl ScenarioConfig {
    pub fn units(&self) -> Result<UnitsConvention> {
        UnitsConvention::new(self.gamma, self.omega0)
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.t0, self.t_max, self.dt)
    }

    /// The input envelope, or `None` for spontaneous emission.
    pub fn pulse(&self) -> Result<Option<Pulse>> {
        let (Some(shape), Some(support)) = (self.shape, self.support) else {
            return Ok(None);
        };
        let p = match (self.kind, self.photon_number) {
            (ScenarioKind::SinglePhoton, _) => Pulse::single_photon(shape, support)?,
            (_, Some(n)) => Pulse::coherent_with_photons(shape, support, n)?,
            (_, None) => Pulse::coherent(shape, support)?,
        };
        Ok(Some(p))
    }

    /// Same scenario with the solver step replaced.
    pub fn with_dt(&self, dt: f64) -> ScenarioConfig {
        ScenarioConfig { dt, ..self.clone() }
    }

    /// Every resolved key, one `key = value` line each; parses back to an
    /// identical config.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("scenario", self.kind.name().into());
        if let Some(shape) = self.shape {
            match shape {
                Shape::RisingExponential { rate } => {
                    put("pulse", "rising_exponential".into());
                    put("rate", rate.to_string());
                }
                Shape::Gaussian { center, width } => {
                    put("pulse", "gaussian".into());
                    put("center", center.to_string());
                    put("width", width.to_string());
                }
                Shape::Square { start, duration } => {
                    put("pulse", "square".into());
                    put("start", start.to_string());
                    put("duration", duration.to_string());
                }
                Shape::Vacuum => {}
            }
        }
        if let Some((a, b)) = self.support {
            put("t_start", a.to_string());
            put("t_stop", b.to_string());
        }
        if let Some(n) = self.photon_number {
            put("photon_number", n.to_string());
        }
        put("t0", self.t0.to_string());
        put("t_max", self.t_max.to_string());
        put("dt", self.dt.to_string());
        put("initial_x", self.initial.x.to_string());
        put("initial_y", self.initial.y.to_string());
        put("initial_z", self.initial.z.to_string());
        put("oracle", self.oracle.enabled.to_string());
        put("oracle_dt", self.oracle.dt.to_string());
        if let Some(n) = self.oracle.n_max {
            put("oracle_n_max", n.to_string());
        }
        put("oracle_full_fock", self.oracle.full_fock.to_string());
        put("emit", self.emit.name().into());
        put(
            "sweep_dt",
            self.sweep_dt
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(", "),
        );
        put("gamma", self.gamma.to_string());
        put("omega0", self.omega0.to_string());
        s
    }
}
