//! Flat `key = value` experiment files.
//!
//! ```text
//! # comment
//! profile = logical
//! n = 3, 6, 11
//! m = 16:160:16
//! p0 = 0.975
//! pz = 0.025
//! ```
//!
//! Sweepable keys take comma-separated lists and `start:stop[:step]`
//! inclusive ranges. Sweep points are the cartesian product of all lists.

use std::collections::BTreeMap;
use std::fmt;

use super::grid::ternary_grid;
use crate::des::LossMode;
use crate::hardware::HardwareProfile;
use crate::protocol::{CheckTolerances, ShotConfig, TraitorPlacement};
use crate::quantum::PauliParams;

/// Largest network size the simulator is validated at; larger ones warn.
pub const MAX_TABLE_PLAYERS: usize = 11;

const KEYS: &[&str] = &[
    "profile",
    "n",
    "t",
    "m",
    "p0",
    "px",
    "py",
    "pz",
    "ternary_total",
    "ternary_resolution",
    "alpha_db_per_km",
    "length_km",
    "loss_mode",
    "t1_s",
    "t2_s",
    "transit_s",
    "gamma2",
    "commander_loyal",
    "runs",
    "shots",
    "seed",
    "theta",
    "epsilon",
    "classical_delay_s",
    "traitor_placement",
    "output",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{field}: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Logical,
    Superconducting,
    Photonic,
}

impl ProfileKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProfileKind::Logical => "logical",
            ProfileKind::Superconducting => "superconducting",
            ProfileKind::Photonic => "photonic",
        }
    }
}

/// One fully specified point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub n: usize,
    pub t: usize,
    pub m: usize,
    pub profile: HardwareProfile,
    pub commander_loyal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub profile: ProfileKind,
    pub n: Vec<usize>,
    pub t: Vec<usize>,
    pub m: Vec<usize>,
    pub pauli: Vec<PauliParams>,
    pub alpha: Vec<f64>,
    pub length: Vec<f64>,
    pub loss_mode: LossMode,
    pub t1: Vec<f64>,
    /// `None` means T2 = T1.
    pub t2: Option<Vec<f64>>,
    pub transit: Vec<f64>,
    pub gamma2: Option<Vec<f64>>,
    pub commander_loyal: Vec<bool>,
    pub runs: usize,
    pub shots: usize,
    pub seed: u64,
    pub tolerances: CheckTolerances,
    pub classical_delay: f64,
    pub placement: TraitorPlacement,
    pub output: Option<String>,
    pub warnings: Vec<String>,
    canonical: String,
}

/// Raw key/value pairs in file order, before interpretation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::new(
                    format!("line {}", lineno + 1),
                    format!("expected `key = value`, got `{line}`"),
                ));
            };
            let key = key.trim().to_string();
            if !KEYS.contains(&key.as_str()) {
                return Err(ConfigError::new(key, "unknown key"));
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(ConfigError::new(key, "given more than once"));
            }
        }
        Ok(Self { entries })
    }

    /// Sets or replaces a key, as command-line overrides do.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(ConfigError::new(key, "unknown key"));
        }
        self.entries.insert(key.to_string(), value.trim().to_string());
        Ok(())
    }

    pub fn remove(&mut self, key: &str) {
        self.entries.remove(key);
    }

    /// Parses a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| ConfigError::new(assignment, "expected key=value"))?;
        self.set(k.trim(), v)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Sorted `key = value` lines; identical configs render identically.
    pub fn canonical(&self) -> String {
        self.entries
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    pub fn build(&self) -> Result<SweepConfig, ConfigError> {
        build(self)
    }
}

pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    RawConfig::parse(text)?.build()
}

fn parse_scalar<T: std::str::FromStr>(field: &str, s: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    s.trim()
        .parse()
        .map_err(|e| ConfigError::new(field, format!("cannot parse `{}`: {e}", s.trim())))
}

fn parse_usize_list(field: &str, s: &str) -> Result<Vec<usize>, ConfigError> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(parse_scalar(field, x)?),
            [a, b] | [a, b, _] => {
                let a: usize = parse_scalar(field, a)?;
                let b: usize = parse_scalar(field, b)?;
                let step: usize = match parts.get(2) {
                    Some(st) => parse_scalar(field, st)?,
                    None => 1,
                };
                if step == 0 || b < a {
                    return Err(ConfigError::new(field, format!("empty range `{item}`")));
                }
                out.extend((a..=b).step_by(step));
            }
            _ => return Err(ConfigError::new(field, format!("bad range `{item}`"))),
        }
    }
    Ok(out)
}

fn parse_f64_list(field: &str, s: &str) -> Result<Vec<f64>, ConfigError> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(parse_scalar(field, x)?),
            [a, b, st] => {
                let a: f64 = parse_scalar(field, a)?;
                let b: f64 = parse_scalar(field, b)?;
                let st: f64 = parse_scalar(field, st)?;
                if !(st > 0.0) || b < a {
                    return Err(ConfigError::new(field, format!("empty range `{item}`")));
                }
                // Index-based so that rounding never adds or drops an endpoint.
                let count = ((b - a) / st + 1e-9).floor() as usize + 1;
                out.extend((0..count).map(|i| a + i as f64 * st));
            }
            _ => {
                return Err(ConfigError::new(
                    field,
                    format!("float ranges need start:stop:step, got `{item}`"),
                ))
            }
        }
    }
    for &v in &out {
        if !v.is_finite() {
            return Err(ConfigError::new(field, format!("non-finite value {v}")));
        }
    }
    Ok(out)
}

fn parse_bool(field: &str, s: &str) -> Result<bool, ConfigError> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(ConfigError::new(field, format!("expected a boolean, got `{other}`"))),
    }
}

struct Reader<'a> {
    raw: &'a RawConfig,
    used: Vec<&'static str>,
}

impl<'a> Reader<'a> {
    fn take(&mut self, key: &'static str) -> Option<&'a str> {
        self.used.push(key);
        self.raw.get(key)
    }

    fn usizes(&mut self, key: &'static str, default: Option<usize>) -> Result<Vec<usize>, ConfigError> {
        match (self.take(key), default) {
            (Some(s), _) => parse_usize_list(key, s),
            (None, Some(d)) => Ok(vec![d]),
            (None, None) => Err(ConfigError::new(key, "required")),
        }
    }

    fn floats(&mut self, key: &'static str, default: Option<f64>) -> Result<Vec<f64>, ConfigError> {
        match (self.take(key), default) {
            (Some(s), _) => parse_f64_list(key, s),
            (None, Some(d)) => Ok(vec![d]),
            (None, None) => Err(ConfigError::new(key, "required")),
        }
    }

    fn opt_floats(&mut self, key: &'static str) -> Result<Option<Vec<f64>>, ConfigError> {
        self.take(key).map(|s| parse_f64_list(key, s)).transpose()
    }

    fn scalar<T: std::str::FromStr>(&mut self, key: &'static str, default: T) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.take(key).map_or(Ok(default), |s| parse_scalar(key, s))
    }
}

fn build(raw: &RawConfig) -> Result<SweepConfig, ConfigError> {
    let mut r = Reader {
        raw,
        used: Vec::new(),
    };
    let profile = match r.take("profile").unwrap_or("logical") {
        "logical" => ProfileKind::Logical,
        "superconducting" => ProfileKind::Superconducting,
        "photonic" => ProfileKind::Photonic,
        other => return Err(ConfigError::new("profile", format!("unknown profile `{other}`"))),
    };

    let n = r.usizes("n", None)?;
    let t = r.usizes("t", Some(0))?;
    let m = r.usizes("m", None)?;
    let mut warnings = Vec::new();
    for &nv in &n {
        if nv < 3 {
            return Err(ConfigError::new("n", format!("need at least 3 players, got {nv}")));
        }
        if nv > MAX_TABLE_PLAYERS {
            warnings.push(format!("n = {nv} is above the validated maximum of {MAX_TABLE_PLAYERS}"));
        }
        for &tv in &t {
            if tv >= nv {
                return Err(ConfigError::new(
                    "t",
                    format!("traitor count {tv} must be below player count {nv}"),
                ));
            }
        }
    }
    if m.contains(&0) {
        return Err(ConfigError::new("m", "need at least one tuple"));
    }

    let mut pauli = Vec::new();
    let (mut alpha, mut length, mut loss_mode) = (Vec::new(), Vec::new(), LossMode::Unheralded);
    let (mut t1, mut t2, mut transit, mut gamma2) = (Vec::new(), None, Vec::new(), None);
    match profile {
        ProfileKind::Logical => {
            pauli = logical_points(&mut r)?;
        }
        ProfileKind::Superconducting => {
            t1 = r.floats("t1_s", None)?;
            t2 = r.opt_floats("t2_s")?;
            transit = r.floats("transit_s", None)?;
            gamma2 = r.opt_floats("gamma2")?;
        }
        ProfileKind::Photonic => {
            alpha = r.floats("alpha_db_per_km", None)?;
            length = r.floats("length_km", None)?;
            loss_mode = match r.take("loss_mode").unwrap_or("unheralded") {
                "heralded" => LossMode::Heralded,
                "unheralded" => LossMode::Unheralded,
                other => {
                    return Err(ConfigError::new(
                        "loss_mode",
                        format!("expected heralded or unheralded, got `{other}`"),
                    ))
                }
            };
        }
    }

    let commander_loyal = match r.take("commander_loyal") {
        Some(s) => s
            .split(',')
            .map(|b| parse_bool("commander_loyal", b))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![true],
    };
    let runs: usize = r.scalar("runs", 10)?;
    let shots: usize = r.scalar("shots", 30)?;
    if runs == 0 {
        return Err(ConfigError::new("runs", "must be at least 1"));
    }
    if shots == 0 {
        return Err(ConfigError::new("shots", "must be at least 1"));
    }
    let seed: u64 = r.scalar("seed", 0)?;
    let theta: f64 = r.scalar("theta", 0.25)?;
    let epsilon: f64 = r.scalar("epsilon", 0.0)?;
    if !(0.0..=0.5).contains(&theta) {
        return Err(ConfigError::new("theta", format!("{theta} outside [0, 0.5]")));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(ConfigError::new("epsilon", format!("{epsilon} outside [0, 1]")));
    }
    let classical_delay: f64 = r.scalar("classical_delay_s", 0.0)?;
    if !(classical_delay >= 0.0 && classical_delay.is_finite()) {
        return Err(ConfigError::new("classical_delay_s", "must be a finite non-negative time"));
    }
    let placement = match r.take("traitor_placement").unwrap_or("random") {
        "random" => TraitorPlacement::Random,
        "first" => TraitorPlacement::First,
        other => {
            return Err(ConfigError::new(
                "traitor_placement",
                format!("expected random or first, got `{other}`"),
            ))
        }
    };
    let output = r.take("output").map(str::to_string);

    for key in raw.entries.keys() {
        if !r.used.contains(&key.as_str()) {
            return Err(ConfigError::new(
                key.clone(),
                format!("not used by the {} profile", profile.as_str()),
            ));
        }
    }

    let config = SweepConfig {
        profile,
        n,
        t,
        m,
        pauli,
        alpha,
        length,
        loss_mode,
        t1,
        t2,
        transit,
        gamma2,
        commander_loyal,
        runs,
        shots,
        seed,
        tolerances: CheckTolerances { theta, epsilon },
        classical_delay,
        placement,
        output,
        warnings,
        canonical: raw.canonical(),
    };
    for p in config.hardware_points() {
        p.validate().map_err(|e| ConfigError::new(profile_field(profile), e.to_string()))?;
    }
    Ok(config)
}

fn profile_field(kind: ProfileKind) -> &'static str {
    match kind {
        ProfileKind::Logical => "p0",
        ProfileKind::Superconducting => "t1_s",
        ProfileKind::Photonic => "length_km",
    }
}

fn logical_points(r: &mut Reader) -> Result<Vec<PauliParams>, ConfigError> {
    let total = r.take("ternary_total");
    let resolution = r.take("ternary_resolution");
    if total.is_some() || resolution.is_some() {
        for key in ["p0", "px", "py", "pz"] {
            if r.raw.get(key).is_some() {
                return Err(ConfigError::new(key, "cannot be combined with a ternary grid"));
            }
        }
        let total: f64 = parse_scalar("ternary_total", total.unwrap_or("0.025"))?;
        let resolution: usize = parse_scalar("ternary_resolution", resolution.unwrap_or("13"))?;
        return ternary_grid(total, resolution);
    }
    let p0 = r.opt_floats("p0")?;
    let px = r.floats("px", Some(0.0))?;
    let py = r.floats("py", Some(0.0))?;
    let pz = r.floats("pz", Some(0.0))?;
    let p0_list = p0.clone().unwrap_or_else(|| vec![f64::NAN]);
    let mut out = Vec::new();
    for &a in &p0_list {
        for &x in &px {
            for &y in &py {
                for &z in &pz {
                    let a = if a.is_nan() { 1.0 - x - y - z } else { a };
                    let params = PauliParams::new(a, x, y, z)
                        .map_err(|e| ConfigError::new("p0", e.to_string()))?;
                    out.push(params);
                }
            }
        }
    }
    Ok(out)
}

impl SweepConfig {
    /// Every hardware setting in sweep order.
    pub fn hardware_points(&self) -> Vec<HardwareProfile> {
        match self.profile {
            ProfileKind::Logical => self
                .pauli
                .iter()
                .map(|&pauli| HardwareProfile::Logical { pauli })
                .collect(),
            ProfileKind::Superconducting => {
                let mut out = Vec::new();
                let gammas: Vec<Option<f64>> = match &self.gamma2 {
                    Some(g) => g.iter().copied().map(Some).collect(),
                    None => vec![None],
                };
                for &t1 in &self.t1 {
                    let t2s = self.t2.clone().unwrap_or_else(|| vec![t1]);
                    for &t2 in &t2s {
                        for &transit in &self.transit {
                            for &gamma2_override in &gammas {
                                out.push(HardwareProfile::Superconducting {
                                    t1,
                                    t2,
                                    transit,
                                    gamma2_override,
                                });
                            }
                        }
                    }
                }
                out
            }
            ProfileKind::Photonic => {
                let mut out = Vec::new();
                for &alpha in &self.alpha {
                    for &length in &self.length {
                        out.push(HardwareProfile::Photonic {
                            alpha,
                            length,
                            loss_mode: self.loss_mode,
                        });
                    }
                }
                out
            }
        }
    }

    /// The cartesian product of all sweep lists, in a fixed order.
    pub fn points(&self) -> Vec<SweepPoint> {
        let hw = self.hardware_points();
        let mut out = Vec::new();
        for &n in &self.n {
            for &t in &self.t {
                for &m in &self.m {
                    for &profile in &hw {
                        for &commander_loyal in &self.commander_loyal {
                            out.push(SweepPoint {
                                n,
                                t,
                                m,
                                profile,
                                commander_loyal,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn shot_config(&self, point: &SweepPoint) -> ShotConfig {
        ShotConfig {
            n: point.n,
            t: point.t,
            m: point.m,
            profile: point.profile,
            commander_loyal: point.commander_loyal,
            tolerances: self.tolerances,
            classical_delay: self.classical_delay,
            placement: self.placement,
        }
    }

    pub fn total_shots(&self) -> usize {
        self.runs * self.shots
    }

    /// Sorted key/value rendering of the input, for manifests.
    pub fn canonical(&self) -> &str {
        &self.canonical
    }
}
