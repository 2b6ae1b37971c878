//! Scenario configuration: a flat `key = value` text format.
//!
//! ```text
//! # comment
//! name = triple_barrier_paper
//! mass = 0.067                      # effective mass ratio m/mₑ
//! layer = 3.0 nm, 0.12 eV           # repeated, left to right
//! incidence = E1 + 2.0*Gamma1       # or: 12.33 meV | 0.01233 eV | doublet-center
//! poles = 4                         # truncation N
//! t_max = 10 tau1
//! points = 2000
//! x = L                             # or a position such as 41 nm
//! methods = exact, two-level-closed
//! output = fig1                     # file stem, defaults to the name
//! ```
//!
//! Keys other than `layer` may appear once. Heights accept `eV` or `meV`.

use std::fmt;
use std::path::Path;

use qshutter_core::dynamics::Method;
use qshutter_core::model::{PotentialProfile, MEV};
use qshutter_core::resonant::ResonantMode;

const TRIPLE_BARRIER: &str = include_str!("../../../configs/triple_barrier_paper.conf");
const DOUBLE_BARRIER: &str = include_str!("../../../configs/double_barrier_paper.conf");

/// Names of the configurations compiled into the binary.
pub const SHIPPED: [&str; 2] = ["triple_barrier_paper", "double_barrier_paper"];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line, 0 when the problem is not tied to a line.
    pub line: usize,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}, `{}`: {}", self.line, self.field, self.message)
        } else {
            write!(f, "`{}`: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn error(line: usize, field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

/// Incidence energy, possibly relative to the poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Incidence {
    /// eV
    Absolute(f64),
    /// 𝓔₁ + c·Γ₁
    FirstResonance { offset: f64 },
    /// (𝓔₁ + 𝓔₂)/2
    DoubletCenter,
}

impl Incidence {
    pub fn parse(text: &str) -> Result<Self, String> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "doublet-center" {
            return Ok(Incidence::DoubletCenter);
        }
        if let Some(rest) = compact.strip_prefix("E1") {
            if rest.is_empty() {
                return Ok(Incidence::FirstResonance { offset: 0.0 });
            }
            let (sign, term) = match rest.split_at(1) {
                ("+", t) => (1.0, t),
                ("-", t) => (-1.0, t),
                _ => return Err(format!("expected `E1 + c*Gamma1`, got `{text}`")),
            };
            let coefficient = if term == "Gamma1" {
                1.0
            } else {
                term.strip_suffix("*Gamma1")
                    .and_then(|c| c.parse::<f64>().ok())
                    .filter(|c| c.is_finite())
                    .ok_or_else(|| format!("expected `E1 + c*Gamma1`, got `{text}`"))?
            };
            return Ok(Incidence::FirstResonance {
                offset: sign * coefficient,
            });
        }
        let energy = parse_energy(text)?;
        if !(energy > 0.0) {
            return Err(format!("incidence energy must be positive, got `{text}`"));
        }
        Ok(Incidence::Absolute(energy))
    }

    /// Energy in eV given the modes sorted by resonance energy.
    pub fn resolve(&self, modes: &[ResonantMode]) -> Result<f64, String> {
        match *self {
            Incidence::Absolute(e) => Ok(e),
            Incidence::FirstResonance { offset } => {
                let first = modes.first().ok_or("no resonance found for `E1`")?;
                Ok(first.pole.position + offset * first.pole.width)
            }
            Incidence::DoubletCenter => {
                if modes.len() < 2 {
                    return Err("`doublet-center` needs two resonances".into());
                }
                Ok(0.5 * (modes[0].pole.position + modes[1].pole.position))
            }
        }
    }

    pub fn needs_doublet(&self) -> bool {
        matches!(self, Incidence::DoubletCenter)
    }
}

impl fmt::Display for Incidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Incidence::Absolute(e) => write!(f, "{} meV", e / MEV),
            Incidence::FirstResonance { offset } if *offset < 0.0 => write!(f, "E1 - {}*Gamma1", -offset),
            Incidence::FirstResonance { offset } => write!(f, "E1 + {offset}*Gamma1"),
            Incidence::DoubletCenter => write!(f, "doublet-center"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub mass: f64,
    /// (width nm, height eV)
    pub layers: Vec<(f64, f64)>,
    pub incidence: Incidence,
    pub poles: usize,
    /// in units of τ₁
    pub t_max: f64,
    pub points: usize,
    /// nm; `None` means the right edge L
    pub x: Option<f64>,
    pub methods: Vec<Method>,
    pub output: String,
}

impl ScenarioConfig {
    pub fn profile(&self) -> qshutter_core::Result<PotentialProfile> {
        PotentialProfile::build(&self.layers, self.mass)
    }

    /// Pole count actually searched: at least two when a doublet is needed.
    pub fn pole_count(&self) -> usize {
        let doublet = self.incidence.needs_doublet()
            || self
                .methods
                .iter()
                .any(|m| matches!(m, Method::DoubletM | Method::TwoLevelClosed));
        if doublet {
            self.poles.max(2)
        } else {
            self.poles
        }
    }
}

fn split_unit(text: &str) -> (&str, &str) {
    let text = text.trim();
    match text.find(|c: char| c.is_whitespace()) {
        Some(i) => (text[..i].trim(), text[i..].trim()),
        None => (text, ""),
    }
}

fn parse_number(text: &str) -> Result<f64, String> {
    text.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{text}` is not a number"))
}

/// `12.3 meV` or `0.0123 eV`, returned in eV.
pub fn parse_energy(text: &str) -> Result<f64, String> {
    let (value, unit) = split_unit(text);
    let value = parse_number(value)?;
    match unit {
        "eV" => Ok(value),
        "meV" => Ok(value * MEV),
        "" => Err(format!("`{text}` needs a unit (eV or meV)")),
        other => Err(format!("unknown energy unit `{other}`")),
    }
}

fn parse_length(text: &str) -> Result<f64, String> {
    let (value, unit) = split_unit(text);
    let value = parse_number(value)?;
    match unit {
        "nm" => Ok(value),
        "" => Err(format!("`{text}` needs a unit (nm)")),
        other => Err(format!("unknown length unit `{other}`")),
    }
}

fn parse_count(text: &str) -> Result<usize, String> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| format!("`{}` is not a non-negative integer", text.trim()))
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut name = None;
    let mut mass = None;
    let mut layers = Vec::new();
    let mut incidence = None;
    let mut poles = None;
    let mut t_max = None;
    let mut points = None;
    let mut x: Option<Option<f64>> = None;
    let mut methods = None;
    let mut output = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| error(line, content, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(error(line, key, "missing value"));
        }
        let once = |slot: bool| -> Result<(), ConfigError> {
            if slot {
                Err(error(line, key, "given more than once"))
            } else {
                Ok(())
            }
        };
        let at = |m: String| error(line, key, m);
        match key {
            "name" => {
                once(name.is_some())?;
                name = Some(value.to_string());
            }
            "mass" => {
                once(mass.is_some())?;
                let m = parse_number(value).map_err(at)?;
                if !(m > 0.0) {
                    return Err(error(line, key, format!("mass ratio must be positive, got {m}")));
                }
                mass = Some(m);
            }
            "layer" => {
                let index = layers.len() + 1;
                let (w, h) = value
                    .split_once(',')
                    .ok_or_else(|| error(line, key, "expected `width nm, height eV`"))?;
                let width = parse_length(w).map_err(|m| error(line, key, format!("layer {index}: {m}")))?;
                let height = parse_energy(h).map_err(|m| error(line, key, format!("layer {index}: {m}")))?;
                if !(width > 0.0) {
                    return Err(error(
                        line,
                        key,
                        format!("layer {index}: width must be positive, got {width} nm"),
                    ));
                }
                if height < 0.0 {
                    return Err(error(
                        line,
                        key,
                        format!("layer {index}: height must be non-negative, got {height} eV"),
                    ));
                }
                layers.push((width, height));
            }
            "incidence" => {
                once(incidence.is_some())?;
                incidence = Some(Incidence::parse(value).map_err(at)?);
            }
            "poles" => {
                once(poles.is_some())?;
                let n = parse_count(value).map_err(at)?;
                if n == 0 {
                    return Err(error(line, key, "at least one pole is required"));
                }
                poles = Some(n);
            }
            "t_max" => {
                once(t_max.is_some())?;
                let (v, unit) = split_unit(value);
                if unit != "tau1" {
                    return Err(error(line, key, format!("`{value}` must be given in tau1")));
                }
                let v = parse_number(v).map_err(at)?;
                if !(v > 0.0) {
                    return Err(error(line, key, "must be positive"));
                }
                t_max = Some(v);
            }
            "points" => {
                once(points.is_some())?;
                let n = parse_count(value).map_err(at)?;
                if n < 2 {
                    return Err(error(line, key, "need at least two points"));
                }
                points = Some(n);
            }
            "x" => {
                once(x.is_some())?;
                x = Some(if value == "L" {
                    None
                } else {
                    Some(parse_length(value).map_err(at)?)
                });
            }
            "methods" => {
                once(methods.is_some())?;
                let list = value
                    .split(',')
                    .map(|tag| {
                        let tag = tag.trim();
                        Method::from_tag(tag).ok_or_else(|| {
                            let known: Vec<_> = Method::ALL.iter().map(|m| m.tag()).collect();
                            error(
                                line,
                                key,
                                format!("unknown method `{tag}` (known: {})", known.join(", ")),
                            )
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                methods = Some(list);
            }
            "output" => {
                once(output.is_some())?;
                output = Some(value.to_string());
            }
            other => return Err(error(line, other, "unknown key")),
        }
    }

    if layers.is_empty() {
        return Err(error(0, "layer", "at least one layer is required"));
    }
    let name = name.ok_or_else(|| error(0, "name", "missing"))?;
    let incidence = incidence.ok_or_else(|| error(0, "incidence", "missing"))?;
    let mass = mass.ok_or_else(|| error(0, "mass", "missing"))?;
    if let Some(Some(pos)) = x {
        let length: f64 = layers.iter().map(|l| l.0).sum();
        if !(0.0..=length).contains(&pos) {
            return Err(error(0, "x", format!("{pos} nm lies outside [0, {length}] nm")));
        }
    }
    Ok(ScenarioConfig {
        output: output.unwrap_or_else(|| name.clone()),
        name,
        mass,
        layers,
        incidence,
        poles: poles.unwrap_or(4),
        t_max: t_max.unwrap_or(10.0),
        points: points.unwrap_or(2000),
        x: x.unwrap_or(None),
        methods: methods.unwrap_or_else(|| vec![Method::Exact]),
    })
}

/// Text of a configuration compiled into the binary.
pub fn shipped(name: &str) -> Option<&'static str> {
    match name {
        "triple_barrier_paper" => Some(TRIPLE_BARRIER),
        "double_barrier_paper" => Some(DOUBLE_BARRIER),
        _ => None,
    }
}

/// A shipped configuration by name, otherwise a file path.
pub fn load_config(name_or_path: &str) -> Result<ScenarioConfig, crate::CliError> {
    let text = match shipped(name_or_path) {
        Some(text) => text.to_string(),
        None => std::fs::read_to_string(Path::new(name_or_path)).map_err(|source| crate::CliError::Io {
            path: name_or_path.into(),
            source,
        })?,
    };
    Ok(parse_config(&text)?)
}
