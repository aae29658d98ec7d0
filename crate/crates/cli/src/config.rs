//! Run configuration: key=value files merged with command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use slosh::assembly::AzimuthalIndex;
use slosh::geometry::{make_trapezoid_section, read_domain, DomainKind, PlanarDomain, ProfileParams, SILO_CAP_POINTS};
use slosh::mesh::Sizing;
use slosh::sloshing::{DEFAULT_GRAVITY, DEFAULT_SAMPLES};
use slosh::SloshError;

/// Keys accepted in config files; flags use the same names with dashes.
pub const KEYS: &[&str] = &[
    "shape",
    "shape_file",
    "h",
    "x",
    "y",
    "d",
    "top",
    "bottom",
    "width",
    "radius",
    "straight",
    "cap_points",
    "hole",
    "outer",
    "res",
    "grade",
    "res_max",
    "m",
    "k",
    "samples",
    "boundary_tol",
    "out",
    "g",
    "levels",
    "contours",
    "theta",
    "svg",
];

const SHAPES: &[(&str, &[&str])] = &[
    ("cylinder", &["h"]),
    ("trough", &["x", "y", "d"]),
    ("trapezoid", &["top", "bottom", "h"]),
    ("rect", &["width", "h"]),
    ("silo", &["radius", "straight", "cap_points"]),
    ("icefishing", &["hole", "outer", "h"]),
];

pub const DEFAULT_RES: f64 = 0.05;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Parses `key=value` lines; `#` starts a comment line.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return err(format!("line {}: expected key=value, got `{line}`", n + 1));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return err(format!("line {}: empty key", n + 1));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return err(format!("line {}: duplicate key `{k}`", n + 1));
        }
    }
    Ok(out)
}

/// Reads an optional config file and lays the flag values over it.
pub fn merge(file: Option<&Path>, flags: Vec<(&'static str, String)>) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = match file {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| ConfigError(format!("{}: {e}", p.display())))?;
            parse_kv(&text)?
        }
        None => BTreeMap::new(),
    };
    if let Some(k) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return err(format!("unknown config key `{k}`"));
    }
    for (k, v) in flags {
        map.insert(k.to_string(), v);
    }
    Ok(map)
}

#[derive(Clone, Debug, PartialEq)]
pub enum DomainSpec {
    Named { shape: String, params: BTreeMap<String, f64> },
    File(PathBuf),
}

impl DomainSpec {
    pub fn label(&self) -> String {
        match self {
            DomainSpec::Named { shape, .. } => shape.clone(),
            DomainSpec::File(p) => p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "domain".into()),
        }
    }

    fn param(&self, key: &str, default: f64) -> f64 {
        match self {
            DomainSpec::Named { params, .. } => params.get(key).copied().unwrap_or(default),
            DomainSpec::File(_) => default,
        }
    }

    /// Builds the profile. Parameter errors are config errors; a file
    /// that parses but describes a broken polygon is left to the mesher.
    pub fn build(&self) -> Result<PlanarDomain<f64>, SloshError> {
        let p = |k: &str, default: f64| self.param(k, default);
        match self {
            DomainSpec::File(path) => read_domain(path),
            DomainSpec::Named { shape, .. } => match shape.as_str() {
                "cylinder" => ProfileParams::Cylinder { depth: p("h", 1.0) }.build(),
                "trough" => ProfileParams::Trough { overhang: p("x", 1.0), rise: p("y", 1.0), wall_depth: p("d", 1.0) }.build(),
                "trapezoid" => {
                    ProfileParams::Trapezoid { top: p("top", 1.5), bottom: p("bottom", 1.0), depth: p("h", 1.0) }.build()
                }
                "rect" => {
                    let half = 0.5 * p("width", 2.0);
                    let mut d = make_trapezoid_section(half, half, p("h", 1.0))?;
                    d.name = "rect".into();
                    Ok(d)
                }
                "silo" => ProfileParams::Silo {
                    radius: p("radius", 1.0),
                    straight: p("straight", 1.0),
                    cap_points: p("cap_points", SILO_CAP_POINTS as f64) as usize,
                }
                .build(),
                "icefishing" => {
                    ProfileParams::IceFishing { hole: p("hole", 1.0), outer: p("outer", 10.0), depth: p("h", 10.0) }.build()
                }
                other => Err(SloshError::InvalidParameter(format!("unknown shape `{other}`"))),
            },
        }
    }

    /// Closed-form fundamental ν for shapes that have one.
    pub fn reference(&self, m: AzimuthalIndex) -> Option<f64> {
        let DomainSpec::Named { shape, .. } = self else {
            return None;
        };
        let h = self.param("h", 1.0);
        match (shape.as_str(), m.m()) {
            ("cylinder", 1) => slosh::sloshing::cylinder_oracle(h, 1.0, 0.0, 0.0).ok().map(|o| o.nu1),
            ("rect", 0) => {
                let k = std::f64::consts::PI / self.param("width", 2.0);
                slosh::sloshing::neumann_to_sloshing(k * k, h).ok()
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub domain: DomainSpec,
    pub sizing: Sizing<f64>,
    /// `None` picks `[0, 1, 2]` for axisymmetric domains and `[0]` otherwise.
    pub m_list: Option<Vec<AzimuthalIndex>>,
    pub k: usize,
    pub samples: usize,
    pub boundary_tol: Option<f64>,
    pub out: PathBuf,
    pub g: f64,
    pub levels: usize,
    pub contours: usize,
    pub theta: usize,
    pub svg: bool,
}

fn positive_f64(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>, ConfigError> {
    match map.get(key) {
        None => Ok(None),
        Some(s) => match s.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(Some(v)),
            _ => err(format!("`{key}` must be a positive number, got `{s}`")),
        },
    }
}

fn positive_usize(map: &BTreeMap<String, String>, key: &str) -> Result<Option<usize>, ConfigError> {
    match map.get(key) {
        None => Ok(None),
        Some(s) => match s.parse::<usize>() {
            Ok(v) if v > 0 => Ok(Some(v)),
            _ => err(format!("`{key}` must be a positive integer, got `{s}`")),
        },
    }
}

pub fn parse_m_list(s: &str) -> Result<Vec<AzimuthalIndex>, ConfigError> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map(AzimuthalIndex))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| ConfigError(format!("`m` must be a comma-separated list of non-negative integers, got `{s}`")))
}

impl RunConfig {
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let domain = match (map.get("shape"), map.get("shape_file")) {
            (Some(_), Some(_)) => return err("give either `shape` or `shape_file`, not both"),
            (None, None) => return err("no domain: set `shape` or `shape_file`"),
            (None, Some(f)) => {
                if let Some(k) = SHAPES.iter().flat_map(|s| s.1.iter()).find(|k| map.contains_key(**k)) {
                    return err(format!("`{k}` does not apply to a domain file"));
                }
                DomainSpec::File(PathBuf::from(f))
            }
            (Some(shape), None) => {
                let Some(&(_, allowed)) = SHAPES.iter().find(|s| s.0 == shape) else {
                    let names: Vec<&str> = SHAPES.iter().map(|s| s.0).collect();
                    return err(format!("unknown shape `{shape}` (expected one of {})", names.join(", ")));
                };
                let mut params = BTreeMap::new();
                for &key in SHAPES.iter().flat_map(|s| s.1.iter()) {
                    if !map.contains_key(key) {
                        continue;
                    }
                    if !allowed.contains(&key) {
                        return err(format!("`{key}` does not apply to shape `{shape}`"));
                    }
                    let v = if key == "cap_points" {
                        positive_usize(map, key)?.map(|v| v as f64)
                    } else {
                        positive_f64(map, key)?
                    };
                    params.insert(key.to_string(), v.unwrap());
                }
                DomainSpec::Named { shape: shape.clone(), params }
            }
        };
        let res = positive_f64(map, "res")?.unwrap_or(DEFAULT_RES);
        let sizing = match (map.get("grade"), positive_f64(map, "res_max")?) {
            (None, None) => Sizing::Uniform(res),
            (_, max) => {
                let rate = positive_f64(map, "grade")?.unwrap_or(0.0);
                let max = max.unwrap_or(10.0 * res);
                if max < res {
                    return err(format!("`res_max` ({max}) is below `res` ({res})"));
                }
                Sizing::Graded { near: res, rate, max }
            }
        };
        let m_list = map.get("m").map(|s| parse_m_list(s)).transpose()?;
        if let Some(list) = &m_list {
            let mut sorted = list.clone();
            sorted.sort();
            sorted.dedup();
            if list.is_empty() || sorted.len() != list.len() {
                return err("`m` must list distinct indices");
            }
        }
        let samples = positive_usize(map, "samples")?.unwrap_or(DEFAULT_SAMPLES);
        if samples < 3 {
            return err("`samples` must be at least 3");
        }
        let svg = match map.get("svg").map(String::as_str) {
            None | Some("false") => false,
            Some("true") => true,
            Some(s) => return err(format!("`svg` must be true or false, got `{s}`")),
        };
        Ok(RunConfig {
            domain,
            sizing,
            m_list,
            k: positive_usize(map, "k")?.unwrap_or(1),
            samples,
            boundary_tol: positive_f64(map, "boundary_tol")?,
            out: map.get("out").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".")),
            g: positive_f64(map, "g")?.unwrap_or(DEFAULT_GRAVITY),
            levels: positive_usize(map, "levels")?.unwrap_or(4),
            contours: positive_usize(map, "contours")?.unwrap_or(10),
            theta: positive_usize(map, "theta")?.unwrap_or(72),
            svg,
        })
    }

    pub fn m_list_for(&self, kind: DomainKind) -> Vec<AzimuthalIndex> {
        match (&self.m_list, kind) {
            (Some(l), _) => l.clone(),
            (None, DomainKind::Axisymmetric) => slosh::sloshing::default_m_list(),
            (None, DomainKind::Planar) => vec![AzimuthalIndex(0)],
        }
    }

    /// Creates the output directory.
    pub fn prepare_out(&self) -> Result<(), ConfigError> {
        std::fs::create_dir_all(&self.out)
            .map_err(|e| ConfigError(format!("cannot create output directory {}: {e}", self.out.display())))
    }
}
