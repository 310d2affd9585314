//! Run configuration: defaults, then a flat `key = value` file, then flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use biharm_core::calculus::SubstitutionMode;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Markdown,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            _ => Err(format!("unsupported format '{s}' (json|markdown)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub sequential: bool,
    pub reproducible: bool,

    pub ids: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<SubstitutionMode>,
    pub with_corrections: bool,

    pub n_max: i64,
    pub exponent_n_max: i64,
    pub exponent_grid: usize,
    pub coefficient_grid: usize,

    pub pd_n_min: i64,
    pub pd_n_max: i64,
    pub pd_grid: usize,

    pub seed: u64,
    pub samples: usize,
    pub dims: Vec<usize>,
    pub tol: f64,
    /// `(α, a)` pairs for the oracle.
    pub points: Vec<(f64, f64)>,
    pub sharp_dims: Vec<usize>,
    pub sharp_iterations: usize,
    /// Where failing jets are written for replay.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay_dir: Option<PathBuf>,

    /// `(n, α)` pairs for the radial scan.
    pub radial_cases: Vec<(usize, f64)>,
    pub u0_range: (f64, f64),
    pub v0_range: (f64, f64),
    pub grid_u0: usize,
    pub grid_v0: usize,
    pub rmax: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dump_trajectories: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: String::new(),
            format: Format::Json,
            out: None,
            sequential: false,
            reproducible: false,
            ids: Vec::new(),
            mode: None,
            with_corrections: false,
            n_max: 100,
            exponent_n_max: 24,
            exponent_grid: 20,
            coefficient_grid: 20,
            pd_n_min: 5,
            pd_n_max: 100,
            pd_grid: 1000,
            seed: 1,
            samples: 1000,
            dims: vec![5, 6, 8],
            tol: 1e-9,
            points: vec![(2.0, 1.0), (3.5, 0.2)],
            sharp_dims: vec![5, 6, 7, 8],
            sharp_iterations: 400,
            replay_dir: None,
            radial_cases: vec![(5, 2.0), (6, 2.0), (6, 3.0), (8, 2.0)],
            u0_range: (0.1, 10.0),
            v0_range: (-10.0, 0.0),
            grid_u0: 10,
            grid_v0: 10,
            rmax: 50.0,
            dump_trajectories: None,
        }
    }
}

#[derive(Debug, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad(key: &str, v: &str, why: impl fmt::Display) -> ConfigError {
    ConfigError(format!("{key} = '{v}': {why}"))
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    v.trim().parse().map_err(|e| bad(key, v, e))
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: fmt::Display,
{
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| num(key, s))
        .collect()
}

fn pairs<A: FromStr, B: FromStr>(key: &str, v: &str) -> Result<Vec<(A, B)>, ConfigError>
where
    A::Err: fmt::Display,
    B::Err: fmt::Display,
{
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (a, b) = s
                .split_once(':')
                .ok_or_else(|| bad(key, v, "expected x:y pairs"))?;
            Ok((num(key, a)?, num(key, b)?))
        })
        .collect()
}

fn range<T: FromStr>(key: &str, v: &str) -> Result<(T, T), ConfigError>
where
    T::Err: fmt::Display,
{
    let (a, b) = v
        .split_once("..")
        .ok_or_else(|| bad(key, v, "expected lo..hi"))?;
    Ok((num(key, a)?, num(key, b)?))
}

/// `10x10`
pub fn parse_grid(v: &str) -> Result<(usize, usize), ConfigError> {
    let (a, b) = v
        .split_once('x')
        .ok_or_else(|| bad("grid", v, "expected AxB"))?;
    Ok((num("grid", a)?, num("grid", b)?))
}

pub fn parse_mode(v: &str) -> Result<SubstitutionMode, ConfigError> {
    match v.trim() {
        "free" => Ok(SubstitutionMode::Free),
        "onshell" | "on_shell" => Ok(SubstitutionMode::OnShell),
        _ => Err(bad("mode", v, "expected free|onshell")),
    }
}

fn flag(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(bad(key, v, "expected true|false")),
    }
}

impl RunConfig {
    /// Applies one setting. Keys use the long flag names with `-` or `_`.
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), ConfigError> {
        let v = v.trim();
        match key.trim().replace('-', "_").as_str() {
            "format" => self.format = v.parse().map_err(|e| bad(key, v, e))?,
            "out" => self.out = Some(PathBuf::from(v)),
            "sequential" => self.sequential = flag(key, v)?,
            "reproducible" => self.reproducible = flag(key, v)?,
            "ids" => self.ids = list(key, v)?,
            "mode" => self.mode = Some(parse_mode(v)?),
            "with_corrections" => self.with_corrections = flag(key, v)?,
            "n_max" => self.n_max = num(key, v)?,
            "exponent_n_max" => self.exponent_n_max = num(key, v)?,
            "exponent_grid" => self.exponent_grid = num(key, v)?,
            "coefficient_grid" => self.coefficient_grid = num(key, v)?,
            "n" | "pd_n" => (self.pd_n_min, self.pd_n_max) = range(key, v)?,
            "grid" | "pd_grid" => self.pd_grid = num(key, v)?,
            "seed" => self.seed = num(key, v)?,
            "samples" => self.samples = num(key, v)?,
            "dims" => self.dims = list(key, v)?,
            "tol" => self.tol = num(key, v)?,
            "points" => self.points = pairs(key, v)?,
            "sharp_dims" => self.sharp_dims = list(key, v)?,
            "sharp_iterations" => self.sharp_iterations = num(key, v)?,
            "replay_dir" => self.replay_dir = Some(PathBuf::from(v)),
            "radial_cases" => self.radial_cases = pairs(key, v)?,
            "u0_range" => self.u0_range = range(key, v)?,
            "v0_range" => self.v0_range = range(key, v)?,
            "radial_grid" => (self.grid_u0, self.grid_v0) = parse_grid(v)?,
            "rmax" => self.rmax = num(key, v)?,
            "dump_trajectories" => self.dump_trajectories = Some(PathBuf::from(v)),
            other => return Err(ConfigError(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn load_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let body = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("config {}: {e}", path.display())))?;
        for (i, line) in body.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                ConfigError(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    i + 1
                ))
            })?;
            self.set(k, v)
                .map_err(|e| ConfigError(format!("{}:{}: {e}", path.display(), i + 1)))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |m: String| Err(ConfigError(m));
        if self.n_max < 5 {
            return err(format!("n-max {} < 5", self.n_max));
        }
        if self.exponent_n_max < 5 || self.exponent_grid == 0 {
            return err("exponent grid needs n-max >= 5 and a nonzero grid".into());
        }
        if self.pd_n_min < 5 || self.pd_n_max < self.pd_n_min || self.pd_grid == 0 {
            return err(format!(
                "scan-pd range {}..{} grid {}",
                self.pd_n_min, self.pd_n_max, self.pd_grid
            ));
        }
        if self.samples == 0 || self.dims.is_empty() || self.points.is_empty() {
            return err("oracle needs samples, dims and points".into());
        }
        if let Some(n) = self.dims.iter().find(|&&n| n < 2) {
            return err(format!("oracle dimension {n} < 2"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return err(format!("tol {} must be positive", self.tol));
        }
        if let Some(n) = self.sharp_dims.iter().find(|&&n| n < 2) {
            return err(format!("sharp-constant dimension {n} < 2"));
        }
        for &(n, a) in &self.radial_cases {
            if n < 5 || a.is_nan() || a <= 1.0 {
                return err(format!(
                    "radial case n = {n}, alpha = {a} needs n >= 5, alpha > 1"
                ));
            }
        }
        let (ulo, uhi) = self.u0_range;
        if !(ulo > 0.0 && uhi >= ulo) {
            return err(format!("u0 range {ulo}..{uhi}"));
        }
        let (vlo, vhi) = self.v0_range;
        if !(vhi <= 0.0 && vlo <= vhi) {
            return err(format!("v0 range {vlo}..{vhi} must lie in (-inf, 0]"));
        }
        if self.rmax.is_nan() || self.rmax <= 0.0 {
            return err(format!("rmax {}", self.rmax));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_and_values() {
        let mut c = RunConfig::default();
        c.set("seed", "7").unwrap();
        c.set("dims", "5, 6").unwrap();
        c.set("points", "2:1,3:0.5").unwrap();
        c.set("n", "5..20").unwrap();
        c.set("radial-grid", "3x4").unwrap();
        c.set("format", "markdown").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.dims, vec![5, 6]);
        assert_eq!(c.points, vec![(2.0, 1.0), (3.0, 0.5)]);
        assert_eq!((c.pd_n_min, c.pd_n_max), (5, 20));
        assert_eq!((c.grid_u0, c.grid_v0), (3, 4));
        assert_eq!(c.format, Format::Markdown);
        assert!(c.set("nope", "1").is_err());
        assert!(c.set("samples", "many").is_err());
        assert!(c.validate().is_ok());
    }

    #[test]
    fn validation_rejects_positive_v0() {
        let mut c = RunConfig::default();
        c.set("v0_range", "-1..2").unwrap();
        assert!(c.validate().is_err());
    }
}
