//! Run configuration: TOML file, presets, flag overrides and sweep axes.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use godel_c60::gauge::{FluxConfig, MonopoleConfig, C60_DEFECTS};
use godel_c60::geometry::GeometryParams;
use godel_c60::observables::{LevelSet, MLattice};
use godel_c60::spectrum::{Branch, TwiceM};
use godel_c60::verify::DEFAULT_SEED;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub alpha: f64,
    pub omega: f64,
    pub radius: f64,
    /// Number of conical defects `N`; the monopole charge is `N/8`.
    pub defects: u64,
    /// String flux `Φ_B`.
    pub flux: f64,
    /// `l²` of the Gödel-type class, used by `causality`.
    pub l2: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            omega: 0.0,
            radius: 1.0,
            defects: C60_DEFECTS,
            flux: 0.0,
            l2: 0.5,
        }
    }
}

impl ModelConfig {
    pub fn geometry(&self) -> Result<GeometryParams, CliError> {
        GeometryParams::new(self.alpha, self.omega, self.radius).map_err(CliError::from)
    }

    pub fn monopole(&self) -> MonopoleConfig {
        MonopoleConfig { defects: self.defects }
    }

    pub fn flux(&self) -> FluxConfig {
        FluxConfig::new(self.flux)
    }

    pub fn set(&mut self, param: SweepParam, value: f64) {
        match param {
            SweepParam::Alpha => self.alpha = value,
            SweepParam::Omega => self.omega = value,
            SweepParam::Radius => self.radius = value,
            SweepParam::Flux => self.flux = value,
            SweepParam::L2 => self.l2 = value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LevelsConfig {
    pub n_max: u32,
    /// Largest `|m|`; must sit on the chosen lattice.
    pub m_max: f64,
    pub lattice: MLattice,
    pub branch: Branch,
}

impl Default for LevelsConfig {
    fn default() -> Self {
        let d = LevelSet::default();
        Self {
            n_max: d.n_max,
            m_max: d.m_max.value(),
            lattice: d.lattice,
            branch: d.branch,
        }
    }
}

impl LevelsConfig {
    pub fn level_set(&self) -> Result<LevelSet, CliError> {
        let twice = 2.0 * self.m_max;
        if !(twice >= 0.0) || twice.fract() != 0.0 || twice > 1e6 {
            return Err(CliError::Config(format!(
                "levels.m_max must be a non-negative multiple of 1/2, got {}",
                self.m_max
            )));
        }
        let t = twice as i32;
        let on_lattice = match self.lattice {
            MLattice::HalfInteger => t % 2 == 1,
            MLattice::Integer => t % 2 == 0,
        };
        if !on_lattice {
            return Err(CliError::Config(format!(
                "levels.m_max = {} does not lie on the {:?} lattice",
                self.m_max, self.lattice
            )));
        }
        Ok(LevelSet {
            n_max: self.n_max,
            m_max: TwiceM(t),
            lattice: self.lattice,
            branch: self.branch,
            skip_invalid: true,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Alpha,
    Omega,
    Radius,
    Flux,
    L2,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Alpha => "alpha",
            SweepParam::Omega => "omega",
            SweepParam::Radius => "radius",
            SweepParam::Flux => "flux",
            SweepParam::L2 => "l2",
        }
    }
}

impl FromStr for SweepParam {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "alpha" => SweepParam::Alpha,
            "omega" => SweepParam::Omega,
            "radius" => SweepParam::Radius,
            "flux" | "phi_b" => SweepParam::Flux,
            "l2" => SweepParam::L2,
            _ => {
                return Err(CliError::Config(format!(
                    "unknown sweep parameter '{s}' (expected alpha, omega, radius, flux or l2)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub log: bool,
}

impl SweepAxis {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.count == 0 {
            return Err(CliError::Config(format!(
                "sweep over {}: count must be at least 1",
                self.param.name()
            )));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::Config(format!(
                "sweep over {}: bounds must be finite",
                self.param.name()
            )));
        }
        if self.log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(CliError::Config(format!(
                "sweep over {}: log spacing needs positive bounds",
                self.param.name()
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                if self.log {
                    (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect()
    }
}

impl FromStr for SweepAxis {
    type Err = CliError;

    /// `param:start:stop:count[:log]`
    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(4..=5).contains(&parts.len()) {
            return Err(CliError::Config(format!(
                "sweep '{s}' must look like param:start:stop:count[:log]"
            )));
        }
        let num = |i: usize, what: &str| -> Result<f64, CliError> {
            parts[i]
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("sweep '{s}': {what} '{}' is not a number", parts[i])))
        };
        let count = parts[3]
            .parse::<usize>()
            .map_err(|_| CliError::Config(format!("sweep '{s}': count '{}' is not a whole number", parts[3])))?;
        let log = match parts.get(4) {
            None | Some(&"lin") => false,
            Some(&"log") => true,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "sweep '{s}': spacing '{other}' must be lin or log"
                )))
            }
        };
        let axis = SweepAxis {
            param: parts[0].parse()?,
            start: num(1, "start")?,
            stop: num(2, "stop")?,
            count,
            log,
        };
        axis.validate()?;
        Ok(axis)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.param.name(), self.start, self.stop, self.count)?;
        if self.log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Structured,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: Option<String>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub model: ModelConfig,
    pub levels: LevelsConfig,
    pub sweep: Vec<SweepAxis>,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            model: ModelConfig::default(),
            levels: LevelsConfig::default(),
            sweep: Vec::new(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    C60,
}

impl Preset {
    pub fn apply(self, m: &mut ModelConfig) {
        match self {
            Preset::C60 => {
                m.defects = C60_DEFECTS;
                m.alpha = 1.0;
                m.radius = 1.0;
            }
        }
    }
}

impl RunConfig {
    /// Parses a TOML document; errors carry the line and field.
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration always serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for axis in &self.sweep {
            axis.validate()?;
        }
        self.levels.level_set()?;
        Ok(())
    }

    /// Model at every sweep point, first axis outermost.
    pub fn sweep_points(&self) -> Vec<ModelConfig> {
        let mut points = vec![self.model];
        for axis in &self.sweep {
            let vals = axis.values();
            points = points
                .iter()
                .flat_map(|p| {
                    vals.iter().map(move |&v| {
                        let mut q = *p;
                        q.set(axis.param, v);
                        q
                    })
                })
                .collect();
        }
        points
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        let a: SweepAxis = "omega:0:0.1:5".parse().unwrap();
        let v = a.values();
        assert_eq!(v.len(), 5);
        for (x, want) in v.iter().zip([0.0, 0.025, 0.05, 0.075, 0.1]) {
            assert!((x - want).abs() < 1e-15);
        }
        assert_eq!(v[4], 0.1);
        let b: SweepAxis = "radius:1:100:3:log".parse().unwrap();
        let v = b.values();
        assert_eq!(v.len(), 3);
        assert!((v[1] - 10.0).abs() < 1e-12);
        assert!("omega:0:1:0".parse::<SweepAxis>().is_err());
        assert!("spin:0:1:3".parse::<SweepAxis>().is_err());
        assert!("omega:0:1".parse::<SweepAxis>().is_err());
        assert!("omega:0:1:3:cubic".parse::<SweepAxis>().is_err());
        assert!("radius:0:1:3:log".parse::<SweepAxis>().is_err());
        assert_eq!(b.to_string().parse::<SweepAxis>().unwrap(), b);
    }

    #[test]
    fn single_point_sweep() {
        let a: SweepAxis = "flux:0.5:9:1".parse().unwrap();
        assert_eq!(a.values(), vec![0.5]);
    }

    #[test]
    fn cartesian_order() {
        let cfg = RunConfig {
            sweep: vec!["alpha:1:2:2".parse().unwrap(), "omega:0:0.1:3".parse().unwrap()],
            ..RunConfig::default()
        };
        let pts: Vec<(f64, f64)> = cfg.sweep_points().iter().map(|m| (m.alpha, m.omega)).collect();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], (1.0, 0.0));
        assert_eq!(pts[2], (1.0, 0.1));
        assert_eq!(pts[3], (2.0, 0.0));
    }

    #[test]
    fn level_lattice_checked() {
        let mut l = LevelsConfig::default();
        assert_eq!(l.level_set().unwrap().m_max, TwiceM(5));
        l.m_max = 2.0;
        assert!(l.level_set().is_err());
        l.lattice = MLattice::Integer;
        assert_eq!(l.level_set().unwrap().m_max, TwiceM(4));
        l.m_max = 0.3;
        assert!(l.level_set().is_err());
    }

    #[test]
    fn toml_round_trip() {
        let cfg = RunConfig {
            seed: 7,
            sweep: vec!["omega:0:0.2:4".parse().unwrap()],
            ..RunConfig::default()
        };
        assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn toml_errors_name_the_field() {
        let e = RunConfig::from_toml("[model]\nalpha = \"one\"\n").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("alpha"), "{msg}");
        assert!(msg.contains("line 2"), "{msg}");
        assert!(RunConfig::from_toml("[model]\nbeta = 1.0\n").is_err());
    }
}
