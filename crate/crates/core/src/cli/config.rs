//! Flat `key = value` experiment configuration.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64;
use thiserror::Error;

use crate::density::GridSpec;
use crate::fock::{BeamsplitterConvention, Statistics};
use crate::orbitals::{Geometry, OrbitalError};
use crate::wavefunction::{Coupling, Point2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {value}")]
    BadValue { key: String, value: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryKind {
    Triangle,
    Rectangle,
}

/// How conditional maps pick their conditioning points.
#[derive(Debug, Clone, PartialEq)]
pub enum Conditioning {
    SiteCenters,
    Points(Vec<Point2>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub statistics: Statistics,
    pub input: String,
    pub convention: BeamsplitterConvention,
    pub theta: f64,
    pub geometry: GeometryKind,
    pub a: f64,
    pub h: f64,
    pub b: f64,
    pub width: f64,
    pub particles: usize,
    pub coupling: Coupling,
    /// `C1` and `C2` as (magnitude, phase).
    pub c1: (f64, f64),
    pub c2: (f64, f64),
    pub grid: GridSpec,
    pub conditioning: Conditioning,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "run".into(),
            statistics: Statistics::Boson,
            input: "all".into(),
            convention: BeamsplitterConvention::Optical,
            theta: std::f64::consts::FRAC_PI_4,
            geometry: GeometryKind::Triangle,
            a: 2.0,
            h: 2.5,
            b: 2.5,
            width: 1.0,
            particles: 3,
            coupling: Coupling::Low,
            c1: (std::f64::consts::FRAC_1_SQRT_2, 0.0),
            c2: (std::f64::consts::FRAC_1_SQRT_2, 0.0),
            grid: GridSpec::default(),
            conditioning: Conditioning::SiteCenters,
            output_dir: PathBuf::from("out"),
            seed: 7,
        }
    }
}

const KEYS: &[&str] = &[
    "name",
    "statistics",
    "input",
    "convention",
    "theta",
    "geometry",
    "a",
    "h",
    "b",
    "width",
    "particles",
    "coupling",
    "c1_abs",
    "c1_arg",
    "c2_abs",
    "c2_arg",
    "x_min",
    "x_max",
    "y_min",
    "y_max",
    "nx",
    "ny",
    "conditioning",
    "output_dir",
    "seed",
];

fn bad(key: &str, value: &str) -> ConfigError {
    ConfigError::BadValue {
        key: key.into(),
        value: value.into(),
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| bad(key, value))
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: k + 1 })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    /// Applies a single `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or(ConfigError::Syntax { line: 0 })?;
        self.set(key.trim(), value.trim())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "name" => self.name = value.into(),
            "statistics" => {
                self.statistics = match value {
                    "boson" => Statistics::Boson,
                    "fermion" => Statistics::Fermion,
                    _ => return Err(bad(key, value)),
                }
            }
            "input" => self.input = value.into(),
            "convention" => {
                self.convention = match value {
                    "optical" => BeamsplitterConvention::Optical,
                    "atomic" => BeamsplitterConvention::Atomic,
                    _ => return Err(bad(key, value)),
                }
            }
            "theta" => self.theta = num(key, value)?,
            "geometry" => {
                self.geometry = match value {
                    "triangle" => GeometryKind::Triangle,
                    "rectangle" | "square" => GeometryKind::Rectangle,
                    _ => return Err(bad(key, value)),
                }
            }
            "a" => self.a = num(key, value)?,
            "h" => self.h = num(key, value)?,
            "b" => self.b = num(key, value)?,
            "width" => self.width = num(key, value)?,
            "particles" => self.particles = num(key, value)?,
            "coupling" => {
                self.coupling = match value {
                    "low" => Coupling::Low,
                    "high" => Coupling::High,
                    _ => return Err(bad(key, value)),
                }
            }
            "c1_abs" => self.c1.0 = num(key, value)?,
            "c1_arg" => self.c1.1 = num(key, value)?,
            "c2_abs" => self.c2.0 = num(key, value)?,
            "c2_arg" => self.c2.1 = num(key, value)?,
            "x_min" => self.grid.x_min = num(key, value)?,
            "x_max" => self.grid.x_max = num(key, value)?,
            "y_min" => self.grid.y_min = num(key, value)?,
            "y_max" => self.grid.y_max = num(key, value)?,
            "nx" => self.grid.nx = num(key, value)?,
            "ny" => self.grid.ny = num(key, value)?,
            "conditioning" => {
                self.conditioning = parse_conditioning(value).ok_or_else(|| bad(key, value))?
            }
            "output_dir" => self.output_dir = PathBuf::from(value),
            "seed" => self.seed = num(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    /// Every key in a fixed order; `parse(serialize(c)) == c`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let _ = writeln!(out, "{key} = {}", self.get(key));
        }
        out
    }

    fn get(&self, key: &str) -> String {
        match key {
            "name" => self.name.clone(),
            "statistics" => self.statistics.to_string(),
            "input" => self.input.clone(),
            "convention" => match self.convention {
                BeamsplitterConvention::Optical => "optical".into(),
                BeamsplitterConvention::Atomic => "atomic".into(),
            },
            "theta" => self.theta.to_string(),
            "geometry" => match self.geometry {
                GeometryKind::Triangle => "triangle".into(),
                GeometryKind::Rectangle => "rectangle".into(),
            },
            "a" => self.a.to_string(),
            "h" => self.h.to_string(),
            "b" => self.b.to_string(),
            "width" => self.width.to_string(),
            "particles" => self.particles.to_string(),
            "coupling" => self.coupling.to_string(),
            "c1_abs" => self.c1.0.to_string(),
            "c1_arg" => self.c1.1.to_string(),
            "c2_abs" => self.c2.0.to_string(),
            "c2_arg" => self.c2.1.to_string(),
            "x_min" => self.grid.x_min.to_string(),
            "x_max" => self.grid.x_max.to_string(),
            "y_min" => self.grid.y_min.to_string(),
            "y_max" => self.grid.y_max.to_string(),
            "nx" => self.grid.nx.to_string(),
            "ny" => self.grid.ny.to_string(),
            "conditioning" => match &self.conditioning {
                Conditioning::SiteCenters => "sites".into(),
                Conditioning::Points(ps) => ps
                    .iter()
                    .map(|p| format!("{},{}", p[0], p[1]))
                    .collect::<Vec<_>>()
                    .join(";"),
            },
            "output_dir" => self.output_dir.display().to_string(),
            "seed" => self.seed.to_string(),
            _ => unreachable!("key list is fixed"),
        }
    }

    pub fn geometry(&self) -> Result<Geometry, OrbitalError> {
        match self.geometry {
            GeometryKind::Triangle => Geometry::triangle(self.a, self.h),
            GeometryKind::Rectangle => Geometry::rectangle(self.a, self.b),
        }
    }

    pub fn c1(&self) -> Complex64 {
        Complex64::from_polar(self.c1.0, self.c1.1)
    }

    pub fn c2(&self) -> Complex64 {
        Complex64::from_polar(self.c2.0, self.c2.1)
    }

    /// Checks the fields the density experiment depends on.
    pub fn validate_density(&self) -> Result<(), ConfigError> {
        let geometry = self
            .geometry()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(ConfigError::Invalid(format!(
                "width must be positive, got {}",
                self.width
            )));
        }
        if geometry.site_count() != self.particles {
            return Err(ConfigError::Invalid(format!(
                "{} particles need the {} geometry",
                self.particles,
                if self.particles == 3 {
                    "triangle"
                } else {
                    "rectangle"
                }
            )));
        }
        self.grid
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}

fn parse_conditioning(value: &str) -> Option<Conditioning> {
    if value == "sites" {
        return Some(Conditioning::SiteCenters);
    }
    let points = value
        .split(';')
        .map(|pair| {
            let (x, y) = pair.split_once(',')?;
            Some([x.trim().parse().ok()?, y.trim().parse().ok()?])
        })
        .collect::<Option<Vec<Point2>>>()?;
    (!points.is_empty()).then_some(Conditioning::Points(points))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_default_and_custom() {
        let d = ExperimentConfig::default();
        assert_eq!(ExperimentConfig::parse(&d.serialize()).unwrap(), d);
        let mut c = d.clone();
        for o in [
            "statistics=fermion",
            "theta=0.1",
            "geometry=rectangle",
            "b=3.25",
            "conditioning=0.5,-1;2,3",
        ] {
            c.apply_override(o).unwrap();
        }
        c.c1 = (0.3, 1.0 / 3.0);
        assert_eq!(ExperimentConfig::parse(&c.serialize()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            ExperimentConfig::parse("nope = 1"),
            Err(ConfigError::UnknownKey(_))
        ));
        assert!(matches!(
            ExperimentConfig::parse("a 1"),
            Err(ConfigError::Syntax { line: 1 })
        ));
        assert!(matches!(
            ExperimentConfig::parse("a = x"),
            Err(ConfigError::BadValue { .. })
        ));
        let c = ExperimentConfig {
            a: -1.0,
            ..ExperimentConfig::default()
        };
        assert!(c.validate_density().is_err());
        let c = ExperimentConfig {
            particles: 4,
            ..ExperimentConfig::default()
        };
        assert!(c.validate_density().is_err());
    }
}
