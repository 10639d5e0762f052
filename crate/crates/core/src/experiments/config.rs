use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::ChannelFamily;
use crate::error::{Error, Result};
use crate::optimizer::OptConfig;
use crate::strategies::{InputMode, StrategyKind};

/// Default grid resolution per axis.
pub const DEFAULT_GRID_STEPS: usize = 50;

/// Output encoding for result tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

/// A channel-parameter pair as entered: raw η for depolarizing and bit flip,
/// fractions of π/2 for amplitude damping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaPoint {
    pub eta0: f64,
    pub eta1: f64,
}

/// A point resolved to raw channel parameters, keeping what the user typed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedPoint {
    pub eta0: f64,
    pub eta1: f64,
    pub eta0_input: f64,
    pub eta1_input: f64,
}

/// `steps` evenly spaced values from `min` to `max` inclusive, on both axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridSpec {
    /// Whole valid range for a family, in input units.
    pub fn full(steps: usize) -> Self {
        Self {
            min: 0.0,
            max: 1.0,
            steps,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.min + h * i as f64).collect()
    }

    /// Spacing between neighbouring values, in input units.
    pub fn spacing(&self) -> f64 {
        if self.steps < 2 {
            0.0
        } else {
            (self.max - self.min) / (self.steps - 1) as f64
        }
    }

    /// Lower-triangle cells (`η0 > η1`), row-major in `η0` then `η1`.
    pub fn lower_triangle(&self) -> Vec<EtaPoint> {
        let values = self.values();
        let mut cells = Vec::new();
        for (i, &eta0) in values.iter().enumerate() {
            for &eta1 in &values[..i] {
                cells.push(EtaPoint { eta0, eta1 });
            }
        }
        cells
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// Parses `MIN:MAX:STEPS`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Config(format!("grid must look like MIN:MAX:STEPS, got `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(Self {
            min: parts[0].trim().parse().map_err(|_| bad())?,
            max: parts[1].trim().parse().map_err(|_| bad())?,
            steps: parts[2].trim().parse().map_err(|_| bad())?,
        })
    }
}

/// Everything needed to run a curve or a difference sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub family: ChannelFamily,
    pub points: Vec<EtaPoint>,
    pub grid: Option<GridSpec>,
    /// Largest shot count on curves.
    pub n_max: usize,
    pub strategies: Vec<StrategyKind>,
    pub input_mode: InputMode,
    pub optimizer: OptConfig,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub jobs: Option<usize>,
    /// Record wall time per row; off by default so output is reproducible byte for byte.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            family: ChannelFamily::Depolarizing,
            points: Vec::new(),
            grid: None,
            n_max: 3,
            strategies: StrategyKind::ALL.to_vec(),
            input_mode: InputMode::Flat,
            optimizer: OptConfig::default(),
            seed: 0,
            out: None,
            format: OutputFormat::Csv,
            jobs: None,
            timing: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Checks every invariant that does not depend on the subcommand.
    pub fn validate(&self) -> Result<()> {
        if self.n_max == 0 {
            return Err(Error::Config("n_max must be at least 1".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::Config("at least one strategy is required".into()));
        }
        if let Some(grid) = &self.grid {
            if grid.steps < 2 {
                return Err(Error::Config("grid needs at least 2 steps per axis".into()));
            }
            if !(0.0..=1.0).contains(&grid.min)
                || !(0.0..=1.0).contains(&grid.max)
                || grid.min >= grid.max
            {
                return Err(Error::Config(format!(
                    "grid range {}:{} must satisfy 0 <= MIN < MAX <= 1 (in units of {})",
                    grid.min,
                    grid.max,
                    unit_name(self.family)
                )));
            }
        }
        for p in &self.points {
            self.resolve(*p)?;
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        Ok(())
    }

    /// Converts an entered point to raw parameters, enforcing range and `η0 > η1`.
    pub fn resolve(&self, p: EtaPoint) -> Result<ResolvedPoint> {
        let unit = self.family.eta_unit();
        for v in [p.eta0, p.eta1] {
            if !(0.0..=1.0).contains(&v) || v.is_nan() {
                return Err(Error::Config(format!(
                    "eta {v} outside [0, 1] (in units of {}) for {}",
                    unit_name(self.family),
                    self.family
                )));
            }
        }
        if p.eta0 <= p.eta1 {
            return Err(Error::Config(format!(
                "points need eta0 > eta1, got ({}, {})",
                p.eta0, p.eta1
            )));
        }
        Ok(ResolvedPoint {
            eta0: (p.eta0 * unit).min(self.family.eta_max()),
            eta1: (p.eta1 * unit).min(self.family.eta_max()),
            eta0_input: p.eta0,
            eta1_input: p.eta1,
        })
    }

    /// Optimizer settings with the run seed applied.
    pub fn opt_config(&self) -> OptConfig {
        OptConfig {
            seed: self.seed,
            ..self.optimizer.clone()
        }
    }

    /// Grid to sweep: the configured one or the default full-range grid.
    pub fn sweep_grid(&self) -> GridSpec {
        self.grid
            .unwrap_or_else(|| GridSpec::full(DEFAULT_GRID_STEPS))
    }

    /// Points for a curve run: explicit points, or the grid's lower triangle.
    pub fn curve_points(&self) -> Result<Vec<ResolvedPoint>> {
        let entered = if self.points.is_empty() {
            match &self.grid {
                Some(grid) => grid.lower_triangle(),
                None => {
                    return Err(Error::Config(
                        "curve needs --eta0/--eta1 points or a --grid".into(),
                    ))
                }
            }
        } else {
            self.points.clone()
        };
        entered.into_iter().map(|p| self.resolve(p)).collect()
    }
}

fn unit_name(family: ChannelFamily) -> &'static str {
    match family {
        ChannelFamily::AmplitudeDamping => "pi/2",
        _ => "1",
    }
}
