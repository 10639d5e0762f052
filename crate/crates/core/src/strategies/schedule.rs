use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use super::StrategyKind;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum InputMode {
    /// One `r` per shot, shared by every outcome history.
    #[default]
    Flat,
    /// `r` chosen per outcome-history node (Bayesian) or per previous outcome (Markovian).
    Adaptive,
}

impl InputMode {
    pub fn name(self) -> &'static str {
        match self {
            InputMode::Flat => "flat",
            InputMode::Adaptive => "adaptive",
        }
    }
}

impl fmt::Display for InputMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InputMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "flat" => Ok(InputMode::Flat),
            "adaptive" => Ok(InputMode::Adaptive),
            other => Err(Error::Config(format!("unknown input mode `{other}`"))),
        }
    }
}

/// Input parameters `r` for every shot of a protocol, plus a common phase `φ`.
///
/// Adaptive schedules are stored level by level: level `k` (the `k+1`-th shot)
/// holds `2^k` values indexed by the outcome history read as a binary number
/// (first outcome most significant) for the Bayesian strategy, or one value at
/// level 0 and two values (indexed by the previous outcome) afterwards for the
/// Markovian strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSchedule {
    mode: InputMode,
    levels: Vec<Vec<f64>>,
    phi: f64,
}

fn check_r(values: &[f64]) -> Result<()> {
    for &r in values {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::OutOfRange {
                name: "r",
                value: r,
                min: 0.0,
                max: 1.0,
            });
        }
    }
    Ok(())
}

impl InputSchedule {
    pub fn flat(r: Vec<f64>) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::ScheduleShape("at least one shot is required".into()));
        }
        check_r(&r)?;
        Ok(Self {
            mode: InputMode::Flat,
            levels: r.into_iter().map(|x| vec![x]).collect(),
            phi: 0.0,
        })
    }

    /// Same `r` on every one of `shots` shots.
    pub fn constant(r: f64, shots: usize) -> Result<Self> {
        Self::flat(vec![r; shots])
    }

    pub fn adaptive(levels: Vec<Vec<f64>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::ScheduleShape("at least one shot is required".into()));
        }
        for level in &levels {
            check_r(level)?;
        }
        Ok(Self {
            mode: InputMode::Adaptive,
            levels,
            phi: 0.0,
        })
    }

    pub fn with_phi(mut self, phi: f64) -> Result<Self> {
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::OutOfRange {
                name: "phi",
                value: phi,
                min: 0.0,
                max: TAU,
            });
        }
        self.phi = phi;
        Ok(self)
    }

    pub fn mode(&self) -> InputMode {
        self.mode
    }

    pub fn shots(&self) -> usize {
        self.levels.len()
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    /// Number of free `r` values for a strategy, mode and shot count.
    pub fn param_count(kind: StrategyKind, mode: InputMode, shots: usize) -> Result<usize> {
        match (mode, kind) {
            (InputMode::Flat, _) => Ok(shots),
            (InputMode::Adaptive, StrategyKind::Bayesian) => {
                if shots > 62 {
                    return Err(Error::ScheduleShape(
                        "adaptive Bayesian tree too deep".into(),
                    ));
                }
                Ok((1usize << shots) - 1)
            }
            (InputMode::Adaptive, StrategyKind::Markovian) => Ok(2 * shots - 1),
            (InputMode::Adaptive, StrategyKind::Global) => Err(Error::ScheduleShape(
                "the global strategy measures all outputs at once and takes flat inputs only"
                    .into(),
            )),
        }
    }

    fn level_width(kind: StrategyKind, mode: InputMode, level: usize) -> usize {
        match (mode, kind) {
            (InputMode::Flat, _) | (_, StrategyKind::Global) => 1,
            (InputMode::Adaptive, StrategyKind::Bayesian) => 1 << level,
            (InputMode::Adaptive, StrategyKind::Markovian) => {
                if level == 0 {
                    1
                } else {
                    2
                }
            }
        }
    }

    /// Rebuilds a schedule from a flat parameter vector (level by level).
    pub fn from_params(
        kind: StrategyKind,
        mode: InputMode,
        shots: usize,
        params: &[f64],
    ) -> Result<Self> {
        let expected = Self::param_count(kind, mode, shots)?;
        if params.len() != expected {
            return Err(Error::ScheduleShape(format!(
                "{kind} {mode} schedule with {shots} shots needs {expected} values, got {}",
                params.len()
            )));
        }
        match mode {
            InputMode::Flat => Self::flat(params.to_vec()),
            InputMode::Adaptive => {
                let mut levels = Vec::with_capacity(shots);
                let mut offset = 0;
                for level in 0..shots {
                    let width = Self::level_width(kind, mode, level);
                    levels.push(params[offset..offset + width].to_vec());
                    offset += width;
                }
                Self::adaptive(levels)
            }
        }
    }

    /// All `r` values, level by level.
    pub fn params(&self) -> Vec<f64> {
        self.levels.iter().flatten().copied().collect()
    }

    /// Checks that the layout fits the strategy.
    pub fn check_for(&self, kind: StrategyKind) -> Result<()> {
        if self.mode == InputMode::Flat {
            return Ok(());
        }
        if kind == StrategyKind::Global {
            return Self::param_count(kind, self.mode, self.shots()).map(|_| ());
        }
        for (level, values) in self.levels.iter().enumerate() {
            let width = Self::level_width(kind, self.mode, level);
            if values.len() != width {
                return Err(Error::ScheduleShape(format!(
                    "{kind} adaptive schedule: shot {} has {} values, expected {width}",
                    level + 1,
                    values.len()
                )));
            }
        }
        Ok(())
    }

    /// `r` at shot `level` for the Bayesian history index `history`.
    pub(crate) fn r_for_history(&self, level: usize, history: usize) -> f64 {
        match self.mode {
            InputMode::Flat => self.levels[level][0],
            InputMode::Adaptive => self.levels[level][history],
        }
    }

    /// `r` at shot `level` given the previous outcome (`None` on the first shot).
    pub(crate) fn r_for_last(&self, level: usize, last: Option<u8>) -> f64 {
        match (self.mode, last) {
            (InputMode::Flat, _) | (_, None) => self.levels[level][0],
            (InputMode::Adaptive, Some(b)) => self.levels[level][b as usize],
        }
    }
}
