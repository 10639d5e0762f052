//! Exact multi-shot success probabilities for the three discrimination strategies.
//!
//! Every evaluator assumes equal priors on the two channels and carries the
//! `1/2` prior factor on the final sum, so a single shot reduces exactly to
//! the one-shot Helstrom value. Evaluations are pure functions of the channel
//! pair and the input schedule.

mod bayesian;
mod global;
mod markovian;
mod montecarlo;
mod schedule;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::{ChannelFamily, ChannelSpec, DensityMatrix, InputState};
use crate::error::{Error, Result};
use crate::helstrom::Povm;

pub use bayesian::eval_bayesian;
pub use global::{eval_global, global_success};
pub use markovian::eval_markovian;
pub use montecarlo::{simulate_protocol, simulate_protocol_stream};
pub use schedule::{InputMode, InputSchedule};

/// Largest shot count for the global strategy (joint dimension 2^10).
pub const GLOBAL_SHOT_CAP: usize = 10;

/// Largest shot count for the Bayesian strategy (2^13 leaf measurements).
pub const BAYESIAN_SHOT_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    Global,
    Bayesian,
    Markovian,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 3] = [
        StrategyKind::Global,
        StrategyKind::Bayesian,
        StrategyKind::Markovian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Global => "global",
            StrategyKind::Bayesian => "bayesian",
            StrategyKind::Markovian => "markovian",
        }
    }

    /// Maximum supported shot count, if any.
    pub fn shot_cap(self) -> Option<usize> {
        match self {
            StrategyKind::Global => Some(GLOBAL_SHOT_CAP),
            StrategyKind::Bayesian => Some(BAYESIAN_SHOT_CAP),
            StrategyKind::Markovian => None,
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "global" => Ok(StrategyKind::Global),
            "bayesian" | "bayes" => Ok(StrategyKind::Bayesian),
            "markovian" | "markov" => Ok(StrategyKind::Markovian),
            other => Err(Error::Config(format!("unknown strategy `{other}`"))),
        }
    }
}

/// The two candidate channels: hypothesis 0 and hypothesis 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelPair {
    zero: ChannelSpec,
    one: ChannelSpec,
}

impl ChannelPair {
    pub fn new(zero: ChannelSpec, one: ChannelSpec) -> Result<Self> {
        if zero.family() != one.family() {
            return Err(Error::FamilyMismatch(
                zero.family().to_string(),
                one.family().to_string(),
            ));
        }
        Ok(Self { zero, one })
    }

    pub fn from_etas(family: ChannelFamily, eta0: f64, eta1: f64) -> Result<Self> {
        Self::new(
            ChannelSpec::new(family, eta0)?,
            ChannelSpec::new(family, eta1)?,
        )
    }

    pub fn family(&self) -> ChannelFamily {
        self.zero.family()
    }

    pub fn zero(&self) -> &ChannelSpec {
        &self.zero
    }

    pub fn one(&self) -> &ChannelSpec {
        &self.one
    }

    /// `(ρ0, ρ1)`: both channel outputs for input `(r, φ)`.
    pub fn outputs(&self, r: f64, phi: f64) -> (DensityMatrix, DensityMatrix) {
        let input = InputState::new(r, phi).expect("schedule values are validated");
        (self.zero.output(input), self.one.output(input))
    }
}

/// Measurement outcomes `x1 x2 … xk`, each 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct OutcomeHistory(Vec<u8>);

impl OutcomeHistory {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Config("outcome bits must be 0 or 1".into()));
        }
        Ok(Self(bits))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    pub fn pushed(&self, bit: u8) -> Self {
        let mut bits = self.0.clone();
        bits.push(bit);
        Self(bits)
    }

    /// The history read as a binary number, first outcome most significant.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }
}

impl fmt::Display for OutcomeHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Key of a stored measurement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PovmLabel {
    /// The single joint measurement of the global strategy.
    Global,
    /// Bayesian measurement after the given history.
    History(OutcomeHistory),
    /// Markovian measurement at 0-based `shot`, keyed by the previous outcome.
    LastBit { shot: usize, last: Option<u8> },
}

impl fmt::Display for PovmLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PovmLabel::Global => f.write_str("global"),
            PovmLabel::History(h) => write!(f, "x={h}"),
            PovmLabel::LastBit { shot, last: None } => write!(f, "shot{}", shot + 1),
            PovmLabel::LastBit {
                shot,
                last: Some(b),
            } => write!(f, "shot{}|{b}", shot + 1),
        }
    }
}

/// Result of an exact strategy evaluation.
#[derive(Debug, Clone)]
pub struct StrategyEval {
    pub kind: StrategyKind,
    pub p_succ: f64,
    pub povm_tree: BTreeMap<PovmLabel, Povm>,
    /// Prior weight of hypothesis 0 used to build each measurement.
    pub posteriors: BTreeMap<PovmLabel, f64>,
    /// Input `r` fed to the channel before each measurement (absent for global).
    pub inputs: BTreeMap<PovmLabel, f64>,
}

fn check_shots(kind: StrategyKind, sched: &InputSchedule) -> Result<()> {
    if let Some(cap) = kind.shot_cap() {
        if sched.shots() > cap {
            return Err(Error::ShotCapExceeded {
                strategy: kind.name(),
                shots: sched.shots(),
                cap,
            });
        }
    }
    sched.check_for(kind)
}

/// Full evaluation (success probability plus the measurement tree).
pub fn evaluate(
    kind: StrategyKind,
    pair: &ChannelPair,
    sched: &InputSchedule,
) -> Result<StrategyEval> {
    match kind {
        StrategyKind::Global => eval_global(pair, sched),
        StrategyKind::Bayesian => eval_bayesian(pair, sched),
        StrategyKind::Markovian => eval_markovian(pair, sched),
    }
}

/// Success probability only; skips building the measurement tree.
pub fn success_probability(
    kind: StrategyKind,
    pair: &ChannelPair,
    sched: &InputSchedule,
) -> Result<f64> {
    match kind {
        StrategyKind::Global => global_success(pair, sched),
        StrategyKind::Bayesian => bayesian::success(pair, sched),
        StrategyKind::Markovian => markovian::success(pair, sched),
    }
}

/// Posterior weight of hypothesis 0 from unnormalized likelihoods; 1/2 if both vanish.
pub(crate) fn posterior(l0: f64, l1: f64) -> f64 {
    // likelihoods can pick up -1e-17 style rounding from outcome probabilities
    let (l0, l1) = (l0.max(0.0), l1.max(0.0));
    let total = l0 + l1;
    if total > 0.0 {
        (l0 / total).clamp(0.0, 1.0)
    } else {
        0.5
    }
}
