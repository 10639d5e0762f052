//! Multi-shot discrimination of two qubit channels.
//!
//! The crate evaluates and optimizes the success probability of three
//! strategies for telling apart two channels of the same family
//! (depolarizing, bit flip, amplitude damping) from `n + 1` uses:
//!
//! - **global**: one collective Helstrom measurement on all outputs;
//! - **Bayesian**: a Helstrom measurement per shot, weighted by the exact
//!   posterior given every earlier outcome;
//! - **Markovian**: a Helstrom measurement per shot, weighted by the
//!   posterior given only the previous outcome.
//!
//! Modules, bottom-up: [`linalg`] → [`channels`] → [`helstrom`] →
//! [`strategies`] → [`optimizer`] → [`experiments`].

pub mod channels;
pub mod closed_form;
pub mod error;
pub mod experiments;
pub mod helstrom;
pub mod linalg;
pub mod optimizer;
pub mod strategies;

pub use channels::{ChannelFamily, ChannelSpec, DensityMatrix, InputState};
pub use error::{Error, Result};
pub use helstrom::{HelstromResult, Povm, PovmCase, WeightedPair};
pub use linalg::{ComplexMatrix, HermitianEigen};
pub use optimizer::{BoxDomain, OptConfig, OptResult};
pub use strategies::{
    ChannelPair, InputMode, InputSchedule, OutcomeHistory, StrategyEval, StrategyKind,
};

/// Crate version, echoed into experiment output headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
