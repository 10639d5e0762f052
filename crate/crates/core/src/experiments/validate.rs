//! Self-check suites runnable from the command line.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channels::{ChannelFamily, DensityMatrix};
use crate::closed_form;
use crate::error::{Error, Result};
use crate::helstrom::{brute_force_povm, optimal_povm, WeightedPair};
use crate::linalg::ComplexMatrix;
use crate::optimizer::OptConfig;
use crate::strategies::{
    simulate_protocol_stream, success_probability, ChannelPair, InputMode, InputSchedule,
    StrategyKind,
};

use super::optimize_inputs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationSuite {
    OneshotClosedForms,
    StrategyReductions,
    MonteCarlo,
    PovmProperties,
}

impl ValidationSuite {
    pub const ALL: [ValidationSuite; 4] = [
        Self::OneshotClosedForms,
        Self::StrategyReductions,
        Self::MonteCarlo,
        Self::PovmProperties,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::OneshotClosedForms => "oneshot-closed-forms",
            Self::StrategyReductions => "strategy-reductions",
            Self::MonteCarlo => "monte-carlo",
            Self::PovmProperties => "povm-properties",
        }
    }
}

impl fmt::Display for ValidationSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ValidationSuite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown validation suite `{s}`")))
    }
}

/// One measured check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: ValidationSuite,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: String, deviation: f64, tolerance: f64) {
        self.checks.push(Check {
            name,
            deviation,
            tolerance,
            passed: deviation <= tolerance,
        });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<56} deviation {:.3e} tolerance {:.1e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.deviation,
                c.tolerance
            )?;
        }
        write!(
            f,
            "{}: {}/{} checks passed",
            self.suite,
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len()
        )
    }
}

pub fn run_suite(suite: ValidationSuite, seed: u64) -> Result<Report> {
    let mut report = Report {
        suite,
        checks: Vec::new(),
    };
    match suite {
        ValidationSuite::OneshotClosedForms => oneshot_closed_forms(&mut report)?,
        ValidationSuite::StrategyReductions => strategy_reductions(&mut report, seed)?,
        ValidationSuite::MonteCarlo => monte_carlo(&mut report, seed)?,
        ValidationSuite::PovmProperties => povm_properties(&mut report, seed)?,
    }
    Ok(report)
}

fn oneshot_closed_forms(report: &mut Report) -> Result<()> {
    let steps = 10;
    let cfg = OptConfig::default();
    for family in ChannelFamily::ALL {
        let unit = family.eta_unit();
        let mut worst = 0.0f64;
        for i in 1..steps {
            for j in 0..i {
                let (eta0, eta1) = (
                    unit * i as f64 / (steps - 1) as f64,
                    unit * j as f64 / (steps - 1) as f64,
                );
                let eta0 = eta0.min(family.eta_max());
                let pair = ChannelPair::from_etas(family, eta0, eta1)?;
                let expected = match family {
                    ChannelFamily::Depolarizing => closed_form::depolarizing(eta0, eta1),
                    ChannelFamily::BitFlip => closed_form::bit_flip_optimal(eta0, eta1),
                    ChannelFamily::AmplitudeDamping => {
                        closed_form::amplitude_damping_optimal(eta0, eta1)
                    }
                };
                let got =
                    optimize_inputs(StrategyKind::Bayesian, &pair, InputMode::Flat, 1, &cfg, &[])?;
                worst = worst.max((got.p_succ - expected).abs());
            }
        }
        report.push(
            format!("{family} optimized one-shot vs closed form"),
            worst,
            1e-6,
        );
    }
    Ok(())
}

fn random_pair(rng: &mut ChaCha8Rng) -> Result<(ChannelPair, InputSchedule)> {
    let family = ChannelFamily::ALL[rng.random_range(0..3)];
    let a = rng.random::<f64>() * family.eta_max();
    let b = rng.random::<f64>() * family.eta_max();
    let shots = rng.random_range(1..=4);
    let r: Vec<f64> = (0..shots).map(|_| rng.random()).collect();
    Ok((
        ChannelPair::from_etas(family, a, b)?,
        InputSchedule::flat(r)?,
    ))
}

fn strategy_reductions(report: &mut Report, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut one_shot, mut two_shot, mut order) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let (pair, sched) = random_pair(&mut rng)?;
        let p = |k| success_probability(k, &pair, &sched);
        let (g, b, m) = (
            p(StrategyKind::Global)?,
            p(StrategyKind::Bayesian)?,
            p(StrategyKind::Markovian)?,
        );
        match sched.shots() {
            1 => one_shot = one_shot.max((g - b).abs()).max((b - m).abs()),
            2 => two_shot = two_shot.max((b - m).abs()),
            _ => {}
        }
        order = order.max(m - g).max(b - g);
    }
    report.push(
        "one shot: global = bayesian = markovian".into(),
        one_shot,
        1e-12,
    );
    report.push("two shots: bayesian = markovian".into(), two_shot, 1e-12);
    report.push(
        "global >= bayesian, markovian".into(),
        order.max(0.0),
        1e-12,
    );

    let mut spread = 0.0f64;
    let pair = ChannelPair::from_etas(ChannelFamily::Depolarizing, 0.8, 0.3)?;
    for kind in StrategyKind::ALL {
        let values: Vec<f64> = (0..10)
            .map(|_| {
                let r: Vec<f64> = (0..3).map(|_| rng.random()).collect();
                success_probability(kind, &pair, &InputSchedule::flat(r)?)
            })
            .collect::<Result<_>>()?;
        let hi = values.iter().cloned().fold(f64::MIN, f64::max);
        let lo = values.iter().cloned().fold(f64::MAX, f64::min);
        spread = spread.max(hi - lo);
    }
    report.push("depolarizing: independent of inputs".into(), spread, 1e-10);
    Ok(())
}

fn monte_carlo(report: &mut Report, seed: u64) -> Result<()> {
    let trials = 100_000;
    let configs = [
        (ChannelFamily::Depolarizing, 0.75, 0.4),
        (ChannelFamily::BitFlip, 0.95, 0.6),
        (ChannelFamily::AmplitudeDamping, 1.3, 0.5),
    ];
    let sched = InputSchedule::flat(vec![1.0, 0.7, 0.9])?;
    let mut stream = 0;
    for (family, eta0, eta1) in configs {
        let pair = ChannelPair::from_etas(family, eta0, eta1)?;
        for kind in StrategyKind::ALL {
            let exact = success_probability(kind, &pair, &sched)?;
            let sampled = simulate_protocol_stream(kind, &pair, &sched, trials, seed, stream)?;
            stream += 1;
            let sigma = (exact * (1.0 - exact) / trials as f64).sqrt().max(1e-12);
            report.push(
                format!("{family} {kind}: |sampled - exact| / sigma"),
                (sampled - exact).abs() / sigma,
                3.0,
            );
        }
    }
    Ok(())
}

fn random_state(rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    // uniform in the Bloch ball
    let v = loop {
        let v: [f64; 3] = [0, 1, 2].map(|_| 2.0 * rng.random::<f64>() - 1.0);
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            break v;
        }
    };
    let m = &(&(&ComplexMatrix::identity(2) + &(&ComplexMatrix::pauli_x() * v[0]))
        + &(&ComplexMatrix::pauli_y() * v[1]))
        + &(&ComplexMatrix::pauli_z() * v[2]);
    DensityMatrix::new(&m * 0.5)
}

fn povm_properties(report: &mut Report, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut invalid, mut over, mut under) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let p0 = rng.random::<f64>();
        let w = WeightedPair::new(p0, random_state(&mut rng)?, random_state(&mut rng)?)?;
        let h = optimal_povm(&w);
        if h.povm.validate().is_err() {
            invalid = 1.0;
        }
        let brute = brute_force_povm(&w, 128);
        over = over.max(brute - h.p_succ);
        under = under.max(h.p_succ - brute);
    }
    report.push("optimal POVM elements valid".into(), invalid, 0.0);
    report.push("no grid POVM beats the optimum".into(), over.max(0.0), 1e-9);
    report.push(
        "optimum within grid resolution".into(),
        under.max(0.0),
        1e-3,
    );
    Ok(())
}
