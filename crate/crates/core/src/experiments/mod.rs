//! Experiment drivers: success-probability curves, Bayesian − Markovian
//! difference maps, and the validation suites.
//!
//! Every reported success probability is maximized over the input schedule.
//! Within a curve, optimizations are chained: the optimum at `n` shots seeds
//! the search at `n + 1`, and the Markovian optimum seeds the Bayesian search,
//! which in turn seeds the global one.

mod config;
mod output;
pub mod validate;

use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

pub use config::{
    EtaPoint, ExperimentConfig, GridSpec, OutputFormat, ResolvedPoint, DEFAULT_GRID_STEPS,
};
pub use output::{
    read_csv, read_json, round_sig15, write_csv, write_json, CsvRow, DiffRow, JsonTable, ResultRow,
};

use crate::error::Result;
use crate::optimizer::{maximize_with_starts, BoxDomain, OptConfig};
use crate::strategies::{success_probability, ChannelPair, InputMode, InputSchedule, StrategyKind};

/// Adaptive schedules with more free parameters than this fall back to flat inputs.
pub const ADAPTIVE_PARAM_CAP: usize = 64;

/// Shot count used by the difference maps.
pub const SWEEP_SHOTS: usize = 3;

/// An input-optimized strategy evaluation.
#[derive(Debug, Clone)]
pub struct Optimized {
    pub p_succ: f64,
    pub schedule: InputSchedule,
    pub mode: InputMode,
    pub evaluations: usize,
    pub converged: bool,
}

impl Optimized {
    pub fn params(&self) -> Vec<f64> {
        self.schedule.params()
    }
}

/// Input mode actually used for a strategy at a shot count.
pub fn effective_mode(kind: StrategyKind, requested: InputMode, shots: usize) -> InputMode {
    match (kind, requested) {
        (StrategyKind::Global, _) | (_, InputMode::Flat) => InputMode::Flat,
        (_, InputMode::Adaptive) => {
            match InputSchedule::param_count(kind, InputMode::Adaptive, shots) {
                Ok(d) if d <= ADAPTIVE_PARAM_CAP => InputMode::Adaptive,
                _ => InputMode::Flat,
            }
        }
    }
}

/// Maximizes a strategy's success probability over its input schedule.
///
/// `warm` holds extra starting points in the parameter layout of `mode`
/// (after [`effective_mode`]); points of the wrong length are ignored.
pub fn optimize_inputs(
    kind: StrategyKind,
    pair: &ChannelPair,
    mode: InputMode,
    shots: usize,
    cfg: &OptConfig,
    warm: &[Vec<f64>],
) -> Result<Optimized> {
    let mode = effective_mode(kind, mode, shots);
    let d = InputSchedule::param_count(kind, mode, shots)?;
    // surface cap and shape errors before optimizing
    let probe = InputSchedule::from_params(kind, mode, shots, &vec![0.0; d])?;
    success_probability(kind, pair, &probe)?;

    let objective = |x: &[f64]| {
        InputSchedule::from_params(kind, mode, shots, x)
            .and_then(|s| success_probability(kind, pair, &s))
            .unwrap_or(f64::NAN)
    };
    let res = maximize_with_starts(objective, &BoxDomain::unit(d)?, cfg, warm);
    Ok(Optimized {
        p_succ: res.best_value,
        schedule: InputSchedule::from_params(kind, mode, shots, &res.best_point)?,
        mode,
        evaluations: res.evaluations,
        converged: res.converged,
    })
}

/// Candidate schedules for `shots + 1` built from an optimum at `shots`.
pub fn extend_schedule(kind: StrategyKind, prev: &InputSchedule) -> Vec<Vec<f64>> {
    let levels = prev.levels();
    let last = levels.last().expect("non-empty schedule");
    let mut out = Vec::new();
    match prev.mode() {
        InputMode::Flat => {
            for v in [last[0], 0.0, 0.5, 1.0] {
                let mut p = prev.params();
                p.push(v);
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        InputMode::Adaptive => {
            let next: Vec<f64> = match kind {
                StrategyKind::Bayesian => (0..2 * last.len()).map(|h| last[h >> 1]).collect(),
                _ => vec![last[0], last[last.len() - 1]],
            };
            let mut p = prev.params();
            p.extend(next);
            out.push(p);
        }
    }
    out
}

/// Bayesian parameters that reproduce a Markovian schedule exactly.
pub fn markov_to_bayes(markov: &InputSchedule) -> Vec<f64> {
    match markov.mode() {
        InputMode::Flat => markov.params(),
        InputMode::Adaptive => {
            let mut p = Vec::new();
            for (k, level) in markov.levels().iter().enumerate() {
                if k == 0 {
                    p.push(level[0]);
                } else {
                    p.extend((0..1usize << k).map(|h| level[h & 1]));
                }
            }
            p
        }
    }
}

/// Rows and non-fatal warnings from a run.
#[derive(Debug, Clone)]
pub struct RunOutput<R> {
    pub rows: Vec<R>,
    pub warnings: Vec<String>,
}

/// `P_succ` vs shots for every point, shot count `1..=n_max` and strategy.
///
/// Strategies above their shot cap are skipped with a warning.
pub fn run_curve(cfg: &ExperimentConfig) -> Result<RunOutput<ResultRow>> {
    cfg.validate()?;
    let points = cfg.curve_points()?;
    let per_point: Vec<Result<RunOutput<ResultRow>>> =
        points.par_iter().map(|p| curve_for_point(cfg, p)).collect();
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for out in per_point {
        let out = out?;
        rows.extend(out.rows);
        warnings.extend(out.warnings);
    }
    warnings.dedup();
    Ok(RunOutput { rows, warnings })
}

fn curve_for_point(cfg: &ExperimentConfig, point: &ResolvedPoint) -> Result<RunOutput<ResultRow>> {
    let pair = ChannelPair::from_etas(cfg.family, point.eta0, point.eta1)?;
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let opt = cfg.opt_config();
    let mut previous: [Option<Optimized>; 3] = [None, None, None];
    let slot = |k: StrategyKind| k as usize;

    for shots in 1..=cfg.n_max {
        let mut current: [Option<(Optimized, Option<f64>)>; 3] = [None, None, None];
        for kind in [
            StrategyKind::Markovian,
            StrategyKind::Bayesian,
            StrategyKind::Global,
        ] {
            if !cfg.strategies.contains(&kind) {
                continue;
            }
            if let Some(cap) = kind.shot_cap() {
                if shots > cap {
                    warnings.push(format!(
                        "{kind} strategy skipped above its cap of {cap} shots"
                    ));
                    continue;
                }
            }
            let mode = effective_mode(kind, cfg.input_mode, shots);
            if mode != cfg.input_mode {
                warnings.push(match kind {
                    StrategyKind::Global => "global strategy always uses flat inputs".to_string(),
                    _ => format!(
                        "{kind} adaptive inputs exceed {ADAPTIVE_PARAM_CAP} parameters at {shots} shots; using flat inputs"
                    ),
                });
            }

            let mut warm = Vec::new();
            if let Some(prev) = &previous[slot(kind)] {
                warm.extend(extend_schedule(kind, &prev.schedule));
            }
            let markov = current[slot(StrategyKind::Markovian)]
                .as_ref()
                .map(|(o, _)| &o.schedule);
            let bayes = current[slot(StrategyKind::Bayesian)]
                .as_ref()
                .map(|(o, _)| &o.schedule);
            match kind {
                StrategyKind::Bayesian => warm.extend(markov.map(markov_to_bayes)),
                StrategyKind::Global => {
                    warm.extend(
                        bayes
                            .filter(|s| s.mode() == InputMode::Flat)
                            .map(|s| s.params()),
                    );
                    warm.extend(
                        markov
                            .filter(|s| s.mode() == InputMode::Flat)
                            .map(|s| s.params()),
                    );
                }
                StrategyKind::Markovian => {}
            }

            let started = Instant::now();
            let opt = optimize_inputs(kind, &pair, mode, shots, &opt, &warm)?;
            let elapsed = cfg.timing.then(|| started.elapsed().as_secs_f64());
            current[slot(kind)] = Some((opt, elapsed));
        }

        for &kind in &cfg.strategies {
            if let Some((opt, elapsed)) = &current[slot(kind)] {
                rows.push(
                    ResultRow {
                        family: cfg.family,
                        eta0: point.eta0,
                        eta1: point.eta1,
                        n: shots,
                        strategy: kind,
                        input_mode: opt.mode,
                        p_succ: opt.p_succ,
                        r: opt.params(),
                        evaluations: opt.evaluations,
                        wall_time_s: *elapsed,
                    }
                    .rounded(),
                );
            }
        }
        for (i, cur) in current.into_iter().enumerate() {
            if let Some((opt, _)) = cur {
                previous[i] = Some(opt);
            }
        }
    }
    Ok(RunOutput { rows, warnings })
}

/// Bayesian − Markovian difference at three shots over the grid's lower triangle.
///
/// Both strategies are input-optimized independently; the Markovian optimum
/// is also offered to the Bayesian search as a starting point.
pub fn run_sweep_diff(cfg: &ExperimentConfig) -> Result<RunOutput<DiffRow>> {
    cfg.validate()?;
    let grid = cfg.sweep_grid();
    let cells: Vec<ResolvedPoint> = grid
        .lower_triangle()
        .into_iter()
        .map(|p| cfg.resolve(p))
        .collect::<Result<_>>()?;
    let rows: Vec<Result<DiffRow>> = cells.par_iter().map(|cell| diff_cell(cfg, cell)).collect();
    let mut warnings = Vec::new();
    if effective_mode(StrategyKind::Bayesian, cfg.input_mode, SWEEP_SHOTS) != cfg.input_mode {
        warnings.push("adaptive inputs exceed the parameter cap; using flat inputs".to_string());
    }
    Ok(RunOutput {
        rows: rows.into_iter().collect::<Result<_>>()?,
        warnings,
    })
}

fn diff_cell(cfg: &ExperimentConfig, cell: &ResolvedPoint) -> Result<DiffRow> {
    let pair = ChannelPair::from_etas(cfg.family, cell.eta0, cell.eta1)?;
    let opt = cfg.opt_config();
    let markov = optimize_inputs(
        StrategyKind::Markovian,
        &pair,
        cfg.input_mode,
        SWEEP_SHOTS,
        &opt,
        &[],
    )?;
    let bayes = optimize_inputs(
        StrategyKind::Bayesian,
        &pair,
        cfg.input_mode,
        SWEEP_SHOTS,
        &opt,
        &[markov_to_bayes(&markov.schedule)],
    )?;
    Ok(DiffRow {
        family: cfg.family,
        eta0: cell.eta0,
        eta1: cell.eta1,
        p_bayes: bayes.p_succ,
        p_markov: markov.p_succ,
        diff: bayes.p_succ - markov.p_succ,
    }
    .rounded())
}

/// Config echo for output headers: the config plus its resolved points.
pub fn config_echo(cfg: &ExperimentConfig, command: &str) -> serde_json::Value {
    let resolved: Vec<ResolvedPoint> = cfg
        .points
        .iter()
        .filter_map(|p| cfg.resolve(*p).ok())
        .collect();
    json!({
        "command": command,
        "config": cfg,
        "resolved_points": resolved,
    })
}

/// `#` comment lines for CSV output.
pub fn header_comments(cfg: &ExperimentConfig, command: &str) -> Vec<String> {
    vec![
        format!("qcd {} {command}", crate::VERSION),
        format!("config {}", config_echo(cfg, command)),
    ]
}
