//! Box-constrained derivative-free maximization.
//!
//! Multistart Nelder–Mead with every trial point clamped into the box. Starts
//! come from the lattice `{lo, mid, hi}^d` (the corners and face centers,
//! where input optima for these channels tend to sit); when that lattice has
//! more points than `max_starts`, the three diagonal points are kept and the
//! rest are drawn as a seeded Latin hypercube. Caller-supplied warm starts
//! are run in addition.

use std::cell::Cell;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned search box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::Config(
                "box bounds must be non-empty and equally long".into(),
            ));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l <= u)) {
            return Err(Error::Config("box lower bound exceeds upper bound".into()));
        }
        Ok(Self { lower, upper })
    }

    /// `[0, 1]^d`.
    pub fn unit(d: usize) -> Result<Self> {
        Self::new(vec![0.0; d], vec![1.0; d])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for ((v, lo), hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(*lo, *hi);
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(&self.lower)
                .zip(&self.upper)
                .all(|((v, lo), hi)| lo <= v && v <= hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptConfig {
    /// Converged once the simplex value spread is at most this...
    pub ftol: f64,
    /// ...and every vertex is within this distance (max-norm) of the best one.
    pub xtol: f64,
    /// Objective evaluations allowed per start.
    pub max_evals: usize,
    pub max_starts: usize,
    /// Initial simplex edge length.
    pub initial_step: f64,
    pub seed: u64,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            ftol: 1e-9,
            xtol: 1e-8,
            max_evals: 20_000,
            max_starts: 64,
            initial_step: 0.25,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    /// Objective evaluations over all starts.
    pub evaluations: usize,
    /// Whether the start that produced the best point met the tolerances.
    pub converged: bool,
}

/// Maximizes `objective` over `dom`.
pub fn maximize<F>(objective: F, dom: &BoxDomain, cfg: &OptConfig) -> OptResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    maximize_with_starts(objective, dom, cfg, &[])
}

/// As [`maximize`], with extra starting points run before the generated ones.
pub fn maximize_with_starts<F>(
    objective: F,
    dom: &BoxDomain,
    cfg: &OptConfig,
    warm: &[Vec<f64>],
) -> OptResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let mut starts: Vec<Vec<f64>> = warm
        .iter()
        .filter(|w| w.len() == dom.dim())
        .map(|w| {
            let mut w = w.clone();
            dom.clamp(&mut w);
            w
        })
        .collect();
    starts.extend(start_points(dom, cfg.max_starts, cfg.seed));

    let runs: Vec<Run> = starts
        .par_iter()
        .map(|x0| nelder_mead(&objective, dom, cfg, x0))
        .collect();

    let evaluations = runs.iter().map(|r| r.evals).sum();
    // first maximum wins ties, so the result does not depend on scheduling
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .expect("at least one start");
    OptResult {
        best_point: best.point,
        best_value: best.value,
        evaluations,
        converged: best.converged,
    }
}

/// Deterministic starting points for a box.
pub fn start_points(dom: &BoxDomain, max_starts: usize, seed: u64) -> Vec<Vec<f64>> {
    let d = dom.dim();
    let max_starts = max_starts.max(1);
    let level = |i: usize, k: usize| match k {
        0 => dom.lower[i],
        1 => 0.5 * (dom.lower[i] + dom.upper[i]),
        _ => dom.upper[i],
    };
    let lattice_size = 3usize.checked_pow(d as u32);
    if let Some(size) = lattice_size.filter(|&s| s <= max_starts) {
        return (0..size)
            .map(|mut code| {
                (0..d)
                    .map(|i| {
                        let k = code % 3;
                        code /= 3;
                        level(i, k)
                    })
                    .collect()
            })
            .collect();
    }

    let mut starts: Vec<Vec<f64>> = (0..3.min(max_starts))
        .map(|k| (0..d).map(|i| level(i, [2, 0, 1][k])).collect())
        .collect();
    let extra = max_starts - starts.len();
    if extra > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let columns: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let mut strata: Vec<usize> = (0..extra).collect();
                strata.shuffle(&mut rng);
                strata
                    .into_iter()
                    .map(|s| {
                        let u = (s as f64 + rng.random::<f64>()) / extra as f64;
                        dom.lower[i] + u * (dom.upper[i] - dom.lower[i])
                    })
                    .collect()
            })
            .collect();
        starts.extend((0..extra).map(|j| (0..d).map(|i| columns[i][j]).collect()));
    }
    starts
}

struct Run {
    point: Vec<f64>,
    value: f64,
    evals: usize,
    converged: bool,
}

/// Minimizes `-objective` from `x0`; restarts from the best vertex after
/// convergence until a restart stops improving.
fn nelder_mead<F>(objective: &F, dom: &BoxDomain, cfg: &OptConfig, x0: &[f64]) -> Run
where
    F: Fn(&[f64]) -> f64,
{
    let d = dom.dim();
    let evals = Cell::new(0usize);
    let cost = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            -v
        }
    };

    // reflection, expansion, contraction, shrink; the dimension-adapted
    // variant needed several times more evaluations on these objectives
    let (alpha, beta, gamma, delta) = (1.0, 2.0, 0.5, 0.5);

    let mut best_x = x0.to_vec();
    dom.clamp(&mut best_x);
    let mut best_f = cost(&best_x);
    let mut step = cfg.initial_step;
    let mut converged = false;

    for _restart in 0..4 {
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
        simplex.push((best_x.clone(), best_f));
        for i in 0..d {
            let mut x = best_x.clone();
            let width = dom.upper[i] - dom.lower[i];
            let h = step * width.max(f64::MIN_POSITIVE);
            x[i] = if x[i] + h <= dom.upper[i] {
                x[i] + h
            } else {
                x[i] - h
            };
            dom.clamp(&mut x);
            let f = cost(&x);
            simplex.push((x, f));
        }

        converged = false;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[d].1 - simplex[0].1;
            let diameter = simplex[1..]
                .iter()
                .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if spread <= cfg.ftol && diameter <= cfg.xtol {
                converged = true;
                break;
            }
            if evals.get() >= cfg.max_evals {
                break;
            }

            let mut centroid = vec![0.0; d];
            for (x, _) in &simplex[..d] {
                for (c, v) in centroid.iter_mut().zip(x) {
                    *c += v / d as f64;
                }
            }
            let worst = simplex[d].clone();
            let along = |t: f64| {
                let mut x: Vec<f64> = centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect();
                dom.clamp(&mut x);
                x
            };

            let xr = along(alpha);
            let fr = cost(&xr);
            if fr < simplex[0].1 {
                let xe = along(alpha * beta);
                let fe = cost(&xe);
                simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[d - 1].1 {
                simplex[d] = (xr, fr);
            } else {
                let (xc, fc) = if fr < worst.1 {
                    let xc = along(alpha * gamma);
                    let fc = cost(&xc);
                    (xc, fc)
                } else {
                    let xc = along(-gamma);
                    let fc = cost(&xc);
                    (xc, fc)
                };
                if fc < worst.1.min(fr) {
                    simplex[d] = (xc, fc);
                } else {
                    let anchor = simplex[0].0.clone();
                    for (x, f) in simplex.iter_mut().skip(1) {
                        for (v, a) in x.iter_mut().zip(&anchor) {
                            *v = a + delta * (*v - a);
                        }
                        *f = cost(x);
                    }
                }
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let improvement = best_f - simplex[0].1;
        if simplex[0].1 <= best_f {
            best_x = simplex[0].0.clone();
            best_f = simplex[0].1;
        }
        if !converged || improvement <= cfg.ftol || evals.get() >= cfg.max_evals {
            break;
        }
        step = (step * 0.2).max(10.0 * cfg.xtol);
    }

    Run {
        point: best_x,
        value: -best_f,
        evals: evals.get(),
        converged,
    }
}
