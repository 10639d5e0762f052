use std::collections::BTreeMap;

use super::{
    check_shots, posterior, ChannelPair, InputSchedule, OutcomeHistory, PovmLabel, StrategyEval,
    StrategyKind,
};
use crate::channels::DensityMatrix;
use crate::error::Result;
use crate::helstrom::{optimal_povm, WeightedPair};

/// Channel outputs for every schedule entry, laid out like the schedule levels.
pub(super) fn output_table(
    pair: &ChannelPair,
    sched: &InputSchedule,
) -> Vec<Vec<(DensityMatrix, DensityMatrix)>> {
    sched
        .levels()
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|&r| pair.outputs(r, sched.phi()))
                .collect()
        })
        .collect()
}

#[derive(Default)]
struct Tree {
    povms: BTreeMap<PovmLabel, crate::helstrom::Povm>,
    posteriors: BTreeMap<PovmLabel, f64>,
    inputs: BTreeMap<PovmLabel, f64>,
}

struct Walker<'a> {
    sched: &'a InputSchedule,
    outputs: Vec<Vec<(DensityMatrix, DensityMatrix)>>,
    tree: Option<Tree>,
}

impl Walker<'_> {
    /// Sum over all completions of `history` of `L0·P(guess 0) + L1·P(guess 1)`,
    /// where `l0`, `l1` are the likelihoods of `history` under each channel.
    fn descend(&mut self, history: &OutcomeHistory, l0: f64, l1: f64) -> f64 {
        let level = history.len();
        let index = history.index();
        let slot = match self.sched.mode() {
            super::InputMode::Flat => 0,
            super::InputMode::Adaptive => index,
        };
        let (rho0, rho1) = &self.outputs[level][slot];
        let p0 = posterior(l0, l1);
        let pair = WeightedPair::new(p0, rho0.clone(), rho1.clone()).expect("posterior in [0, 1]");
        let povm = optimal_povm(&pair).povm;
        let (a0, a1) = povm.probabilities(rho0.matrix());
        let (b0, b1) = povm.probabilities(rho1.matrix());

        if let Some(tree) = self.tree.as_mut() {
            let label = PovmLabel::History(history.clone());
            tree.posteriors.insert(label.clone(), p0);
            tree.inputs
                .insert(label.clone(), self.sched.r_for_history(level, index));
            tree.povms.insert(label, povm);
        }

        if level + 1 == self.sched.shots() {
            return l0 * a0 + l1 * b1;
        }
        self.descend(&history.pushed(0), l0 * a0, l1 * b0)
            + self.descend(&history.pushed(1), l0 * a1, l1 * b1)
    }
}

fn run(pair: &ChannelPair, sched: &InputSchedule, record: bool) -> Result<(f64, Option<Tree>)> {
    check_shots(StrategyKind::Bayesian, sched)?;
    let mut walker = Walker {
        sched,
        outputs: output_table(pair, sched),
        tree: record.then(Tree::default),
    };
    let total = walker.descend(&OutcomeHistory::empty(), 1.0, 1.0);
    Ok((0.5 * total, walker.tree))
}

/// Bayesian feedforward: each measurement is the Helstrom measurement for the
/// exact posterior given the whole outcome history.
///
/// The recursion visits every node of the outcome tree, so cost grows as
/// `2^(n+1)`; the returned tree holds one measurement per history.
pub fn eval_bayesian(pair: &ChannelPair, sched: &InputSchedule) -> Result<StrategyEval> {
    let (p_succ, tree) = run(pair, sched, true)?;
    let tree = tree.expect("recording was requested");
    Ok(StrategyEval {
        kind: StrategyKind::Bayesian,
        p_succ,
        povm_tree: tree.povms,
        posteriors: tree.posteriors,
        inputs: tree.inputs,
    })
}

pub(super) fn success(pair: &ChannelPair, sched: &InputSchedule) -> Result<f64> {
    run(pair, sched, false).map(|(p, _)| p)
}
