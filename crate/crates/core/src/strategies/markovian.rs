use std::collections::BTreeMap;

use super::bayesian::output_table;
use super::{
    check_shots, posterior, ChannelPair, InputMode, InputSchedule, PovmLabel, StrategyEval,
    StrategyKind,
};
use crate::error::Result;
use crate::helstrom::{optimal_povm, Povm, WeightedPair};

struct Trace {
    povms: BTreeMap<PovmLabel, Povm>,
    posteriors: BTreeMap<PovmLabel, f64>,
    inputs: BTreeMap<PovmLabel, f64>,
}

/// Forward pass over `w[c][b]`: the total probability, under channel `c`, of
/// all histories so far that end in outcome `b`.
fn run(pair: &ChannelPair, sched: &InputSchedule, mut trace: Option<&mut Trace>) -> Result<f64> {
    check_shots(StrategyKind::Markovian, sched)?;
    let outputs = output_table(pair, sched);
    let mut record = |label: PovmLabel, p0: f64, r: f64, povm: Povm| {
        if let Some(t) = trace.as_deref_mut() {
            t.posteriors.insert(label.clone(), p0);
            t.inputs.insert(label.clone(), r);
            t.povms.insert(label, povm);
        }
    };

    let (rho0, rho1) = &outputs[0][0];
    let povm = optimal_povm(&WeightedPair::equal_priors(rho0.clone(), rho1.clone())).povm;
    let (a0, a1) = povm.probabilities(rho0.matrix());
    let (b0, b1) = povm.probabilities(rho1.matrix());
    let mut w = [[a0, a1], [b0, b1]];
    record(
        PovmLabel::LastBit {
            shot: 0,
            last: None,
        },
        0.5,
        sched.r_for_last(0, None),
        povm,
    );

    for shot in 1..sched.shots() {
        let mut next = [[0.0; 2]; 2];
        for last in 0..2u8 {
            let slot = match sched.mode() {
                InputMode::Flat => 0,
                InputMode::Adaptive => last as usize,
            };
            let (rho0, rho1) = &outputs[shot][slot];
            let (w0, w1) = (w[0][last as usize], w[1][last as usize]);
            let p0 = posterior(w0, w1);
            let pair =
                WeightedPair::new(p0, rho0.clone(), rho1.clone()).expect("posterior in [0, 1]");
            let povm = optimal_povm(&pair).povm;
            let (a0, a1) = povm.probabilities(rho0.matrix());
            let (b0, b1) = povm.probabilities(rho1.matrix());
            next[0][0] += w0 * a0;
            next[0][1] += w0 * a1;
            next[1][0] += w1 * b0;
            next[1][1] += w1 * b1;
            record(
                PovmLabel::LastBit {
                    shot,
                    last: Some(last),
                },
                p0,
                sched.r_for_last(shot, Some(last)),
                povm,
            );
        }
        w = next;
    }
    Ok(0.5 * (w[0][0] + w[1][1]))
}

/// Markovian feedforward: each measurement is the Helstrom measurement for
/// the posterior given only the previous outcome, with earlier outcomes
/// marginalized. Two measurements per shot after the first; linear in shots.
pub fn eval_markovian(pair: &ChannelPair, sched: &InputSchedule) -> Result<StrategyEval> {
    let mut trace = Trace {
        povms: BTreeMap::new(),
        posteriors: BTreeMap::new(),
        inputs: BTreeMap::new(),
    };
    let p_succ = run(pair, sched, Some(&mut trace))?;
    Ok(StrategyEval {
        kind: StrategyKind::Markovian,
        p_succ,
        povm_tree: trace.povms,
        posteriors: trace.posteriors,
        inputs: trace.inputs,
    })
}

pub(super) fn success(pair: &ChannelPair, sched: &InputSchedule) -> Result<f64> {
    run(pair, sched, None)
}
