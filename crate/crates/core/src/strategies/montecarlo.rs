use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{evaluate, ChannelPair, InputSchedule, OutcomeHistory, PovmLabel, StrategyKind};
use crate::error::{Error, Result};
use crate::linalg::tensor_all;

/// Monte Carlo estimate of a strategy's success probability.
///
/// Each trial draws the true channel with probability 1/2, runs the protocol
/// shot by shot (sampling every outcome from the stored measurement tree) and
/// scores the final outcome as the guess. Deterministic for a fixed seed.
pub fn simulate_protocol(
    kind: StrategyKind,
    pair: &ChannelPair,
    sched: &InputSchedule,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    simulate_protocol_stream(kind, pair, sched, trials, seed, 0)
}

/// As [`simulate_protocol`], drawing from an independent stream of the seeded
/// generator so concurrent runs can share one seed.
pub fn simulate_protocol_stream(
    kind: StrategyKind,
    pair: &ChannelPair,
    sched: &InputSchedule,
    trials: usize,
    seed: u64,
    stream: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    let eval = evaluate(kind, pair, sched)?;

    // probability of outcome 0 at each node, under channel 0 and channel 1
    let mut guess0: BTreeMap<PovmLabel, [f64; 2]> = BTreeMap::new();
    if kind == StrategyKind::Global {
        let outputs: Vec<_> = (0..sched.shots())
            .map(|k| pair.outputs(sched.r_for_last(k, None), sched.phi()))
            .collect();
        let joint0 = tensor_all(outputs.iter().map(|(a, _)| a.matrix()));
        let joint1 = tensor_all(outputs.iter().map(|(_, b)| b.matrix()));
        let povm = &eval.povm_tree[&PovmLabel::Global];
        guess0.insert(
            PovmLabel::Global,
            [povm.probabilities(&joint0).0, povm.probabilities(&joint1).0],
        );
    } else {
        for (label, povm) in &eval.povm_tree {
            let (rho0, rho1) = pair.outputs(eval.inputs[label], sched.phi());
            guess0.insert(
                label.clone(),
                [
                    povm.probabilities(rho0.matrix()).0,
                    povm.probabilities(rho1.matrix()).0,
                ],
            );
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let sample = |label: &PovmLabel, channel: usize, rng: &mut ChaCha8Rng| -> u8 {
        let p = guess0[label][channel];
        u8::from(rng.random::<f64>() >= p)
    };

    let mut correct = 0usize;
    for _ in 0..trials {
        let channel = usize::from(rng.random_bool(0.5));
        let guess = match kind {
            StrategyKind::Global => sample(&PovmLabel::Global, channel, &mut rng),
            StrategyKind::Bayesian => {
                let mut history = OutcomeHistory::empty();
                let mut last = 0;
                for _ in 0..sched.shots() {
                    last = sample(&PovmLabel::History(history.clone()), channel, &mut rng);
                    history = history.pushed(last);
                }
                last
            }
            StrategyKind::Markovian => {
                let mut last = None;
                for shot in 0..sched.shots() {
                    last = Some(sample(
                        &PovmLabel::LastBit { shot, last },
                        channel,
                        &mut rng,
                    ));
                }
                last.expect("at least one shot")
            }
        };
        if guess as usize == channel {
            correct += 1;
        }
    }
    Ok(correct as f64 / trials as f64)
}
