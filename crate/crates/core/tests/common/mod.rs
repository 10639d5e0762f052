//! Test-only oracles in Bloch-vector form, independent of the matrix engine.
#![allow(dead_code)]

use qcd_core::ChannelFamily;

pub type Bloch = [f64; 3];

/// Bloch vector of `√(1−r)|0⟩ + e^{−iφ}√r|1⟩`.
pub fn input_bloch(r: f64, phi: f64) -> Bloch {
    let c = 2.0 * (r * (1.0 - r)).sqrt();
    [c * phi.cos(), -c * phi.sin(), 1.0 - 2.0 * r]
}

pub fn channel_bloch(family: ChannelFamily, eta: f64, v: Bloch) -> Bloch {
    let [x, y, z] = v;
    match family {
        ChannelFamily::Depolarizing => [(1.0 - eta) * x, (1.0 - eta) * y, (1.0 - eta) * z],
        ChannelFamily::BitFlip => [x, (1.0 - 2.0 * eta) * y, (1.0 - 2.0 * eta) * z],
        ChannelFamily::AmplitudeDamping => {
            let (c, s) = (eta.cos(), eta.sin());
            [c * x, c * y, s * s + c * c * z]
        }
    }
}

fn norm(v: Bloch) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: Bloch, b: Bloch) -> f64 {
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

/// Minimum-error measurement for priors `(p0, 1 − p0)` on states `a`, `b`.
/// Returns the probability of outcome 0 under `a` and under `b`.
pub fn helstrom_bloch(p0: f64, a: Bloch, b: Bloch) -> (f64, f64) {
    let p1 = 1.0 - p0;
    let w = [
        p0 * a[0] - p1 * b[0],
        p0 * a[1] - p1 * b[1],
        p0 * a[2] - p1 * b[2],
    ];
    let len = norm(w);
    if p0 - p1 >= len {
        (1.0, 1.0)
    } else if p1 - p0 >= len {
        (0.0, 0.0)
    } else {
        let n = [w[0] / len, w[1] / len, w[2] / len];
        (0.5 * (1.0 + dot(a, n)), 0.5 * (1.0 + dot(b, n)))
    }
}

/// One-shot equal-prior success: `½ + ¼|a − b|`.
pub fn one_shot_bloch(a: Bloch, b: Bloch) -> f64 {
    0.5 + 0.25 * norm([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

pub fn outputs(family: ChannelFamily, eta0: f64, eta1: f64, r: f64, phi: f64) -> (Bloch, Bloch) {
    let v = input_bloch(r, phi);
    (
        channel_bloch(family, eta0, v),
        channel_bloch(family, eta1, v),
    )
}

/// Adaptive protocol by explicit enumeration of every outcome string.
///
/// `markovian` selects whether the measurement at each step sees the whole
/// history or only its last outcome (with earlier outcomes summed out).
fn enumerate(
    family: ChannelFamily,
    eta0: f64,
    eta1: f64,
    rs: &[f64],
    phi: f64,
    markovian: bool,
) -> f64 {
    // likelihoods[h] = (P(h | channel 0), P(h | channel 1)); history h read as bits, newest lowest
    let mut likelihoods: Vec<(f64, f64)> = vec![(1.0, 1.0)];
    for (k, &r) in rs.iter().enumerate() {
        let (a, b) = outputs(family, eta0, eta1, r, phi);
        let weights_by_last: [(f64, f64); 2] = if markovian && k > 0 {
            let mut w = [(0.0, 0.0); 2];
            for (h, &(l0, l1)) in likelihoods.iter().enumerate() {
                w[h & 1].0 += l0;
                w[h & 1].1 += l1;
            }
            w
        } else {
            [(0.0, 0.0); 2]
        };
        let mut next = vec![(0.0, 0.0); 2 * likelihoods.len()];
        for (h, &(l0, l1)) in likelihoods.iter().enumerate() {
            let (w0, w1) = if k == 0 {
                (1.0, 1.0)
            } else if markovian {
                weights_by_last[h & 1]
            } else {
                (l0, l1)
            };
            let p0 = if w0 + w1 > 0.0 { w0 / (w0 + w1) } else { 0.5 };
            let (q0, q1) = helstrom_bloch(p0, a, b);
            next[2 * h] = (l0 * q0, l1 * q1);
            next[2 * h + 1] = (l0 * (1.0 - q0), l1 * (1.0 - q1));
        }
        likelihoods = next;
    }
    0.5 * likelihoods
        .iter()
        .enumerate()
        .map(|(h, &(l0, l1))| if h & 1 == 0 { l0 } else { l1 })
        .sum::<f64>()
}

pub fn markovian_enumeration(
    family: ChannelFamily,
    eta0: f64,
    eta1: f64,
    rs: &[f64],
    phi: f64,
) -> f64 {
    enumerate(family, eta0, eta1, rs, phi, true)
}

pub fn bayesian_enumeration(
    family: ChannelFamily,
    eta0: f64,
    eta1: f64,
    rs: &[f64],
    phi: f64,
) -> f64 {
    enumerate(family, eta0, eta1, rs, phi, false)
}

/// Equal-prior one-shot optimum over the input, from the channel definitions.
pub fn closed_form_one_shot(family: ChannelFamily, eta0: f64, eta1: f64) -> f64 {
    match family {
        ChannelFamily::Depolarizing => 0.5 * (1.0 + 0.5 * (eta0 - eta1)),
        ChannelFamily::BitFlip => 0.5 * (1.0 + (eta0 - eta1)),
        ChannelFamily::AmplitudeDamping => {
            let (c0, c1) = (eta0.cos(), eta1.cos());
            let g = c0 + c1;
            if g < std::f64::consts::FRAC_1_SQRT_2 {
                0.25 * (2.0 + (c1 - c0) / (1.0 - g * g).sqrt())
            } else {
                0.5 * (eta0.sin().powi(2) + c1 * c1)
            }
        }
    }
}

/// Maximizer of a unimodal function on `[lo, hi]` by dense scan then golden section.
pub fn argmax_scan(f: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> f64 {
    let h = (hi - lo) / samples as f64;
    let best = (0..=samples)
        .map(|i| lo + h * i as f64)
        .max_by(|x, y| f(*x).total_cmp(&f(*y)))
        .unwrap();
    let (mut a, mut b) = ((best - h).max(lo), (best + h).min(hi));
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let (c, d) = (b - phi * (b - a), a + phi * (b - a));
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}
