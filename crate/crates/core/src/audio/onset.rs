//! Musical onset detection: mel spectral flux plus local max/mean peak
//! picking.

use super::MelSpectrogram;
use crate::beat::BeatList;
use crate::error::{Error, Result};
use crate::Real;

/// Peak-picking windows (inclusive frame offsets) and threshold.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OnsetParams<F: Real> {
    pub wait: usize,
    pub pre_avg: usize,
    pub post_avg: usize,
    pub pre_max: usize,
    pub post_max: usize,
    pub delta: F,
}

impl<F: Real> Default for OnsetParams<F> {
    fn default() -> Self {
        Self {
            wait: 1,
            pre_avg: 3,
            post_avg: 3,
            pre_max: 3,
            post_max: 3,
            delta: F::from_f64(0.2).unwrap(),
        }
    }
}

impl<F: Real> OnsetParams<F> {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > F::zero()) {
            return Err(Error::Parameter("onset delta must be positive".into()));
        }
        Ok(())
    }
}

/// Spectral-flux envelope: per frame, the positive log-mel increase summed
/// over bands. `env[0] = 0`.
pub fn onset_envelope<F: Real>(m: &MelSpectrogram<F>) -> Vec<F> {
    let v = m.values();
    let (bands, frames) = v.dim();
    let mut env = vec![F::zero(); frames];
    for t in 1..frames {
        let mut s = F::zero();
        for c in 0..bands {
            let d = v[[c, t]] - v[[c, t - 1]];
            if d > F::zero() {
                s += d;
            }
        }
        env[t] = s;
    }
    env
}

/// Picks beats from an onset envelope.
///
/// Frame `t` is a beat iff it is the maximum of
/// `env[t-pre_max ..= t+post_max]`, exceeds the local mean over
/// `env[t-pre_avg ..= t+post_avg]` by `delta`, and at least `wait + 1`
/// frames have passed since the previous beat.
pub fn onset_beats<F: Real>(env: &[F], frame_rate: F, params: &OnsetParams<F>) -> BeatList<F> {
    let n = env.len();
    let mut times = Vec::new();
    let mut last: Option<usize> = None;
    for t in 0..n {
        let max_lo = t.saturating_sub(params.pre_max);
        let max_hi = (t + params.post_max).min(n.saturating_sub(1));
        let mut win_max = env[max_lo];
        for &v in &env[max_lo..=max_hi] {
            if v > win_max {
                win_max = v;
            }
        }
        if env[t] < win_max {
            continue;
        }
        let avg_lo = t.saturating_sub(params.pre_avg);
        let avg_hi = (t + params.post_avg).min(n.saturating_sub(1));
        let mut sum = F::zero();
        for &v in &env[avg_lo..=avg_hi] {
            sum += v;
        }
        let mean = sum / F::from_usize(avg_hi - avg_lo + 1).unwrap();
        if env[t] < mean + params.delta {
            continue;
        }
        if let Some(l) = last {
            if t < l + params.wait + 1 {
                continue;
            }
        }
        times.push(F::from_usize(t).unwrap() / frame_rate);
        last = Some(t);
    }
    BeatList::new(times).expect("frame indices strictly increase")
}
