//! Kinematic beat extraction: peak picking on the normalized amplitude
//! profile.

use super::flow::KinematicProfile;
use crate::beat::BeatList;
use crate::Real;

/// Peak-picking parameters for kinematic beats.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PeakParams<F: Real> {
    /// Threshold on the normalized profile.
    pub threshold: F,
    /// Minimum time between accepted peaks, seconds.
    pub min_gap_s: F,
}

impl<F: Real> Default for PeakParams<F> {
    fn default() -> Self {
        Self {
            threshold: F::from_f64(0.3).unwrap(),
            min_gap_s: F::from_f64(0.25).unwrap(),
        }
    }
}

/// Finds local maxima of the normalized profile above the threshold,
/// enforcing the minimum inter-beat gap, and reports timestamps
/// `frame_index / fps`.
pub fn kinematic_beats<F: Real>(
    q: &KinematicProfile<F>,
    fps: F,
    params: &PeakParams<F>,
) -> BeatList<F> {
    let series = &q.normalized;
    let n = series.len();
    if n == 0 {
        return BeatList::empty();
    }
    let gap_frames = (params.min_gap_s * fps).round().to_usize().unwrap_or(0);
    let mut times = Vec::new();
    let mut last: Option<usize> = None;
    for i in 0..n {
        let left_ok = i == 0 || series[i] > series[i - 1];
        let right_ok = i + 1 == n || series[i] >= series[i + 1];
        if !(left_ok && right_ok) || series[i] < params.threshold {
            continue;
        }
        if let Some(l) = last {
            if i - l < gap_frames.max(1) {
                continue;
            }
        }
        times.push(F::from_usize(i).unwrap() / fps);
        last = Some(i);
    }
    BeatList::new(times).expect("frame indices are strictly increasing")
}
