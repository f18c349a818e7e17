//! Synthetic motion generator with analytically known kinematic beats.
//!
//! A 14-joint stick figure holds a base pose and performs a short whole-body
//! jerk at each scripted beat time; between jerks only a tiny smooth sway is
//! present, so the kinematic amplitude profile peaks exactly at the script.

use ndarray::Array3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use super::{MotionSequence, JOINT_NAMES_14};
use crate::beat::BeatList;
use crate::error::{Error, Result};
use crate::Real;

/// Movement scripts for the generator.
#[derive(Debug, Clone, PartialEq)]
pub enum MotionPattern {
    /// Perfectly still pose; no beats.
    Static,
    /// Periodic jerks at `rate_hz`, the first at half a period.
    Bounce { rate_hz: f64 },
    /// Jerks at explicit times (seconds).
    Script { beats: Vec<f64> },
}

impl MotionPattern {
    /// Ground-truth beat times within `[0, duration_s)`.
    pub fn beat_times(&self, duration_s: f64) -> Vec<f64> {
        match self {
            MotionPattern::Static => Vec::new(),
            MotionPattern::Bounce { rate_hz } => {
                let mut out = Vec::new();
                let mut k = 0u32;
                loop {
                    let t = (k as f64 + 0.5) / rate_hz;
                    if t >= duration_s {
                        break;
                    }
                    out.push(t);
                    k += 1;
                }
                out
            }
            MotionPattern::Script { beats } => {
                beats.iter().copied().filter(|&t| t >= 0.0 && t < duration_s).collect()
            }
        }
    }
}

/// Base pose of the 14-joint figure in a unit square (y grows downward).
const BASE_POSE: [(f64, f64); 14] = [
    (0.50, 0.20), // nose
    (0.50, 0.30), // neck
    (0.42, 0.31),
    (0.58, 0.31),
    (0.38, 0.42),
    (0.62, 0.42),
    (0.36, 0.52),
    (0.64, 0.52),
    (0.45, 0.55),
    (0.55, 0.55),
    (0.44, 0.72),
    (0.56, 0.72),
    (0.44, 0.88),
    (0.56, 0.88),
];

/// Duration of one jerk, seconds.
const IMPULSE_WINDOW_S: f64 = 0.12;

/// Generates a motion sequence following the pattern, together with the
/// ground-truth beat list. Deterministic given the seed.
pub fn synth_motion<F: Real>(
    pattern: &MotionPattern,
    duration_s: f64,
    fps: f64,
    seed: u64,
) -> Result<(MotionSequence<F>, BeatList<F>)> {
    if !(duration_s > 0.0) {
        return Err(Error::Parameter("duration must be positive".into()));
    }
    if !(fps > 0.0) {
        return Err(Error::Parameter("fps must be positive".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let t_frames = ((duration_s * fps).round() as usize).max(2);
    let beats = pattern.beat_times(duration_s);

    // Per-item randomization: pose placement and jerk strengths.
    let scale = rng.random_range(0.85..1.15);
    let cx = 0.5 + rng.random_range(-0.04..0.04);
    let cy = 0.5 + rng.random_range(-0.04..0.04);
    let amp = rng.random_range(0.12..0.20);
    let joint_gain: Vec<f64> = (0..14).map(|_| rng.random_range(0.7..1.3)).collect();
    let sway_phase: Vec<f64> =
        (0..14).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    let beat_dirs: Vec<f64> =
        beats.iter().map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();

    let sway_amp = if beats.is_empty() { 0.0 } else { 0.004 };
    let sway_hz = 0.23;

    let mut frames = Array3::zeros((t_frames, 14, 2));
    for r in 0..t_frames {
        let t = r as f64 / fps;
        // jerk displacement: raised-cosine bump per scripted beat
        let mut jx = 0.0;
        let mut jy = 0.0;
        for (b, &tb) in beats.iter().enumerate() {
            let tau = (t - tb) / IMPULSE_WINDOW_S;
            if (0.0..1.0).contains(&tau) {
                let bump = 0.5 * (1.0 - (std::f64::consts::TAU * tau).cos());
                jx += amp * bump * beat_dirs[b].cos();
                jy += amp * bump * beat_dirs[b].sin();
            }
        }
        for q in 0..14 {
            let (bx, by) = BASE_POSE[q];
            let sway = sway_amp * (std::f64::consts::TAU * sway_hz * t + sway_phase[q]).sin();
            let x = cx + scale * (bx - 0.5) + joint_gain[q] * jx + sway;
            let y = cy + scale * (by - 0.5) + joint_gain[q] * jy + sway * 0.7;
            frames[[r, q, 0]] = F::from_f64(x).unwrap();
            frames[[r, q, 1]] = F::from_f64(y).unwrap();
        }
    }
    let names = JOINT_NAMES_14.iter().map(|s| s.to_string()).collect();
    let motion = MotionSequence::new(frames, F::from_f64(fps).unwrap(), names)?;
    let beat_list = BeatList::new(beats.into_iter().map(|t| F::from_f64(t).unwrap()).collect())?;
    Ok((motion, beat_list))
}
