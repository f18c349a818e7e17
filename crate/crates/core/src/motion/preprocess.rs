//! Motion pre/post-processing: even-drop resampling, gap filling and
//! bone-length correction.

use ndarray::{Array2, Array3};

use super::{MotionSequence, Skeleton};
use crate::error::{Error, Result};
use crate::Real;

/// Evenly spaced source indices for downsampling `source_len` frames to
/// `target_len`: `round(i * (source_len - 1) / (target_len - 1))`.
///
/// Endpoints are always preserved.
pub fn resample_indices(source_len: usize, target_len: usize) -> Vec<usize> {
    debug_assert!(target_len >= 2 && target_len <= source_len);
    let num = source_len - 1;
    let den = target_len - 1;
    (0..target_len)
        .map(|i| ((i * num) as f64 / den as f64).round() as usize)
        .collect()
}

/// Drops motion frames evenly to reach `target_frames`, preserving the first
/// and last frames. Upsampling is out of scope.
pub fn resample_motion<F: Real>(
    m: &MotionSequence<F>,
    target_frames: usize,
) -> Result<MotionSequence<F>> {
    let t = m.num_frames();
    if target_frames < 2 {
        return Err(Error::Parameter(format!(
            "target_frames must be at least 2, got {target_frames}"
        )));
    }
    if target_frames > t {
        return Err(Error::Unsupported(format!(
            "cannot resample {t} frames up to {target_frames}; upsampling is not supported"
        )));
    }
    if target_frames == t {
        return Ok(m.clone());
    }
    let idx = resample_indices(t, target_frames);
    let j = m.num_joints();
    let mut frames = Array3::zeros((target_frames, j, 2));
    for (row, &src) in idx.iter().enumerate() {
        for q in 0..j {
            frames[[row, q, 0]] = m.frames()[[src, q, 0]];
            frames[[row, q, 1]] = m.frames()[[src, q, 1]];
        }
    }
    // The sequence keeps its duration, so the effective rate shrinks.
    let new_fps = m.fps() * F::from_usize(target_frames - 1).unwrap()
        / F::from_usize(t - 1).unwrap();
    MotionSequence::new(frames, new_fps, m.joint_names().to_vec())
}

/// Even-index resampling of a scalar profile (same index rule as
/// [`resample_motion`]).
pub fn resample_profile<F: Real>(series: &[F], target_len: usize) -> Result<Vec<F>> {
    if target_len < 2 {
        return Err(Error::Parameter("target_len must be at least 2".into()));
    }
    if target_len > series.len() {
        return Err(Error::Unsupported(format!(
            "cannot resample profile of {} up to {}",
            series.len(),
            target_len
        )));
    }
    Ok(resample_indices(series.len(), target_len)
        .into_iter()
        .map(|i| series[i])
        .collect())
}

/// Fills unobserved keypoints by per-joint linear interpolation in time;
/// leading/trailing gaps copy the nearest observed value.
///
/// `mask[t][j]` is `true` where the joint was observed. A joint that is never
/// observed is a data error.
pub fn fill_missing_keypoints<F: Real>(
    m: &MotionSequence<F>,
    mask: &Array2<bool>,
) -> Result<MotionSequence<F>> {
    let (t, j, _) = m.frames().dim();
    if mask.dim() != (t, j) {
        return Err(Error::Data(format!(
            "mask shape {:?} does not match motion {:?}",
            mask.dim(),
            (t, j)
        )));
    }
    let mut frames = m.frames().clone();
    for q in 0..j {
        let observed: Vec<usize> = (0..t).filter(|&r| mask[[r, q]]).collect();
        if observed.is_empty() {
            return Err(Error::Data(format!("joint {q} is never observed")));
        }
        for r in 0..t {
            if mask[[r, q]] {
                continue;
            }
            // nearest observed neighbors on each side
            let before = observed.partition_point(|&o| o < r).checked_sub(1).map(|i| observed[i]);
            let after = observed.get(observed.partition_point(|&o| o < r)).copied();
            for c in 0..2 {
                frames[[r, q, c]] = match (before, after) {
                    (Some(a), Some(b)) => {
                        let w = F::from_usize(r - a).unwrap() / F::from_usize(b - a).unwrap();
                        m.frames()[[a, q, c]] * (F::one() - w) + m.frames()[[b, q, c]] * w
                    }
                    (Some(a), None) => m.frames()[[a, q, c]],
                    (None, Some(b)) => m.frames()[[b, q, c]],
                    (None, None) => unreachable!("observed list is nonempty"),
                };
            }
        }
    }
    MotionSequence::new(frames, m.fps(), m.joint_names().to_vec())
}

/// Rescales over-length bones to the corpus mean length, traversing the
/// skeleton breadth-first from the root with parents fixed and subtrees
/// translated along.
///
/// After correction every bone length is at most `factor` times its mean.
pub fn correct_bone_lengths<F: Real>(
    m: &MotionSequence<F>,
    skeleton: &Skeleton<F>,
    factor: F,
) -> Result<MotionSequence<F>> {
    if !(factor > F::one()) {
        return Err(Error::Parameter("correction factor must exceed 1".into()));
    }
    if skeleton.num_joints() != m.num_joints() {
        return Err(Error::Data(format!(
            "skeleton has {} joints, motion has {}",
            skeleton.num_joints(),
            m.num_joints()
        )));
    }
    // BFS ordering of (parent, child, edge index) from the root.
    let j = m.num_joints();
    let mut adj = vec![Vec::new(); j];
    for (e, &(a, b)) in skeleton.edges().iter().enumerate() {
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    let mut order = Vec::with_capacity(j.saturating_sub(1));
    let mut seen = vec![false; j];
    let mut queue = std::collections::VecDeque::from([skeleton.root()]);
    seen[skeleton.root()] = true;
    while let Some(u) = queue.pop_front() {
        for &(v, e) in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                order.push((u, v, e));
                queue.push_back(v);
            }
        }
    }

    let src = m.frames();
    let mut out = src.clone();
    for r in 0..m.num_frames() {
        for &(parent, child, e) in &order {
            let mean = skeleton.mean_lengths()[e];
            let vx = src[[r, child, 0]] - src[[r, parent, 0]];
            let vy = src[[r, child, 1]] - src[[r, parent, 1]];
            let len = (vx * vx + vy * vy).sqrt();
            let (bx, by) = if len > factor * mean {
                if len <= F::epsilon() {
                    log::warn!("degenerate zero-length bone {e} flagged over-length; left unchanged");
                    (vx, vy)
                } else {
                    (vx / len * mean, vy / len * mean)
                }
            } else {
                (vx, vy)
            };
            out[[r, child, 0]] = out[[r, parent, 0]] + bx;
            out[[r, child, 1]] = out[[r, parent, 1]] + by;
        }
    }
    MotionSequence::new(out, m.fps(), m.joint_names().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motion::NECK;
    use ndarray::Array3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn names(j: usize) -> Vec<String> {
        (0..j).map(|i| format!("j{i}")).collect()
    }

    fn ramp_motion(t: usize, j: usize) -> MotionSequence<f64> {
        let mut frames = Array3::zeros((t, j, 2));
        for r in 0..t {
            for q in 0..j {
                frames[[r, q, 0]] = r as f64;
                frames[[r, q, 1]] = (q as f64) * 10.0 + r as f64 * 0.5;
            }
        }
        MotionSequence::new(frames, 60.0, names(j)).unwrap()
    }

    #[test]
    fn identity_at_equal_length() {
        let m = ramp_motion(10, 2);
        let r = resample_motion(&m, 10).unwrap();
        assert_eq!(m, r);
    }

    #[test]
    fn indices_follow_round_formula() {
        let m = ramp_motion(100, 1);
        let r = resample_motion(&m, 50).unwrap();
        let expected = resample_indices(100, 50);
        for (row, &src) in expected.iter().enumerate() {
            assert_eq!(r.frames()[[row, 0, 0]], src as f64);
        }
        // endpoints preserved
        assert_eq!(r.frames()[[0, 0, 0]], 0.0);
        assert_eq!(r.frames()[[49, 0, 0]], 99.0);
    }

    #[test]
    fn upsampling_is_unsupported() {
        // 25 s at 60 fps has 1500 frames; 1562 mel frames cannot be matched.
        let m = ramp_motion(1500, 1);
        assert!(matches!(resample_motion(&m, 1562), Err(Error::Unsupported(_))));
        assert!(resample_motion(&m, 781).is_ok());
    }

    #[test]
    fn resample_is_idempotent_at_fixed_target() {
        let m = ramp_motion(64, 2);
        let once = resample_motion(&m, 32).unwrap();
        let twice = resample_motion(&once, 32).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn fill_no_missing_is_identity() {
        let m = ramp_motion(8, 2);
        let mask = Array2::from_elem((8, 2), true);
        assert_eq!(fill_missing_keypoints(&m, &mask).unwrap(), m);
    }

    #[test]
    fn fill_midpoint() {
        let mut frames = Array3::zeros((3, 1, 2));
        frames[[0, 0, 0]] = 0.0;
        frames[[1, 0, 0]] = 99.0; // unobserved garbage
        frames[[2, 0, 0]] = 2.0;
        let m = MotionSequence::new(frames, 30.0, names(1)).unwrap();
        let mut mask = Array2::from_elem((3, 1), true);
        mask[[1, 0]] = false;
        let filled = fill_missing_keypoints(&m, &mask).unwrap();
        assert_eq!(filled.frames()[[1, 0, 0]], 1.0);
    }

    #[test]
    fn fill_matches_linear_interp_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let t = 40;
        let j = 3;
        let m = {
            let mut frames = Array3::zeros((t, j, 2));
            for v in frames.iter_mut() {
                *v = rng.random_range(-5.0..5.0);
            }
            MotionSequence::new(frames, 30.0, names(j)).unwrap()
        };
        let mut mask = Array2::from_elem((t, j), true);
        for r in 0..t {
            for q in 0..j {
                if rng.random_bool(0.2) {
                    mask[[r, q]] = false;
                }
            }
        }
        // ensure every joint observed at least once
        for q in 0..j {
            mask[[0, q]] = true;
        }
        let filled = fill_missing_keypoints(&m, &mask).unwrap();
        // per-joint per-coordinate 1D interpolation oracle
        for q in 0..j {
            for c in 0..2 {
                let obs: Vec<(usize, f64)> = (0..t)
                    .filter(|&r| mask[[r, q]])
                    .map(|r| (r, m.frames()[[r, q, c]]))
                    .collect();
                for r in 0..t {
                    let expected = if mask[[r, q]] {
                        m.frames()[[r, q, c]]
                    } else {
                        let after = obs.iter().find(|(o, _)| *o > r);
                        let before = obs.iter().rev().find(|(o, _)| *o < r);
                        match (before, after) {
                            (Some(&(a, va)), Some(&(b, vb))) => {
                                va + (vb - va) * (r - a) as f64 / (b - a) as f64
                            }
                            (Some(&(_, va)), None) => va,
                            (None, Some(&(_, vb))) => vb,
                            _ => unreachable!(),
                        }
                    };
                    assert!((filled.frames()[[r, q, c]] - expected).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn fill_rejects_never_observed_joint() {
        let m = ramp_motion(5, 2);
        let mut mask = Array2::from_elem((5, 2), true);
        for r in 0..5 {
            mask[[r, 1]] = false;
        }
        assert!(matches!(fill_missing_keypoints(&m, &mask), Err(Error::Data(_))));
    }

    fn chain_skeleton(mean: f64) -> Skeleton<f64> {
        Skeleton::new(vec![(0, 1), (1, 2)], vec![mean, mean], 0, 3).unwrap()
    }

    fn chain_motion(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> MotionSequence<f64> {
        let mut frames = Array3::zeros((2, 3, 2));
        for r in 0..2 {
            frames[[r, 0, 0]] = p0.0;
            frames[[r, 0, 1]] = p0.1;
            frames[[r, 1, 0]] = p1.0;
            frames[[r, 1, 1]] = p1.1;
            frames[[r, 2, 0]] = p2.0;
            frames[[r, 2, 1]] = p2.1;
        }
        MotionSequence::new(frames, 30.0, names(3)).unwrap()
    }

    #[test]
    fn bones_within_threshold_untouched() {
        let m = chain_motion((0.0, 0.0), (1.0, 0.0), (2.1, 0.0));
        let s = chain_skeleton(1.0);
        let corrected = correct_bone_lengths(&m, &s, 1.3).unwrap();
        assert_eq!(corrected, m);
    }

    #[test]
    fn double_length_bone_snaps_to_mean() {
        let m = chain_motion((0.0, 0.0), (2.0, 0.0), (3.0, 0.0));
        let s = chain_skeleton(1.0);
        let corrected = correct_bone_lengths(&m, &s, 1.3).unwrap();
        // first bone rescaled to exactly the mean; subtree translated
        assert!((corrected.frames()[[0, 1, 0]] - 1.0).abs() < 1e-12);
        assert!((corrected.frames()[[0, 2, 0]] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn random_perturbations_satisfy_post_condition() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let edges = Skeleton::<f64>::standard_14_edges();
        for trial in 0..20 {
            // legs/arms roughly unit bones around a grid pose
            let mut frames = Array3::zeros((3, 14, 2));
            for r in 0..3 {
                for q in 0..14 {
                    frames[[r, q, 0]] = (q % 4) as f64 + rng.random_range(-0.9..0.9);
                    frames[[r, q, 1]] = (q / 4) as f64 + rng.random_range(-0.9..0.9);
                }
            }
            let m = MotionSequence::new(frames, 30.0, names(14)).unwrap();
            let means = vec![0.8; 13];
            let s = Skeleton::new(edges.clone(), means, NECK, 14).unwrap();
            let corrected = correct_bone_lengths(&m, &s, 1.3).unwrap();
            for r in 0..3 {
                for (e, &(a, b)) in s.edges().iter().enumerate() {
                    let dx = corrected.frames()[[r, a, 0]] - corrected.frames()[[r, b, 0]];
                    let dy = corrected.frames()[[r, a, 1]] - corrected.frames()[[r, b, 1]];
                    let len = (dx * dx + dy * dy).sqrt();
                    assert!(
                        len <= 1.3 * s.mean_lengths()[e] + 1e-9,
                        "trial {trial}: bone {e} still over-length: {len}"
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_factor_at_most_one() {
        let m = chain_motion((0.0, 0.0), (1.0, 0.0), (2.0, 0.0));
        let s = chain_skeleton(1.0);
        assert!(correct_bone_lengths(&m, &s, 1.0).is_err());
    }
}
