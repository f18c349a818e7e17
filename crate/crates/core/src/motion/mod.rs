//! 2D motion sequences: representations, rhythm analysis and preprocessing.

mod beats;
mod flow;
mod io;
mod preprocess;
mod synth;

pub use beats::{kinematic_beats, PeakParams};
pub use flow::{directogram, first_order_difference, kinematic_amplitude};
pub use flow::{Directogram, FlowField, KinematicProfile};
pub use io::{read_mask, read_motion, write_mask, write_motion};
pub use preprocess::{
    correct_bone_lengths, fill_missing_keypoints, resample_indices, resample_motion,
    resample_profile,
};
pub use synth::{synth_motion, MotionPattern};

use ndarray::{Array2, Array3};

use crate::error::{Error, Result};
use crate::Real;

/// Names of the 14 body keypoints used throughout the pipeline.
pub const JOINT_NAMES_14: [&str; 14] = [
    "nose", "neck", "l_shoulder", "r_shoulder", "l_elbow", "r_elbow", "l_wrist", "r_wrist",
    "l_hip", "r_hip", "l_knee", "r_knee", "l_ankle", "r_ankle",
];

/// Index of the neck joint, the root for skeleton traversals.
pub const NECK: usize = 1;

/// A 2D keypoint trajectory: `T × J × 2` coordinates at a fixed frame rate.
///
/// Coordinates follow the image convention (y grows downward).
#[derive(Debug, Clone, PartialEq)]
pub struct MotionSequence<F: Real> {
    frames: Array3<F>,
    fps: F,
    joint_names: Vec<String>,
}

impl<F: Real> MotionSequence<F> {
    /// Validates the type invariants: at least 2 frames, at least one joint,
    /// finite coordinates, positive frame rate.
    pub fn new(frames: Array3<F>, fps: F, joint_names: Vec<String>) -> Result<Self> {
        let (t, j, c) = frames.dim();
        if t < 2 {
            return Err(Error::Length(format!("motion needs at least 2 frames, got {t}")));
        }
        if j < 1 {
            return Err(Error::Data("motion needs at least one joint".into()));
        }
        if c != 2 {
            return Err(Error::Data(format!("expected 2 coordinates per joint, got {c}")));
        }
        if joint_names.len() != j {
            return Err(Error::Data(format!(
                "{} joint names for {} joints",
                joint_names.len(),
                j
            )));
        }
        if frames.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("non-finite motion coordinate".into()));
        }
        if !(fps > F::zero()) || !fps.is_finite() {
            return Err(Error::Data("fps must be a positive finite number".into()));
        }
        Ok(Self { frames, fps, joint_names })
    }

    pub fn frames(&self) -> &Array3<F> {
        &self.frames
    }

    pub fn fps(&self) -> F {
        self.fps
    }

    pub fn joint_names(&self) -> &[String] {
        &self.joint_names
    }

    pub fn num_frames(&self) -> usize {
        self.frames.dim().0
    }

    pub fn num_joints(&self) -> usize {
        self.frames.dim().1
    }

    pub fn duration_s(&self) -> F {
        F::from_usize(self.num_frames() - 1).unwrap() / self.fps
    }

    /// Flattens to a `T × 2J` matrix (per-frame coordinate rows).
    pub fn to_flat(&self) -> Array2<F> {
        let (t, j, _) = self.frames.dim();
        let mut out = Array2::zeros((t, 2 * j));
        for r in 0..t {
            for q in 0..j {
                out[[r, 2 * q]] = self.frames[[r, q, 0]];
                out[[r, 2 * q + 1]] = self.frames[[r, q, 1]];
            }
        }
        out
    }

    /// Inverse of [`to_flat`](Self::to_flat).
    pub fn from_flat(flat: &Array2<F>, fps: F, joint_names: Vec<String>) -> Result<Self> {
        let (t, c) = flat.dim();
        if c % 2 != 0 || c == 0 {
            return Err(Error::Data(format!("flat motion width {c} is not 2J")));
        }
        let j = c / 2;
        let mut frames = Array3::zeros((t, j, 2));
        for r in 0..t {
            for q in 0..j {
                frames[[r, q, 0]] = flat[[r, 2 * q]];
                frames[[r, q, 1]] = flat[[r, 2 * q + 1]];
            }
        }
        Self::new(frames, fps, joint_names)
    }
}

/// A tree of bones over the joints with per-edge corpus mean lengths.
#[derive(Debug, Clone)]
pub struct Skeleton<F: Real> {
    edges: Vec<(usize, usize)>,
    mean_lengths: Vec<F>,
    root: usize,
    num_joints: usize,
}

impl<F: Real> Skeleton<F> {
    /// Validates that the edges form a connected acyclic graph over
    /// `num_joints` joints and that every mean length is positive.
    pub fn new(
        edges: Vec<(usize, usize)>,
        mean_lengths: Vec<F>,
        root: usize,
        num_joints: usize,
    ) -> Result<Self> {
        if edges.len() != num_joints.saturating_sub(1) {
            return Err(Error::Data(format!(
                "{} edges cannot form a tree over {} joints",
                edges.len(),
                num_joints
            )));
        }
        if mean_lengths.len() != edges.len() {
            return Err(Error::Data("one mean length per edge required".into()));
        }
        if mean_lengths.iter().any(|&l| !(l > F::zero()) || !l.is_finite()) {
            return Err(Error::Data("mean bone lengths must be positive".into()));
        }
        if root >= num_joints {
            return Err(Error::Parameter(format!("root joint {root} out of range")));
        }
        // Connectivity check by BFS from the root.
        let mut adj = vec![Vec::new(); num_joints];
        for &(a, b) in &edges {
            if a >= num_joints || b >= num_joints || a == b {
                return Err(Error::Data(format!("invalid edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; num_joints];
        let mut queue = std::collections::VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Data("skeleton edges do not connect all joints".into()));
        }
        Ok(Self { edges, mean_lengths, root, num_joints })
    }

    /// The 13-bone tree over [`JOINT_NAMES_14`], rooted at the neck.
    pub fn standard_14_edges() -> Vec<(usize, usize)> {
        vec![
            (1, 0),  // neck - nose
            (1, 2),  // neck - l_shoulder
            (1, 3),  // neck - r_shoulder
            (2, 4),  // l_shoulder - l_elbow
            (4, 6),  // l_elbow - l_wrist
            (3, 5),  // r_shoulder - r_elbow
            (5, 7),  // r_elbow - r_wrist
            (1, 8),  // neck - l_hip
            (1, 9),  // neck - r_hip
            (8, 10), // l_hip - l_knee
            (10, 12),
            (9, 11), // r_hip - r_knee
            (11, 13),
        ]
    }

    /// Builds the standard 14-joint skeleton with mean bone lengths measured
    /// over a corpus of motion sequences.
    pub fn standard_14_from_corpus(corpus: &[MotionSequence<F>]) -> Result<Self> {
        let edges = Self::standard_14_edges();
        let means = measure_mean_lengths(corpus, &edges)?;
        Self::new(edges, means, NECK, 14)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn mean_lengths(&self) -> &[F] {
        &self.mean_lengths
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn num_joints(&self) -> usize {
        self.num_joints
    }
}

/// Measures per-edge mean bone lengths over a corpus.
pub fn measure_mean_lengths<F: Real>(
    corpus: &[MotionSequence<F>],
    edges: &[(usize, usize)],
) -> Result<Vec<F>> {
    if corpus.is_empty() {
        return Err(Error::Data("empty corpus".into()));
    }
    let mut sums = vec![F::zero(); edges.len()];
    let mut count = F::zero();
    for m in corpus {
        let f = m.frames();
        for r in 0..m.num_frames() {
            for (e, &(a, b)) in edges.iter().enumerate() {
                if a >= m.num_joints() || b >= m.num_joints() {
                    return Err(Error::Data("edge references missing joint".into()));
                }
                let dx = f[[r, a, 0]] - f[[r, b, 0]];
                let dy = f[[r, a, 1]] - f[[r, b, 1]];
                sums[e] += (dx * dx + dy * dy).sqrt();
            }
        }
        count += F::from_usize(m.num_frames()).unwrap();
    }
    Ok(sums.into_iter().map(|s| s / count).collect())
}
