//! Optical-flow style motion analysis: first-order differences, the
//! directogram (per-frame histogram of flow magnitude over angular bins) and
//! the kinematic amplitude profile whose peaks mark kinematic beats.

use ndarray::{Array2, Array3};

use super::MotionSequence;
use crate::error::{Error, Result};
use crate::Real;

/// Per-frame first-order differences of every joint.
#[derive(Debug, Clone)]
pub struct FlowField<F: Real> {
    /// `(T-1) × J × 2` displacement vectors.
    pub values: Array3<F>,
    /// `(T-1) × J` Euclidean norms of the displacement vectors.
    pub magnitudes: Array2<F>,
    /// `(T-1) × J` flow angles in `[-π, π)`; zero where the magnitude is zero.
    pub angles: Array2<F>,
}

/// Histogram of flow magnitude over `K` angular bins, one row per flow frame.
#[derive(Debug, Clone)]
pub struct Directogram<F: Real> {
    /// `(T-1) × K` nonnegative magnitude totals.
    pub bins: Array2<F>,
    /// `K + 1` bin edges partitioning `[-π, π)` into half-open intervals.
    pub bin_edges: Vec<F>,
}

impl<F: Real> Directogram<F> {
    pub fn num_bins(&self) -> usize {
        self.bins.dim().1
    }
}

/// Kinematic amplitude: positive part of the frame-to-frame directogram
/// difference, summed over bins.
#[derive(Debug, Clone)]
pub struct KinematicProfile<F: Real> {
    /// Raw amplitudes, length `T - 2`.
    pub raw: Vec<F>,
    /// Min-max rescaling of `raw` into `[0, 1]`; all zeros for a constant
    /// profile.
    pub normalized: Vec<F>,
}

/// Computes per-joint displacement vectors between consecutive frames.
///
/// Angles use the two-argument arctangent of `(dy, dx)` in image coordinates,
/// normalized to `[-π, π)`.
pub fn first_order_difference<F: Real>(m: &MotionSequence<F>) -> FlowField<F> {
    let (t, j, _) = m.frames().dim();
    let f = m.frames();
    let mut values = Array3::zeros((t - 1, j, 2));
    let mut magnitudes = Array2::zeros((t - 1, j));
    let mut angles = Array2::zeros((t - 1, j));
    let pi = F::from_f64(std::f64::consts::PI).unwrap();
    for r in 0..t - 1 {
        for q in 0..j {
            let dx = f[[r + 1, q, 0]] - f[[r, q, 0]];
            let dy = f[[r + 1, q, 1]] - f[[r, q, 1]];
            values[[r, q, 0]] = dx;
            values[[r, q, 1]] = dy;
            let mag = (dx * dx + dy * dy).sqrt();
            magnitudes[[r, q]] = mag;
            if mag > F::zero() {
                let mut a = dy.atan2(dx);
                if a >= pi {
                    a = -pi; // fold +π onto -π so every angle lies in [-π, π)
                }
                angles[[r, q]] = a;
            }
        }
    }
    FlowField { values, magnitudes, angles }
}

/// Aggregates flow magnitude into `K` half-open angular bins per frame.
///
/// The bins exactly partition `[-π, π)`, so each row sums to the total flow
/// magnitude of that frame; zero-magnitude joints contribute to no bin.
pub fn directogram<F: Real>(flow: &FlowField<F>, k: usize) -> Result<Directogram<F>> {
    if k < 2 {
        return Err(Error::Parameter(format!("need at least 2 angular bins, got {k}")));
    }
    let (rows, joints) = flow.magnitudes.dim();
    let pi = F::from_f64(std::f64::consts::PI).unwrap();
    let two_pi = pi + pi;
    let width = two_pi / F::from_usize(k).unwrap();
    let mut bins = Array2::zeros((rows, k));
    for r in 0..rows {
        for q in 0..joints {
            let mag = flow.magnitudes[[r, q]];
            if mag > F::zero() {
                let a = flow.angles[[r, q]];
                let idx = ((a + pi) / width).to_usize().unwrap_or(0).min(k - 1);
                bins[[r, idx]] += mag;
            }
        }
    }
    let bin_edges = (0..=k)
        .map(|i| -pi + width * F::from_usize(i).unwrap())
        .collect();
    Ok(Directogram { bins, bin_edges })
}

/// Sums the positive bin-wise directogram increase between consecutive
/// frames and min-max normalizes the result into `[0, 1]`.
pub fn kinematic_amplitude<F: Real>(d: &Directogram<F>) -> Result<KinematicProfile<F>> {
    let (rows, k) = d.bins.dim();
    if rows < 2 {
        return Err(Error::Length(format!(
            "kinematic amplitude needs at least 2 directogram frames, got {rows}"
        )));
    }
    let mut raw = Vec::with_capacity(rows - 1);
    for r in 1..rows {
        let mut q = F::zero();
        for c in 0..k {
            let diff = d.bins[[r, c]].abs() - d.bins[[r - 1, c]].abs();
            if diff > F::zero() {
                q += diff;
            }
        }
        raw.push(q);
    }
    let normalized = min_max_normalize(&raw);
    Ok(KinematicProfile { raw, normalized })
}

/// Min-max rescaling into `[0, 1]`; a constant series maps to all zeros.
pub fn min_max_normalize<F: Real>(series: &[F]) -> Vec<F> {
    if series.is_empty() {
        return Vec::new();
    }
    let mut lo = series[0];
    let mut hi = series[0];
    for &v in series {
        if v < lo {
            lo = v;
        }
        if v > hi {
            hi = v;
        }
    }
    if hi <= lo {
        return vec![F::zero(); series.len()];
    }
    let span = hi - lo;
    series.iter().map(|&v| (v - lo) / span).collect()
}
