//! Minimal `f32` neural-network stack: a tape-based reverse-mode autodiff
//! engine over 2D arrays, the layers used by the VAEs and the transformer
//! denoiser, and an AdamW optimizer.
//!
//! Everything is single-threaded and deterministic: fixed op order, seeded
//! initialization, no hidden parallelism.

mod adamw;
mod layers;
mod tape;

pub use adamw::{linear_warmup_lr, AdamW};
pub use layers::{
    AttentionLayer, Conv1dLayer, FeedForward, LayerNormLayer, LinearLayer, ResBlock1d,
    SelfAttention1d, TransformerBlock,
};
pub use tape::{Tape, VarId};

use ndarray::Array2;
use rand::Rng;
use rand_distr::StandardNormal;

/// Named parameter arrays of one model, checkpointed as a flat f32 buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamStore {
    names: Vec<String>,
    values: Vec<Array2<f32>>,
}

impl ParamStore {
    pub fn new() -> Self {
        Self { names: Vec::new(), values: Vec::new() }
    }

    pub fn add(&mut self, name: impl Into<String>, value: Array2<f32>) -> usize {
        self.names.push(name.into());
        self.values.push(value);
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn value(&self, id: usize) -> &Array2<f32> {
        &self.values[id]
    }

    pub fn value_mut(&mut self, id: usize) -> &mut Array2<f32> {
        &mut self.values[id]
    }

    pub fn shapes(&self) -> Vec<(String, (usize, usize))> {
        self.names
            .iter()
            .cloned()
            .zip(self.values.iter().map(|v| v.dim()))
            .collect()
    }

    /// Zero arrays matching every parameter, for gradient accumulation.
    pub fn grads_like(&self) -> Vec<Array2<f32>> {
        self.values.iter().map(|v| Array2::zeros(v.dim())).collect()
    }

    pub fn total_elements(&self) -> usize {
        self.values.iter().map(|v| v.len()).sum()
    }

    /// Concatenates all parameters row-major into one flat vector.
    pub fn to_flat(&self) -> Vec<f32> {
        let mut out = Vec::with_capacity(self.total_elements());
        for v in &self.values {
            out.extend(v.iter().copied());
        }
        out
    }

    /// Restores parameters from a flat vector (shapes must already match).
    pub fn load_flat(&mut self, flat: &[f32]) -> crate::Result<()> {
        if flat.len() != self.total_elements() {
            return Err(crate::Error::State(format!(
                "checkpoint has {} values, model needs {}",
                flat.len(),
                self.total_elements()
            )));
        }
        let mut off = 0;
        for v in &mut self.values {
            for x in v.iter_mut() {
                *x = flat[off];
                off += 1;
            }
        }
        Ok(())
    }
}

impl Default for ParamStore {
    fn default() -> Self {
        Self::new()
    }
}

/// Gaussian init with the given standard deviation.
pub fn randn_init<R: Rng>(rng: &mut R, rows: usize, cols: usize, std: f32) -> Array2<f32> {
    Array2::from_shape_fn((rows, cols), |_| {
        let z: f32 = rng.sample(StandardNormal);
        z * std
    })
}

/// Kaiming-style fan-in init for linear/conv weights.
pub fn kaiming_init<R: Rng>(rng: &mut R, fan_in: usize, rows: usize, cols: usize) -> Array2<f32> {
    randn_init(rng, rows, cols, (2.0 / fan_in as f32).sqrt())
}

/// Fixed sinusoidal embedding table: `len × dim`.
pub fn sinusoidal_table(len: usize, dim: usize) -> Array2<f32> {
    let mut out = Array2::zeros((len, dim));
    let half = dim / 2;
    for p in 0..len {
        for i in 0..half {
            let freq = (10_000f64).powf(-(i as f64) / half as f64);
            let angle = p as f64 * freq;
            out[[p, i]] = angle.sin() as f32;
            out[[p, half + i]] = angle.cos() as f32;
        }
    }
    out
}

/// Sinusoidal embedding of a single (timestep) index as a `1 × dim` row.
pub fn sinusoidal_row(pos: usize, dim: usize) -> Array2<f32> {
    let table = sinusoidal_table(pos + 1, dim);
    table.row(pos).insert_axis(ndarray::Axis(0)).to_owned()
}
