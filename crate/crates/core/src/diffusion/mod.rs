//! Diffusion machinery: noise schedules, the closed-form forward process,
//! the transformer denoiser and its training loop.

mod denoiser;
mod train;

pub use denoiser::{CondInput, Denoiser, DenoiserConfig};
pub use train::{train_denoiser, training_loss, Direction, DiffusionTrainConfig, LatentPair};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Real;

/// Noise-schedule families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// Betas linearly spaced from 1e-4 to 2e-2.
    Linear,
    /// Squared-cosine cumulative schedule.
    Cosine,
}

/// Per-step noise tables for `T` diffusion steps, indexed by `t ∈ [1, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSchedule<F: Real> {
    kind: ScheduleKind,
    alpha: Vec<F>,
    alpha_bar: Vec<F>,
    sigma2: Vec<F>,
}

/// Builds the alpha / cumulative-product / posterior-variance tables.
pub fn build_schedule<F: Real>(total_steps: usize, kind: ScheduleKind) -> Result<NoiseSchedule<F>> {
    if total_steps < 2 {
        return Err(Error::Parameter(format!(
            "schedule needs at least 2 steps, got {total_steps}"
        )));
    }
    let betas: Vec<f64> = match kind {
        ScheduleKind::Linear => {
            let (b0, b1) = (1e-4, 2e-2);
            (0..total_steps)
                .map(|i| b0 + (b1 - b0) * i as f64 / (total_steps - 1) as f64)
                .collect()
        }
        ScheduleKind::Cosine => {
            let s = 0.008;
            let f = |t: f64| ((t / total_steps as f64 + s) / (1.0 + s)
                * std::f64::consts::FRAC_PI_2)
                .cos()
                .powi(2);
            (1..=total_steps)
                .map(|t| (1.0 - f(t as f64) / f((t - 1) as f64)).clamp(0.0, 0.999))
                .collect()
        }
    };
    let mut alpha = Vec::with_capacity(total_steps);
    let mut alpha_bar = Vec::with_capacity(total_steps);
    let mut sigma2 = Vec::with_capacity(total_steps);
    let mut running = 1.0f64;
    let mut prev_bar = 1.0f64;
    for &beta in &betas {
        let a = 1.0 - beta;
        running *= a;
        alpha.push(F::from_f64(a).unwrap());
        alpha_bar.push(F::from_f64(running).unwrap());
        let s2 = (1.0 - prev_bar) / (1.0 - running) * (1.0 - a);
        sigma2.push(F::from_f64(s2).unwrap());
        prev_bar = running;
    }
    Ok(NoiseSchedule { kind, alpha, alpha_bar, sigma2 })
}

impl<F: Real> NoiseSchedule<F> {
    pub fn total_steps(&self) -> usize {
        self.alpha.len()
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    fn check(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.alpha.len() {
            return Err(Error::Parameter(format!(
                "step {t} outside [1, {}]",
                self.alpha.len()
            )));
        }
        Ok(())
    }

    pub fn alpha(&self, t: usize) -> F {
        self.alpha[t - 1]
    }

    pub fn alpha_bar(&self, t: usize) -> F {
        self.alpha_bar[t - 1]
    }

    /// Cumulative product with the convention `ᾱ_0 = 1`.
    pub fn alpha_bar_or_one(&self, t: usize) -> F {
        if t == 0 {
            F::one()
        } else {
            self.alpha_bar[t - 1]
        }
    }

    /// Reverse-process posterior variance `σ²_t`.
    pub fn sigma2(&self, t: usize) -> F {
        self.sigma2[t - 1]
    }

    pub fn sigma(&self, t: usize) -> F {
        self.sigma2[t - 1].sqrt()
    }
}

/// Closed-form forward corruption `z_t = √ᾱ_t z0 + √(1-ᾱ_t) ε`.
pub fn forward_diffuse<F: Real>(
    z0: &Array2<F>,
    t: usize,
    eps: &Array2<F>,
    sched: &NoiseSchedule<F>,
) -> Result<Array2<F>> {
    sched.check(t)?;
    if z0.dim() != eps.dim() {
        return Err(Error::Parameter(format!(
            "noise shape {:?} does not match signal {:?}",
            eps.dim(),
            z0.dim()
        )));
    }
    let ab = sched.alpha_bar(t);
    let a = ab.sqrt();
    let b = (F::one() - ab).sqrt();
    Ok(z0.mapv(|v| v * a) + &eps.mapv(|v| v * b))
}
