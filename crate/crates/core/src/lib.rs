//! Desk-scale motion/music generation toolkit.
//!
//! The crate covers the full pipeline: 2D-motion rhythm analysis
//! (directograms, kinematic beats), mel-spectrogram audio processing with
//! Griffin-Lim reconstruction, a pair of rhythm-aligned latent VAEs trained
//! with a contrastive objective, a transformer diffusion denoiser with
//! classifier-free and cross-guidance sampling, and the beat-matching
//! evaluation metrics — all exercised on synthetic corpora with analytically
//! known beats.
//!
//! Signal-processing and metric math is generic over the scalar type (`f32`
//! or `f64`, see [`Real`]); the neural-network stack is `f32` end-to-end to
//! match the checkpoint format.

pub mod audio;
pub mod beat;
pub mod binfmt;
pub mod checkpoint;
pub mod diffusion;
pub mod error;
pub mod metrics;
pub mod motion;
pub mod nn;
pub mod sampling;
pub mod vae;

pub use beat::BeatList;
pub use error::{Error, Result};

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};

/// Scalar type for the numeric core: `f32` or `f64`.
pub trait Real:
    Float
    + NumAssignOps
    + FromPrimitive
    + ToPrimitive
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
}
impl Real for f32 {}
impl Real for f64 {}

/// Default double-precision instantiations used by the pipeline.
pub type MotionSequence64 = motion::MotionSequence<f64>;
pub type MelSpectrogram64 = audio::MelSpectrogram<f64>;
pub type Waveform64 = audio::Waveform<f64>;
pub type BeatList64 = beat::BeatList<f64>;
pub type NoiseSchedule64 = diffusion::NoiseSchedule<f64>;
