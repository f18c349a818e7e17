//! Audio processing: waveforms, mel spectrograms, onset detection,
//! Griffin-Lim reconstruction and a synthetic music generator.

mod griffin_lim;
mod mel;
mod onset;
mod synth;
mod wav;

pub use griffin_lim::griffin_lim;
pub use mel::{mel_filterbank, mel_frame_count, mel_spectrogram, MelSpectrogram};
pub use mel::{HOP_LENGTH, LOG_FLOOR, MEL_FMAX, MEL_FMIN, N_FFT, N_MELS, WIN_LENGTH};
pub use onset::{onset_beats, onset_envelope, OnsetParams};
pub use synth::{synth_music, MusicPattern};
pub use wav::{read_wav, write_wav};

use crate::error::{Error, Result};
use crate::Real;

/// Sample rate every pipeline stage assumes, Hz.
pub const PIPELINE_SAMPLE_RATE: u32 = 16_000;

/// A mono waveform with samples in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform<F: Real> {
    samples: Vec<F>,
    sample_rate: u32,
}

impl<F: Real> Waveform<F> {
    pub fn new(samples: Vec<F>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::Data("sample rate must be positive".into()));
        }
        let limit = F::from_f64(1.0 + 1e-6).unwrap();
        for (i, &s) in samples.iter().enumerate() {
            if !s.is_finite() {
                return Err(Error::Data(format!("non-finite sample at {i}")));
            }
            if s.abs() > limit {
                return Err(Error::Data(format!("sample {i} outside [-1, 1]")));
            }
        }
        Ok(Self { samples, sample_rate })
    }

    pub fn samples(&self) -> &[F] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> F {
        F::from_usize(self.samples.len()).unwrap() / F::from_u32(self.sample_rate).unwrap()
    }

    pub fn rms(&self) -> F {
        if self.samples.is_empty() {
            return F::zero();
        }
        let sum: F = self.samples.iter().map(|&s| s * s).sum();
        (sum / F::from_usize(self.samples.len()).unwrap()).sqrt()
    }
}
