//! Griffin-Lim phase reconstruction from log-mel spectrograms.
//!
//! The mel filterbank is pseudo-inverted with multiplicative nonnegative
//! least-squares updates, then the linear magnitude spectrogram is converted
//! to a waveform by iterative phase refinement. Deterministic: the initial
//! phase is zero.

use ndarray::Array2;
use rustfft::num_complex::Complex;
use rustfft::FftNum;

use super::mel::{istft, stft_complex, MelSpectrogram, HOP_LENGTH, N_FFT};
use super::{mel_filterbank, Waveform, PIPELINE_SAMPLE_RATE};
use crate::error::{Error, Result};
use crate::Real;

const NNLS_ITERATIONS: usize = 30;

/// Pseudo-inverts the mel filterbank to a nonnegative linear spectrogram.
fn mel_to_linear<F: Real>(mel_mag: &Array2<F>, fb: &Array2<F>) -> Array2<F> {
    let fbt = fb.t();
    let eps = F::from_f64(1e-12).unwrap();
    // init with the transpose projection, then refine multiplicatively
    let numer = fbt.dot(mel_mag);
    let mut s = numer.clone();
    for _ in 0..NNLS_ITERATIONS {
        let denom = fbt.dot(&fb.dot(&s));
        ndarray::Zip::from(&mut s).and(&numer).and(&denom).for_each(|sv, &n, &d| {
            *sv = *sv * n / (d + eps);
        });
    }
    s
}

/// Reconstructs a 16 kHz waveform from a log-mel spectrogram.
///
/// Output length is `(T_a - 1) * HOP_LENGTH` samples.
pub fn griffin_lim<F: Real + FftNum>(
    m: &MelSpectrogram<F>,
    iterations: usize,
) -> Result<Waveform<F>> {
    if iterations == 0 {
        return Err(Error::Parameter("griffin-lim needs at least one iteration".into()));
    }
    let frames = m.num_frames();
    let mel_mag = m.values().mapv(|v| v.exp());
    let fb: Array2<F> = mel_filterbank();
    let target = mel_to_linear(&mel_mag, &fb);
    let (n_bins, _) = target.dim();

    // zero initial phase
    let mut spec = Array2::from_elem((n_bins, frames), Complex::new(F::zero(), F::zero()));
    for ((i, j), v) in spec.indexed_iter_mut() {
        *v = Complex::new(target[[i, j]], F::zero());
    }
    let tiny = F::from_f64(1e-16).unwrap();
    for _ in 0..iterations {
        let x = istft(&spec);
        let reproj = stft_complex(&x[..x.len()]);
        for ((i, j), v) in spec.indexed_iter_mut() {
            let p = reproj[[i, j]];
            let norm = p.norm();
            *v = if norm > tiny {
                p * (target[[i, j]] / norm)
            } else {
                Complex::new(target[[i, j]], F::zero())
            };
        }
    }
    let x = istft(&spec);
    let start = N_FFT / 2;
    let out_len = frames.saturating_sub(1) * HOP_LENGTH;
    let one = F::one();
    let samples: Vec<F> = x[start..start + out_len]
        .iter()
        .map(|&v| v.max(-one).min(one))
        .collect();
    Waveform::new(samples, PIPELINE_SAMPLE_RATE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audio::mel_spectrogram;

    #[test]
    fn silence_reconstructs_to_near_silence() {
        let w = Waveform::new(vec![0.0f64; 16000], PIPELINE_SAMPLE_RATE).unwrap();
        let m = mel_spectrogram(&w).unwrap();
        let rec = griffin_lim(&m, 8).unwrap();
        assert_eq!(rec.len(), (m.num_frames() - 1) * HOP_LENGTH);
        assert!(rec.rms() < 1e-3, "rms {} too high", rec.rms());
    }

    #[test]
    fn sine_round_trip_mel_error_is_small() {
        let freq = 440.0;
        let samples: Vec<f64> = (0..16000)
            .map(|i| 0.5 * (std::f64::consts::TAU * freq * i as f64 / 16000.0).sin())
            .collect();
        let w = Waveform::new(samples, PIPELINE_SAMPLE_RATE).unwrap();
        let m = mel_spectrogram(&w).unwrap();
        let rec = griffin_lim(&m, 60).unwrap();
        let m2 = mel_spectrogram(&rec).unwrap();
        let frames = m.num_frames().min(m2.num_frames());
        let mut num = 0.0;
        let mut den = 0.0;
        // interior frames: edge windows touch the synthetic padding
        for t in 4..frames - 4 {
            for c in 0..80 {
                let a = m.values()[[c, t]];
                let b = m2.values()[[c, t]];
                num += (a - b) * (a - b);
                den += a * a;
            }
        }
        let rel = (num / den).sqrt();
        assert!(rel < 0.15, "relative mel L2 error {rel}");
    }

    #[test]
    fn deterministic() {
        let samples: Vec<f64> = (0..8192)
            .map(|i| 0.3 * (std::f64::consts::TAU * 600.0 * i as f64 / 16000.0).sin())
            .collect();
        let w = Waveform::new(samples, PIPELINE_SAMPLE_RATE).unwrap();
        let m = mel_spectrogram(&w).unwrap();
        let a = griffin_lim(&m, 12).unwrap();
        let b = griffin_lim(&m, 12).unwrap();
        assert_eq!(a, b);
    }
}
