//! STFT and mel-spectrogram extraction.
//!
//! Fixed analysis parameters: 1024-point FFT, hop 256, periodic Hann window,
//! centered frames with reflection padding, 80 slaney-style area-normalized
//! triangular mel filters spanning 0–8 kHz, natural-log compression with a
//! 1e-5 floor.

use ndarray::Array2;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftNum, FftPlanner};
use std::sync::Arc;

use super::{Waveform, PIPELINE_SAMPLE_RATE};
use crate::error::{Error, Result};
use crate::Real;

pub const N_FFT: usize = 1024;
pub const HOP_LENGTH: usize = 256;
pub const WIN_LENGTH: usize = 1024;
pub const N_MELS: usize = 80;
pub const MEL_FMIN: f64 = 0.0;
pub const MEL_FMAX: f64 = 8000.0;
/// Magnitude floor applied before the natural log.
pub const LOG_FLOOR: f64 = 1e-5;

/// Number of centered STFT frames for a signal of `num_samples`.
pub fn mel_frame_count(num_samples: usize) -> usize {
    num_samples / HOP_LENGTH + 1
}

/// Log-compressed mel spectrogram: `80 × T_a` values at `frame_rate`
/// frames per second.
#[derive(Debug, Clone, PartialEq)]
pub struct MelSpectrogram<F: Real> {
    values: Array2<F>,
    frame_rate: F,
}

impl<F: Real> MelSpectrogram<F> {
    /// Validates the shape (80 bands), finiteness and the log floor.
    pub fn new(values: Array2<F>, frame_rate: F) -> Result<Self> {
        if values.dim().0 != N_MELS {
            return Err(Error::Data(format!(
                "expected {} mel bands, got {}",
                N_MELS,
                values.dim().0
            )));
        }
        let floor = F::from_f64(LOG_FLOOR.ln() - 1e-9).unwrap();
        if values.iter().any(|v| !v.is_finite() || *v < floor) {
            return Err(Error::Data("mel values must be finite and at or above the log floor".into()));
        }
        if !(frame_rate > F::zero()) {
            return Err(Error::Data("frame rate must be positive".into()));
        }
        Ok(Self { values, frame_rate })
    }

    /// Builds a spectrogram from arbitrary finite values, clamping anything
    /// below the log floor (used by decoders and synthesis paths).
    pub fn from_raw_clamped(mut values: Array2<F>, frame_rate: F) -> Result<Self> {
        let floor = F::from_f64(LOG_FLOOR.ln()).unwrap();
        for v in values.iter_mut() {
            if !v.is_finite() {
                return Err(Error::Data("non-finite mel value".into()));
            }
            if *v < floor {
                *v = floor;
            }
        }
        Self::new(values, frame_rate)
    }

    pub fn values(&self) -> &Array2<F> {
        &self.values
    }

    pub fn num_bands(&self) -> usize {
        self.values.dim().0
    }

    pub fn num_frames(&self) -> usize {
        self.values.dim().1
    }

    pub fn frame_rate(&self) -> F {
        self.frame_rate
    }
}

/// Periodic Hann window.
pub(crate) fn hann_window<F: Real>(n: usize) -> Vec<F> {
    (0..n)
        .map(|i| {
            let x = std::f64::consts::TAU * i as f64 / n as f64;
            F::from_f64(0.5 * (1.0 - x.cos())).unwrap()
        })
        .collect()
}

fn reflect_index(i: isize, len: usize) -> usize {
    let len = len as isize;
    let mut k = i;
    loop {
        if k < 0 {
            k = -k;
        } else if k >= len {
            k = 2 * (len - 1) - k;
        } else {
            return k as usize;
        }
    }
}

/// Centered complex STFT with reflection padding: `(N_FFT/2 + 1) × T` bins.
pub(crate) fn stft_complex<F: Real + FftNum>(samples: &[F]) -> Array2<Complex<F>> {
    let n_bins = N_FFT / 2 + 1;
    let frames = mel_frame_count(samples.len());
    let window = hann_window::<F>(WIN_LENGTH);
    let mut planner = FftPlanner::<F>::new();
    let fft = planner.plan_fft_forward(N_FFT);
    let mut out = Array2::from_elem((n_bins, frames), Complex::new(F::zero(), F::zero()));
    let half = (N_FFT / 2) as isize;
    let mut buf = vec![Complex::new(F::zero(), F::zero()); N_FFT];
    for t in 0..frames {
        let center = (t * HOP_LENGTH) as isize;
        for (i, b) in buf.iter_mut().enumerate() {
            let src = reflect_index(center - half + i as isize, samples.len());
            *b = Complex::new(samples[src] * window[i], F::zero());
        }
        fft.process(&mut buf);
        for k in 0..n_bins {
            out[[k, t]] = buf[k];
        }
    }
    out
}

/// Inverse STFT by weighted overlap-add; returns the padded-domain signal of
/// length `(T - 1) * HOP + N_FFT`.
pub(crate) fn istft<F: Real + FftNum>(spec: &Array2<Complex<F>>) -> Vec<F> {
    let (n_bins, frames) = spec.dim();
    debug_assert_eq!(n_bins, N_FFT / 2 + 1);
    let window = hann_window::<F>(WIN_LENGTH);
    let mut planner = FftPlanner::<F>::new();
    let ifft: Arc<dyn Fft<F>> = planner.plan_fft_inverse(N_FFT);
    let out_len = (frames.saturating_sub(1)) * HOP_LENGTH + N_FFT;
    let mut acc = vec![F::zero(); out_len];
    let mut norm = vec![F::zero(); out_len];
    let inv_n = F::one() / F::from_usize(N_FFT).unwrap();
    let mut buf = vec![Complex::new(F::zero(), F::zero()); N_FFT];
    for t in 0..frames {
        for k in 0..n_bins {
            buf[k] = spec[[k, t]];
        }
        for k in n_bins..N_FFT {
            buf[k] = spec[[N_FFT - k, t]].conj();
        }
        ifft.process(&mut buf);
        let base = t * HOP_LENGTH;
        for i in 0..N_FFT {
            let v = buf[i].re * inv_n;
            acc[base + i] += window[i] * v;
            norm[base + i] += window[i] * window[i];
        }
    }
    let eps = F::from_f64(1e-8).unwrap();
    for i in 0..out_len {
        if norm[i] > eps {
            acc[i] /= norm[i];
        }
    }
    acc
}

fn hz_to_mel(hz: f64) -> f64 {
    let f_sp = 200.0 / 3.0;
    let min_log_hz = 1000.0;
    let min_log_mel = min_log_hz / f_sp;
    let logstep = (6.4f64).ln() / 27.0;
    if hz >= min_log_hz {
        min_log_mel + (hz / min_log_hz).ln() / logstep
    } else {
        hz / f_sp
    }
}

fn mel_to_hz(mel: f64) -> f64 {
    let f_sp = 200.0 / 3.0;
    let min_log_hz = 1000.0;
    let min_log_mel = min_log_hz / f_sp;
    let logstep = (6.4f64).ln() / 27.0;
    if mel >= min_log_mel {
        min_log_hz * ((mel - min_log_mel) * logstep).exp()
    } else {
        f_sp * mel
    }
}

/// Center frequencies (Hz) of the 80 mel filters.
pub fn mel_filter_centers() -> Vec<f64> {
    mel_break_points()[1..=N_MELS].to_vec()
}

fn mel_break_points() -> Vec<f64> {
    let lo = hz_to_mel(MEL_FMIN);
    let hi = hz_to_mel(MEL_FMAX);
    (0..N_MELS + 2)
        .map(|i| mel_to_hz(lo + (hi - lo) * i as f64 / (N_MELS + 1) as f64))
        .collect()
}

/// Slaney-style area-normalized triangular filterbank: `80 × 513` weights.
pub fn mel_filterbank<F: Real>() -> Array2<F> {
    let n_bins = N_FFT / 2 + 1;
    let pts = mel_break_points();
    let mut fb = Array2::zeros((N_MELS, n_bins));
    let sr = PIPELINE_SAMPLE_RATE as f64;
    for m in 0..N_MELS {
        let (left, center, right) = (pts[m], pts[m + 1], pts[m + 2]);
        let enorm = 2.0 / (right - left);
        for k in 0..n_bins {
            let f = k as f64 * sr / N_FFT as f64;
            let up = (f - left) / (center - left);
            let down = (right - f) / (right - center);
            let w = up.min(down).max(0.0) * enorm;
            if w > 0.0 {
                fb[[m, k]] = F::from_f64(w).unwrap();
            }
        }
    }
    fb
}

/// Extracts the log-compressed mel spectrogram of a 16 kHz waveform.
pub fn mel_spectrogram<F: Real + FftNum>(w: &Waveform<F>) -> Result<MelSpectrogram<F>> {
    if w.sample_rate() != PIPELINE_SAMPLE_RATE {
        return Err(Error::Format(format!(
            "expected {} Hz input, got {} Hz",
            PIPELINE_SAMPLE_RATE,
            w.sample_rate()
        )));
    }
    if w.len() < N_FFT {
        return Err(Error::Length(format!(
            "waveform too short: {} samples, need at least {}",
            w.len(),
            N_FFT
        )));
    }
    let spec = stft_complex(w.samples());
    let (n_bins, frames) = spec.dim();
    let mut mag = Array2::<F>::zeros((n_bins, frames));
    for ((i, j), v) in mag.indexed_iter_mut() {
        *v = spec[[i, j]].norm();
    }
    let fb: Array2<F> = mel_filterbank();
    let mel = fb.dot(&mag);
    let floor = F::from_f64(LOG_FLOOR).unwrap();
    let values = mel.mapv(|v| v.max(floor).ln());
    let frame_rate =
        F::from_u32(PIPELINE_SAMPLE_RATE).unwrap() / F::from_usize(HOP_LENGTH).unwrap();
    MelSpectrogram::new(values, frame_rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(freq: f64, amp: f64, seconds: f64) -> Waveform<f64> {
        let n = (seconds * PIPELINE_SAMPLE_RATE as f64) as usize;
        let samples = (0..n)
            .map(|i| amp * (std::f64::consts::TAU * freq * i as f64 / PIPELINE_SAMPLE_RATE as f64).sin())
            .collect();
        Waveform::new(samples, PIPELINE_SAMPLE_RATE).unwrap()
    }

    #[test]
    fn silence_hits_log_floor() {
        let w = Waveform::new(vec![0.0; 16000], PIPELINE_SAMPLE_RATE).unwrap();
        let m = mel_spectrogram(&w).unwrap();
        let floor = LOG_FLOOR.ln();
        assert!(m.values().iter().all(|&v| (v - floor).abs() < 1e-12));
    }

    #[test]
    fn frame_count_formula() {
        let w = Waveform::new(vec![0.0; 16000], PIPELINE_SAMPLE_RATE).unwrap();
        let m = mel_spectrogram(&w).unwrap();
        assert_eq!(m.num_frames(), 63);
        assert_eq!(mel_frame_count(16000), 63);
        assert_eq!(m.num_bands(), 80);
    }

    #[test]
    fn rejects_wrong_rate_and_short_input() {
        let w = Waveform::new(vec![0.0; 32000], 44100).unwrap();
        assert!(matches!(mel_spectrogram(&w), Err(Error::Format(_))));
        let short = Waveform::new(vec![0.0; 512], PIPELINE_SAMPLE_RATE).unwrap();
        assert!(matches!(mel_spectrogram(&short), Err(Error::Length(_))));
    }

    #[test]
    fn sine_energy_lands_on_matching_filter() {
        let w = sine(440.0, 0.6, 1.0);
        let m = mel_spectrogram(&w).unwrap();
        let centers = mel_filter_centers();
        let expected_band = centers
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - 440.0).abs().partial_cmp(&(b.1 - 440.0).abs()).unwrap())
            .unwrap()
            .0;
        // skip edge frames whose analysis window sticks into the padding
        for t in 3..m.num_frames() - 3 {
            let col = m.values().column(t);
            let argmax = col
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            assert!(
                (argmax as isize - expected_band as isize).abs() <= 1,
                "frame {t}: argmax {argmax}, expected near {expected_band}"
            );
        }
    }

    #[test]
    fn amplitude_scaling_shifts_log_mel() {
        let quiet = sine(500.0, 0.2, 0.5);
        let loud = sine(500.0, 0.4, 0.5);
        let mq = mel_spectrogram(&quiet).unwrap();
        let ml = mel_spectrogram(&loud).unwrap();
        let shift = 2f64.ln();
        let floor = LOG_FLOOR.ln();
        let mut checked = 0usize;
        for (a, b) in mq.values().iter().zip(ml.values().iter()) {
            // only where both sit comfortably above the floor
            if *a > floor + 1.0 && *b > floor + 1.0 {
                assert!((b - a - shift).abs() < 1e-9, "expected uniform log shift");
                checked += 1;
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn filterbank_rows_are_nonempty_and_normalized() {
        let fb: Array2<f64> = mel_filterbank();
        for m in 0..N_MELS {
            let row_sum: f64 = fb.row(m).sum();
            assert!(row_sum > 0.0, "filter {m} is empty");
        }
    }

    #[test]
    fn istft_inverts_stft_for_interior_samples() {
        let w = sine(330.0, 0.5, 0.5);
        let spec = stft_complex(w.samples());
        let rec = istft(&spec);
        // padded-domain offset: first N_FFT/2 samples come from reflection
        let off = N_FFT / 2;
        for i in 0..w.len() - HOP_LENGTH {
            let err = (rec[off + i] - w.samples()[i]).abs();
            assert!(err < 1e-8, "sample {i}: err {err}");
        }
    }
}
