//! Minimal 16-bit PCM mono WAV reader/writer.
//!
//! The pipeline runs at a fixed 16 kHz; files with other sample rates,
//! channel counts or encodings are rejected rather than silently resampled.

use std::io::{Read, Write};
use std::path::Path;

use super::Waveform;
use crate::error::{Error, Result};
use crate::Real;

pub fn write_wav<F: Real>(path: &Path, w: &Waveform<F>) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    let data_len = (w.len() * 2) as u32;
    let sr = w.sample_rate();
    f.write_all(b"RIFF")?;
    f.write_all(&(36 + data_len).to_le_bytes())?;
    f.write_all(b"WAVE")?;
    f.write_all(b"fmt ")?;
    f.write_all(&16u32.to_le_bytes())?;
    f.write_all(&1u16.to_le_bytes())?; // PCM
    f.write_all(&1u16.to_le_bytes())?; // mono
    f.write_all(&sr.to_le_bytes())?;
    f.write_all(&(sr * 2).to_le_bytes())?; // byte rate
    f.write_all(&2u16.to_le_bytes())?; // block align
    f.write_all(&16u16.to_le_bytes())?; // bits per sample
    f.write_all(b"data")?;
    f.write_all(&data_len.to_le_bytes())?;
    for &s in w.samples() {
        let v = s.to_f64().unwrap().clamp(-1.0, 1.0);
        let q = (v * 32767.0).round() as i16;
        f.write_all(&q.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_wav<F: Real>(path: &Path) -> Result<Waveform<F>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::Format(format!("not a RIFF/WAVE file: {}", path.display())));
    }
    let mut pos = 12;
    let mut fmt: Option<(u16, u16, u32, u16)> = None;
    let mut data: Option<&[u8]> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
        let body_end = (pos + 8 + size).min(bytes.len());
        let body = &bytes[pos + 8..body_end];
        match id {
            b"fmt " => {
                if body.len() < 16 {
                    return Err(Error::Format("truncated fmt chunk".into()));
                }
                let format = u16::from_le_bytes(body[0..2].try_into().unwrap());
                let channels = u16::from_le_bytes(body[2..4].try_into().unwrap());
                let rate = u32::from_le_bytes(body[4..8].try_into().unwrap());
                let bits = u16::from_le_bytes(body[14..16].try_into().unwrap());
                fmt = Some((format, channels, rate, bits));
            }
            b"data" => data = Some(body),
            _ => {}
        }
        pos = body_end + (size % 2); // chunks are word-aligned
    }
    let (format, channels, rate, bits) =
        fmt.ok_or_else(|| Error::Format("missing fmt chunk".into()))?;
    if format != 1 || bits != 16 {
        return Err(Error::Format(format!(
            "only 16-bit PCM is supported (format {format}, {bits} bits)"
        )));
    }
    if channels != 1 {
        return Err(Error::Format(format!("only mono is supported, got {channels} channels")));
    }
    let data = data.ok_or_else(|| Error::Format("missing data chunk".into()))?;
    let scale = F::from_f64(1.0 / 32768.0).unwrap();
    let samples: Vec<F> = data
        .chunks_exact(2)
        .map(|c| F::from_i16(i16::from_le_bytes([c[0], c[1]])).unwrap() * scale)
        .collect();
    Waveform::new(samples, rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wav_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.wav");
        let samples: Vec<f64> = (0..2048)
            .map(|i| 0.5 * (std::f64::consts::TAU * 440.0 * i as f64 / 16000.0).sin())
            .collect();
        let w = Waveform::new(samples, 16000).unwrap();
        write_wav(&path, &w).unwrap();
        let back: Waveform<f64> = read_wav(&path).unwrap();
        assert_eq!(back.sample_rate(), 16000);
        assert_eq!(back.len(), w.len());
        for (a, b) in back.samples().iter().zip(w.samples()) {
            assert!((a - b).abs() < 1.0 / 32000.0);
        }
    }

    #[test]
    fn rejects_stereo() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stereo.wav");
        // hand-build a 2-channel header
        let mut bytes: Vec<u8> = Vec::new();
        bytes.extend(b"RIFF");
        bytes.extend(&(36u32 + 4).to_le_bytes());
        bytes.extend(b"WAVE");
        bytes.extend(b"fmt ");
        bytes.extend(&16u32.to_le_bytes());
        bytes.extend(&1u16.to_le_bytes());
        bytes.extend(&2u16.to_le_bytes()); // stereo
        bytes.extend(&16000u32.to_le_bytes());
        bytes.extend(&64000u32.to_le_bytes());
        bytes.extend(&4u16.to_le_bytes());
        bytes.extend(&16u16.to_le_bytes());
        bytes.extend(b"data");
        bytes.extend(&4u32.to_le_bytes());
        bytes.extend(&[0u8; 4]);
        std::fs::write(&path, bytes).unwrap();
        assert!(matches!(read_wav::<f64>(&path), Err(Error::Format(_))));
    }

    #[test]
    fn rejects_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.wav");
        std::fs::write(&path, b"not a wav").unwrap();
        assert!(read_wav::<f64>(&path).is_err());
    }
}
