//! Beat lists: monotonically increasing event timestamps in seconds.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::Real;

/// Strictly increasing, nonnegative event timestamps in seconds.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BeatList<F: Real> {
    times: Vec<F>,
}

impl<F: Real> BeatList<F> {
    /// Validates monotonicity, nonnegativity and finiteness.
    pub fn new(times: Vec<F>) -> Result<Self> {
        for (i, &t) in times.iter().enumerate() {
            if !t.is_finite() || t < F::zero() {
                return Err(Error::Data(format!("beat {i} is not a finite nonnegative time")));
            }
            if i > 0 && t <= times[i - 1] {
                return Err(Error::Data(format!("beat times not strictly increasing at index {i}")));
            }
        }
        Ok(Self { times })
    }

    pub fn empty() -> Self {
        Self { times: Vec::new() }
    }

    pub fn times(&self) -> &[F] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Shifts every beat by `dt` seconds (must stay nonnegative).
    pub fn shifted(&self, dt: F) -> Result<Self> {
        Self::new(self.times.iter().map(|&t| t + dt).collect())
    }

    /// Writes one timestamp per line with 6 decimal places.
    pub fn write_to(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        for &t in &self.times {
            writeln!(f, "{:.6}", t)?;
        }
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        let mut times = Vec::new();
        for (ln, line) in BufReader::new(f).lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: f64 = line
                .parse()
                .map_err(|_| Error::Format(format!("bad beat time on line {}", ln + 1)))?;
            times.push(F::from_f64(v).ok_or_else(|| Error::Format("unrepresentable beat time".into()))?);
        }
        Self::new(times)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_monotone() {
        assert!(BeatList::new(vec![0.0, 1.0, 1.0]).is_err());
        assert!(BeatList::new(vec![0.5, 0.2]).is_err());
        assert!(BeatList::new(vec![-0.1]).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("beats.txt");
        let beats = BeatList::new(vec![0.25, 1.0, 2.333333]).unwrap();
        beats.write_to(&path).unwrap();
        let back: BeatList<f64> = BeatList::read_from(&path).unwrap();
        assert_eq!(back.len(), 3);
        for (a, b) in back.times().iter().zip(beats.times()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn empty_is_valid() {
        let b: BeatList<f64> = BeatList::empty();
        assert!(b.is_empty());
    }
}
