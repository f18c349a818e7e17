//! Flat binary tensor files: a 16-byte header (8-byte magic, u32 rows,
//! u32 cols) followed by row-major 32-bit little-endian values.

use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Magic for persisted mel spectrograms (`C_a × T_a`).
pub const MEL_MAGIC: &[u8; 8] = b"MOMUMEL\0";
/// Magic for persisted latent sequences (`T_z × d`).
pub const LATENT_MAGIC: &[u8; 8] = b"MOMULAT\0";

pub fn write_tensor_f32(path: &Path, magic: &[u8; 8], data: &Array2<f32>) -> Result<()> {
    let (rows, cols) = data.dim();
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(magic)?;
    f.write_all(&(rows as u32).to_le_bytes())?;
    f.write_all(&(cols as u32).to_le_bytes())?;
    for r in 0..rows {
        for c in 0..cols {
            f.write_all(&data[[r, c]].to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_tensor_f32(path: &Path, magic: &[u8; 8]) -> Result<Array2<f32>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < 16 || &bytes[0..8] != magic {
        return Err(Error::Format(format!("bad tensor header in {}", path.display())));
    }
    let rows = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    let expected = 16 + rows * cols * 4;
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "tensor payload is {} bytes, expected {}",
            bytes.len(),
            expected
        )));
    }
    let mut data = Array2::zeros((rows, cols));
    let mut off = 16;
    for r in 0..rows {
        for c in 0..cols {
            data[[r, c]] = f32::from_le_bytes(bytes[off..off + 4].try_into().unwrap());
            off += 4;
        }
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_round_trip_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.bin");
        let mut a = Array2::<f32>::zeros((3, 5));
        for (i, v) in a.iter_mut().enumerate() {
            *v = (i as f32).sin();
        }
        write_tensor_f32(&path, MEL_MAGIC, &a).unwrap();
        let b = read_tensor_f32(&path, MEL_MAGIC).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wrong_magic_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.bin");
        write_tensor_f32(&path, MEL_MAGIC, &Array2::zeros((2, 2))).unwrap();
        assert!(read_tensor_f32(&path, LATENT_MAGIC).is_err());
    }
}
