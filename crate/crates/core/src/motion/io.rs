//! Text file formats for motion sequences and observation masks.
//!
//! Motion files carry a header (fps, joint count, joint names) followed by
//! one row of `2J` reals per frame; mask files have the same shape with 0/1
//! entries.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use ndarray::{Array2, Array3};

use super::MotionSequence;
use crate::error::{Error, Result};
use crate::Real;

const MOTION_MAGIC: &str = "momu-motion v1";
const MASK_MAGIC: &str = "momu-mask v1";

pub fn write_motion<F: Real>(path: &Path, m: &MotionSequence<F>) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "{MOTION_MAGIC}")?;
    writeln!(f, "fps {}", m.fps())?;
    writeln!(f, "joints {}", m.num_joints())?;
    let names: Vec<String> = m
        .joint_names()
        .iter()
        .map(|n| n.replace(char::is_whitespace, "_"))
        .collect();
    writeln!(f, "names {}", names.join(" "))?;
    for r in 0..m.num_frames() {
        let mut row = String::new();
        for q in 0..m.num_joints() {
            if q > 0 {
                row.push(' ');
            }
            row.push_str(&format!("{} {}", m.frames()[[r, q, 0]], m.frames()[[r, q, 1]]));
        }
        writeln!(f, "{row}")?;
    }
    Ok(())
}

pub fn read_motion<F: Real>(path: &Path) -> Result<MotionSequence<F>> {
    let f = std::fs::File::open(path)?;
    let mut lines = BufReader::new(f).lines();
    let magic = next_line(&mut lines)?;
    if magic.trim() != MOTION_MAGIC {
        return Err(Error::Format(format!("not a motion file: {}", path.display())));
    }
    let fps: f64 = parse_field(&next_line(&mut lines)?, "fps")?;
    let joints: usize = parse_field(&next_line(&mut lines)?, "joints")? as usize;
    let names_line = next_line(&mut lines)?;
    let names: Vec<String> = names_line
        .strip_prefix("names ")
        .ok_or_else(|| Error::Format("missing names header".into()))?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    if names.len() != joints {
        return Err(Error::Format(format!("{} names for {} joints", names.len(), joints)));
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> =
            line.split_whitespace().map(str::parse).collect();
        let row = row.map_err(|_| Error::Format("bad coordinate row".into()))?;
        if row.len() != 2 * joints {
            return Err(Error::Format(format!(
                "row has {} values, expected {}",
                row.len(),
                2 * joints
            )));
        }
        rows.push(row);
    }
    let t = rows.len();
    let mut frames = Array3::zeros((t.max(1), joints.max(1), 2));
    for (r, row) in rows.iter().enumerate() {
        for q in 0..joints {
            frames[[r, q, 0]] = F::from_f64(row[2 * q]).unwrap();
            frames[[r, q, 1]] = F::from_f64(row[2 * q + 1]).unwrap();
        }
    }
    MotionSequence::new(frames, F::from_f64(fps).unwrap(), names)
}

pub fn write_mask(path: &Path, mask: &Array2<bool>) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    let (t, j) = mask.dim();
    writeln!(f, "{MASK_MAGIC}")?;
    writeln!(f, "frames {t}")?;
    writeln!(f, "joints {j}")?;
    for r in 0..t {
        let row: Vec<&str> = (0..j).map(|q| if mask[[r, q]] { "1" } else { "0" }).collect();
        writeln!(f, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn read_mask(path: &Path) -> Result<Array2<bool>> {
    let f = std::fs::File::open(path)?;
    let mut lines = BufReader::new(f).lines();
    let magic = next_line(&mut lines)?;
    if magic.trim() != MASK_MAGIC {
        return Err(Error::Format(format!("not a mask file: {}", path.display())));
    }
    let t: usize = parse_field(&next_line(&mut lines)?, "frames")? as usize;
    let j: usize = parse_field(&next_line(&mut lines)?, "joints")? as usize;
    let mut mask = Array2::from_elem((t, j), false);
    let mut r = 0;
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if r >= t {
            return Err(Error::Format("too many mask rows".into()));
        }
        for (q, tok) in line.split_whitespace().enumerate() {
            if q >= j {
                return Err(Error::Format("too many mask columns".into()));
            }
            mask[[r, q]] = match tok {
                "1" => true,
                "0" => false,
                _ => return Err(Error::Format(format!("bad mask entry {tok:?}"))),
            };
        }
        r += 1;
    }
    if r != t {
        return Err(Error::Format(format!("expected {t} mask rows, got {r}")));
    }
    Ok(mask)
}

fn next_line(lines: &mut std::io::Lines<BufReader<std::fs::File>>) -> Result<String> {
    lines
        .next()
        .ok_or_else(|| Error::Format("unexpected end of file".into()))?
        .map_err(Error::from)
}

fn parse_field(line: &str, key: &str) -> Result<f64> {
    let rest = line
        .strip_prefix(key)
        .ok_or_else(|| Error::Format(format!("expected `{key}` header, got {line:?}")))?;
    rest.trim()
        .parse()
        .map_err(|_| Error::Format(format!("bad `{key}` value")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array3;

    #[test]
    fn motion_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.motion.txt");
        let mut frames = Array3::zeros((4, 2, 2));
        for (i, v) in frames.iter_mut().enumerate() {
            *v = i as f64 * 0.125 - 0.3;
        }
        let m = MotionSequence::new(frames, 62.5, vec!["nose".into(), "neck".into()]).unwrap();
        write_motion(&path, &m).unwrap();
        let back: MotionSequence<f64> = read_motion(&path).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn mask_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.mask.txt");
        let mut mask = Array2::from_elem((3, 2), true);
        mask[[1, 0]] = false;
        write_mask(&path, &mask).unwrap();
        assert_eq!(read_mask(&path).unwrap(), mask);
    }

    #[test]
    fn rejects_wrong_magic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.txt");
        std::fs::write(&path, "something else\n").unwrap();
        assert!(matches!(read_motion::<f64>(&path), Err(Error::Format(_))));
    }
}
