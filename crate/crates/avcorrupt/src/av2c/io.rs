//! Matrix and trace file formats for offline auditing of the adaptation
//! math: logits come in as CSV or a small binary format, traces go out as
//! CSV.

use std::io::{Read, Write};
use std::path::Path;

use super::{toy::TraceRow, Av2cError, Mat};

/// Magic prefix of the binary matrix format.
pub const MATRIX_MAGIC: &[u8; 4] = b"AVLM";

/// Reads a headerless CSV of floats, one batch row per line.
pub fn read_logits_csv(path: &Path) -> Result<Mat, Av2cError> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Av2cError::Schema(format!("line {}: bad value '{v}'", lineno + 1)))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Av2cError::Schema("empty matrix file".into()));
    }
    Mat::from_rows(rows)
}

pub fn write_logits_csv(mat: &Mat, path: &Path) -> Result<(), Av2cError> {
    let mut out = String::new();
    for i in 0..mat.rows {
        let line = mat
            .row(i)
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&line);
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Binary layout: `AVLM`, u32 LE rows, u32 LE cols, then row-major f64 LE.
pub fn write_logits_bin(mat: &Mat, path: &Path) -> Result<(), Av2cError> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(MATRIX_MAGIC)?;
    file.write_all(&(mat.rows as u32).to_le_bytes())?;
    file.write_all(&(mat.cols as u32).to_le_bytes())?;
    let mut bytes = Vec::with_capacity(mat.data.len() * 8);
    for v in &mat.data {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    file.write_all(&bytes)?;
    Ok(())
}

pub fn read_logits_bin(path: &Path) -> Result<Mat, Av2cError> {
    let mut file = std::fs::File::open(path)?;
    let mut header = [0u8; 12];
    file.read_exact(&mut header)
        .map_err(|_| Av2cError::Schema("file shorter than the 12-byte header".into()))?;
    if &header[0..4] != MATRIX_MAGIC {
        return Err(Av2cError::Schema("bad magic (expected AVLM)".into()));
    }
    let rows = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    let mut payload = Vec::new();
    file.read_to_end(&mut payload)?;
    if payload.len() != rows * cols * 8 {
        return Err(Av2cError::Schema(format!(
            "payload is {} bytes, expected {}",
            payload.len(),
            rows * cols * 8
        )));
    }
    let data = payload
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
        .collect();
    Ok(Mat { rows, cols, data })
}

/// Trace CSV: `step,accuracy,n_selected,loss`.
pub fn write_trace_csv(trace: &[TraceRow], path: &Path) -> Result<(), Av2cError> {
    let mut out = String::from("step,accuracy,n_selected,loss\n");
    for row in trace {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.step, row.accuracy, row.n_selected, row.loss
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Mat {
        Mat::from_rows(vec![
            vec![1.5, -2.25, 0.0],
            vec![f64::MIN_POSITIVE, 1e300, -0.5],
        ])
        .unwrap()
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("logits.csv");
        let m = sample();
        write_logits_csv(&m, &path).unwrap();
        assert_eq!(read_logits_csv(&path).unwrap(), m);
    }

    #[test]
    fn binary_round_trip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("logits.avlm");
        let m = sample();
        write_logits_bin(&m, &path).unwrap();
        let back = read_logits_bin(&path).unwrap();
        assert_eq!(back.rows, 2);
        assert_eq!(back.cols, 3);
        for (a, b) in m.data.iter().zip(&back.data) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn corrupt_binary_headers_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.avlm");
        std::fs::write(&path, b"NOPE").unwrap();
        assert!(matches!(
            read_logits_bin(&path),
            Err(Av2cError::Schema(_))
        ));
        std::fs::write(&path, b"AVLM\x02\x00\x00\x00\x02\x00\x00\x00short").unwrap();
        assert!(matches!(
            read_logits_bin(&path),
            Err(Av2cError::Schema(_))
        ));
    }

    #[test]
    fn ragged_csv_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ragged.csv");
        std::fs::write(&path, "1,2,3\n4,5\n").unwrap();
        assert!(matches!(
            read_logits_csv(&path),
            Err(Av2cError::ShapeMismatch(_))
        ));
    }
}
