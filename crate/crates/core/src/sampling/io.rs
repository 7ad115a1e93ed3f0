//! CSV and count-prefixed little-endian float64 dumps.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::SampleBatch;
use crate::fsio::write_atomic;
use crate::{Error, Result};

/// One row per draw, header row = coordinate labels, `.` as decimal separator.
pub fn batch_to_csv(batch: &SampleBatch) -> String {
    let mut out = String::with_capacity(batch.values().len() * 20);
    out.push_str(&batch.labels().join(","));
    out.push('\n');
    for row in batch.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            // `Display` for f64 is locale-independent and round-trips.
            write!(out, "{v}").expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(batch: &SampleBatch, path: &Path) -> Result<()> {
    write_atomic(path, batch_to_csv(batch).as_bytes())
}

/// `u64` LE count of float64 values, then the values in LE order.
pub fn encode_f64_dump(values: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 8 * values.len());
    out.extend_from_slice(&(values.len() as u64).to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_f64_dump(bytes: &[u8]) -> Result<Vec<f64>> {
    if bytes.len() < 8 {
        return Err(Error::InvalidArgument("dump shorter than its count prefix".into()));
    }
    let (head, body) = bytes.split_at(8);
    let count = u64::from_le_bytes(head.try_into().expect("8-byte prefix")) as usize;
    if body.len() != count.saturating_mul(8) {
        return Err(Error::InvalidArgument(format!(
            "dump declares {count} values but carries {} bytes",
            body.len()
        )));
    }
    Ok(body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect())
}

pub fn write_f64_dump(values: &[f64], path: &Path) -> Result<()> {
    write_atomic(path, &encode_f64_dump(values))
}

pub fn read_f64_dump(path: &Path) -> Result<Vec<f64>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_f64_dump(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_joint_b1_l1, SeedSpec};

    #[test]
    fn csv_has_header_and_rows() {
        let b = sample_joint_b1_l1(3, SeedSpec::new(1, 0));
        let csv = batch_to_csv(&b);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "B1,L1");
        assert_eq!(lines.len(), 4);
        let parsed: Vec<f64> = lines[1].split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(parsed, b.row(0));
    }

    #[test]
    fn dump_layout() {
        let bytes = encode_f64_dump(&[1.0, -2.5]);
        assert_eq!(bytes.len(), 24);
        assert_eq!(&bytes[..8], &2u64.to_le_bytes());
        assert_eq!(&bytes[8..16], &1.0f64.to_le_bytes());
    }

    #[test]
    fn truncated_dump_rejected() {
        let mut bytes = encode_f64_dump(&[1.0, 2.0]);
        bytes.pop();
        assert!(decode_f64_dump(&bytes).is_err());
        assert!(decode_f64_dump(&[0u8; 3]).is_err());
    }

    #[test]
    fn dump_file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.bin");
        write_f64_dump(&[0.5, 1e-300, -7.0], &p).unwrap();
        assert_eq!(read_f64_dump(&p).unwrap(), vec![0.5, 1e-300, -7.0]);
        assert!(read_f64_dump(&dir.path().join("missing.bin")).is_err());
    }
}
