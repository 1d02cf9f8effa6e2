//! Binary snapshots of the physical vorticity.
//!
//! Layout, all little-endian:
//!
//! | bytes | content            |
//! |-------|--------------------|
//! | 4     | magic `LGEU`       |
//! | 4     | version (`u32`, 1) |
//! | 4     | `n` (`u32`)        |
//! | 8     | gamma (`f64`)      |
//! | 8     | time (`f64`)       |
//! | 8     | step count (`u64`) |
//! | 8 n^2 | row-major samples  |

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{Grid, RealField};

pub const MAGIC: [u8; 4] = *b"LGEU";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 36;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub gamma: f64,
    pub time: f64,
    pub step_count: u64,
    pub field: RealField,
}

impl Snapshot {
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.field.grid().n();
        let mut out = Vec::with_capacity(HEADER_LEN + 8 * n * n);
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(n as u32).to_le_bytes());
        out.extend_from_slice(&self.gamma.to_le_bytes());
        out.extend_from_slice(&self.time.to_le_bytes());
        out.extend_from_slice(&self.step_count.to_le_bytes());
        for v in self.field.values() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Format(format!(
                "snapshot truncated: {} bytes, header needs {HEADER_LEN}",
                bytes.len()
            )));
        }
        if bytes[..4] != MAGIC {
            return Err(Error::Format(format!("bad magic {:?}", &bytes[..4])));
        }
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        let version = u32_at(4);
        if version != VERSION {
            return Err(Error::Format(format!("unsupported snapshot version {version}")));
        }
        let n = u32_at(8) as usize;
        let grid = Grid::new(n).map_err(|e| Error::Format(format!("header: {e}")))?;
        let expected = HEADER_LEN + 8 * grid.len();
        if bytes.len() != expected {
            return Err(Error::Format(format!(
                "snapshot length {} does not match n = {n} (expected {expected} bytes)",
                bytes.len()
            )));
        }
        let values = bytes[HEADER_LEN..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Snapshot {
            gamma: f64::from_bits(u64_at(12)),
            time: f64::from_bits(u64_at(20)),
            step_count: u64_at(28),
            field: RealField::new(grid, values).map_err(|e| Error::Format(format!("payload: {e}")))?,
        })
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(&self.to_bytes())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)
            .map_err(|e| Error::Format(format!("read failed: {e}")))?;
        Self::from_bytes(&bytes)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_bytes(&fs::read(path).map_err(|e| Error::io(path, e))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Snapshot {
        let g = Grid::new(8).unwrap();
        Snapshot {
            gamma: 1.5,
            time: 0.125,
            step_count: 42,
            field: RealField::from_fn(g, |x1, x2| (x1 - 2.0 * x2).sin() * 1e-300 + x1.exp()),
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let s = sample();
        let bytes = s.to_bytes();
        assert_eq!(bytes.len(), HEADER_LEN + 8 * 64);
        let back = Snapshot::from_bytes(&bytes).unwrap();
        assert_eq!(back.to_bytes(), bytes);
        assert_eq!(back, s);
    }

    #[test]
    fn corrupt_inputs_are_format_errors() {
        let bytes = sample().to_bytes();
        assert!(matches!(Snapshot::from_bytes(&bytes[..bytes.len() - 1]), Err(Error::Format(_))));
        assert!(matches!(Snapshot::from_bytes(&bytes[..10]), Err(Error::Format(_))));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(Snapshot::from_bytes(&bad), Err(Error::Format(_))));
        let mut bad = bytes;
        bad[4] = 2;
        assert!(matches!(Snapshot::from_bytes(&bad), Err(Error::Format(_))));
    }
}
