//! Binary field snapshots.
//!
//! Layout (all little-endian):
//!
//! | offset | type      | content                                  |
//! |--------|-----------|------------------------------------------|
//! | 0      | `[u8; 4]` | magic `MPSF`                             |
//! | 4      | `u32`     | format version (currently 1)             |
//! | 8      | `u32`     | dimension (2 or 3)                       |
//! | 12     | `u32`     | points per axis `n`                      |
//! | 16     | `u32`     | component count `c`                      |
//! | 20     | `(f64, f64)` × `c · n^dim` | coefficients (re, im)   |
//!
//! Components are written one after another. Within a component,
//! coefficients follow row-major lattice order with the last axis fastest;
//! along each axis, storage index `i` holds wavenumber `i` for `i < n/2` and
//! `i − n` otherwise.

use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64;

use super::field::{SpectralScalarField, SpectralVectorField};
use super::grid::{make_grid, Grid};
use crate::error::{Error, Result};

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"MPSF";
pub const SNAPSHOT_VERSION: u32 = 1;
pub const SNAPSHOT_HEADER_LEN: usize = 20;

pub fn write_snapshot<W: Write>(out: &mut W, field: &SpectralVectorField) -> Result<()> {
    let grid = field.grid();
    out.write_all(SNAPSHOT_MAGIC)?;
    out.write_all(&SNAPSHOT_VERSION.to_le_bytes())?;
    out.write_all(&(grid.dim() as u32).to_le_bytes())?;
    out.write_all(&(grid.n() as u32).to_le_bytes())?;
    out.write_all(&(field.ncomp() as u32).to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * grid.len());
    for comp in field.components() {
        buf.clear();
        for c in comp.coefficients() {
            buf.extend_from_slice(&c.re.to_le_bytes());
            buf.extend_from_slice(&c.im.to_le_bytes());
        }
        out.write_all(&buf)?;
    }
    Ok(())
}

/// Cursor over a byte slice that reports absolute offsets in errors.
pub(crate) struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    base: u64,
}

impl<'a> ByteReader<'a> {
    pub(crate) fn new(bytes: &'a [u8], base: u64) -> Self {
        ByteReader { bytes, pos: 0, base }
    }

    pub(crate) fn offset(&self) -> u64 {
        self.base + self.pos as u64
    }

    pub(crate) fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Format {
            offset: self.offset(),
            message: message.into(),
        })
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return self.fail(format!(
                "truncated: need {n} bytes, {} remain",
                self.bytes.len() - self.pos
            ));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    pub(crate) fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    pub(crate) fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    pub(crate) fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }
}

pub(crate) fn parse_snapshot(r: &mut ByteReader<'_>, grid_hint: Option<&Arc<Grid>>) -> Result<SpectralVectorField> {
    let start = r.offset();
    if r.take(4)? != SNAPSHOT_MAGIC {
        return Err(Error::Format {
            offset: start,
            message: "bad magic, expected MPSF".into(),
        });
    }
    let version = r.u32()?;
    if version != SNAPSHOT_VERSION {
        return r.fail(format!("unsupported snapshot version {version}"));
    }
    let dim = r.u32()? as usize;
    let n = r.u32()? as usize;
    let ncomp = r.u32()? as usize;
    let grid = match grid_hint {
        Some(g) if g.dim() == dim && g.n() == n => g.clone(),
        Some(_) => return r.fail("snapshot grid differs from the expected grid"),
        None => match make_grid(dim, n) {
            Ok(g) => g,
            Err(e) => return r.fail(format!("invalid grid in header: {e}")),
        },
    };
    if ncomp == 0 || ncomp > 3 {
        return r.fail(format!("component count {ncomp} out of range"));
    }
    let mut comps = Vec::with_capacity(ncomp);
    for _ in 0..ncomp {
        let raw = r.take(16 * grid.len())?;
        let coef = raw
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().expect("8 bytes")),
                    f64::from_le_bytes(c[8..].try_into().expect("8 bytes")),
                )
            })
            .collect();
        comps.push(SpectralScalarField::from_coefficients(&grid, coef)?);
    }
    SpectralVectorField::from_components(comps)
}

pub fn read_snapshot<R: Read>(input: &mut R) -> Result<SpectralVectorField> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut r = ByteReader::new(&bytes, 0);
    let field = parse_snapshot(&mut r, None)?;
    if r.remaining() != 0 {
        return r.fail("trailing bytes after snapshot");
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::random_vector;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn snapshot_roundtrip_is_bit_exact(seed in any::<u64>(), dim in 2usize..=3, ncomp in 1usize..=3) {
            let g = make_grid(dim, 8).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = random_vector(&g, ncomp, 4.0, 0.5, &mut rng);
            let mut buf = Vec::new();
            write_snapshot(&mut buf, &v).unwrap();
            prop_assert_eq!(buf.len(), SNAPSHOT_HEADER_LEN + ncomp * 16 * g.len());
            let back = read_snapshot(&mut buf.as_slice()).unwrap();
            prop_assert_eq!(back.ncomp(), ncomp);
            for c in 0..ncomp {
                for (a, b) in v.component(c).coefficients().iter().zip(back.component(c).coefficients()) {
                    prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                    prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
                }
            }
        }
    }

    #[test]
    fn corrupt_input_reports_offset() {
        let g = make_grid(2, 8).unwrap();
        let v = SpectralVectorField::zeros(&g, 2);
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &v).unwrap();
        buf.truncate(100);
        match read_snapshot(&mut buf.as_slice()) {
            Err(Error::Format { offset, .. }) => assert_eq!(offset, 20),
            other => panic!("expected format error, got {other:?}"),
        }
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(
            read_snapshot(&mut bad.as_slice()),
            Err(Error::Format { offset: 0, .. })
        ));
    }
}
