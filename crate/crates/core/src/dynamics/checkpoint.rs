//! Restartable checkpoints.
//!
//! Layout (little-endian): magic `MPCK`, `u32` version 1, `f64` time,
//! `u64` step, 8-byte model hash, 8-byte stepper-config hash, then the `u`
//! and `w` fields as two consecutive snapshots in the `MPSF` format.

use std::io::{Read, Write};

use sha2::{Digest, Sha256};

use super::model::ModelSpec;
use super::state::State;
use super::stepper::StepperConfig;
use crate::error::{Error, Result};
use crate::spectral::{parse_snapshot, write_snapshot, ByteReader};

pub const CHECKPOINT_MAGIC: &[u8; 4] = b"MPCK";
pub const CHECKPOINT_VERSION: u32 = 1;

/// First eight bytes of the SHA-256 of `text`.
pub fn short_hash(text: &str) -> [u8; 8] {
    let digest = Sha256::digest(text.as_bytes());
    digest[..8].try_into().expect("digest is 32 bytes")
}

pub fn write_checkpoint<W: Write>(out: &mut W, state: &State, spec: &ModelSpec, cfg: &StepperConfig) -> Result<()> {
    out.write_all(CHECKPOINT_MAGIC)?;
    out.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
    out.write_all(&state.t.to_le_bytes())?;
    out.write_all(&state.step.to_le_bytes())?;
    out.write_all(&short_hash(&spec.canonical()))?;
    out.write_all(&short_hash(&cfg.canonical()))?;
    write_snapshot(out, &state.u)?;
    write_snapshot(out, &state.w)?;
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub state: State,
    pub spec_hash: [u8; 8],
    pub cfg_hash: [u8; 8],
}

impl Checkpoint {
    pub fn matches(&self, spec: &ModelSpec, cfg: &StepperConfig) -> bool {
        self.spec_hash == short_hash(&spec.canonical()) && self.cfg_hash == short_hash(&cfg.canonical())
    }
}

pub fn read_checkpoint<R: Read>(input: &mut R) -> Result<Checkpoint> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut r = ByteReader::new(&bytes, 0);
    if r.take(4)? != CHECKPOINT_MAGIC {
        return Err(Error::Format {
            offset: 0,
            message: "bad magic, expected MPCK".into(),
        });
    }
    let version = r.u32()?;
    if version != CHECKPOINT_VERSION {
        return r.fail(format!("unsupported checkpoint version {version}"));
    }
    let t = r.f64()?;
    let step = r.u64()?;
    let spec_hash = r.take(8)?.try_into().expect("8 bytes");
    let cfg_hash = r.take(8)?.try_into().expect("8 bytes");
    let u_at = r.offset();
    let u = parse_snapshot(&mut r, None)?;
    let grid = u.grid().clone();
    let w = parse_snapshot(&mut r, Some(&grid))?;
    if r.remaining() != 0 {
        return r.fail("trailing bytes after checkpoint");
    }
    if u.ncomp() != grid.dim() {
        return Err(Error::Format {
            offset: u_at,
            message: format!("velocity has {} components on a {}D grid", u.ncomp(), grid.dim()),
        });
    }
    let u = u.assume_divergence_free().map_err(|_| Error::Format {
        offset: u_at,
        message: "stored velocity is not divergence-free".into(),
    })?;
    Ok(Checkpoint {
        state: State { t, step, u, w },
        spec_hash,
        cfg_hash,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::model::{ModelKind, PhysicalParams};
    use crate::dynamics::state::{random_state, GalerkinCutoff};
    use crate::dynamics::stepper::{simulate, RunControl, Stepper};
    use crate::spectral::make_grid;

    #[test]
    fn restart_is_bit_identical() {
        let g = make_grid(2, 16).unwrap();
        let spec = ModelSpec::new(ModelKind::Fractional2D, PhysicalParams::default()).unwrap();
        let s0 = random_state(&g, &spec, 5.0, 1.0, 0.5, 0.5, 21).unwrap();
        let cfg = StepperConfig::new(0.01, 0.1);
        let mut st = Stepper::new(&g, &spec, GalerkinCutoff::inactive(), cfg.clone()).unwrap();
        let full = simulate(s0.clone(), &mut st, &RunControl::default(), &mut |_| Ok(())).unwrap();

        let mut mid = s0;
        for _ in 0..4 {
            mid = st.step(&mid).unwrap();
        }
        let mut buf = Vec::new();
        write_checkpoint(&mut buf, &mid, &spec, &cfg).unwrap();
        let ck = read_checkpoint(&mut buf.as_slice()).unwrap();
        assert!(ck.matches(&spec, &cfg));
        assert_eq!(ck.state.step, 4);
        let mut st2 = Stepper::new(&g, &spec, GalerkinCutoff::inactive(), cfg).unwrap();
        let resumed = simulate(ck.state, &mut st2, &RunControl::default(), &mut |_| Ok(())).unwrap();
        assert_eq!(resumed.t.to_bits(), full.t.to_bits());
        for (a, b) in full.u.components().iter().chain(full.w.components()).zip(
            resumed.u.components().iter().chain(resumed.w.components()),
        ) {
            assert!(a
                .coefficients()
                .iter()
                .zip(b.coefficients())
                .all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
        }
    }

    #[test]
    fn corrupt_checkpoint_reports_offset() {
        let g = make_grid(2, 8).unwrap();
        let spec = ModelSpec::new(ModelKind::Fractional2D, PhysicalParams::default()).unwrap();
        let s = crate::dynamics::state::State::zeros(&g, &spec).unwrap();
        let mut buf = Vec::new();
        write_checkpoint(&mut buf, &s, &spec, &StepperConfig::new(0.1, 1.0)).unwrap();
        buf.truncate(70);
        match read_checkpoint(&mut buf.as_slice()) {
            Err(Error::Format { offset, .. }) => assert_eq!(offset, 40 + 20),
            other => panic!("{other:?}"),
        }
    }
}
