//! Multi-dimensional complex FFTs over row-major cubes, built from batched
//! 1D transforms along the contiguous axis plus explicit transposes.
//!
//! Every line is transformed independently, so the output is bit-identical
//! regardless of how many rayon workers take part.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

const LINES_PER_TASK: usize = 64;

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut p = planner().lock().unwrap_or_else(|e| e.into_inner());
    if inverse {
        p.plan_fft_inverse(n)
    } else {
        p.plan_fft_forward(n)
    }
}

fn fft_rows(data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
    let n = fft.len();
    data.par_chunks_mut(n * LINES_PER_TASK).for_each(|chunk| {
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(chunk, &mut scratch);
    });
}

/// `dst[c * rows + r] = src[r * cols + c]`
fn transpose(src: &[Complex64], rows: usize, cols: usize, dst: &mut [Complex64]) {
    dst.par_chunks_mut(rows).enumerate().for_each(|(c, out)| {
        for (r, o) in out.iter_mut().enumerate() {
            *o = src[r * cols + c];
        }
    });
}

/// Unnormalized forward (`e^{-ikx}`) or inverse (`e^{+ikx}`) transform of an
/// `n^dim` row-major array, in place.
pub(crate) fn fft_nd(data: &mut [Complex64], n: usize, dim: usize, inverse: bool) {
    debug_assert_eq!(data.len(), n.pow(dim as u32));
    let fft = plan(n, inverse);
    let mut tmp = vec![Complex64::default(); data.len()];
    match dim {
        2 => {
            fft_rows(data, &fft);
            transpose(data, n, n, &mut tmp);
            fft_rows(&mut tmp, &fft);
            transpose(&tmp, n, n, data);
        }
        3 => {
            let slab = n * n;
            fft_rows(data, &fft);
            // middle axis, one slab at a time
            data.par_chunks_mut(slab)
                .zip(tmp.par_chunks_mut(slab))
                .for_each(|(d, t)| {
                    transpose(d, n, n, t);
                    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
                    fft.process_with_scratch(t, &mut scratch);
                    transpose(t, n, n, d);
                });
            // leading axis
            transpose(data, n, slab, &mut tmp);
            fft_rows(&mut tmp, &fft);
            transpose(&tmp, slab, n, data);
        }
        _ => unreachable!("grid dimension is validated at construction"),
    }
}
