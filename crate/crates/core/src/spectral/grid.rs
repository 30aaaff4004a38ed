use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};

/// A periodic lattice of Fourier modes on the 2π-torus in two or three
/// dimensions.
///
/// Modes are stored in row-major order with the last axis contiguous. Along
/// each axis, storage index `i` carries wavenumber `i` for `i < n/2` and
/// `i - n` otherwise, i.e. the usual FFT ordering, so the lattice is
/// `[-n/2, n/2)^dim`. The mode with a component equal to `-n/2` is called a
/// Nyquist mode; it has no Hermitian partner distinct from itself and
/// odd-order derivative operators map it to zero.
#[derive(Debug)]
pub struct Grid {
    dim: usize,
    n: usize,
    len: usize,
    kvec: Vec<[i32; 3]>,
    kmag2: Vec<f64>,
    embed_maps: Mutex<Vec<(usize, Arc<Vec<usize>>)>>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n == other.n
    }
}

impl Eq for Grid {}

/// Build the lattice for `dim` ∈ {2, 3} with `n` modes per axis.
pub fn make_grid(dim: usize, n: usize) -> Result<Arc<Grid>> {
    Grid::new(dim, n).map(Arc::new)
}

impl Grid {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dim must be 2 or 3, got {dim}")));
        }
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n must be even, got odd n = {n}")));
        }
        if n < 8 {
            return Err(Error::InvalidGrid(format!("n must be at least 8, got {n}")));
        }
        if !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n must be a power of two, got {n}")));
        }
        let len = n.pow(dim as u32);
        let mut kvec = Vec::with_capacity(len);
        let mut kmag2 = Vec::with_capacity(len);
        for idx in 0..len {
            let k = Self::decompose(idx, n, dim);
            kmag2.push(k.iter().map(|&c| (c as f64) * (c as f64)).sum());
            kvec.push(k);
        }
        Ok(Grid {
            dim,
            n,
            len,
            kvec,
            kmag2,
            embed_maps: Mutex::new(Vec::new()),
        })
    }

    fn decompose(idx: usize, n: usize, dim: usize) -> [i32; 3] {
        let mut k = [0i32; 3];
        let mut rem = idx;
        for axis in (0..dim).rev() {
            let i = rem % n;
            rem /= n;
            k[axis] = Self::wavenumber(i, n);
        }
        k
    }

    #[inline]
    fn wavenumber(i: usize, n: usize) -> i32 {
        if i < n / 2 {
            i as i32
        } else {
            i as i32 - n as i32
        }
    }

    #[inline]
    fn storage(k: i32, n: usize) -> usize {
        k.rem_euclid(n as i32) as usize
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of modes (and physical sample points), `n^dim`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Uniform spacing of the physical collocation points.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Volume of the torus, `(2π)^dim`; the Parseval constant for every norm.
    pub fn volume(&self) -> f64 {
        (2.0 * PI).powi(self.dim as i32)
    }

    #[inline]
    pub fn wavevector(&self, idx: usize) -> [i32; 3] {
        self.kvec[idx]
    }

    #[inline]
    pub fn kmag2(&self, idx: usize) -> f64 {
        self.kmag2[idx]
    }

    #[inline]
    pub fn kmag(&self, idx: usize) -> f64 {
        self.kmag2[idx].sqrt()
    }

    /// Largest wavenumber magnitude present on the lattice.
    pub fn max_kmag(&self) -> f64 {
        let h = (self.n / 2) as f64;
        (self.dim as f64 * h * h).sqrt()
    }

    /// Wavevector used by odd-order operators (gradient, curl): the Nyquist
    /// component is replaced by zero so real fields stay real.
    #[inline]
    pub fn derivative_wavevector(&self, idx: usize) -> [f64; 3] {
        let half = -(self.n as i32 / 2);
        let k = self.kvec[idx];
        let mut out = [0.0; 3];
        for a in 0..self.dim {
            out[a] = if k[a] == half { 0.0 } else { k[a] as f64 };
        }
        out
    }

    #[inline]
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let half = -(self.n as i32 / 2);
        self.kvec[idx][..self.dim].contains(&half)
    }

    /// Storage index of a lattice wavevector, if it lies on the grid.
    pub fn index_of(&self, k: [i32; 3]) -> Option<usize> {
        let half = (self.n / 2) as i32;
        let mut idx = 0usize;
        for (a, &ka) in k.iter().enumerate() {
            if a >= self.dim {
                if ka != 0 {
                    return None;
                }
                continue;
            }
            if ka < -half || ka >= half {
                return None;
            }
            idx = idx * self.n + Self::storage(ka, self.n);
        }
        Some(idx)
    }

    /// Storage index of `-k` (Nyquist components map to themselves).
    #[inline]
    pub fn neg_index(&self, idx: usize) -> usize {
        let k = self.kvec[idx];
        let mut out = 0usize;
        for &ka in &k[..self.dim] {
            out = out * self.n + Self::storage(-ka, self.n);
        }
        out
    }

    /// For each mode, its storage index on a finer lattice with `m ≥ n`
    /// points per axis; Nyquist modes map to `usize::MAX` (they are dropped
    /// when embedding). Cached per `m`.
    pub fn embed_map(&self, m: usize) -> Arc<Vec<usize>> {
        assert!(m >= self.n, "embedding target must be at least as fine");
        let mut cache = self.embed_maps.lock().unwrap_or_else(|e| e.into_inner());
        if let Some((_, map)) = cache.iter().find(|(mm, _)| *mm == m) {
            return map.clone();
        }
        let map: Vec<usize> = (0..self.len)
            .map(|idx| {
                if self.is_nyquist(idx) {
                    return usize::MAX;
                }
                let k = self.kvec[idx];
                k[..self.dim]
                    .iter()
                    .fold(0usize, |acc, &ka| acc * m + Self::storage(ka, m))
            })
            .collect();
        let map = Arc::new(map);
        cache.push((m, map.clone()));
        map
    }

    /// Physical coordinates of collocation point `idx`.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let h = self.spacing();
        let mut rem = idx;
        let mut x = [0.0; 3];
        for axis in (0..self.dim).rev() {
            x[axis] = (rem % self.n) as f64 * h;
            rem /= self.n;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_grid_3d_8() {
        let g = make_grid(3, 8).unwrap();
        assert_eq!(g.len(), 512);
        let max = (0..g.len()).map(|i| g.kmag(i)).fold(0.0, f64::max);
        assert!((max - (3.0f64 * 16.0).sqrt()).abs() < 1e-14);
        assert!((g.max_kmag() - 48f64.sqrt()).abs() < 1e-14);
        let zeros = (0..g.len()).filter(|&i| g.kmag2(i) == 0.0).count();
        assert_eq!(zeros, 1);
    }

    #[test]
    fn make_grid_2d_16() {
        let g = make_grid(2, 16).unwrap();
        assert_eq!(g.len(), 256);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(make_grid(3, 7), Err(Error::InvalidGrid(_))));
        assert!(make_grid(1, 8).is_err());
        assert!(make_grid(4, 8).is_err());
        assert!(make_grid(2, 6).is_err());
        assert!(make_grid(2, 12).is_err());
    }

    #[test]
    fn index_roundtrip_and_negation() {
        let g = make_grid(3, 8).unwrap();
        for idx in 0..g.len() {
            assert_eq!(g.index_of(g.wavevector(idx)), Some(idx));
            let neg = g.neg_index(idx);
            if !g.is_nyquist(idx) {
                let k = g.wavevector(idx);
                assert_eq!(g.wavevector(neg), [-k[0], -k[1], -k[2]]);
            }
            assert_eq!(g.neg_index(neg), idx);
        }
        assert_eq!(g.index_of([4, 0, 0]), None);
        assert!(g.index_of([-4, 0, 0]).is_some());
    }
}
