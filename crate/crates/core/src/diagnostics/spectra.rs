use serde::Serialize;

use crate::dynamics::State;
use crate::lp::{build_partition, dyadic_block_vec};
use crate::spectral::{sobolev_seminorm, FieldData};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockEnergy {
    pub j: i32,
    /// `‖Δ_j u‖₂² + ‖Δ_j w‖₂²`
    pub energy: f64,
}

/// Energy of every dyadic block `j = −1 ..= j_top`.
pub fn dyadic_energies(state: &State) -> Vec<BlockEnergy> {
    let part = build_partition(state.grid());
    (-1..=part.j_top())
        .map(|j| BlockEnergy {
            j,
            energy: sobolev_seminorm(&dyadic_block_vec(&state.u, &part, j), 0.0).powi(2)
                + sobolev_seminorm(&dyadic_block_vec(&state.w, &part, j), 0.0).powi(2),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShellEnergy {
    pub k: usize,
    pub energy: f64,
}

/// Energy in shells `k − 1/2 < |k| ≤ k + 1/2`; the shells sum to
/// `‖u‖₂² + ‖w‖₂²`.
pub fn radial_spectrum(state: &State) -> Vec<ShellEnergy> {
    let grid = state.grid();
    let nshell = grid.max_kmag().round() as usize + 1;
    let mut e = vec![0.0; nshell];
    let vol = grid.volume();
    for arr in state.u.coefficient_arrays().into_iter().chain(state.w.coefficient_arrays()) {
        for (i, c) in arr.iter().enumerate() {
            let k = grid.kmag(i).round() as usize;
            e[k] += vol * c.norm_sqr();
        }
    }
    e.into_iter()
        .enumerate()
        .map(|(k, energy)| ShellEnergy { k, energy })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{random_state, ModelKind, ModelSpec, PhysicalParams};
    use crate::spectral::{make_grid, SpectralScalarField, SpectralVectorField};

    #[test]
    fn zero_state_has_zero_spectrum() {
        let g = make_grid(3, 8).unwrap();
        let spec = ModelSpec::new(ModelKind::Fractional3D, PhysicalParams::default()).unwrap();
        let s = State::zeros(&g, &spec).unwrap();
        assert!(radial_spectrum(&s).iter().all(|x| x.energy == 0.0));
        assert!(dyadic_energies(&s).iter().all(|x| x.energy == 0.0));
    }

    #[test]
    fn spectrum_sums_to_energy() {
        let g = make_grid(3, 16).unwrap();
        let spec = ModelSpec::new(ModelKind::Fractional3D, PhysicalParams::default()).unwrap();
        let s = random_state(&g, &spec, 7.0, 1.0, 1.0, 0.5, 9).unwrap();
        let total: f64 = radial_spectrum(&s).iter().map(|x| x.energy).sum();
        assert!((total - s.energy()).abs() <= 1e-10 * s.energy());
    }

    #[test]
    fn single_mode_has_one_dominant_block() {
        let g = make_grid(2, 32).unwrap();
        let spec = ModelSpec::new(ModelKind::Fractional2D, PhysicalParams::default()).unwrap();
        let mut s = State::zeros(&g, &spec).unwrap();
        s.w = SpectralVectorField::from_components(vec![SpectralScalarField::single_mode(&g, [6, 0, 0], 1.0, 0.0).unwrap()])
            .unwrap();
        let e = dyadic_energies(&s);
        let total: f64 = e.iter().map(|x| x.energy).sum();
        let top = e.iter().map(|x| x.energy).fold(0.0, f64::max);
        assert!(top > 0.5 * total, "{e:?}");
        let shells = radial_spectrum(&s);
        assert!(shells.iter().enumerate().all(|(k, x)| (k == 6) == (x.energy > 0.0)));
    }
}
