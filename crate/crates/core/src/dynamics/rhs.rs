use super::model::ModelSpec;
use super::state::{apply_cutoff, apply_cutoff_vec, GalerkinCutoff, State};
use crate::error::{Error, Result};
use crate::spectral::{
    apply_radial_multiplier_vec, curl, divergence, grad_div, leray_project, PaddedVelocity,
    SpectralScalarField, SpectralVectorField,
};

/// Time derivatives of `(u, w)`.
#[derive(Clone, Debug)]
pub struct Tendency {
    pub du: SpectralVectorField,
    pub dw: SpectralVectorField,
}

/// Linear terms, evaluated with the differential operators.
pub fn linear_rhs(state: &State, spec: &ModelSpec) -> Result<Tendency> {
    state.validate(spec)?;
    let c = spec.coefficients();
    let (u, w) = (&state.u, &state.w);
    let du = apply_radial_multiplier_vec(u, &c.velocity_symbol()?)
        .scale(-1.0)
        .axpy(c.coupling_u, &leray_project(&curl(w)?)?)?;
    let mut dw = apply_radial_multiplier_vec(w, &c.micro_symbol()?)
        .axpy(c.damping, w)?
        .scale(-1.0)
        .axpy(c.coupling_w, &curl(u)?)?;
    if c.graddiv != 0.0 && spec.dim() == 3 {
        dw = dw.axpy(c.graddiv, &grad_div(w)?)?;
    }
    Ok(Tendency {
        du: du.with_divergence_flag(true),
        dw,
    })
}

/// `(−P J_N (u·∇)u, −J_N (u·∇)w)` and the largest speed on the dealiasing
/// lattice.
pub fn nonlinear_rhs(state: &State, cutoff: &GalerkinCutoff) -> Result<(Tendency, f64)> {
    let pu = PaddedVelocity::new(&state.u)?;
    let au = apply_cutoff_vec(&pu.advect(&state.u)?, cutoff);
    let aw = apply_cutoff_vec(&pu.advect(&state.w)?, cutoff);
    Ok((
        Tendency {
            du: leray_project(&au)?.scale(-1.0),
            dw: aw.scale(-1.0),
        },
        pu.max_speed(),
    ))
}

/// Full right-hand side without forcing.
pub fn rhs(state: &State, spec: &ModelSpec, cutoff: &GalerkinCutoff) -> Result<Tendency> {
    let lin = linear_rhs(state, spec)?;
    let (nl, _) = nonlinear_rhs(state, cutoff)?;
    Ok(Tendency {
        du: lin.du.axpy(1.0, &nl.du)?.with_divergence_flag(true),
        dw: lin.dw.axpy(1.0, &nl.dw)?,
    })
}

/// Pressure of a 3D state: with `F = (u·∇)u − coupling·curl w`, solves
/// `Δp = −∇·F`, so that `∇p = −(I − P)F`. The zero mode is set to 0.
pub fn recover_pressure(state: &State, spec: &ModelSpec) -> Result<SpectralScalarField> {
    if spec.dim() != 3 {
        return Err(Error::invalid("pressure recovery is implemented for 3D states"));
    }
    state.validate(spec)?;
    let adv = PaddedVelocity::new(&state.u)?.advect(&state.u)?;
    let f = adv.axpy(-spec.coefficients().coupling_u, &curl(&state.w)?)?;
    let div = divergence(&f)?;
    let grid = div.grid().clone();
    Ok(div.map_modes(|i, c| {
        let k2 = grid.kmag2(i);
        if k2 == 0.0 {
            Default::default()
        } else {
            c / k2
        }
    }))
}

/// Zero everything outside the cutoff in both fields.
pub(crate) fn cut_state(state: &mut State, cutoff: &GalerkinCutoff) {
    if cutoff.active {
        state.u = apply_cutoff_vec(&state.u, cutoff);
        state.w = state.w.map_components(|c| apply_cutoff(c, cutoff));
    }
}
