//! Spectral representation of fields on the periodic torus `[0, 2π)^d`.

mod advect;
mod fft;
mod field;
mod grid;
mod norms;
mod ops;
pub mod random;
mod snapshot;
mod symbol;

pub use advect::{
    advect, from_physical_on, padded_size, prolong, prolong_vec, to_physical_on, PaddedVelocity,
};
pub use field::{
    transform_backward, transform_forward, SpectralScalarField, SpectralVectorField,
    DIVERGENCE_TOLERANCE, HERMITIAN_TOLERANCE,
};
pub use grid::{make_grid, Grid};
pub use norms::{
    inner_product_l2, lq_norm, lq_norm_samples, multiplier_norm, sobolev_norm, sobolev_seminorm,
    weighted_square_sum, FieldData,
};
pub use ops::{
    apply_radial_multiplier, apply_radial_multiplier_vec, curl, divergence, fractional_laplacian,
    fractional_laplacian_vec, grad_div, gradient, leray_project, partial, perp_gradient,
};
#[allow(unused_imports)]
pub(crate) use snapshot::{parse_snapshot, ByteReader};
pub use snapshot::{read_snapshot, write_snapshot, SNAPSHOT_HEADER_LEN, SNAPSHOT_MAGIC, SNAPSHOT_VERSION};
pub use symbol::{radial_power, RadialSymbol};
