//! Model systems, Galerkin truncation and time integration.

mod checkpoint;
mod linear;
mod model;
mod rhs;
mod state;
mod stepper;

pub use checkpoint::{read_checkpoint, short_hash, write_checkpoint, Checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use linear::{expm, linear_matrix, linear_propagator, mode_size};
pub use model::{Coefficients, ModelKind, ModelSpec, PhysicalParams};
pub use rhs::{linear_rhs, nonlinear_rhs, recover_pressure, rhs, Tendency};
pub use state::{apply_cutoff, apply_cutoff_vec, random_state, taylor_green, GalerkinCutoff, State};
pub use stepper::{simulate, Forcing, RunControl, Scheme, Stepper, StepperConfig};
