//! Runtime checks of the energy balance, monitored norms and the
//! inequality machinery, plus the tables they are reported in.

mod commutator;
mod energy;
mod monitor;
mod report;
mod spectra;
mod sweep;

pub use commutator::{
    highlow_gradient_bound, kato_ponce_ensemble, kato_ponce_sample, CommutatorSample, HighLowSample, KpExponents,
};
pub use energy::{energy_budget, integrated_residual, EnergyRecord};
pub use monitor::{
    check_bounded, default_sigmas, field_sup, grad_sup, monitor_norms, BoundednessReport, NormRecord, NormSeries,
};
pub use report::{
    fmt_f64, write_block_energy_csv, write_commutator_csv, write_ledger_csv, write_norms_csv,
    write_shell_spectrum_csv, write_sweep_csv, LEDGER_HEADER,
};
pub use spectra::{dyadic_energies, radial_spectrum, BlockEnergy, ShellEnergy};
pub use sweep::{dedup_cells, threshold_sweep, SweepBase, SweepCell};
