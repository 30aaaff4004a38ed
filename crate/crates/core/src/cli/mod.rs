//! Configuration, subcommands and report emission for the `mpsim` binary.

mod commands;
mod config;
mod verify;

pub use commands::{
    cmd_run, cmd_spectra, cmd_sweep, exit_code_for, initial_state, RunSummary, BOUNDEDNESS_THRESHOLD, EXIT_CONFIG,
    EXIT_NUMERICAL, EXIT_OK, EXIT_PROPERTY,
};
pub use config::{parse_pairs, InitKind, RunConfig, KNOWN_KEYS};
pub use verify::{
    bernstein_ratios, commutator_max_ratios, g1_lnln_slopes, ledger_residual, linop_max_error, linop_specs,
    run_suite, seeded_wavevectors, single_wavevector_state, PropertyResult, Suite,
};
