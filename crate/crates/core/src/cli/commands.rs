use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use log::{info, warn};
use serde::Serialize;

use super::config::{InitKind, RunConfig};
use crate::diagnostics::{
    check_bounded, default_sigmas, dyadic_energies, energy_budget, integrated_residual, radial_spectrum,
    threshold_sweep, write_block_energy_csv, write_ledger_csv, write_norms_csv, write_shell_spectrum_csv,
    write_sweep_csv, EnergyRecord, NormSeries, SweepBase, SweepCell,
};
use crate::dynamics::{
    apply_cutoff_vec, random_state, read_checkpoint, short_hash, simulate, taylor_green, write_checkpoint, ModelSpec,
    RunControl, State, Stepper,
};
use crate::error::{Error, Result};
use crate::spectral::{make_grid, Grid};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_NUMERICAL: u8 = 2;
pub const EXIT_PROPERTY: u8 = 3;

/// Exit status for an error raised by a subcommand.
pub fn exit_code_for(e: &Error) -> u8 {
    if e.is_numerical_abort() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

/// Norm growth above this factor is flagged in the summary.
pub const BOUNDEDNESS_THRESHOLD: f64 = 10.0;

/// Contents of `summary.json`.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub status: String,
    pub error: Option<String>,
    pub model: String,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub t_final: f64,
    pub steps: u64,
    pub records: usize,
    pub energy_initial: f64,
    pub energy_final: f64,
    pub integrated_residual: Option<f64>,
    pub hs_index: f64,
    pub hs_growth: f64,
    pub int_grad_u_inf: f64,
    pub int_w_inf_sq: f64,
    pub bounded: bool,
    pub violations: Vec<String>,
    pub spec_hash: String,
    pub cfg_hash: String,
}

pub fn initial_state(cfg: &RunConfig, grid: &std::sync::Arc<Grid>, spec: &ModelSpec) -> Result<State> {
    let mut s = match cfg.init {
        InitKind::TaylorGreen => taylor_green(grid, spec, cfg.amplitude, cfg.amplitude)?,
        InitKind::Random => random_state(grid, spec, cfg.k_max, 1.0, cfg.amplitude, cfg.amplitude, cfg.seed)?,
        InitKind::Zero => State::zeros(grid, spec)?,
    };
    let cut = cfg.galerkin_cutoff();
    s.u = apply_cutoff_vec(&s.u, &cut);
    s.w = apply_cutoff_vec(&s.w, &cut);
    Ok(s)
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Run one simulation and write `ledger.csv`, `norms.csv`, `summary.json`,
/// periodic checkpoints and `final.mpck` into `out`. On a numerical abort the
/// tables collected so far and a summary with status `aborted` are written
/// before the error is returned.
pub fn cmd_run(cfg: &RunConfig, out: &Path) -> Result<RunSummary> {
    let spec = cfg.model_spec()?;
    let scfg = cfg.stepper_config();
    scfg.validate()?;
    fs::create_dir_all(out)?;
    let grid = make_grid(spec.dim(), cfg.n)?;
    let initial = initial_state(cfg, &grid, &spec)?;
    let mut stepper = Stepper::new(&grid, &spec, cfg.galerkin_cutoff(), scfg.clone())?;
    let control = RunControl {
        probe_cadence: cfg.probe_cadence,
        checkpoint_cadence: cfg.checkpoint_cadence,
        checkpoint_dir: Some(out.to_path_buf()),
    };
    let mut ledger: Vec<EnergyRecord> = Vec::new();
    let mut norms = NormSeries::new(
        default_sigmas(cfg.params.alpha, cfg.params.beta, cfg.sobolev_index),
        cfg.sobolev_index,
    );
    let mut last: Option<State> = None;
    info!("run: model {} n = {} dt = {} t_end = {}", spec.kind(), cfg.n, cfg.dt, cfg.t_end);
    let result = simulate(initial, &mut stepper, &control, &mut |s| {
        ledger.push(EnergyRecord::from_state(s, &spec)?);
        norms.push(s);
        last = Some(s.clone());
        Ok(())
    });

    if ledger.len() >= 3 {
        ledger = energy_budget(&ledger)?;
    }
    write_ledger_csv(BufWriter::new(File::create(out.join("ledger.csv"))?), &ledger)?;
    write_norms_csv(BufWriter::new(File::create(out.join("norms.csv"))?), &norms)?;

    let report = check_bounded(&norms, BOUNDEDNESS_THRESHOLD);
    let final_state = match &result {
        Ok(s) => Some(s),
        Err(_) => last.as_ref(),
    };
    if let Some(s) = final_state {
        let mut f = BufWriter::new(File::create(out.join("final.mpck"))?);
        write_checkpoint(&mut f, s, &spec, &scfg)?;
    }
    let summary = RunSummary {
        status: if result.is_ok() { "ok" } else { "aborted" }.into(),
        error: result.as_ref().err().map(|e| e.to_string()),
        model: spec.kind().label().into(),
        n: cfg.n,
        dt: cfg.dt,
        t_end: cfg.t_end,
        t_final: final_state.map_or(0.0, |s| s.t),
        steps: final_state.map_or(0, |s| s.step),
        records: ledger.len(),
        energy_initial: ledger.first().map_or(0.0, |r| r.energy()),
        energy_final: ledger.last().map_or(0.0, |r| r.energy()),
        integrated_residual: (ledger.len() >= 3).then(|| integrated_residual(&ledger)),
        hs_index: cfg.sobolev_index,
        hs_growth: norms.hs_growth(),
        int_grad_u_inf: norms.integral_grad_u().last().copied().unwrap_or(0.0),
        int_w_inf_sq: norms.integral_w_sq().last().copied().unwrap_or(0.0),
        bounded: report.bounded,
        violations: report.violations,
        spec_hash: hex(&short_hash(&spec.canonical())),
        cfg_hash: hex(&short_hash(&scfg.canonical())),
    };
    write_json(&out.join("summary.json"), &summary)?;
    match result {
        Ok(_) => Ok(summary),
        Err(e) => {
            warn!("run aborted: {e}");
            Err(e)
        }
    }
}

/// Run every `(α, β)` cell of the config and write `sweep.csv`.
pub fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<Vec<SweepCell>> {
    let cells = cfg.sweep_cells()?;
    let spec = cfg.model_spec()?;
    let stepper = cfg.stepper_config();
    stepper.validate()?;
    fs::create_dir_all(out)?;
    let grid = make_grid(spec.dim(), cfg.n)?;
    let base = SweepBase {
        kind: cfg.model,
        params: cfg.params.clone(),
        initial: initial_state(cfg, &grid, &spec)?,
        cutoff: cfg.galerkin_cutoff(),
        stepper,
        probe_cadence: cfg.probe_cadence,
        s: cfg.sobolev_index,
    };
    let rows = threshold_sweep(&cells, &base)?;
    for r in rows.iter().filter(|r| r.status != "ok") {
        warn!("cell (alpha = {}, beta = {}) aborted: {}", r.alpha, r.beta, r.message);
    }
    write_sweep_csv(BufWriter::new(File::create(out.join("sweep.csv"))?), &rows)?;
    Ok(rows)
}

/// Dyadic block energies and the shell spectrum of a checkpoint, written to
/// `spectrum_blocks.csv` and `spectrum_shells.csv`.
pub fn cmd_spectra(checkpoint: &Path, out: &Path) -> Result<()> {
    let ck = read_checkpoint(&mut BufReader::new(File::open(checkpoint)?))?;
    fs::create_dir_all(out)?;
    write_block_energy_csv(
        BufWriter::new(File::create(out.join("spectrum_blocks.csv"))?),
        &dyadic_energies(&ck.state),
    )?;
    write_shell_spectrum_csv(
        BufWriter::new(File::create(out.join("spectrum_shells.csv"))?),
        &radial_spectrum(&ck.state),
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_run_writes_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg: RunConfig = "model = fractional2d\nn = 16\ndt = 0.01\nt_end = 0.05\n".parse().unwrap();
        let s = cmd_run(&cfg, dir.path()).unwrap();
        assert_eq!(s.status, "ok");
        assert_eq!(s.records, 6);
        assert!(s.integrated_residual.is_some());
        for f in ["ledger.csv", "norms.csv", "summary.json", "final.mpck"] {
            assert!(dir.path().join(f).metadata().unwrap().len() > 0, "{f}");
        }
        cmd_spectra(&dir.path().join("final.mpck"), dir.path()).unwrap();
        let text = fs::read_to_string(dir.path().join("spectrum_shells.csv")).unwrap();
        let total: f64 = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap()).sum();
        assert!((total - 2.0 * s.energy_final).abs() <= 1e-10 * total);
    }

    #[test]
    fn cfl_abort_flushes_partial_output() {
        let dir = tempfile::tempdir().unwrap();
        let cfg: RunConfig = "model = fractional2d\nn = 16\ndt = 0.5\nt_end = 2\namplitude = 5\n".parse().unwrap();
        let e = cmd_run(&cfg, dir.path()).unwrap_err();
        assert_eq!(exit_code_for(&e), EXIT_NUMERICAL);
        let summary: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
        assert_eq!(summary["status"], "aborted");
        assert!(fs::read_to_string(dir.path().join("ledger.csv")).unwrap().lines().count() >= 2);
    }
}
