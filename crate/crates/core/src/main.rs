use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::error;

use micropolar::cli::{
    cmd_run, cmd_spectra, cmd_sweep, exit_code_for, run_suite, RunConfig, Suite, EXIT_CONFIG, EXIT_OK, EXIT_PROPERTY,
};
use micropolar::Error;

#[derive(Parser)]
#[command(name = "mpsim", version, about = "Pseudo-spectral micropolar simulator")]
struct Cli {
    /// Worker threads for transforms and ensembles.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides the `seed` key of the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a property suite with fixed seeds.
    Verify {
        /// core, lp, g, energy, commutator, linop or all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 20240)]
        seed: u64,
        /// Also write `verify.json` here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the `alpha_list × beta_list` grid of a config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Block energies and shell spectrum of a checkpoint.
    Spectra {
        checkpoint: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn load(path: &Path, seed: Option<u64>) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::from_file(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn verify(suite: &str, seed: u64, out: Option<PathBuf>) -> Result<u8, Error> {
    let suites = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    let mut all = Vec::new();
    for s in suites {
        for r in run_suite(s, seed) {
            println!("[{s}] {r}");
            all.push((s.label(), r));
        }
    }
    let failed = all.iter().filter(|(_, r)| !r.passed).count();
    println!("{} properties, {failed} failed", all.len());
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir)?;
        let rows: Vec<_> = all
            .iter()
            .map(|(s, r)| serde_json::json!({"suite": s, "name": r.name, "passed": r.passed, "detail": r.detail}))
            .collect();
        let doc = serde_json::json!({"seed": seed, "failed": failed, "properties": rows});
        std::fs::write(dir.join("verify.json"), serde_json::to_string_pretty(&doc)? + "\n")?;
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_PROPERTY })
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Run { config, out, seed } => {
            let s = cmd_run(&load(&config, seed)?, &out)?;
            println!(
                "{}: t = {} after {} steps, energy {:.6e} -> {:.6e}",
                s.status, s.t_final, s.steps, s.energy_initial, s.energy_final
            );
            Ok(EXIT_OK)
        }
        Command::Verify { suite, seed, out } => verify(&suite, seed, out),
        Command::Sweep { config, out, seed } => {
            let rows = cmd_sweep(&load(&config, seed)?, &out)?;
            let aborted = rows.iter().filter(|r| r.status != "ok").count();
            println!("{} cells, {aborted} aborted", rows.len());
            Ok(EXIT_OK)
        }
        Command::Spectra { checkpoint, out } => {
            cmd_spectra(&checkpoint, &out)?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MPS_LOG", "warn")).init();
    let cli = Cli::parse();
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(EXIT_CONFIG);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: cannot start thread pool: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
