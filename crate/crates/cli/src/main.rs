use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cmwave_cli::{parse_config, run_experiment, AlgorithmName, CliError, Overrides, RhoModeName};

/// Designs constant-modulus MIMO radar probing waveforms.
#[derive(Debug, Parser)]
#[command(name = "cmwave", version)]
struct Args {
    /// TOML run description.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    algorithm: Option<AlgorithmName>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    rho_mode: Option<RhoModeName>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    sbcd_fraction: Option<f64>,
    #[arg(long)]
    agd_t: Option<f64>,
    /// Solver worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
}

fn run(args: Args) -> Result<(), CliError> {
    let mut config = parse_config(&args.config)?;
    config.apply(&Overrides {
        algorithm: args.algorithm,
        seed: args.seed,
        max_iter: args.max_iter,
        tol: args.tol,
        rho_mode: args.rho_mode,
        output_dir: args.output_dir,
        sbcd_fraction: args.sbcd_fraction,
        agd_t: args.agd_t,
        threads: args.threads,
    });
    config.validate()?;
    let exp = run_experiment(&config)?;
    println!(
        "{}: {} after {} iterations, e = {:.6e}, pc = {:.6e}",
        config.output.dir.display(),
        exp.output.stop_reason.as_str(),
        exp.output.trace.len(),
        exp.summary["final_e"].as_f64().unwrap_or(f64::NAN),
        exp.summary["final_pc"].as_f64().unwrap_or(f64::NAN),
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
