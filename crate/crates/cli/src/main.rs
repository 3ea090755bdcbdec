use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use halflow_cli::{emit_report, run_config_file, ExitStatus, Level, Overrides};

/// Runs half-harmonic flow experiments and verification suites.
#[derive(Parser, Debug)]
#[command(name = "halflow", version)]
struct Args {
    /// Experiment configuration (JSON).
    #[arg(long, value_name = "PATH", required_unless_present = "report")]
    config: Option<PathBuf>,
    /// Output directory; defaults to $HALFLOW_OUT/<name>.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed, overriding the config.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Suite level for verify-all and ineq:<name>.
    #[arg(long, value_enum)]
    level: Option<Level>,
    /// Worker threads; affects speed only.
    #[arg(long, value_name = "INT")]
    threads: Option<usize>,
    /// Print the summary table of an existing output directory instead of running.
    #[arg(long, value_name = "DIR", conflicts_with = "config")]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("halflow: cannot configure {n} threads: {e}");
            return ExitCode::from(ExitStatus::Malformed.code() as u8);
        }
    }
    if let Some(dir) = args.report {
        let (table, ok) = emit_report(&dir);
        print!("{table}");
        return ExitCode::from(if ok { 0 } else { ExitStatus::CheckFailed.code() as u8 });
    }
    let path = args.config.expect("required by clap");
    let over = Overrides { out: args.out, seed: args.seed, level: args.level };
    let outcome = run_config_file(&path, &over);
    if outcome.status == ExitStatus::Malformed {
        eprintln!("halflow: {}", outcome.summary);
    } else {
        print!("{}", outcome.summary);
        if !outcome.summary.ends_with('\n') {
            println!();
        }
        println!("artifacts: {}", outcome.dir.display());
    }
    ExitCode::from(outcome.status.code() as u8)
}
