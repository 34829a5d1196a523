use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use adiapass::cli::{self, EXIT_INVALID};

/// Adiabatic state transfer through a triple quantum dot.
#[derive(Debug, Parser)]
#[command(name = "adiapass", version, after_help = "subcommands: evolve, gap, analytic, sweep-tau, sweep-mu0, sweep-ratio, compare\n\nADIAPASS_THREADS caps sweep parallelism.")]
struct Args {
    /// Experiment to run.
    subcommand: String,

    /// Flat `key = value` config file.
    #[arg(long, value_name = "FILE")]
    config: Option<String>,

    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<String>,

    /// Override a config key; applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn run() -> i32 {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stderr = &mut io::stderr();

    if !cli::SUBCOMMANDS.contains(&args.subcommand.as_str()) {
        let _ = writeln!(stderr, "error: unknown subcommand `{}`\n\n{}", args.subcommand, cli::usage());
        return EXIT_INVALID;
    }

    let text = match &args.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot read {path}: {e}");
                return EXIT_INVALID;
            }
        },
        None => String::new(),
    };
    let config = match cli::parse_config_with_overrides(&text, &args.set) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INVALID;
        }
    };

    let workers = cli::workers_from_env();
    let target = args.out.clone().or_else(|| config.output.clone());
    match target {
        Some(path) => {
            let file = match File::create(&path) {
                Ok(f) => f,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot create {path}: {e}");
                    return EXIT_INVALID;
                }
            };
            let mut sink = BufWriter::new(file);
            let code = cli::run_subcommand(&args.subcommand, &config, &mut sink, stderr, workers);
            if let Err(e) = sink.flush() {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_INVALID;
            }
            code
        }
        None => {
            let stdout = io::stdout();
            let mut sink = stdout.lock();
            cli::run_subcommand(&args.subcommand, &config, &mut sink, stderr, workers)
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run() as u8)
}
