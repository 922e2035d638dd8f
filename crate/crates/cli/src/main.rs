use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wholder_cli::suite::{EXIT_CONFIG, EXIT_ERROR};
use wholder_cli::{emit_plot_data_json, list_cases, run_config, SuiteConfig};

#[derive(Parser)]
#[command(name = "wholder", version, about = "Runs weighted Hölder seminorm checks and writes reports")]
struct Cli {
    /// Thread budget, overriding the config.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    atol: Option<f64>,
    #[arg(long = "slope-threshold", global = true)]
    slope_threshold: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks listed in a suite config.
    Run { config: PathBuf },
    /// List registered checks.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Write the trails of a report as CSV.
    Plot {
        report: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => {
            let mut c = match SuiteConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("{e}");
                    return code(EXIT_CONFIG);
                }
            };
            if let Some(t) = cli.threads {
                c.threads = t;
            }
            if let Some(o) = cli.out {
                c.output_dir = o;
            }
            if let Some(a) = cli.atol {
                c.tolerances.atol = a;
            }
            if let Some(s) = cli.slope_threshold {
                c.tolerances.slope_threshold = s;
            }
            let run = run_config(&c);
            for e in &run.summary.checks {
                let detail = e.error.clone().unwrap_or_else(|| e.failed_assertions.join("; "));
                println!("{:<28} {:<6} {}", e.name, format!("{:?}", e.outcome).to_lowercase(), detail);
            }
            code(run.exit_code)
        }
        Command::List { json } => {
            let cases = list_cases();
            let mut out = std::io::stdout().lock();
            if json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&cases).expect("listing serializes"));
            } else {
                for c in cases {
                    let p = c.default_params;
                    let _ = writeln!(out, "{:<18} m={} n={} γ={}  {}", c.id, p.m, p.n, p.gamma, c.statement);
                }
            }
            ExitCode::SUCCESS
        }
        Command::Plot { report, output } => {
            let csv = std::fs::read_to_string(&report)
                .map_err(|e| wholder::Error::Io(format!("{}: {e}", report.display())))
                .and_then(|s| emit_plot_data_json(&s));
            match (csv, output) {
                (Ok(csv), Some(path)) => match std::fs::write(&path, csv) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => {
                        eprintln!("{}: {e}", path.display());
                        code(EXIT_ERROR)
                    }
                },
                (Ok(csv), None) => {
                    let _ = std::io::stdout().lock().write_all(csv.as_bytes());
                    ExitCode::SUCCESS
                }
                (Err(e), _) => {
                    eprintln!("{e}");
                    code(EXIT_ERROR)
                }
            }
        }
    }
}
