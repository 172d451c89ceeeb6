use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use foothills::commands::{self, Curve};
use foothills::error::{EXIT_OK, EXIT_VALIDATION};
use foothills::output::{write_csv, write_json, write_rows};
use foothills::validate::{self, ValidateOptions};
use foothills::{CliResult, OutputFormat, RunConfig};

/// Return- and loop-counting functions of binary digit walks: samples,
/// closed-form integrals and their validation against a dyadic-cell oracle.
#[derive(Debug, Parser)]
#[command(name = "foothills", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Walk weight, |lambda| < 1.
    #[arg(long, global = true, default_value_t = 0.5, allow_negative_numbers = true)]
    lambda: f64,
    /// Oracle depth M (2^(M+1) cells).
    #[arg(long, global = true, default_value_t = 22)]
    depth: usize,
    /// Largest moment order.
    #[arg(long, global = true, default_value_t = 6)]
    nmax: usize,
    /// Number of cosine harmonics K.
    #[arg(long, global = true, default_value_t = 100)]
    harmonics: usize,
    /// Quadrature tolerance for the cosine transform.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Output format; validate defaults to json, everything else to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Seed for the randomized checks.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Restrict sampling to [a, b].
    #[arg(long, global = true, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    window: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample V or U at cell midpoints.
    Curve {
        #[arg(long, value_enum, default_value_t = Curve::V)]
        which: Curve,
        #[arg(long, default_value_t = 1025)]
        samples: usize,
    },
    /// Closed-form moments beside the cell oracle.
    Moments,
    /// Cosine coefficients and the reconstructed curve.
    Fourier {
        /// Reconstruction grid size.
        #[arg(long, default_value_t = 1001)]
        grid: usize,
    },
    /// Check every identity; exit status 1 if any entry fails.
    Validate {
        #[arg(long, hide = true)]
        perturb: Option<String>,
    },
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            lambda: self.lambda,
            depth: self.depth,
            n_max: self.nmax,
            harmonics: self.harmonics,
            tol: self.tol,
            format: self.format,
            seed: self.seed,
            window: self.window.as_ref().map(|w| (w[0], w[1])),
        }
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> CliResult<i32> {
    let cfg = cli.common.config();
    match &cli.command {
        Command::Curve { which, samples } => {
            let rows = commands::curve(&cfg, *which, *samples)?;
            write_rows(out, &rows, cfg.format_or(OutputFormat::Csv))?;
        }
        Command::Moments => {
            let rows = commands::moments(&cfg)?;
            write_rows(out, &rows, cfg.format_or(OutputFormat::Csv))?;
        }
        Command::Fourier { grid } => {
            let data = commands::fourier(&cfg, *grid)?;
            match cfg.format_or(OutputFormat::Csv) {
                OutputFormat::Csv => {
                    write_csv(out, &data.coeffs)?;
                    writeln!(out)?;
                    write_csv(out, &data.samples)?;
                }
                OutputFormat::Json => write_json(out, &data)?,
            }
        }
        Command::Validate { perturb } => {
            let opts = ValidateOptions {
                perturb: perturb.clone(),
            };
            let report = validate::run(&cfg, &opts)?;
            match cfg.format_or(OutputFormat::Json) {
                OutputFormat::Csv => write_csv(out, &report.entries)?,
                OutputFormat::Json => write_json(out, &report)?,
            }
            for e in report.failures() {
                eprintln!(
                    "FAIL {}: |{} - {}| = {:e} > {:e}",
                    e.identity_id, e.lhs_value, e.rhs_value, e.abs_error, e.allowed_bound
                );
            }
            out.flush()?;
            return Ok(if report.all_pass() { EXIT_OK } else { EXIT_VALIDATION });
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
