//! Thin command-line front-end; all dispatch lives in `rose_entropy::cli`.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rose_entropy::cli::{
    run, CommandKind, InlineInput, InputSource, JobConfig, OutputFormat,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "rose-entropy",
    about = "Volume entropy of metric roses: solvers, exact orbit census, growth certificates, collar bounds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Plain => OutputFormat::Plain,
        }
    }
}

#[derive(Args)]
struct LengthsInput {
    /// Inline loop lengths, comma separated (e.g. 1,2.5,3)
    #[arg(long, value_parser = parse_list, conflicts_with = "input")]
    lengths: Option<std::vec::Vec<f64>>,
    /// Path to a .json or .csv input document
    #[arg(long)]
    input: Option<PathBuf>,
}

impl LengthsInput {
    fn into_source(self, command: &'static str) -> Result<InputSource, String> {
        match (self.lengths, self.input) {
            (Some(values), None) => Ok(InputSource::Inline(InlineInput::Lengths(values))),
            (None, Some(path)) => Ok(InputSource::Path(path)),
            _ => Err(format!("{command}: provide exactly one of --lengths or --input")),
        }
    }
}

#[derive(Args)]
struct CommonFlags {
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the defining equation for the volume entropy
    Entropy {
        #[command(flatten)]
        data: LengthsInput,
        /// Residual tolerance (default 1e-12, or ROSE_ENTROPY_TOL)
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Solve for the entropy via the spectral (transfer-matrix) route
    Lim {
        #[command(flatten)]
        data: LengthsInput,
        /// Tolerance on the Perron root defect (default 1e-10)
        #[arg(long)]
        rho_tol: Option<f64>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Exact orbit-ball counts and a growth-rate estimate
    Census {
        #[command(flatten)]
        data: LengthsInput,
        /// Denominator used to rationalize the lengths
        #[arg(long, default_value_t = 1)]
        scale: u64,
        /// Largest radius to count to (length units)
        #[arg(long)]
        rmax: f64,
        /// Sampling step (length units; must be a multiple of 1/scale)
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        /// Two sampled radii for the slope estimate, e.g. 10,20
        #[arg(long, value_parser = parse_pair)]
        window: Option<(f64, f64)>,
        /// Cap on the number of integer radius layers
        #[arg(long)]
        table_cap: Option<u64>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Evaluate the growth certificate on displacement data
    Certify {
        /// Inline displacements, comma separated
        #[arg(long, value_parser = parse_list, conflicts_with = "input", requires = "delta")]
        displacements: Option<std::vec::Vec<f64>>,
        /// Critical exponent to test at
        #[arg(long)]
        delta: Option<f64>,
        /// Path to a .json or .csv input document
        #[arg(long)]
        input: Option<PathBuf>,
        /// Verdict tolerance on the sum (default 1e-12)
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Collar bounds: minimal admissible last length at fixed entropy
    Collar {
        /// Volume entropy to hold fixed
        #[arg(long)]
        h: f64,
        /// Prior loop lengths, sorted ascending
        #[arg(long, value_parser = parse_list, conflicts_with = "input")]
        priors: Option<std::vec::Vec<f64>>,
        /// Path to a .json or .csv input document
        #[arg(long)]
        input: Option<PathBuf>,
        /// Exit nonzero when the bound is infeasible or undefined
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Combined document: both solvers, census, certificate, collar
    Report {
        #[command(flatten)]
        data: LengthsInput,
        /// Residual tolerance (default 1e-12, or ROSE_ENTROPY_TOL)
        #[arg(long)]
        tol: Option<f64>,
        /// Tolerance on the Perron root defect (default 1e-10)
        #[arg(long)]
        rho_tol: Option<f64>,
        /// Denominator used to rationalize the lengths for the census
        #[arg(long, default_value_t = 1000)]
        scale: u64,
        /// Override the census radius (default reaches ~30/h)
        #[arg(long)]
        rmax: Option<f64>,
        /// Cap on the number of integer radius layers
        #[arg(long)]
        table_cap: Option<u64>,
        #[command(flatten)]
        common: CommonFlags,
    },
}

fn parse_list(raw: &str) -> Result<Vec<f64>, String> {
    raw.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("not a number: {part:?}"))
        })
        .collect()
}

fn parse_pair(raw: &str) -> Result<(f64, f64), String> {
    let values = parse_list(raw)?;
    match values.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(format!("expected two comma-separated values, got {raw:?}")),
    }
}

fn build_config(command: Command) -> Result<JobConfig, String> {
    Ok(match command {
        Command::Entropy { data, tol, common } => {
            let mut config = JobConfig::new(CommandKind::Entropy, data.into_source("entropy")?);
            config.tol = tol;
            config.format = common.format.into();
            config
        }
        Command::Lim {
            data,
            rho_tol,
            common,
        } => {
            let mut config = JobConfig::new(CommandKind::Lim, data.into_source("lim")?);
            config.rho_tol = rho_tol;
            config.format = common.format.into();
            config
        }
        Command::Census {
            data,
            scale,
            rmax,
            step,
            window,
            table_cap,
            common,
        } => {
            let mut config = JobConfig::new(CommandKind::Census, data.into_source("census")?);
            config.scale = scale;
            config.r_max = Some(rmax);
            config.step = step;
            config.window = window;
            if let Some(cap) = table_cap {
                config.table_cap = cap;
            }
            config.format = common.format.into();
            config
        }
        Command::Certify {
            displacements,
            delta,
            input,
            tol,
            common,
        } => {
            let source = match (displacements, input) {
                (Some(d), None) => {
                    let delta =
                        delta.ok_or("certify: --displacements requires --delta".to_string())?;
                    InputSource::Inline(InlineInput::Sample {
                        displacements: d,
                        delta,
                    })
                }
                (None, Some(path)) => InputSource::Path(path),
                _ => {
                    return Err(
                        "certify: provide exactly one of --displacements or --input".to_string()
                    )
                }
            };
            let mut config = JobConfig::new(CommandKind::Certify, source);
            config.tol = tol;
            config.format = common.format.into();
            config
        }
        Command::Collar {
            h,
            priors,
            input,
            strict,
            common,
        } => {
            let source = match (priors, input) {
                (Some(p), None) => InputSource::Inline(InlineInput::Lengths(p)),
                (None, Some(path)) => InputSource::Path(path),
                _ => return Err("collar: provide exactly one of --priors or --input".to_string()),
            };
            let mut config = JobConfig::new(CommandKind::Collar, source);
            config.h = Some(h);
            config.strict = strict;
            config.format = common.format.into();
            config
        }
        Command::Report {
            data,
            tol,
            rho_tol,
            scale,
            rmax,
            table_cap,
            common,
        } => {
            let mut config = JobConfig::new(CommandKind::Report, data.into_source("report")?);
            config.tol = tol;
            config.rho_tol = rho_tol;
            config.scale = scale;
            config.r_max = rmax;
            if let Some(cap) = table_cap {
                config.table_cap = cap;
            }
            config.format = common.format.into();
            config
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outcomes; anything else is an
            // input problem and maps to the validation exit code.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let config = match build_config(cli.command) {
        Ok(config) => config,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(1);
        }
    };
    match run(&config) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
