use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::ser::{Serialize, SerializeMap, Serializer};

use swiperkit::distribution::{load_distribution, InputFormat, WeightDistribution};
use swiperkit::error::Error;
use swiperkit::experiment::{self, BootstrapConfig, GridConfig};
use swiperkit::oracle::{brute_optimum, brute_validate, OracleBudget};
use swiperkit::problem::{ProblemKind, ProblemSpec};
use swiperkit::rational::Rational;
use swiperkit::solver::{self, SolveMode, SolveReport};
use swiperkit::tickets::{load_tickets, TicketAssignment};

const EXIT_INTERNAL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(name = "swiperkit", version, about = "Reduce real weights to small integer tickets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a valid ticket assignment.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_name = "PATH")]
        weights: PathBuf,
        /// Use only the conservative quick check.
        #[arg(long)]
        linear: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Check a ticket assignment exactly; exits 3 when it is invalid.
    Validate {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_name = "PATH")]
        weights: PathBuf,
        #[arg(long, value_name = "PATH")]
        tickets: PathBuf,
    },
    /// Print the closed-form ticket bound for n parties.
    Bound {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        n: usize,
    },
    /// Parameter sweeps and bootstrap resampling.
    Experiment {
        #[command(subcommand)]
        kind: ExperimentCommand,
    },
    /// Brute-force reference checks for small inputs.
    #[command(hide = true)]
    Oracle {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_name = "PATH")]
        weights: PathBuf,
        /// Validate this assignment instead of searching for an optimum.
        #[arg(long, value_name = "PATH")]
        tickets: Option<PathBuf>,
        /// Largest ticket total tried by the optimum search.
        #[arg(long, default_value_t = 40)]
        max_tickets: u64,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Solve every (low, high) grid point on one dataset.
    Grid {
        #[arg(long, value_enum, default_value_t = ProblemArg::Wr)]
        problem: ProblemArg,
        #[arg(long, value_name = "PATH")]
        weights: PathBuf,
        /// Grid point LOW:HIGH (repeatable); defaults to the built-in sweep.
        #[arg(long = "point", value_name = "LOW:HIGH")]
        points: Vec<String>,
        #[arg(long)]
        linear: bool,
        /// Fill the elapsed_ms column.
        #[arg(long)]
        timings: bool,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Average solve metrics over resamples drawn with replacement.
    Bootstrap {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_name = "PATH")]
        weights: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Comma-separated sample sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        linear: bool,
        /// Fill the elapsed_ms column.
        #[arg(long)]
        timings: bool,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Wr,
    Wq,
    Ws,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long, value_enum)]
    problem: ProblemArg,
    #[arg(long)]
    alpha_w: Option<String>,
    #[arg(long)]
    alpha_n: Option<String>,
    #[arg(long)]
    beta_w: Option<String>,
    #[arg(long)]
    beta_n: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

impl ProblemArgs {
    fn spec(&self) -> CliResult<ProblemSpec> {
        let flags = [
            ("--alpha-w", &self.alpha_w),
            ("--alpha-n", &self.alpha_n),
            ("--beta-w", &self.beta_w),
            ("--beta-n", &self.beta_n),
            ("--alpha", &self.alpha),
            ("--beta", &self.beta),
        ];
        let wanted: [&str; 2] = match self.problem {
            ProblemArg::Wr => ["--alpha-w", "--alpha-n"],
            ProblemArg::Wq => ["--beta-w", "--beta-n"],
            ProblemArg::Ws => ["--alpha", "--beta"],
        };
        for (name, value) in &flags {
            if value.is_some() && !wanted.contains(name) {
                return Err(Failure::Input(format!("{name} does not apply to this problem")));
            }
        }
        let get = |name: &str| -> CliResult<Rational> {
            let (_, value) = flags.iter().find(|(n, _)| *n == name).expect("known flag");
            let text = value
                .as_deref()
                .ok_or_else(|| Failure::Input(format!("{name} is required for this problem")))?;
            parse_parameter(name, text)
        };
        let (first, second) = (get(wanted[0])?, get(wanted[1])?);
        Ok(match self.problem {
            ProblemArg::Wr => ProblemSpec::restriction(first, second)?,
            ProblemArg::Wq => ProblemSpec::qualification(first, second)?,
            ProblemArg::Ws => ProblemSpec::separation(first, second)?,
        })
    }
}

/// Parses a threshold exactly and warns when a decimal sits next to a
/// small-denominator fraction it may have been meant as.
fn parse_parameter(name: &str, text: &str) -> CliResult<Rational> {
    let value = Rational::parse(text)?;
    let Some((_, fraction)) = text.split_once('.') else {
        return Ok(value);
    };
    let places = fraction.chars().take_while(char::is_ascii_digit).count();
    if places >= 2 && !value.is_zero() {
        let tolerance = Rational::new(1, 10u64.pow(places.min(18) as u32));
        let nearest = (2..=16u64)
            .filter_map(|d| {
                let candidate = Rational::from_integer((&value * &Rational::from(d)).round()) / &Rational::from(d);
                let distance = (&candidate - &value).abs();
                (distance.is_positive() && distance < tolerance).then_some((distance, candidate))
            })
            .min();
        if let Some((_, candidate)) = nearest {
            log::warn!("{name} {text} is used exactly as {value}; write {candidate} if that was meant");
        }
    }
    Ok(value)
}

fn read_distribution(path: &Path) -> CliResult<WeightDistribution> {
    let file = File::open(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    load_distribution(io::BufReader::new(file), InputFormat::from_path(path))
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_tickets(path: &Path, dist: &WeightDistribution) -> CliResult<TicketAssignment> {
    let file = File::open(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    load_tickets(io::BufReader::new(file), InputFormat::from_path(path), dist)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> CliResult {
    let result = match output {
        Some(path) => std::fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    result.map_err(|e| Failure::Internal(format!("cannot write output: {e}")))
}

fn mode(linear: bool) -> SolveMode {
    if linear {
        SolveMode::Linear
    } else {
        SolveMode::Full
    }
}

/// Tickets keyed by party id, in party order.
struct TicketsById<'a>(&'a WeightDistribution, &'a TicketAssignment);

impl Serialize for TicketsById<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (id, t) in self.0.ids().zip(self.1.as_slice()) {
            map.serialize_entry(id, t)?;
        }
        map.end()
    }
}

struct Parameters<'a>(&'a ProblemSpec);

impl Serialize for Parameters<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let p = self.0;
        let (names, values) = match p.kind() {
            ProblemKind::Restriction => (["alpha_w", "alpha_n"], [p.low(), p.high()]),
            ProblemKind::Qualification => (["beta_w", "beta_n"], [p.high(), p.low()]),
            ProblemKind::Separation => (["alpha", "beta"], [p.low(), p.high()]),
        };
        let mut map = serializer.serialize_map(Some(2))?;
        for (name, value) in names.iter().zip(values) {
            map.serialize_entry(name, value)?;
        }
        map.end()
    }
}

#[derive(serde::Serialize)]
struct SolveOutput<'a> {
    problem: ProblemKind,
    parameters: Parameters<'a>,
    n: usize,
    mode: SolveMode,
    total: u64,
    bound: u64,
    locally_minimal: bool,
    stats: &'a solver::SolveStats,
    tickets: TicketsById<'a>,
}

#[derive(serde::Serialize)]
struct OracleOutput<'a> {
    total: u64,
    tickets: TicketsById<'a>,
}

fn render_solve(problem: &ProblemSpec, dist: &WeightDistribution, report: &SolveReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let output = SolveOutput {
                problem: problem.kind(),
                parameters: Parameters(problem),
                n: dist.len(),
                mode: report.mode,
                total: report.total,
                bound: report.bound,
                locally_minimal: report.locally_minimal,
                stats: &report.stats,
                tickets: TicketsById(dist, &report.assignment),
            };
            serde_json::to_string_pretty(&output).expect("report serializes") + "\n"
        }
        OutputFormat::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            writer.write_record(["id", "tickets"]).expect("in-memory write");
            for (id, t) in dist.ids().zip(report.assignment.as_slice()) {
                writer.write_record([id, &t.to_string()]).expect("in-memory write");
            }
            String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
        }
    }
}

fn parse_point(text: &str) -> CliResult<(Rational, Rational)> {
    let (low, high) = text
        .split_once(':')
        .ok_or_else(|| Failure::Input(format!("grid point {text:?} must look like LOW:HIGH")))?;
    Ok((parse_parameter("--point", low)?, parse_parameter("--point", high)?))
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Solve {
            problem,
            weights,
            linear,
            format,
            output,
        } => {
            let spec = problem.spec()?;
            let dist = read_distribution(&weights)?;
            let report = solver::solve(&spec, &dist, mode(linear))?;
            if report.total > report.bound || report.assignment.len() != dist.len() {
                return Err(Failure::Internal(format!(
                    "solver returned {} tickets for {} parties against a bound of {}",
                    report.total,
                    report.assignment.len(),
                    report.bound
                )));
            }
            emit(output.as_deref(), &render_solve(&spec, &dist, &report, format))?;
            Ok(0)
        }
        Command::Validate {
            problem,
            weights,
            tickets,
        } => {
            let spec = problem.spec()?;
            let dist = read_distribution(&weights)?;
            let t = read_tickets(&tickets, &dist)?;
            let valid = solver::validate(&spec, &dist, &t)?;
            emit(None, if valid { "valid\n" } else { "invalid\n" })?;
            Ok(if valid { 0 } else { EXIT_INVALID })
        }
        Command::Bound { problem, n } => {
            if n == 0 {
                return Err(Failure::Input("--n must be at least 1".into()));
            }
            let bound = solver::ticket_bound(&problem.spec()?, n)?;
            emit(None, &format!("{bound}\n"))?;
            Ok(0)
        }
        Command::Experiment { kind } => run_experiment(kind),
        Command::Oracle {
            problem,
            weights,
            tickets,
            max_tickets,
        } => {
            let spec = problem.spec()?;
            let dist = read_distribution(&weights)?;
            let budget = OracleBudget {
                max_total_tickets: max_tickets,
                ..OracleBudget::default()
            };
            match tickets {
                Some(path) => {
                    let t = read_tickets(&path, &dist)?;
                    let valid = brute_validate(&spec, &dist, &t, &budget)?;
                    emit(None, if valid { "valid\n" } else { "invalid\n" })?;
                    Ok(if valid { 0 } else { EXIT_INVALID })
                }
                None => {
                    let best = brute_optimum(&spec, &dist, &budget)?;
                    let text = serde_json::to_string_pretty(&OracleOutput {
                        total: best.total(),
                        tickets: TicketsById(&dist, &best),
                    })
                    .expect("serializes");
                    emit(None, &(text + "\n"))?;
                    Ok(0)
                }
            }
        }
    }
}

fn run_experiment(kind: ExperimentCommand) -> CliResult<u8> {
    match kind {
        ExperimentCommand::Grid {
            problem,
            weights,
            points,
            linear,
            timings,
            output,
        } => {
            let dist = read_distribution(&weights)?;
            let points = if points.is_empty() {
                GridConfig::default_points()
            } else {
                points.iter().map(|p| parse_point(p)).collect::<CliResult<_>>()?
            };
            let config = GridConfig {
                kind: match problem {
                    ProblemArg::Wr => ProblemKind::Restriction,
                    ProblemArg::Wq => ProblemKind::Qualification,
                    ProblemArg::Ws => ProblemKind::Separation,
                },
                points,
                mode: mode(linear),
            };
            let rows = experiment::run_grid(&dist, &config, timings)?;
            emit(output.as_deref(), &experiment::write_csv(&rows)?)?;
            Ok(0)
        }
        ExperimentCommand::Bootstrap {
            problem,
            weights,
            samples,
            sizes,
            seed,
            linear,
            timings,
            output,
        } => {
            let config = BootstrapConfig {
                problem: problem.spec()?,
                mode: mode(linear),
                samples,
                sizes,
                seed,
            };
            let dist = read_distribution(&weights)?;
            let rows = experiment::run_bootstrap(&dist, &config, timings)?;
            emit(output.as_deref(), &experiment::write_csv(&rows)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SWIPERKIT_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Internal(message)) => {
            eprintln!("internal error: {message}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
