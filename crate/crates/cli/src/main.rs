mod report;

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nested_asp::ptsp::{self, Objective, PtspError, PtspInstance, Target, Via};
use nested_asp::{
    parse_program, solve_program, GroundError, GroundingConfig, GroundingMode, Program, SolveError, SolveOptions,
    Strategy, Symbol,
};

use report::{Format, Report};

#[derive(Parser)]
#[command(name = "nasp", version, about = "Answer sets and preference ranking for programs with nested aggregates")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Report at most N answer sets (the first N in canonical order).
    #[arg(long, global = true, value_name = "N")]
    max_answer_sets: Option<usize>,
    /// Give up after S seconds.
    #[arg(long, global = true, value_name = "S")]
    timeout: Option<f64>,
    /// Upper bound on ground pairs and rules.
    #[arg(long, global = true, value_name = "N", default_value_t = nested_asp::grounder::DEFAULT_GROUND_CAP)]
    ground_cap: u64,
    /// Grounding strategy.
    #[arg(long, global = true, value_enum, default_value_t = GroundingArg::Relevant)]
    grounding: GroundingArg,
    /// Show every atom, overriding `--show`.
    #[arg(long, global = true)]
    show_all: bool,
    /// Show only these predicates (comma separated).
    #[arg(long, global = true, value_delimiter = ',', value_name = "PRED")]
    show: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroundingArg {
    Naive,
    Relevant,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Pareto,
    Maximal,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ptsp,
    Tsp,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Naso,
    Ndlp,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViaArg {
    Naso,
    Ndlp,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Answer sets of the generator rules.
    Solve {
        /// Program file, or `-` for standard input.
        file: PathBuf,
    },
    /// Answer sets ranked by the preference rules.
    Rank {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Pareto)]
        strategy: StrategyArg,
    },
    /// Print the ground program.
    Ground { file: PathBuf },
    /// Probabilistic travelling salesman workflows.
    #[command(subcommand)]
    Ptsp(PtspCommand),
    /// Check expected lengths against the subset oracle and the ranked encoding.
    Verify {
        instance: PathBuf,
    },
}

#[derive(Subcommand)]
enum PtspCommand {
    /// Write the program encoding an instance.
    Encode {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Ptsp)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = TargetArg::Naso)]
        target: TargetArg,
        /// Add the `min`/`maximal` rules to an NDLP encoding.
        #[arg(long)]
        with_min: bool,
        #[arg(short, long, value_name = "OUT")]
        output: Option<PathBuf>,
    },
    /// Find the optimal tours.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Ptsp)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = ViaArg::Naso)]
        via: ViaArg,
    },
}

enum Failure {
    User(String),
    Resource(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::User(e.to_string())
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Timeout | SolveError::Ground(GroundError::CapExceeded { .. }) => Failure::Resource(e.to_string()),
            SolveError::Ground(_) => Failure::User(e.to_string()),
        }
    }
}

impl From<PtspError> for Failure {
    fn from(e: PtspError) -> Self {
        match e {
            PtspError::Solve(e) => e.into(),
            PtspError::TooLarge { .. } => Failure::Resource(e.to_string()),
            other => Failure::User(other.to_string()),
        }
    }
}

impl GlobalArgs {
    fn grounding(&self) -> GroundingConfig {
        let mode = match self.grounding {
            GroundingArg::Naive => GroundingMode::Naive,
            GroundingArg::Relevant => GroundingMode::Relevant,
        };
        GroundingConfig { mode, cap: self.ground_cap }
    }

    fn options(&self) -> Result<SolveOptions, Failure> {
        let timeout = match self.timeout {
            Some(s) if !(s.is_finite() && s > 0.0) => {
                return Err(Failure::User(format!("--timeout must be a positive number of seconds, got {s}")))
            }
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        Ok(SolveOptions { limit: self.max_answer_sets, timeout, cap: Some(self.ground_cap) })
    }

    /// Predicates to display; `None` shows everything.
    fn projection(&self, default: Option<BTreeSet<Symbol>>) -> Option<BTreeSet<Symbol>> {
        if self.show_all {
            None
        } else if !self.show.is_empty() {
            Some(self.show.iter().map(|p| Symbol::new(p.trim())).collect())
        } else {
            default
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(|e| Failure::User(format!("{}: {e}", path.display())))
}

fn load_program(path: &Path) -> Result<Program, Failure> {
    let text = read_input(path)?;
    parse_program(&text).map_err(|e| Failure::User(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<PtspInstance, Failure> {
    let text = read_input(path)?;
    ptsp::load_instance(&text).map_err(|e| Failure::User(format!("{}: {e}", path.display())))
}

fn objective(mode: ModeArg) -> Objective {
    match mode {
        ModeArg::Ptsp => Objective::Ptsp,
        ModeArg::Tsp => Objective::Tsp,
    }
}

/// The rendered report, and whether every check in it passed.
fn run(cli: Cli) -> Result<(String, bool), Failure> {
    let g = &cli.global;
    let mut passed = true;
    let started = Instant::now();
    let mut report = match cli.command {
        Command::Solve { file } => {
            let program = load_program(&file)?;
            let solved = solve_program(&program, g.grounding(), g.options()?)?;
            Report::answer_sets(&solved, None, g.projection(None))
        }
        Command::Rank { file, strategy } => {
            let program = load_program(&file)?;
            let mut solved = solve_program(&program, g.grounding(), g.options()?)?;
            let strategy = match strategy {
                StrategyArg::Pareto => Strategy::Pareto,
                StrategyArg::Maximal => Strategy::Maximal,
            };
            let ranked = solved.rank(strategy);
            Report::answer_sets(&solved, Some(ranked), g.projection(None))
        }
        Command::Ground { file } => {
            let program = load_program(&file)?;
            let ground = nested_asp::ground_program(&program, g.grounding()).map_err(SolveError::from)?;
            Report::ground(&ground)
        }
        Command::Ptsp(PtspCommand::Encode { instance, mode, target, with_min, output }) => {
            let inst = load_instance(&instance)?;
            let target = match target {
                TargetArg::Naso => Target::Naso,
                TargetArg::Ndlp => Target::Ndlp,
            };
            let text = ptsp::render_encoding(&inst, objective(mode), target, with_min);
            if let Some(path) = output {
                fs::write(&path, &text).map_err(|e| Failure::User(format!("{}: {e}", path.display())))?;
                Report::encoding(None, Some(path.display().to_string()))
            } else {
                Report::encoding(Some(text), None)
            }
        }
        Command::Ptsp(PtspCommand::Solve { instance, mode, via }) => {
            let inst = load_instance(&instance)?;
            let via = match via {
                ViaArg::Naso => Via::Naso,
                ViaArg::Ndlp => Via::Ndlp,
                ViaArg::Oracle => Via::Oracle,
            };
            let solution = ptsp::solve_instance(&inst, objective(mode), via, g.grounding(), g.options()?)?;
            Report::ptsp(objective(mode), via, &solution)
        }
        Command::Verify { instance } => {
            let inst = load_instance(&instance)?;
            let verdict = report::verify(&inst, g.grounding(), g.options()?)?;
            passed = verdict.passed();
            Report::verify(verdict)
        }
    };
    report.timing("total", started.elapsed());
    Ok((report.render(g.format), passed))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((out, passed)) => {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: verification failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::User(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Resource(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
