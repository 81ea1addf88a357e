//! Command-line driver: config parsing, experiment runs and CSV output.

pub mod config;
pub mod csv;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ibg_core::equilibrium::{
    compute_n_t, equal_share_check, solve_equilibrium, solve_equilibrium_ordered, spne_oracle, threshold_check,
    verify_nash,
};
use ibg_core::harness::{sweep_signal_quality, Simulation, Strategy};
use ibg_core::instances::{random_instance, InstanceLimits};
use ibg_core::model::DecisionMatrix;
use ibg_core::GameError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{parse_config, ConfigError, ConfigFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ibg", version, about = "Indian Buffet Game simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play one config under one strategy and write its traces.
    Simulate(SimulateArgs),
    /// Mean welfare over a grid of signal qualities and strategies.
    Sweep(SweepArgs),
    /// Solve the config's game and check the equilibrium.
    Verify(VerifyArgs),
    /// Compare the solver with exhaustive search on random small games.
    OracleCheck(OracleArgs),
    /// Belief distance from the truth, slot by slot.
    LearningCurve(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "best-response")]
    pub strategy: Strategy,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Initial decision order, comma-separated 0-based customer indices.
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<usize>>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TraceKind {
    /// Running total of every customer's utility.
    PerCustomer,
    /// Distances of the belief from the truth.
    LearningCurve,
    /// Decisions of the final slot.
    NeMatrix,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value = "per-customer")]
    pub kind: TraceKind,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Strategies to compare; all four when absent.
    #[arg(long, value_delimiter = ',')]
    pub strategy: Option<Vec<Strategy>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pub realizations: usize,
    /// Signal qualities, comma-separated; the config's own `w` when absent.
    #[arg(long, value_delimiter = ',')]
    pub w_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<usize>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Check this matrix (ne-matrix CSV) instead of solving.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<usize>>,
    /// Writes the checked matrix as ne-matrix CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random games.
    #[arg(long, default_value_t = 200)]
    pub realizations: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Command failure split by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Checks ran and failed.
    Verification(String),
    /// Bad arguments, config or I/O.
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.into())
    }
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Self {
        Failure::Usage(e.into())
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Verification(_) => EXIT_VERIFICATION,
            Failure::Usage(_) => EXIT_USAGE,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Messages go to `stderr`.
pub fn run_from_args<I, T>(args: I, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli.command) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            match &f {
                Failure::Verification(msg) => {
                    let _ = writeln!(stderr, "verification failed: {msg}");
                }
                Failure::Usage(e) => {
                    let _ = writeln!(stderr, "error: {e:#}");
                }
            }
            f.exit_code()
        }
    }
}

pub fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Simulate(args) => simulate(&args),
        Command::Sweep(args) => sweep(&args),
        Command::Verify(args) => verify(&args),
        Command::OracleCheck(args) => oracle_check(&args),
        Command::LearningCurve(args) => learning_curve(&args),
    }
}

fn load(path: &PathBuf) -> anyhow::Result<ConfigFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in {}", path.display()))
}

fn with_overrides(mut file: ConfigFile, seed: Option<u64>, order: &Option<Vec<usize>>) -> anyhow::Result<ConfigFile> {
    if let Some(seed) = seed {
        file.seed = seed;
    }
    if let Some(order) = order {
        file.order = Some(order.clone());
    }
    file.game().context("after command-line overrides")?;
    Ok(file)
}

/// Writes to `out`, or standard output.
fn emit(out: &Option<PathBuf>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let mut f =
                io::BufWriter::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?);
            write(&mut f)
                .and_then(|_| f.flush())
                .with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock).context("writing standard output")
        }
    }
}

fn play(args: &RunArgs) -> anyhow::Result<ibg_core::harness::RunResult> {
    let file = with_overrides(load(&args.config)?, args.seed, &args.order)?;
    let mut sim = Simulation::new(file.game()?, args.strategy)?;
    if let Some(order) = &file.order {
        sim = sim.with_order(order.clone())?;
    }
    Ok(sim.run()?)
}

fn simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let run = play(&args.run)?;
    emit(&args.run.out, |w| match args.kind {
        TraceKind::PerCustomer => csv::write_per_customer(w, Some(&run)),
        TraceKind::LearningCurve => csv::write_learning_curve(w, Some(&run)),
        TraceKind::NeMatrix => csv::write_ne_matrix(w, &run.traces.last().expect("at least one slot").decisions),
    })?;
    Ok(())
}

fn learning_curve(args: &RunArgs) -> Result<(), Failure> {
    let run = play(args)?;
    emit(&args.out, |w| csv::write_learning_curve(w, Some(&run)))?;
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let file = with_overrides(load(&args.config)?, args.seed, &args.order)?;
    let scenario = file.scenario()?;
    let ws = args.w_grid.clone().unwrap_or_else(|| vec![file.w]);
    let strategies = args.strategy.clone().unwrap_or_else(|| Strategy::ALL.to_vec());
    if args.realizations == 0 {
        return Err(anyhow!("--realizations must be at least 1").into());
    }
    let rows = sweep_signal_quality(&scenario, &ws, &strategies, args.realizations)?;
    emit(&args.out, |w| csv::write_welfare(w, &rows))?;
    Ok(())
}

fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let file = with_overrides(load(&args.config)?, None, &args.order)?;
    let cfg = file.game()?;
    let order = file.order.clone().unwrap_or_else(|| (0..cfg.customers).collect());
    let d = match &args.matrix {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let d = csv::read_ne_matrix(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
            if d.dishes() != cfg.dishes || d.customers() != cfg.customers {
                return Err(anyhow!(
                    "{}: {}x{} matrix for a {}x{} game",
                    path.display(),
                    d.dishes(),
                    d.customers(),
                    cfg.dishes,
                    cfg.customers
                )
                .into());
            }
            d
        }
        None => solve_equilibrium_ordered(&cfg, &cfg.prior, &order)?,
    };
    if let Some(out) = &args.out {
        emit(&Some(out.clone()), |w| csv::write_ne_matrix(w, &d))?;
    }
    let mut failures = Vec::new();
    let report = verify_nash(&d, &cfg.prior, &cfg)?;
    println!("nash: {}", if report.is_nash() { "ok" } else { "FAILED" });
    if let Some(v) = report.violation {
        failures.push(format!("{v:?}"));
    }
    if cfg.utility.is_homogeneous() {
        if !cfg.has_budget() {
            // rows must be prefixes in decision order
            let ok = threshold_check(&d.permute_columns(&order));
            println!("threshold: {}", if ok { "ok" } else { "FAILED" });
            if !ok {
                failures.push("a dish row is not a prefix of the decision order".into());
            }
        } else if identical_dishes(&file) {
            let n_t = compute_n_t(&cfg, &cfg.prior, 0)?;
            let ok = equal_share_check(&d, n_t, &cfg)?;
            println!("equal share (n_T = {n_t}): {}", if ok { "ok" } else { "FAILED" });
            if !ok {
                failures.push(format!("rows {:?} are not equally shared", d.row_sums()));
            }
        }
    }
    print!("{d}");
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failures.join("; ")))
    }
}

fn identical_dishes(file: &ConfigFile) -> bool {
    let cfg = match file.game() {
        Ok(c) => c,
        Err(_) => return false,
    };
    cfg.true_states.windows(2).all(|w| w[0] == w[1])
        && cfg.utility.costs().windows(2).all(|w| w[0] == w[1])
        && cfg.prior.rows().windows(2).all(|w| w[0] == w[1])
}

fn oracle_check(args: &OracleArgs) -> Result<(), Failure> {
    if args.realizations == 0 {
        return Err(anyhow!("--realizations must be at least 1").into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut lines = vec!["instance,customers,dishes,budget,equal,nash".to_string()];
    let mut mismatches = 0;
    for k in 0..args.realizations {
        let (cfg, belief) = random_instance(&mut rng, InstanceLimits::default());
        let solved = solve_equilibrium(&cfg, &belief)?;
        let oracle: DecisionMatrix = spne_oracle(&cfg, &belief)?;
        let equal = solved == oracle;
        let nash = verify_nash(&solved, &belief, &cfg)?.is_nash();
        mismatches += usize::from(!equal);
        lines.push(format!(
            "{k},{},{},{},{},{}",
            cfg.customers,
            cfg.dishes,
            cfg.effective_budget(),
            u8::from(equal),
            u8::from(nash)
        ));
    }
    emit(&args.out, |w| lines.iter().try_for_each(|l| writeln!(w, "{l}")))?;
    if mismatches > 0 {
        return Err(Failure::Verification(format!(
            "{mismatches} of {} instances differ from the oracle",
            args.realizations
        )));
    }
    Ok(())
}
