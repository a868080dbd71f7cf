use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use argmin_inference::argmin_test::da_test;
use argmin_inference::confidence_sets::{
    mcs_one_step, mcs_two_step, pointwise_confset, smallest_mean_c1, smallest_mean_c2,
    TestProcedure,
};
use argmin_inference::estimators::{MomBlocks, RobustParams};
use argmin_inference::multi_split::{multisplit_test, MultiSplitConfig};
use argmin_inference::report::{
    emit_report, load_matrix, Format, IntervalReport, Matrix, Report, SetReport, TestReport,
};
use argmin_inference::selection::SelectorKind;
use argmin_inference::sim::{run_suite, Suite};
use argmin_inference::{Error, Result};

#[derive(Parser)]
#[command(name = "argmin", version, about = "Confidence sets for the argmin of a mean vector")]
struct Cli {
    /// Base seed for every random split and resample.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// `max` runs argmax inference by negating the data.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Min)]
    mode: Mode,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether model R (1-based) attains the smallest mean.
    Test {
        #[arg(long = "r")]
        r: usize,
        #[command(flatten)]
        common: TestArgs,
        /// Number of splits; more than one averages the split statistics.
        #[arg(long, default_value_t = 1)]
        splits: usize,
        /// Bootstrap resamples calibrating a multi-split test.
        #[arg(long, default_value_t = 500)]
        subsamples: usize,
        file: PathBuf,
    },
    /// Confidence set for the argmin with pointwise coverage.
    Confset {
        #[arg(long, value_enum, default_value_t = ConfsetMethod::Pointwise)]
        method: ConfsetMethod,
        #[command(flatten)]
        common: TestArgs,
        #[arg(long, default_value_t = 10)]
        splits: usize,
        #[arg(long, default_value_t = 500)]
        subsamples: usize,
        file: PathBuf,
    },
    /// Confidence set covering the whole argmin set.
    Mcs {
        #[arg(long, value_enum, default_value_t = Variant::TwoStep)]
        variant: Variant,
        #[command(flatten)]
        common: TestArgs,
        file: PathBuf,
    },
    /// Confidence interval for the smallest mean.
    Minmean {
        #[arg(long = "set", value_enum, default_value_t = MinSet::C2)]
        set: MinSet,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        file: PathBuf,
    },
    /// Run a simulation suite.
    Simulate {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        /// Replications per scenario; overrides the suite default.
        #[arg(long)]
        reps: Option<usize>,
        /// Use the replication counts of the full study.
        #[arg(long)]
        full: bool,
        /// Write `<suite>.csv` and `<suite>.json` here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TestArgs {
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = SelectorArg::Adj)]
    selector: SelectorArg,
    #[arg(long, value_enum)]
    robust: Option<RobustArg>,
    /// Median-of-means block count; defaults to floor(sqrt(n)).
    #[arg(long)]
    mom_blocks: Option<usize>,
    /// Catoni confidence parameter.
    #[arg(long, default_value_t = 0.05)]
    catoni_delta: f64,
}

impl TestArgs {
    fn selector(&self) -> SelectorKind {
        let base = match self.selector {
            SelectorArg::Plug => SelectorKind::plugin(),
            SelectorArg::Adj => SelectorKind::adjusted(),
        };
        let robust = match self.robust {
            None => return base,
            Some(RobustArg::Mom) => RobustParams::median_of_means(),
            Some(RobustArg::Catoni) => RobustParams::catoni(),
        };
        let mom_blocks = self.mom_blocks.map_or(robust.mom_blocks, MomBlocks::Fixed);
        base.with_robust(RobustParams { mom_blocks, catoni_delta: self.catoni_delta, ..robust })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Min,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectorArg {
    Plug,
    Adj,
}

#[derive(Clone, Copy, ValueEnum)]
enum RobustArg {
    Mom,
    Catoni,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConfsetMethod {
    Pointwise,
    Multisplit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    OneStep,
    TwoStep,
}

#[derive(Clone, Copy, ValueEnum)]
enum MinSet {
    C1,
    C2,
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(Suite::name).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn load(path: &Path, mode: Mode) -> Result<Matrix> {
    let mut matrix = load_matrix(path)?;
    if mode == Mode::Max {
        matrix.sample = matrix.sample.negated();
    }
    Ok(matrix)
}

fn multi_config(selector: SelectorKind, splits: usize, subsamples: usize, seed: u64) -> MultiSplitConfig {
    MultiSplitConfig { splits, resamples: subsamples, ..MultiSplitConfig::new(selector, seed) }
}

fn run(cli: Cli) -> Result<Vec<u8>> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Domain(format!("cannot start {threads} threads: {e}")))?;
    }
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let seed = cli.seed;
    let report = match cli.command {
        Command::Test { r, common, splits, subsamples, file } => {
            let m = load(&file, cli.mode)?;
            let d = m.sample.cols();
            if r < 1 || r > d {
                return Err(Error::Domain(format!("--r must lie in [1, {d}], got {r}")));
            }
            let selector = common.selector();
            let outcome = if splits > 1 {
                let cfg = multi_config(selector, splits, subsamples, seed);
                multisplit_test(m.sample.view(), r - 1, common.alpha, &cfg)?
            } else {
                da_test(m.sample.view(), r - 1, common.alpha, &selector, seed)?
            };
            Report::Test(TestReport::new(&m, r - 1, &outcome))
        }
        Command::Confset { method, common, splits, subsamples, file } => {
            let m = load(&file, cli.mode)?;
            let selector = common.selector();
            let (label, procedure) = match method {
                ConfsetMethod::Pointwise => ("pointwise", TestProcedure::SingleSplit(selector)),
                ConfsetMethod::Multisplit => (
                    "multisplit",
                    TestProcedure::MultiSplit(multi_config(selector, splits, subsamples, seed)),
                ),
            };
            let set = pointwise_confset(m.sample.view(), common.alpha, &procedure, seed)?;
            Report::Set(SetReport::new(&m, label, common.alpha, &set, seed))
        }
        Command::Mcs { variant, common, file } => {
            let m = load(&file, cli.mode)?;
            let selector = common.selector();
            let view = m.sample.view();
            let (label, set) = match variant {
                Variant::OneStep => ("mcs-one-step", mcs_one_step(view, common.alpha, &selector, seed)?),
                Variant::TwoStep => ("mcs-two-step", mcs_two_step(view, common.alpha, &selector, seed)?),
            };
            Report::Set(SetReport::new(&m, label, common.alpha, &set, seed))
        }
        Command::Minmean { set, alpha, file } => {
            let m = load(&file, cli.mode)?;
            let view = m.sample.view();
            let (label, mut interval, d_hat) = match set {
                MinSet::C1 => ("c1", smallest_mean_c1(view, alpha)?, None),
                MinSet::C2 => {
                    let (interval, d_hat) = smallest_mean_c2(view, alpha, seed)?;
                    ("c2", interval, Some(d_hat))
                }
            };
            // Map the interval for the smallest negated mean back to the
            // largest mean of the original data.
            if cli.mode == Mode::Max {
                (interval.lo, interval.hi) = (-interval.hi, -interval.lo);
            }
            Report::Interval(IntervalReport::new(label, alpha, interval, d_hat))
        }
        Command::Simulate { suite, reps, full, out } => {
            let results = run_suite(suite, reps, full, seed)?;
            let report = Report::Simulation(results);
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join(format!("{suite}.csv")), emit_report(&report, Format::Csv)?)?;
                std::fs::write(dir.join(format!("{suite}.json")), emit_report(&report, Format::Json)?)?;
                return Ok(Vec::new());
            }
            report
        }
    };
    emit_report(&report, format)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(bytes) => {
            if std::io::stdout().write_all(&bytes).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
