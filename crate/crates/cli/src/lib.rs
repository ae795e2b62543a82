//! Command implementations behind the `esmine` binary.
//!
//! [`run`] parses arguments, executes one subcommand and returns the
//! process exit status:
//!
//! | status | meaning |
//! |--------|---------|
//! | 0 | success |
//! | 1 | usage error (bad flags, invalid values, oracle refusal) |
//! | 2 | input unreadable or malformed, output not writable |
//! | 3 | verification found a divergence |

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use esmine::bench::{self, BenchConfig, MetricsRecord};
use esmine::verify::{self, FuzzReport, VerifyReport};
use esmine::{
    generate_synthetic, mine, read_fimi, resolve_minsup, write_fimi, Algorithm, MiningResult,
    Scheme, SupportThreshold, TransactionDb,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_DIVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "esmine", version, about = "Frequent itemset mining with early-stopping kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mine the frequent itemsets of one database.
    Mine(MineArgs),
    /// Run a grid of algorithms, kernels and thresholds.
    Bench(BenchArgs),
    /// Write a seeded synthetic database in FIMI format.
    Gen(GenArgs),
    /// Check every variant against the brute-force oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Eclat,
    Declat,
    Prepost,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Eclat => Algorithm::Eclat,
            AlgoArg::Declat => Algorithm::DEclat,
            AlgoArg::Prepost => Algorithm::PrePostPlus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EsMode {
    Both,
    On,
    Off,
}

#[derive(Debug, Args)]
struct MineArgs {
    /// FIMI file, one transaction per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Use the early-stopping kernel.
    #[arg(long, conflicts_with = "no_es")]
    es: bool,
    /// Use the standard kernel (default).
    #[arg(long)]
    no_es: bool,
    /// Minimum support as a transaction count.
    #[arg(long, required_unless_present = "minsup_rel", conflicts_with = "minsup_rel")]
    minsup_abs: Option<u32>,
    /// Fraction of the transaction count, in (0, 1].
    #[arg(long)]
    minsup_rel: Option<f64>,
    /// Itemset output; standard output if omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write one JSON metrics record here.
    #[arg(long)]
    metrics: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// FIMI file, one transaction per line.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated; all three if omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    algo: Vec<AlgoArg>,
    /// Kernels to run.
    #[arg(long, value_enum, default_value = "both")]
    es: EsMode,
    /// Comma-separated transaction counts.
    #[arg(long, value_delimiter = ',', required_unless_present = "minsup_rel", conflicts_with = "minsup_rel")]
    minsup_abs: Vec<u32>,
    /// Comma-separated fractions in (0, 1].
    #[arg(long, value_delimiter = ',')]
    minsup_rel: Vec<f64>,
    #[arg(long, default_value_t = bench::DEFAULT_REPETITIONS)]
    repetitions: usize,
    /// Dataset name in the report; the input file stem if omitted.
    #[arg(long)]
    dataset: Option<String>,
    /// CSV report; standard output if omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// JSON report (array of records).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Number of transactions.
    #[arg(long)]
    trans: usize,
    /// Size of the item universe.
    #[arg(long)]
    items: usize,
    /// Mean transaction length, at least 1.
    #[arg(long)]
    mean_len: f64,
    #[arg(long)]
    seed: u64,
    /// Standard output if omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, requires = "minsup_abs", required_unless_present = "fuzz")]
    input: Option<PathBuf>,
    #[arg(long, requires = "input")]
    minsup_abs: Option<u32>,
    /// Also check this many random small instances.
    #[arg(long)]
    fuzz: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Drop one itemset from the dEclat-ES output before checking. Exists
    /// to exercise the failure path.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Diverged(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
            Failure::Diverged(_) => EXIT_DIVERGENCE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Diverged(m) => m,
        }
    }
}

impl From<esmine::Error> for Failure {
    fn from(e: esmine::Error) -> Self {
        match e {
            esmine::Error::Io(_) | esmine::Error::Parse { .. } => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Runs the command line `args` (program name first) and returns the exit
/// status. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Mine(a) => cmd_mine(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "esmine: {}", f.message());
            f.code()
        }
    }
}

fn read_db(path: &Path) -> Result<TransactionDb, Failure> {
    let file = File::open(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    read_fimi(BufReader::new(file)).map_err(|e| match e {
        esmine::Error::Parse { .. } => Failure::Io(format!("{}: {e}", path.display())),
        other => Failure::Io(format!("cannot read {}: {other}", path.display())),
    })
}

fn write_to(path: Option<&Path>, contents: &str, out: &mut dyn Write) -> CmdResult {
    match path {
        Some(p) => fs::write(p, contents)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(contents.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write to standard output: {e}"))),
    }
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into())
}

fn threshold(abs: Option<u32>, rel: Option<f64>) -> Result<SupportThreshold, Failure> {
    match (abs, rel) {
        (Some(n), None) => Ok(SupportThreshold::absolute(n)?),
        (None, Some(f)) => Ok(SupportThreshold::relative(f)?),
        _ => Err(Failure::Usage("give exactly one of --minsup-abs and --minsup-rel".into())),
    }
}

fn cmd_mine(a: &MineArgs, out: &mut dyn Write) -> CmdResult {
    // validate flags before touching the file system
    let spec = threshold(a.minsup_abs, a.minsup_rel)?;
    let db = read_db(&a.input)?;
    let min_sup = resolve_minsup(spec, db.len())?;
    let scheme = Scheme::new(a.algo.into(), a.es);
    let res: MiningResult = mine(&db, min_sup, scheme)?;
    write_to(a.output.as_deref(), &res.to_text(), out)?;
    if let Some(path) = &a.metrics {
        let record = MetricsRecord::from_runs(&dataset_name(&a.input), db.len(), min_sup, scheme, &[res])?;
        write_to(Some(path), &(record.to_json() + "\n"), out)?;
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> CmdResult {
    let min_sups = if a.minsup_rel.is_empty() {
        a.minsup_abs.iter().map(|&n| SupportThreshold::absolute(n)).collect::<Result<Vec<_>, _>>()?
    } else {
        a.minsup_rel.iter().map(|&f| SupportThreshold::relative(f)).collect::<Result<Vec<_>, _>>()?
    };
    let mut config = BenchConfig::new(a.dataset.clone().unwrap_or_else(|| dataset_name(&a.input)), min_sups);
    if !a.algo.is_empty() {
        config.algorithms = a.algo.iter().map(|&x| x.into()).collect();
    }
    config.es_variants = match a.es {
        EsMode::Both => vec![false, true],
        EsMode::On => vec![true],
        EsMode::Off => vec![false],
    };
    config.repetitions = a.repetitions;
    config.validate()?;

    let db = read_db(&a.input)?;
    let records = bench::run_bench(&db, &config)?;
    write_to(a.csv.as_deref(), &bench::to_csv(&records), out)?;
    if let Some(path) = &a.json {
        write_to(Some(path), &(bench::to_json(&records) + "\n"), out)?;
    }
    Ok(())
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> CmdResult {
    let db = generate_synthetic(a.trans, a.items, a.mean_len, a.seed)?;
    write_to(a.output.as_deref(), &write_fimi(&db), out)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let say = |out: &mut dyn Write, line: String| {
        writeln!(out, "{line}").map_err(|e| Failure::Io(format!("cannot write to standard output: {e}")))
    };
    if let (Some(path), Some(min_sup)) = (&a.input, a.minsup_abs) {
        if min_sup == 0 {
            return Err(Failure::Usage("absolute minimum support must be at least 1".into()));
        }
        let db = read_db(path)?;
        let report = if a.inject_fault {
            verify::verify_db_with(&db, min_sup, faulty_miner)?
        } else {
            verify::verify_db(&db, min_sup)?
        };
        check_report(&report, &path.display().to_string())?;
        say(
            out,
            format!(
                "ok: {} at minsup {min_sup}: 6 variants agree with the oracle on {} itemsets",
                path.display(),
                report.oracle_itemsets
            ),
        )?;
    }
    if let Some(count) = a.fuzz {
        let FuzzReport { instances, failure } = verify::fuzz(count, a.seed)?;
        if let Some((k, db, report)) = failure {
            let label = format!("fuzz instance {k} (seed {}, {} transactions)", a.seed, db.len());
            check_report(&report, &label)?;
        }
        say(out, format!("ok: {instances} random instances (seed {}) agree with the oracle", a.seed))?;
    }
    Ok(())
}

fn check_report(report: &VerifyReport, label: &str) -> CmdResult {
    match &report.divergence {
        None => Ok(()),
        Some(d) => Err(Failure::Diverged(format!(
            "divergence on {label} at minsup {}: {d}",
            report.min_sup
        ))),
    }
}

fn faulty_miner(db: &TransactionDb, min_sup: u32, scheme: Scheme) -> esmine::Result<MiningResult> {
    let mut res = mine(db, min_sup, scheme)?;
    if scheme == Scheme::new(Algorithm::DEclat, true) {
        if let Some(pos) = res.frequent.iter().rposition(|fi| fi.items.len() >= 2) {
            res.frequent.remove(pos);
            res.metrics.num_frequent -= 1;
        }
    }
    Ok(res)
}
