use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ppmine::oracle::{enumerate_frequent, random_db, OracleConfig, RandomDbParams};
use ppmine::query::constraint_combos;
use ppmine::{Error, MinSup, Query, SearchState, SequenceDatabase};

/// Largest instance `verify` accepts: sequences, sequence length, items.
const VERIFY_CAPS: (usize, usize, usize) = (25, 10, 6);

#[derive(Parser)]
#[command(
    name = "ppmine",
    version,
    about = "Constraint-based sequential pattern mining"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine frequent patterns.
    Mine(MineArgs),
    /// Compare the engine with the brute-force oracle on small instances.
    Verify(VerifyArgs),
    /// Time mining runs over a list of thresholds, as CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Spmf,
    Symbolic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Csv,
    JsonLines,
}

#[derive(Args, Clone)]
struct ConstraintArgs {
    /// Maximum pattern length (defaults to the longest sequence).
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    min_size: Option<usize>,
    /// Item that must occur in every pattern (repeatable).
    #[arg(long, value_name = "ITEM")]
    require: Vec<String>,
    /// Item that must not occur in any pattern (repeatable).
    #[arg(long, value_name = "ITEM")]
    exclude: Vec<String>,
    /// Regular expression over item names, e.g. "A * ( B | C )".
    #[arg(long)]
    regex: Option<String>,
}

impl ConstraintArgs {
    fn query(&self, minsup: u32) -> Query {
        Query {
            minsup,
            ell: self.ell,
            min_size: self.min_size,
            require: self.require.clone(),
            exclude: self.exclude.clone(),
            regex: self.regex.clone(),
        }
    }
}

#[derive(Args)]
struct MineArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "spmf")]
    format: Format,
    /// Absolute count or percentage such as "5%".
    #[arg(long)]
    minsup: String,
    #[command(flatten)]
    constraints: ConstraintArgs,
    #[arg(long, value_enum, default_value = "text")]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Database to check; omit to run the random sweep.
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "spmf")]
    format: Format,
    #[arg(long)]
    minsup: Option<String>,
    #[command(flatten)]
    constraints: ConstraintArgs,
    /// Number of random seeds in sweep mode.
    #[arg(long, default_value_t = 100)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    first_seed: u64,
    #[arg(long, default_value_t = 15)]
    sequences: usize,
    #[arg(long, default_value_t = 8)]
    max_len: usize,
    #[arg(long, default_value_t = 5)]
    items: usize,
    /// Highest minsup tried in sweep mode (from 1).
    #[arg(long, default_value_t = 5)]
    max_minsup: u32,
    /// Drops one engine pattern before comparing.
    #[arg(long, hide = true)]
    perturb: bool,
}

#[derive(Args)]
struct BenchArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "spmf")]
    format: Format,
    /// Comma-separated thresholds, each a count or a percentage.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    minsup: Vec<String>,
    #[command(flatten)]
    constraints: ConstraintArgs,
    #[arg(long, default_value_t = 1)]
    repeats: u32,
}

enum Failure {
    Usage(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) | Error::RegexSyntax { .. } | Error::UnknownItem(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mine(args) => mine(args),
        Command::Verify(args) => verify(args),
        Command::Bench(args) => bench(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load(path: &Path, format: Format) -> Result<SequenceDatabase, Failure> {
    let file = File::open(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let reader = BufReader::new(file);
    let db = match format {
        Format::Spmf => SequenceDatabase::load_spmf(reader),
        Format::Symbolic => SequenceDatabase::load_symbolic(reader),
    };
    db.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn resolve_minsup(text: &str, db: &SequenceDatabase) -> Result<u32, Failure> {
    Ok(text.parse::<MinSup>()?.resolve(db.len())?)
}

fn mine(args: MineArgs) -> Result<u8, Failure> {
    let minsup: MinSup = args.minsup.parse()?;
    let db = load(&args.input, args.format)?;
    let minsup = minsup.resolve(db.len())?;
    let query = args.constraints.query(minsup);
    let mut state = SearchState::new(&db, query.search_config(&db)?)?;

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut write_err = None;
    if let Output::Csv = args.output {
        writeln!(out, "pattern,support")?;
    }
    let stats = state.solve_all(|p, sup| {
        if write_err.is_some() {
            return;
        }
        let items = p.items();
        let r = match args.output {
            Output::Text => writeln!(out, "{} #SUP={sup}", db.format_items(items)),
            Output::Csv => writeln!(out, "{},{sup}", db.format_items(items)),
            Output::JsonLines => {
                let names: Vec<&str> = items.iter().map(|&it| db.dictionary().name(it)).collect();
                let line = serde_json::json!({ "items": names, "support": sup });
                writeln!(out, "{line}")
            }
        };
        if let Err(e) = r {
            write_err = Some(e);
        }
    });
    if let Some(e) = write_err {
        return Err(e.into());
    }
    let summary = format!(
        "#PATTERNS={} #MINSUP={minsup} #NODES={} #FILTER_CALLS={} #REMOVALS={} #FAILURES={} #TIME_MS={}",
        stats.solutions,
        stats.nodes,
        stats.filter_calls,
        stats.value_removals,
        stats.failures,
        stats.elapsed.as_millis()
    );
    match args.output {
        Output::Text => writeln!(out, "{summary}")?,
        // Keep machine-readable streams free of the summary.
        _ => eprintln!("{summary}"),
    }
    out.flush()?;
    Ok(0)
}

fn check_caps(db: &SequenceDatabase) -> Result<(), Failure> {
    let (m, len, d) = VERIFY_CAPS;
    if db.len() > m || db.max_len() > len || db.num_items() > d {
        return Err(Failure::Usage(format!(
            "instance too large for the oracle: {} sequences, max length {}, {} items (caps {m}, {len}, {d})",
            db.len(),
            db.max_len(),
            db.num_items()
        )));
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<u8, Failure> {
    match &args.input {
        Some(path) => verify_file(path, &args),
        None => verify_sweep(&args),
    }
}

fn verify_file(path: &Path, args: &VerifyArgs) -> Result<u8, Failure> {
    let text = args
        .minsup
        .as_deref()
        .ok_or_else(|| Failure::Usage("--minsup is required with an input file".into()))?;
    let minsup: MinSup = text.parse()?;
    let db = load(path, args.format)?;
    check_caps(&db)?;
    let query = args.constraints.query(minsup.resolve(db.len())?);
    let mut cmp = query.compare(&db)?;
    if args.perturb {
        if let Some(p) = cmp.emitted.first().cloned() {
            cmp.engine.remove(&p);
            cmp.missing.push(p);
        }
    }
    if cmp.is_match() {
        println!("MATCH ({} patterns)", cmp.oracle.len());
        return Ok(0);
    }
    println!(
        "MISMATCH (engine {} patterns, oracle {} patterns)",
        cmp.engine.len(),
        cmp.oracle.len()
    );
    for p in &cmp.missing {
        println!("missing {}", db.format_items(p.items()));
    }
    for p in &cmp.extra {
        println!("extra {}", db.format_items(p.items()));
    }
    for p in &cmp.wrong_support {
        println!(
            "support {} engine={} oracle={}",
            db.format_items(p.items()),
            cmp.engine[p],
            cmp.oracle[p]
        );
    }
    if cmp.duplicates > 0 {
        println!("duplicates {}", cmp.duplicates);
    }
    Ok(1)
}

fn verify_sweep(args: &VerifyArgs) -> Result<u8, Failure> {
    let (m, len, d) = VERIFY_CAPS;
    if args.sequences > m || args.max_len > len || args.items > d {
        return Err(Failure::Usage(format!(
            "sweep parameters exceed the oracle caps ({m} sequences, length {len}, {d} items)"
        )));
    }
    if args.sequences == 0 || args.max_len == 0 || args.items == 0 || args.max_minsup == 0 {
        return Err(Failure::Usage("sweep parameters must be positive".into()));
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    writeln!(out, "seed runs failed status")?;
    let mut failed_seeds = 0;
    for seed in args.first_seed..args.first_seed + args.seeds {
        let db = random_db(RandomDbParams {
            seed,
            num_sequences: args.sequences,
            max_len: args.max_len,
            num_items: args.items,
        });
        let base = enumerate_frequent(
            &db,
            &OracleConfig {
                minsup: 1,
                ..Default::default()
            },
        );
        let mut runs = 0;
        let mut failures = Vec::new();
        for (label, q) in constraint_combos(&db, seed) {
            for minsup in 1..=args.max_minsup {
                let q = Query {
                    minsup,
                    ..q.clone()
                };
                let mut cmp = q.compare_against(&db, &base)?;
                if args.perturb && runs == 0 {
                    cmp.duplicates += 1;
                }
                runs += 1;
                if !cmp.is_match() {
                    failures.push(format!("{label}@{minsup}"));
                }
            }
        }
        let status = if failures.is_empty() { "PASS" } else { "FAIL" };
        let mut row = format!("{seed} {runs} {} {status}", failures.len());
        for f in &failures {
            row.push(' ');
            row.push_str(f);
        }
        writeln!(out, "{row}")?;
        if !failures.is_empty() {
            failed_seeds += 1;
        }
    }
    writeln!(out, "#SEEDS={} #FAILED={failed_seeds}", args.seeds)?;
    out.flush()?;
    Ok(if failed_seeds == 0 { 0 } else { 1 })
}

fn bench(args: BenchArgs) -> Result<u8, Failure> {
    let thresholds: Vec<&str> = args
        .minsup
        .iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .collect();
    if thresholds.is_empty() {
        return Err(Failure::Usage(
            "--minsup needs at least one threshold".into(),
        ));
    }
    for t in &thresholds {
        t.parse::<MinSup>()?;
    }
    if args.repeats == 0 {
        return Err(Failure::Usage("--repeats must be at least 1".into()));
    }
    let db = load(&args.input, args.format)?;
    let name = args
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(
        out,
        "dataset,minsup,patterns,nodes,filter_calls,removals,millis"
    )?;
    for t in thresholds {
        let query = args.constraints.query(resolve_minsup(t, &db)?);
        for _ in 0..args.repeats {
            let mut state = SearchState::new(&db, query.search_config(&db)?)?;
            let stats = state.solve_all(|_, _| {});
            writeln!(
                out,
                "{name},{t},{},{},{},{},{}",
                stats.solutions,
                stats.nodes,
                stats.filter_calls,
                stats.value_removals,
                stats.elapsed.as_millis()
            )?;
            out.flush()?;
        }
    }
    Ok(0)
}
