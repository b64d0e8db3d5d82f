use clap::{Args, Parser, Subcommand};
use l1_enn::bench::{run_bench, BenchConfig, BENCH_HEADER};
use l1_enn::instance::{generate, perturb, read_points, write_points, QueryFile, ResultFile, ResultMeta, ResultRecord};
use l1_enn::oracle::oracle_topk;
use l1_enn::snapshot::{load_snapshot, save_snapshot};
use l1_enn::verify::{compare_ranked, verify_batch, verify_golden_dir, GoldenCase};
use l1_enn::{EnnError, EnnIndex, Index1D, Point, PointId};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

/// Top-k expected nearest neighbors under L1 for uncertain queries.
#[derive(Parser)]
#[command(name = "enn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance in general position.
    Gen(GenArgs),
    /// Answer a query file against a points file or snapshot.
    Query(QueryArgs),
    /// Time index builds and queries over a size grid; prints CSV rows.
    Bench(BenchArgs),
    /// Write a binary index snapshot of a points file.
    Snapshot(SnapshotArgs),
    /// Compare the engine with brute force on generated instances or golden files.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    dim: u8,
    /// Output path for the points CSV.
    #[arg(long)]
    points: PathBuf,
    /// Output path for the query JSON.
    #[arg(long)]
    query: PathBuf,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long, required_unless_present = "snapshot", conflicts_with = "snapshot")]
    points: Option<PathBuf>,
    /// Load the index from a snapshot instead of a points file.
    #[arg(long)]
    snapshot: Option<PathBuf>,
    #[arg(long)]
    query: PathBuf,
    /// Overrides the query file's k.
    #[arg(long)]
    k: Option<usize>,
    /// Also run brute force; exit 3 on disagreement.
    #[arg(long)]
    oracle: bool,
    /// Jitter point coordinates to break ties.
    #[arg(long)]
    perturb: bool,
    /// Seed for --perturb.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include engine counters in the metadata.
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated point counts.
    #[arg(long, value_delimiter = ',', default_values_t = [1024usize, 2048, 4096, 8192, 16384, 32768, 65536, 131072])]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [16usize])]
    m: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [16usize])]
    k: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    queries: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct SnapshotArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 50)]
    count: usize,
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    dim: u8,
    /// Check every golden file in this directory instead of generated batches.
    #[arg(long)]
    golden_dir: Option<PathBuf>,
    /// With --golden-dir: write the oracle answer for (n, m, k, seed, dim) there instead of checking.
    #[arg(long, requires = "golden_dir")]
    emit: bool,
}

enum Failure {
    Data(EnnError),
    Mismatch(String),
}

impl From<EnnError> for Failure {
    fn from(e: EnnError) -> Self {
        Failure::Data(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.into())
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Data(EnnError::Parse(format!("{}: {e}", path.display()))))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Data(EnnError::Parse(format!("{}: {e}", path.display()))))
}

fn cmd_gen(a: GenArgs) -> Result<(), Failure> {
    let inst = generate(a.n, a.m, a.k, a.seed, a.dim)?;
    let mut out = create(&a.points)?;
    write_points(&mut out, &inst.points, a.dim)?;
    out.flush()?;
    let mut out = create(&a.query)?;
    inst.query.to_writer(&mut out)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn cmd_query(a: QueryArgs) -> Result<(), Failure> {
    let mut query = QueryFile::from_reader(open(&a.query)?)?;
    if let Some(k) = a.k {
        query.k = k;
        query.validate()?;
    }
    let mut points: Vec<Point>;
    let mut loaded = None;
    if let Some(path) = &a.snapshot {
        let index = load_snapshot(path)?;
        points = index.points().to_vec();
        loaded = Some(index);
    } else {
        points = read_points(open(a.points.as_deref().expect("clap requires points or snapshot"))?)?;
    }
    if a.perturb {
        perturb(&mut points, a.seed, query.dim);
        loaded = None;
    }

    let start = Instant::now();
    let (items, truncated, stats): (Vec<(PointId, f64)>, bool, _) = if query.dim == 1 {
        let line: Vec<(f64, PointId)> = points.iter().map(|p| (p.x, p.id)).collect();
        let r = Index1D::build(&line)?.query(&query.to_line(), query.k, false)?;
        (r.items, r.truncated, None)
    } else {
        let mut index = match loaded {
            Some(index) => index,
            None => EnnIndex::build(points.clone())?,
        };
        let r = index.query_topk(&query.to_query()?, query.k)?;
        (
            r.items.iter().map(|n| (n.id, n.expected_distance)).collect(),
            r.truncated,
            Some(r.stats),
        )
    };
    let elapsed_micros = start.elapsed().as_micros() as u64;

    if a.oracle {
        let want = oracle_topk(&points, &query.to_query()?, query.k);
        if let Some(msg) = compare_ranked(&items, &want.items) {
            return Err(Failure::Mismatch(format!("engine and oracle disagree: {msg}")));
        }
    }

    let by_id: std::collections::HashMap<PointId, &Point> = points.iter().map(|p| (p.id, p)).collect();
    let results = items
        .iter()
        .map(|&(id, d)| {
            let p = by_id[&id];
            ResultRecord {
                id,
                x: p.x,
                y: (query.dim == 2).then_some(p.y),
                expected_distance: d,
            }
        })
        .collect();
    let file = ResultFile {
        results,
        meta: ResultMeta {
            n: points.len(),
            m: query.locations.len(),
            k: query.k,
            elapsed_micros,
            cells_visited: stats.map_or(0, |s| s.cells_visited),
            truncated,
            stats: if a.stats { stats } else { None },
        },
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, &file).map_err(|e| EnnError::Parse(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let cfg = BenchConfig {
        sizes: a.sizes,
        m: a.m,
        k: a.k,
        queries: a.queries,
        seed: a.seed,
        threads: a.threads,
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "{BENCH_HEADER}")?;
    let mut io_err = None;
    run_bench(&cfg, |row| {
        if let Err(e) = writeln!(out, "{}", row.to_csv()).and_then(|_| out.flush()) {
            io_err.get_or_insert(e);
        }
    })?;
    match io_err {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn cmd_snapshot(a: SnapshotArgs) -> Result<(), Failure> {
    let index = EnnIndex::build(read_points(open(&a.points)?)?)?;
    save_snapshot(&index, &a.out)?;
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    if let Some(dir) = &a.golden_dir {
        if a.emit {
            let case = GoldenCase::compute(a.n, a.m, a.k, a.seed, a.dim)?;
            case.save(dir)?;
            println!("wrote {}", dir.join(case.file_name()).display());
            return Ok(());
        }
        let (count, bad) = verify_golden_dir(dir)?;
        for (file, msg) in &bad {
            eprintln!("{file}: {msg}");
        }
        println!("{count} golden files, {} mismatches", bad.len());
        return match bad.is_empty() {
            true => Ok(()),
            false => Err(Failure::Mismatch(format!("{} golden files disagree", bad.len()))),
        };
    }
    let outcome = verify_batch(a.count, a.n, a.m, a.k, a.seed, a.dim)?;
    for (seed, msg) in &outcome.mismatches {
        eprintln!("seed {seed}: {msg}");
    }
    println!(
        "{} instances, {} mismatches",
        outcome.instances,
        outcome.mismatches.len()
    );
    match outcome.mismatches.is_empty() {
        true => Ok(()),
        false => Err(Failure::Mismatch(format!(
            "{} instances disagree",
            outcome.mismatches.len()
        ))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.use_stderr() {
                true => ExitCode::from(EXIT_USAGE),
                false => ExitCode::SUCCESS,
            };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Query(a) => cmd_query(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Snapshot(a) => cmd_snapshot(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DATA)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("mismatch: {msg}");
            ExitCode::from(EXIT_MISMATCH)
        }
    }
}
