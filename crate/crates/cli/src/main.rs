//! `expers` command-line tool.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on bad input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use expers::barcode::BarcodeJson;
use expers::datasets::{erdos_renyi_with, gen_erdos_renyi, gen_pinwheels, gen_two_cycles, stream_rng, write_dataset, LabeledGraph, TwoCyclesParams};
use expers::oracle::oracle_barcode;
use expers::verify::{check_barcode, run_suite, SuiteConfig};
use expers::{compute_batch, compute_extended_persistence, ExtendedBarcode, Graph, TieBreakPolicy};
use serde_json::json;

/// Largest graph the cubic-time oracle is benchmarked on.
const ORACLE_BENCH_CAP: usize = 500;

#[derive(Parser)]
#[command(name = "expers", version, about = "Extended persistence barcodes for vertex-valued graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute barcodes for one graph file or a directory of graph files.
    Compute(ComputeArgs),
    /// Compute a barcode with the matrix-reduction oracle.
    #[command(hide = true)]
    Oracle {
        input: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Generate a synthetic dataset.
    Gen(GenArgs),
    /// Run the property battery, or check an external barcode.
    Verify(VerifyArgs),
    /// Time the fast path (and optionally the oracle) on seeded random graphs.
    Bench(BenchArgs),
    /// Histogram of cycle representative lengths.
    Hist {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Args)]
struct ComputeArgs {
    /// Graph JSON file or directory of `.json` graph files.
    input: PathBuf,
    /// Output file (single input) or directory (directory input). Defaults to stdout for a single file.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Emit cycle representatives (the default).
    #[arg(long, overrides_with = "no_cycles")]
    with_cycles: bool,
    /// Skip cycle representatives.
    #[arg(long, overrides_with = "with_cycles")]
    no_cycles: bool,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Override the per-graph tie-break epsilon (expert setting).
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dataset {
    Pinwheels,
    TwoCycles,
    Er,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    dataset: Dataset,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Pinwheel leaf range per core vertex, as `min,max`.
    #[arg(long, value_parser = parse_range)]
    sizes: Option<(usize, usize)>,
    /// Vertex count for `er`.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Edge probability for `er`.
    #[arg(long, default_value_t = 0.05)]
    p: f64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2000)]
    trials: usize,
    /// Comma-separated named graphs for the Monte Carlo study, such as `K4,C5`.
    #[arg(long, value_delimiter = ',', default_values_t = ["K4".to_string(), "C5".into(), "K5".into(), "C8".into()])]
    graphs: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    random_graphs: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Graph file to check an external barcode against.
    #[arg(long, requires = "barcode")]
    graph: Option<PathBuf>,
    /// Barcode JSON to check.
    #[arg(long, requires = "graph")]
    barcode: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    no_cycles: bool,
    #[arg(long)]
    compare_oracle: bool,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected min,max")?;
    let a = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

/// A failure and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type CmdResult = Result<(), Failure>;

fn policy(epsilon: Option<f64>) -> TieBreakPolicy {
    match epsilon {
        Some(e) => TieBreakPolicy::with_epsilon(e),
        None => TieBreakPolicy::default(),
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let g: Graph = serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    g.check().map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Ok(g)
}

/// Graph files of a directory, sorted by path.
fn graph_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| input_error(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| input_error(format!("{}: {e}", dir.display())))?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn inputs(path: &Path) -> Result<(Vec<PathBuf>, Vec<Graph>), Failure> {
    let files = if path.is_dir() { graph_files(path)? } else { vec![path.to_path_buf()] };
    let graphs = files.iter().map(|f| read_graph(f)).collect::<Result<_, _>>()?;
    Ok((files, graphs))
}

fn write(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

/// Writes to stdout; a closed pipe (as with `| head`) is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn barcode_text(bc: &ExtendedBarcode) -> String {
    let mut s = bc.to_json();
    s.push('\n');
    s
}

fn cmd_compute(a: ComputeArgs) -> CmdResult {
    let Format::Json = a.format;
    let with_cycles = !a.no_cycles;
    let pol = policy(a.epsilon);
    let (files, graphs) = inputs(&a.input)?;
    // every graph is validated and computed before anything is written
    let barcodes = compute_batch(&graphs, &pol, with_cycles, a.workers as usize).map_err(|e| match e {
        expers::Error::Batch { index, source } => input_error(format!("{}: {source}", files[index].display())),
        other => input_error(other.to_string()),
    })?;

    if a.input.is_dir() {
        let out = a.out.ok_or_else(|| input_error("--out is required for a directory input"))?;
        fs::create_dir_all(&out).map_err(|e| input_error(format!("{}: {e}", out.display())))?;
        for (f, bc) in files.iter().zip(&barcodes) {
            write(&out.join(f.file_name().expect("listed files have names")), &barcode_text(bc))?;
        }
    } else {
        let text = barcode_text(&barcodes[0]);
        match a.out {
            Some(out) => write(&out, &text)?,
            None => emit(&text),
        }
    }
    Ok(())
}

fn cmd_oracle(input: &Path, epsilon: Option<f64>) -> CmdResult {
    let g = read_graph(input)?;
    let bc = oracle_barcode(&g, &policy(epsilon)).map_err(|e| input_error(format!("{}: {e}", input.display())))?;
    emit(&barcode_text(&bc));
    Ok(())
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let data: Vec<LabeledGraph> = match a.dataset {
        Dataset::Pinwheels => gen_pinwheels(a.count, a.seed, a.sizes.unwrap_or(expers::datasets::DEFAULT_PINWHEEL_SIZES)),
        Dataset::TwoCycles => gen_two_cycles(a.count, a.seed, TwoCyclesParams::default()),
        Dataset::Er => (0..a.count)
            .map(|i| {
                let g = erdos_renyi_with(a.n, a.p, &mut stream_rng(a.seed, i as u64))?;
                Ok(LabeledGraph { graph: g, label: 0, core_cycles: Vec::new() })
            })
            .collect(),
    }
    .map_err(|e| input_error(e.to_string()))?;
    write_dataset(&a.out, &data).map_err(|e| input_error(format!("{}: {e}", a.out.display())))
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    if let (Some(gp), Some(bp)) = (&a.graph, &a.barcode) {
        let g = read_graph(gp)?;
        let text = fs::read_to_string(bp).map_err(|e| input_error(format!("{}: {e}", bp.display())))?;
        let json: BarcodeJson = serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", bp.display())))?;
        let bc = ExtendedBarcode::from_json(&json, g.num_vertices).map_err(|e| input_error(format!("{}: {e}", bp.display())))?;
        let failures = check_barcode(&g, &bc);
        let report = json!({ "passed": failures.is_empty(), "failures": failures });
        emit(&format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes")));
        if let Some(f) = failures.first() {
            return Err(Failure { code: 1, message: format!("invariant {} failed: {}", f.invariant, f.detail) });
        }
        return Ok(());
    }

    let cfg = SuiteConfig {
        random_graphs: a.random_graphs,
        trials: a.trials,
        seed: a.seed,
        graphs: a.graphs,
        workers: a.workers as usize,
    };
    let report = run_suite(&cfg).map_err(|e| input_error(e.to_string()))?;
    emit(&format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes")));
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure { code: 1, message: format!("failed checks: {}", failed.join(", ")) })
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    if a.n < 2 {
        return Err(input_error("bench needs n >= 2"));
    }
    if a.repeats == 0 {
        return Err(input_error("bench needs at least one repeat"));
    }
    if a.compare_oracle && a.n > ORACLE_BENCH_CAP {
        return Err(input_error(format!("OracleCapExceeded: n = {} exceeds the oracle cap of {ORACLE_BENCH_CAP}", a.n)));
    }
    let pol = TieBreakPolicy::default();
    let fast_mode = if a.no_cycles { "fast_no_cycles" } else { "fast" };
    let mut rows = String::from("n,p,seed,repeat,mode,millis\n");
    let mut fast = Vec::new();
    let mut slow = Vec::new();
    for r in 0..a.repeats {
        let seed = a.seed + r as u64;
        let g = gen_erdos_renyi(a.n, a.p, seed).map_err(|e| input_error(e.to_string()))?;
        let t = Instant::now();
        compute_extended_persistence(&g, &pol, !a.no_cycles).map_err(|e| input_error(e.to_string()))?;
        let ms = t.elapsed().as_secs_f64() * 1e3;
        rows.push_str(&format!("{},{},{seed},{r},{fast_mode},{ms:.3}\n", a.n, a.p));
        fast.push(ms);
        if a.compare_oracle {
            let t = Instant::now();
            oracle_barcode(&g, &pol).map_err(|e| input_error(e.to_string()))?;
            let ms = t.elapsed().as_secs_f64() * 1e3;
            rows.push_str(&format!("{},{},{seed},{r},oracle,{ms:.3}\n", a.n, a.p));
            slow.push(ms);
        }
    }
    // summary rows carry `mean` and `std` in the repeat column
    let mut summary = vec![(fast_mode, fast.clone())];
    if a.compare_oracle {
        let speedups = slow.iter().zip(&fast).map(|(s, f)| s / f).collect();
        summary.push(("oracle", slow));
        summary.push(("speedup", speedups));
    }
    for (mode, xs) in summary {
        let (mean, std) = mean_std(&xs);
        rows.push_str(&format!("{},{},{},mean,{mode},{mean:.3}\n", a.n, a.p, a.seed));
        rows.push_str(&format!("{},{},{},std,{mode},{std:.3}\n", a.n, a.p, a.seed));
    }
    emit(&rows);
    Ok(())
}

fn cmd_hist(input: &Path, workers: usize) -> CmdResult {
    if workers == 0 {
        return Err(input_error("workers must be at least 1"));
    }
    let (files, graphs) = inputs(input)?;
    let barcodes = compute_batch(&graphs, &TieBreakPolicy::default(), true, workers).map_err(|e| match e {
        expers::Error::Batch { index, source } => input_error(format!("{}: {source}", files[index].display())),
        other => input_error(other.to_string()),
    })?;
    let mut hist = std::collections::BTreeMap::new();
    for bc in &barcodes {
        for (len, count) in expers::datasets::cycle_length_histogram(bc) {
            *hist.entry(len).or_insert(0usize) += count;
        }
    }
    let hist: serde_json::Map<String, serde_json::Value> = hist.into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    emit(&format!("{}\n", serde_json::to_string(&hist).expect("histogram serializes")));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(a) => cmd_compute(a),
        Command::Oracle { input, epsilon } => cmd_oracle(&input, epsilon),
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Hist { input, workers } => cmd_hist(&input, workers),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
