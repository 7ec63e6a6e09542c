//! `netlaw`: generate, crawl, fit and diagnose scale-free networks.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use netlaw_core::crawl::{bfs_crawl, serve_snapshot};
use netlaw_core::diagnostics::{
    avg_path_length_sampled, removal_experiment, PathLengthEstimate, RemovalStrategy, RobustnessReport,
};
use netlaw_core::engage::{fit_log_benchmark, read_records, write_report};
use netlaw_core::io::{read_degrees, read_edge_list, read_seed_labels, write_edge_list};
use netlaw_core::powerlaw::{
    empirical_pmf, fit_mle_discrete, fit_ols_loglog, log_bin, select_linear_range, DistributionTable, FitRecord,
    RangeStrategy, DEFAULT_BIN_BASE,
};
use netlaw_core::synth::{generate_ba, generate_er, BaParams, ErParams};
use netlaw_core::{DegreeMode, DegreeSequence, Graph};

/// Seed used whenever `--seed` is omitted.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "netlaw", version, about = "Scale-free network lab: generators, crawler, power-law fits, diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic graph and write it as an edge list
    Generate(GenerateArgs),
    /// Breadth-first crawl of a graph served through a paged neighbor API
    Crawl(CrawlArgs),
    /// Fit a power law to a degree distribution
    Fit(FitArgs),
    /// Path-length and node-removal robustness diagnostics
    Diagnose(DiagnoseArgs),
    /// Engagement rates and log-log benchmark residuals
    Engage(EngageArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    /// Preferential attachment (needs --m)
    Ba,
    /// G(n, p) random graph (needs --p)
    Er,
}

#[derive(clap::Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Number of nodes
    #[arg(long)]
    n: usize,
    /// Edges added per new node (ba)
    #[arg(long)]
    m: Option<usize>,
    /// Edge probability (er)
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Edge-list output file
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct CrawlArgs {
    /// Edge-list file holding the network snapshot to serve
    #[arg(long = "in")]
    input: PathBuf,
    /// File with one seed node label per line
    #[arg(long)]
    seeds: PathBuf,
    /// Maximum number of API calls (pages)
    #[arg(long)]
    budget: usize,
    /// Neighbors per API page
    #[arg(long, default_value_t = 100)]
    page_size: usize,
    /// Edge-list output for the crawled network
    #[arg(long)]
    out: PathBuf,
    /// Optional JSON-lines log of every API call
    #[arg(long)]
    log: Option<PathBuf>,
    /// Read edge lists without a `# directed` line as undirected
    #[arg(long)]
    undirected: bool,
}

#[derive(Clone, Copy)]
enum KMin {
    Auto,
    Fixed(usize),
}

fn parse_kmin(s: &str) -> std::result::Result<KMin, String> {
    if s == "auto" {
        return Ok(KMin::Auto);
    }
    match s.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(KMin::Fixed(k)),
        _ => Err(format!("expected `auto` or a positive integer, got `{s}`")),
    }
}

fn parse_base(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(b) if b > 1.0 && b.is_finite() => Ok(b),
        _ => Err(format!("expected a ratio greater than 1, got `{s}`")),
    }
}

#[derive(clap::Args)]
struct FitArgs {
    /// Degree file (one integer per line) or edge-list file (two columns)
    #[arg(long = "in")]
    input: PathBuf,
    /// Lower end of the fitted range
    #[arg(long, default_value = "auto", value_parser = parse_kmin)]
    kmin: KMin,
    /// Logarithmic bin ratio
    #[arg(long, default_value_t = DEFAULT_BIN_BASE, value_parser = parse_base)]
    base: f64,
    /// Degree counted when the input is a directed edge list
    #[arg(long, default_value_t = DegreeMode::In)]
    mode: DegreeMode,
    /// JSON report with the OLS and MLE fit records
    #[arg(long)]
    out: Option<PathBuf>,
    /// Prefix for plot data, written as <prefix>.raw.tsv and <prefix>.binned.tsv
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Read edge lists without a `# directed` line as undirected
    #[arg(long)]
    undirected: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Random,
    Targeted,
}

impl From<StrategyArg> for RemovalStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Random => RemovalStrategy::Random,
            StrategyArg::Targeted => RemovalStrategy::Targeted,
        }
    }
}

#[derive(clap::Args)]
struct DiagnoseArgs {
    /// Edge-list file
    #[arg(long = "in")]
    input: PathBuf,
    /// Share of nodes removed, in (0, 1]
    #[arg(long, default_value_t = 0.05)]
    fraction: f64,
    /// Removal strategy; both are run when omitted
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// Random-removal repetitions
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// BFS sources sampled for the mean path length
    #[arg(long, default_value_t = 100)]
    sources: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// JSON report output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Read edge lists without a `# directed` line as undirected
    #[arg(long)]
    undirected: bool,
}

#[derive(clap::Args)]
struct EngageArgs {
    /// CSV with header `bpo_id,interactions,likes`
    #[arg(long = "in")]
    input: PathBuf,
    /// CSV report `bpo_id,er,residual,rank`
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Crawl(a) => crawl(a),
        Command::Fit(a) => fit(a),
        Command::Diagnose(a) => diagnose(a),
        Command::Engage(a) => engage(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn usage_error(subcommand: &str, message: &str) -> ! {
    let mut cmd = Cli::command();
    cmd.build();
    let sub = cmd.find_subcommand_mut(subcommand).expect("known subcommand");
    sub.error(clap::error::ErrorKind::MissingRequiredArgument, message).exit()
}

fn open_input(path: &Path, flag: &str) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("--{flag}: cannot open `{}`", path.display()))?;
    Ok(BufReader::new(file))
}

fn create_output(path: &Path, flag: &str) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("--{flag}: cannot create `{}`", path.display()))?;
    Ok(BufWriter::new(file))
}

fn load_graph(path: &Path, undirected: bool) -> Result<Graph> {
    read_edge_list(open_input(path, "in")?, !undirected).with_context(|| format!("--in `{}`", path.display()))
}

fn generate(a: GenerateArgs) -> Result<()> {
    let g = match a.model {
        Model::Ba => {
            let Some(m) = a.m else { usage_error("generate", "--model ba requires --m") };
            generate_ba(BaParams { n: a.n, m, seed: a.seed }).context("--n/--m")?
        }
        Model::Er => {
            let Some(p) = a.p else { usage_error("generate", "--model er requires --p") };
            generate_er(ErParams { n: a.n, p, seed: a.seed }).context("--n/--p")?
        }
    };
    write_edge_list(&g, create_output(&a.out, "out")?).with_context(|| format!("--out `{}`", a.out.display()))?;
    eprintln!("generated {} nodes, {} edges -> {}", g.node_count(), g.edge_count(), a.out.display());
    Ok(())
}

fn crawl(a: CrawlArgs) -> Result<()> {
    let g = load_graph(&a.input, a.undirected)?;
    let seeds = read_seed_labels(open_input(&a.seeds, "seeds")?).with_context(|| format!("--seeds `{}`", a.seeds.display()))?;
    let api = serve_snapshot(&g, a.page_size).context("--page-size")?;
    let result = bfs_crawl(&api, &seeds, a.budget).with_context(|| format!("--seeds `{}`", a.seeds.display()))?;

    let crawled = result.to_graph(g.is_directed());
    write_edge_list(&crawled, create_output(&a.out, "out")?).with_context(|| format!("--out `{}`", a.out.display()))?;
    if let Some(log) = &a.log {
        result.write_log(create_output(log, "log")?).with_context(|| format!("--log `{}`", log.display()))?;
    }
    eprintln!(
        "crawled {} nodes, {} edges in {} calls{}",
        crawled.node_count(),
        crawled.edge_count(),
        result.api_calls,
        if result.truncated {
            format!(" (budget exhausted, {} nodes left in frontier)", result.frontier_remaining.len())
        } else {
            String::new()
        }
    );
    Ok(())
}

/// True when the first data line has two fields, i.e. the file is an edge list.
fn looks_like_edge_list(path: &Path) -> Result<bool> {
    for line in open_input(path, "in")?.lines() {
        let line = line.with_context(|| format!("--in `{}`", path.display()))?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        return Ok(text.split_whitespace().count() >= 2);
    }
    Ok(false)
}

fn load_degrees(a: &FitArgs) -> Result<DegreeSequence> {
    if looks_like_edge_list(&a.input)? {
        Ok(load_graph(&a.input, a.undirected)?.degree_sequence(a.mode))
    } else {
        read_degrees(open_input(&a.input, "in")?, a.mode).with_context(|| format!("--in `{}`", a.input.display()))
    }
}

fn fit(a: FitArgs) -> Result<()> {
    let degrees = load_degrees(&a)?;
    let network = a
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "network".into());
    let raw = empirical_pmf(&degrees).with_context(|| format!("--in `{}`", a.input.display()))?;
    let binned = log_bin(&raw, a.base).context("--base")?;
    let strategy = match a.kmin {
        KMin::Auto => RangeStrategy::Auto,
        KMin::Fixed(k) => RangeStrategy::Fixed(k as f64),
    };
    let k_min = select_linear_range(&binned, strategy).context("--kmin")?;
    let ols = fit_ols_loglog(&binned, k_min, f64::INFINITY).context("--kmin")?;

    let mut records = vec![FitRecord::from_ols(&network, &ols)];
    let mle_kmin = match a.kmin {
        KMin::Auto => lower_bin_edge(&binned, ols.k_min),
        KMin::Fixed(k) => k,
    };
    match fit_mle_discrete(&degrees, mle_kmin) {
        Ok(mle) => {
            eprintln!("mle cross-check: lambda {:.3} on {} samples >= {}", mle.lambda, mle.n_tail, mle.k_min);
            records.push(FitRecord::from_mle(&network, &mle, degrees.max()));
        }
        Err(err) => eprintln!("mle cross-check skipped: {err}"),
    }

    println!("network\tc\tlambda\tR2");
    println!("{}", records[0].table_row());

    if let Some(out) = &a.out {
        write_json(out, &records)?;
    }
    if let Some(prefix) = &a.plot {
        for (suffix, table) in [("raw.tsv", &raw), ("binned.tsv", &binned)] {
            let path = PathBuf::from(format!("{}.{suffix}", prefix.display()));
            table
                .write_tsv(create_output(&path, "plot")?)
                .with_context(|| format!("--plot `{}`", path.display()))?;
        }
    }
    Ok(())
}

/// Smallest integer degree inside the bin whose abscissa is `k`. A bin
/// `[lo, lo + width)` sits at `sqrt(lo * (lo + width))`.
fn lower_bin_edge(binned: &DistributionTable, k: f64) -> usize {
    let width = binned
        .points()
        .iter()
        .find(|pt| pt.k == k)
        .map_or(1.0, |pt| pt.width);
    let lo = (-width + (width * width + 4.0 * k * k).sqrt()) / 2.0;
    (lo.round() as usize).max(1)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = create_output(path, "out")?;
    serde_json::to_writer_pretty(&mut out, value).with_context(|| format!("--out `{}`", path.display()))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct DiagnoseReport {
    nodes: usize,
    edges: usize,
    path_length: PathLengthEstimate,
    ln_n: f64,
    robustness: Vec<RobustnessReport>,
}

fn diagnose(a: DiagnoseArgs) -> Result<()> {
    let g = load_graph(&a.input, a.undirected)?;
    if g.node_count() == 0 {
        bail!("--in `{}` contains no edges", a.input.display());
    }
    let path_length = avg_path_length_sampled(&g, a.sources, a.seed).context("--sources")?;
    let strategies = match a.strategy {
        Some(s) => vec![s.into()],
        None => vec![RemovalStrategy::Random, RemovalStrategy::Targeted],
    };
    let robustness = strategies
        .into_iter()
        .map(|s| removal_experiment(&g, a.fraction, s, a.trials, a.seed).context("--fraction/--trials"))
        .collect::<Result<Vec<_>>>()?;

    let report = DiagnoseReport {
        nodes: g.node_count(),
        edges: g.edge_count(),
        path_length,
        ln_n: (g.node_count() as f64).ln(),
        robustness,
    };

    let stdout = io::stdout();
    let mut w = stdout.lock();
    writeln!(
        w,
        "mean path length {:.3} over {} sources (ln N = {:.3})",
        report.path_length.mean_distance, report.path_length.sample_sources, report.ln_n
    )?;
    writeln!(w, "strategy\tremoved\tgiant_fraction")?;
    for r in &report.robustness {
        writeln!(w, "{}\t{}\t{:.4}", r.strategy, r.nodes_removed, r.giant_fraction_mean)?;
    }
    if let Some(out) = &a.out {
        write_json(out, &report)?;
    }
    Ok(())
}

fn engage(a: EngageArgs) -> Result<()> {
    let records = read_records(open_input(&a.input, "in")?).with_context(|| format!("--in `{}`", a.input.display()))?;
    let bench = fit_log_benchmark(&records).with_context(|| format!("--in `{}`", a.input.display()))?;
    write_report(&records, &bench, create_output(&a.out, "out")?).with_context(|| format!("--out `{}`", a.out.display()))?;
    eprintln!(
        "log10(interactions) = {:.4} + {:.4} * log10(likes), R2 {:.3}, {} pages, {} excluded",
        bench.intercept,
        bench.slope,
        bench.r_squared,
        records.len(),
        bench.excluded
    );
    Ok(())
}
