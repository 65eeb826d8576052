//! Command-line driver over the library: generate hard instances, build
//! covers of graph files, verify and summarize them, run a single
//! decomposition, and Monte-Carlo the embedding sampler.
//!
//! Graphs travel as plain text (`n m` header, then one `u v w` line per
//! edge); covers, verification reports, and instance metadata/paths are
//! JSON. Every command is a pure function of its flags: the seed defaults
//! to 0, and output bytes are identical across reruns and across
//! `--threads` settings (parallel phases merge by index, never by
//! completion order).
//!
//! Exit status: 0 on success, 1 when a verification ran and failed, 2 on
//! usage errors or any failure to build/read/write (a refused DAG budget
//! included).

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dagcover::baselines::{
    random_order_exact_cover, reachability_two_cover, shortest_path_dag_cover,
};
use dagcover::cover::{build_ldd_cover, default_repetitions, sample_embedding_dag};
use dagcover::error::Error;
use dagcover::gen::{
    gen_base_graph, gen_base_graph_sized, gen_clique_replacement, gen_directed_cycle,
    gen_log_diameter, gen_product_graph, Instance,
};
use dagcover::graph::{CoverFile, WeightedDigraph};
use dagcover::ldd::{directed_ldd, LddParams};
use dagcover::par;
use dagcover::rational::Rational;
use dagcover::rng::derive_seed;
use dagcover::verify::{
    distortion_histogram, verify_distance_cover, verify_reachability_cover,
};

/// Build, verify, and sample DAG covers of weighted directed graphs.
#[derive(Parser)]
#[command(name = "dagcover", version, max_term_width = 100)]
struct Cli {
    /// Worker threads for parallel phases; 0 keeps the process default.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Unit-weight directed n-cycle.
    Cycle,
    /// n-cycle with halving shortcuts: logarithmic diameter, cycle backbone.
    Diam,
    /// Layered grid of columns with its slope-path family.
    Base,
    /// Layered square product of a base instance, with interleaved paths.
    Product,
    /// Clique replacement of a product (or base) instance.
    Clique,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Repeated two-DAG construction from the random level decomposition.
    Ldd,
    /// Two DAGs preserving exact reachability (not distances).
    Reach2,
    /// Exhaustive random-order DAGs, exact up to distance d.
    Orders,
    /// One shortest-path tree per source: exact, n DAGs.
    SpDags,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Certify acyclicity, edge lower bounds, coverage, and distortion.
    Distance,
    /// Certify acyclicity and exact transitive-closure equality.
    Reach,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance bundle: PREFIX.graph.txt, PREFIX.meta.json,
    /// and PREFIX.paths.json when the family carries paths.
    Gen {
        /// Instance family.
        #[arg(long, value_enum)]
        family: Family,
        /// Output bundle prefix.
        #[arg(short, long)]
        out: String,
        /// Vertex count (cycle, diam, and the sized base form).
        #[arg(long)]
        n: Option<usize>,
        /// Path-count scale for the sized base form (with --n).
        #[arg(long)]
        p: Option<usize>,
        /// Base grid: column count (with --height, --sigma, --slopes).
        #[arg(long)]
        layers: Option<usize>,
        /// Base grid: column height.
        #[arg(long)]
        height: Option<usize>,
        /// Base grid: number of source rows.
        #[arg(long)]
        sigma: Option<usize>,
        /// Base grid: number of slopes.
        #[arg(long)]
        slopes: Option<usize>,
        /// Host bundle prefix (product: a base instance; clique: a product
        /// or base instance).
        #[arg(long)]
        base: Option<String>,
        /// Clique size.
        #[arg(long)]
        c: Option<usize>,
        /// Seed for the clique edge attachment.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build a cover of a graph file and write it as JSON.
    Build {
        /// Construction method.
        #[arg(long, value_enum)]
        method: Method,
        /// Input graph file.
        #[arg(short, long)]
        input: String,
        /// Output cover file.
        #[arg(short, long)]
        out: String,
        /// Repetitions of the two-DAG construction (ldd only; defaults to
        /// 10 * ceil(lg n)).
        #[arg(long)]
        reps: Option<usize>,
        /// Distance bound for the exhaustive-orders method.
        #[arg(short, long)]
        d: Option<u64>,
        /// Seed for the randomized methods.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verify a cover against its graph; prints the report as JSON and
    /// exits 1 when any hard check fails.
    Verify {
        /// What the cover claims to preserve.
        #[arg(long, value_enum)]
        mode: Mode,
        /// Distortion bound to record in the report (distance mode only;
        /// an integer, a ratio like 7/2, or a decimal). The comparison is
        /// informational and never affects the exit status.
        #[arg(short, long)]
        alpha: Option<String>,
        /// Graph file.
        #[arg(short, long)]
        graph: String,
        /// Cover file.
        #[arg(short, long)]
        cover: String,
    },
    /// Exact distortion histogram of a cover, as CSV on stdout
    /// (distortion as num/den, then the pair count; INFINITY rows last).
    Stats {
        /// Graph file.
        #[arg(short, long)]
        graph: String,
        /// Cover file.
        #[arg(short, long)]
        cover: String,
    },
    /// Sample embedding DAGs and tally per-pair reachability frequency and
    /// conditional distortion, as CSV on stdout.
    Embed {
        /// Graph file.
        #[arg(short, long)]
        graph: String,
        /// Number of sampled DAGs.
        #[arg(long)]
        samples: usize,
        /// Base seed; sample k uses the k-th derived stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run one low-diameter decomposition and print the cut edges, one
    /// "u v w" line each.
    Ldd {
        /// Graph file.
        #[arg(short, long)]
        graph: String,
        /// Weak-diameter target: an integer, a ratio like 7/2, or a decimal.
        #[arg(short, long)]
        d: String,
        /// Decomposition seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses "N", "N/D", or a decimal like "2.75" into an exact rational.
fn parse_rational(text: &str) -> Result<Rational, CliError> {
    let bad = || usage(format!("cannot parse {text:?} as a number (try N, N/D, or a decimal)"));
    if let Some((num, den)) = text.split_once('/') {
        let num: u64 = num.trim().parse().map_err(|_| bad())?;
        let den: u64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(usage(format!("zero denominator in {text:?}")));
        }
        Ok(Rational::new(num, den))
    } else if let Some((int, frac)) = text.split_once('.') {
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        if frac.is_empty() || frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = 10u64.pow(frac.len() as u32);
        let frac: u64 = frac.parse().map_err(|_| bad())?;
        let num = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Ok(Rational::new(num, scale))
    } else {
        let int: u64 = text.trim().parse().map_err(|_| bad())?;
        Ok(Rational::from_int(int))
    }
}

fn run_gen(
    family: Family,
    out: &str,
    n: Option<usize>,
    p: Option<usize>,
    layers: Option<usize>,
    height: Option<usize>,
    sigma: Option<usize>,
    slopes: Option<usize>,
    base: Option<&str>,
    c: Option<usize>,
    seed: u64,
) -> Result<u8, CliError> {
    let need = |opt: Option<usize>, flag: &str| {
        opt.ok_or_else(|| usage(format!("--family {} requires {flag}", family_name(family))))
    };
    let instance = match family {
        Family::Cycle => gen_directed_cycle(need(n, "--n")?)?,
        Family::Diam => gen_log_diameter(need(n, "--n")?)?,
        Family::Base => match (layers, height, sigma, slopes) {
            (Some(l), Some(h), Some(s), Some(r)) => gen_base_graph(l, h, s, r)?,
            (None, None, None, None) => {
                gen_base_graph_sized(need(n, "--n (or the four grid primitives)")?, need(p, "--p")?)?
            }
            _ => {
                return Err(usage(
                    "--family base takes either all of --layers/--height/--sigma/--slopes or --n/--p",
                ))
            }
        },
        Family::Product => {
            let host = Instance::load(base.ok_or_else(|| usage("--family product requires --base"))?)?;
            gen_product_graph(&host)?
        }
        Family::Clique => {
            let host = Instance::load(base.ok_or_else(|| usage("--family clique requires --base"))?)?;
            gen_clique_replacement(&host, need(c, "--c")?, seed)?
        }
    };
    instance.save(out)?;
    println!(
        "wrote {out}.graph.txt ({} vertices, {} edges){}",
        instance.graph.n(),
        instance.graph.m(),
        if instance.paths.is_some() { " with path family" } else { "" }
    );
    Ok(0)
}

fn family_name(family: Family) -> &'static str {
    match family {
        Family::Cycle => "cycle",
        Family::Diam => "diam",
        Family::Base => "base",
        Family::Product => "product",
        Family::Clique => "clique",
    }
}

fn run_build(
    method: Method,
    input: &str,
    out: &str,
    reps: Option<usize>,
    d: Option<u64>,
    seed: u64,
) -> Result<u8, CliError> {
    let g = WeightedDigraph::load(input)?;
    let cover = match method {
        Method::Ldd => {
            let reps = reps.unwrap_or_else(|| default_repetitions(g.n()));
            build_ldd_cover(&g, reps, seed)?
        }
        Method::Reach2 => reachability_two_cover(&g),
        Method::Orders => {
            let d = d.ok_or_else(|| usage("--method orders requires --d"))?;
            random_order_exact_cover(&g, d, seed)?
        }
        Method::SpDags => shortest_path_dag_cover(&g),
    };
    let file = cover.to_file();
    file.save(out)?;
    println!(
        "wrote {out}: {} DAGs, {} additional edges",
        file.dags.len(),
        file.additional_edges.len()
    );
    Ok(0)
}

fn run_verify(
    mode: Mode,
    alpha: Option<&str>,
    graph: &str,
    cover: &str,
) -> Result<u8, CliError> {
    let g = WeightedDigraph::load(graph)?;
    let file = CoverFile::load(cover)?;
    let report = match mode {
        Mode::Distance => {
            let bound = alpha.map(parse_rational).transpose()?;
            verify_distance_cover(&g, &file, bound)
        }
        Mode::Reach => {
            if alpha.is_some() {
                return Err(usage("--alpha only applies to --mode distance"));
            }
            verify_reachability_cover(&g, &file)
        }
    };
    println!("{}", report.to_json());
    Ok(if report.ok { 0 } else { 1 })
}

fn run_stats(graph: &str, cover: &str) -> Result<u8, CliError> {
    let g = WeightedDigraph::load(graph)?;
    let file = CoverFile::load(cover)?;
    let (histogram, missed) = distortion_histogram(&g, &file)?;
    println!("distortion,count");
    for (ratio, count) in &histogram {
        println!("{}/{},{count}", ratio.num(), ratio.den());
    }
    if missed > 0 {
        println!("INFINITY,{missed}");
    }
    Ok(0)
}

/// Samples are processed in fixed-size batches: each batch is mapped in
/// parallel, then folded into the accumulators in sample order, so the
/// tallies are independent of the thread count.
const EMBED_BATCH: usize = 128;

fn run_embed(graph: &str, samples: usize, seed: u64) -> Result<u8, CliError> {
    if samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let g = WeightedDigraph::load(graph)?;
    let n = g.n();
    let apsp = g.all_pairs();
    let mut reached = vec![0u64; n * n];
    let mut ratio_sum = vec![0f64; n * n];
    let mut start = 0;
    while start < samples {
        let batch = EMBED_BATCH.min(samples - start);
        let dists: Vec<Result<Vec<Option<u64>>, Error>> = par::map_range(batch, |j| {
            let dag = sample_embedding_dag(&g, derive_seed(seed, (start + j) as u64))?;
            let mut matrix = vec![None; n * n];
            for s in 0..n {
                matrix[s * n..(s + 1) * n].copy_from_slice(&dag.distances_from(s));
            }
            Ok(matrix)
        });
        for matrix in dists {
            let matrix = matrix?;
            for (cell, d) in matrix.into_iter().enumerate() {
                if let Some(d) = d {
                    let (s, t) = (cell / n, cell % n);
                    if s == t {
                        continue;
                    }
                    reached[cell] += 1;
                    let true_dist = apsp.get(s, t).expect("cover distances imply g distances");
                    ratio_sum[cell] += d as f64 / true_dist as f64;
                }
            }
        }
        start += batch;
    }
    println!("s,t,reached,samples,reach_freq,mean_distortion_when_reached");
    for s in 0..n {
        for t in 0..n {
            if s == t || apsp.get(s, t).is_none() {
                continue;
            }
            let cell = s * n + t;
            let freq = reached[cell] as f64 / samples as f64;
            let mean = if reached[cell] > 0 {
                format!("{:.6}", ratio_sum[cell] / reached[cell] as f64)
            } else {
                String::new()
            };
            println!("{s},{t},{},{samples},{freq:.6},{mean}", reached[cell]);
        }
    }
    Ok(0)
}

fn run_ldd(graph: &str, d: &str, seed: u64) -> Result<u8, CliError> {
    let g = WeightedDigraph::load(graph)?;
    let d = parse_rational(d)?;
    let result = directed_ldd(&g, &LddParams::new(d, seed))?;
    for &ei in &result.cut_edges {
        let e = g.edges()[ei];
        println!("{} {} {}", e.u, e.v, e.w);
    }
    Ok(0)
}

fn dispatch(cmd: Cmd) -> Result<u8, CliError> {
    match cmd {
        Cmd::Gen { family, out, n, p, layers, height, sigma, slopes, base, c, seed } => {
            run_gen(family, &out, n, p, layers, height, sigma, slopes, base.as_deref(), c, seed)
        }
        Cmd::Build { method, input, out, reps, d, seed } => {
            run_build(method, &input, &out, reps, d, seed)
        }
        Cmd::Verify { mode, alpha, graph, cover } => {
            run_verify(mode, alpha.as_deref(), &graph, &cover)
        }
        Cmd::Stats { graph, cover } => run_stats(&graph, &cover),
        Cmd::Embed { graph, samples, seed } => run_embed(&graph, samples, seed),
        Cmd::Ldd { graph, d, seed } => run_ldd(&graph, &d, seed),
    }
}

fn main() -> ExitCode {
    // CSV and report output is meant to be piped; behave like any other
    // filter when the downstream end closes early (`... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let threads = cli.threads;
    let cmd = cli.cmd;
    match par::with_thread_count(threads, move || dispatch(cmd)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
