use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use igl_core::generate::{self, WeightSpec};
use igl_core::graph::io::{parse_graph, write_edge_list, ParsedGraph};
use igl_core::graph::kernel_sum_brute;
use igl_core::planar::{default_r, igl_planar_with, r_division, PlanarOptions, PlaneGraph};
use igl_core::scalar::format_decimal;
use igl_core::treewidth::{igl_treewidth_with, min_fill, TreeDecomposition, TreewidthOptions};
use igl_core::{ArithMode, DistanceKernel, IglError, Rational, Result, Scalar};

#[derive(Parser)]
#[command(name = "igl", version, about = "Inverse geodesic length of weighted graphs")]
struct Cli {
    /// Worker threads for internal parallelism.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Algorithm {
    Brute,
    Treewidth,
    Planar,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    TreewidthScaling,
    PlanarScaling,
    PolyMicro,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the distance sum of a graph file and print a JSON report.
    Run {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "brute")]
        algorithm: Algorithm,
        #[arg(long, default_value = "exact")]
        arith: ArithMode,
        #[arg(long, default_value = "inverse")]
        kernel: DistanceKernel,
        /// PACE `.td` decomposition; min-fill is used when absent.
        #[arg(long)]
        td: Option<PathBuf>,
        /// Piece size of the r-division.
        #[arg(long)]
        r: Option<usize>,
        /// Count how often each vertex pair is summed (small graphs).
        #[arg(long)]
        audit: bool,
        /// Write a drawing of the graph.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Write a generated instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true, default_value_t = 0)]
        seed: u64,
        /// `unit`, `int:LO:HI` or `rational:P:Q`.
        #[arg(long, global = true, default_value = "unit")]
        weights: WeightSpec,
        /// Output file; stdout when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Timing tables as JSON lines.
    Bench {
        #[arg(value_enum)]
        suite: Suite,
        /// Comma separated sizes; each suite has defaults.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Timed runs per size (after one warmup).
        #[arg(long, default_value_t = 3)]
        runs: usize,
        /// Width of the generated k-trees.
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// `W × H` grid as a plane graph.
    Grid { w: usize, h: usize },
    /// Random k-tree; a `.td` sidecar is written next to `--out`.
    Ktree {
        k: usize,
        n: usize,
        /// Probability of dropping each edge.
        #[arg(long, default_value_t = 0.0)]
        drop: f64,
    },
    /// Random triangulation as a plane graph.
    Triangulation {
        n: usize,
        /// Random edge flips; defaults to `2n`.
        #[arg(long)]
        flips: Option<usize>,
    },
}

#[derive(Serialize)]
struct Params {
    kernel: DistanceKernel,
    mode: ArithMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    width: Option<usize>,
}

#[derive(Serialize)]
struct RunReport {
    algorithm: Algorithm,
    igl: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
    n: usize,
    m: usize,
    params: Params,
    wall_ms: f64,
    audit: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let res = match cli.cmd {
        Cmd::Run { input, algorithm, arith, kernel, td, r, audit, svg } => {
            let opts = RunOpts { algorithm, kernel, td, r, audit, parallel: cli.threads > 1 };
            cmd_run(&input, arith, &opts, svg.as_deref())
        }
        Cmd::Gen { kind, seed, weights, out } => cmd_gen(kind, seed, weights, out.as_deref()),
        Cmd::Bench { suite, sizes, seed, runs, k } => cmd_bench(suite, &sizes, seed, runs.max(1), k),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

struct RunOpts {
    algorithm: Algorithm,
    kernel: DistanceKernel,
    td: Option<PathBuf>,
    r: Option<usize>,
    audit: bool,
    parallel: bool,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| IglError::invalid(format!("cannot read {}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| IglError::invalid(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_run(input: &Path, arith: ArithMode, opts: &RunOpts, svg: Option<&Path>) -> Result<()> {
    let parsed = parse_graph(&read(input)?)?;
    let report = match arith {
        ArithMode::Exact => run_with(&parsed, opts, |w: &Rational| w.clone())?,
        ArithMode::Float => run_with(&parsed, opts, |w: &Rational| w.to_f64())?,
    };
    if let Some(path) = svg {
        std::fs::write(path, draw_svg(&parsed, opts.r))?;
    }
    println!("{}", serde_json::to_string(&report).expect("report serializes"));
    Ok(())
}

fn run_with<T: Scalar>(parsed: &ParsedGraph, opts: &RunOpts, conv: impl Fn(&Rational) -> T) -> Result<RunReport> {
    let g = parsed.graph()?;
    let mut params = Params { kernel: opts.kernel, mode: T::MODE, r: None, width: None };
    let start = Instant::now();
    let (value, audit): (T, Value) = match opts.algorithm {
        Algorithm::Brute => {
            let g = g.map_weights(&conv);
            (kernel_sum_brute(&g, opts.kernel), json!({}))
        }
        Algorithm::Treewidth => {
            let td = match &opts.td {
                Some(p) => TreeDecomposition::parse_pace(&read(p)?)?,
                None => min_fill(&g),
            };
            params.width = Some(td.width());
            let g = g.map_weights(&conv);
            let tw = TreewidthOptions {
                kernel: opts.kernel,
                audit: opts.audit,
                parallel: opts.parallel,
                ..Default::default()
            };
            let out = igl_treewidth_with(&g, &td, &tw)?;
            (out.value, json!({ "stats": out.stats, "pairs": out.audit }))
        }
        Algorithm::Planar => {
            let pg = PlaneGraph::from_parsed(parsed)?.map_weights(&conv);
            let po = PlanarOptions { kernel: opts.kernel, r: opts.r, audit: opts.audit, parallel: opts.parallel };
            let out = igl_planar_with(&pg, &po)?;
            params.r = Some(out.stats.r);
            (out.value, json!({ "components": out.components, "stats": out.stats, "pairs": out.audit }))
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(RunReport {
        algorithm: opts.algorithm,
        igl: format_decimal(value.to_f64(), 15),
        exact: value.to_fraction(),
        n: g.n(),
        m: g.m(),
        params,
        wall_ms,
        audit,
    })
}

fn cmd_gen(kind: GenKind, seed: u64, weights: WeightSpec, out: Option<&Path>) -> Result<()> {
    match kind {
        GenKind::Grid { w, h } => write_out(out, &generate::grid(w, h, weights, seed)?.to_text()),
        GenKind::Triangulation { n, flips } => {
            let pg = generate::random_triangulation(n, weights, flips.unwrap_or(2 * n), seed)?;
            write_out(out, &pg.to_text())
        }
        GenKind::Ktree { k, n, drop } => {
            if !(0.0..1.0).contains(&drop) {
                return Err(IglError::invalid("--drop must be in [0, 1)"));
            }
            let (g, td) = generate::ktree(n, k, weights, drop, seed)?;
            write_out(out, &write_edge_list(&g))?;
            if let Some(p) = out {
                let mut side = p.as_os_str().to_owned();
                side.push(".td");
                std::fs::write(PathBuf::from(side), td.to_pace(n))?;
            }
            Ok(())
        }
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

/// One warmup, then the median wall time in ms of `runs` calls.
fn time_it<R>(runs: usize, mut f: impl FnMut() -> Result<R>) -> Result<(f64, R)> {
    let mut last = f()?;
    let mut times = Vec::with_capacity(runs);
    for _ in 0..runs {
        let start = Instant::now();
        last = f()?;
        times.push(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok((median(times), last))
}

fn cmd_bench(suite: Suite, sizes: &[usize], seed: u64, runs: usize, k: usize) -> Result<()> {
    let defaults: Vec<usize> = match suite {
        Suite::TreewidthScaling => (12..=16).map(|e| 1 << e).collect(),
        Suite::PlanarScaling => vec![64, 128, 256, 512],
        Suite::PolyMicro => vec![256, 1024, 4096, 16384],
    };
    let sizes = if sizes.is_empty() { &defaults[..] } else { sizes };
    let mut prev: Option<f64> = None;
    for (i, &n) in sizes.iter().enumerate() {
        let mut row = match suite {
            Suite::TreewidthScaling => {
                let (g, td) = generate::ktree(n, k, WeightSpec::Integer { lo: 1, hi: 10 }, 0.0, seed)?;
                let gf = g.map_weights(|w| w.to_f64());
                let opts = TreewidthOptions { parallel: false, ..Default::default() };
                let (ms, v) = time_it(runs, || Ok(igl_treewidth_with(&gf, &td, &opts)?.value))?;
                let mut row = json!({ "suite": "treewidth-scaling", "n": n, "k": k, "median_ms": ms, "checksum": v });
                if i == 0 {
                    let exact = kernel_sum_brute(&g, DistanceKernel::Inverse);
                    row["exact"] = json!(exact.to_fraction());
                    row["checksum_ok"] = json!(((exact.to_f64() - v) / v).abs() <= 1e-9);
                }
                row
            }
            Suite::PlanarScaling => {
                let pg = generate::random_triangulation(n, WeightSpec::Integer { lo: 1, hi: 10 }, 2 * n, seed)?;
                let pf = pg.map_weights(|w| w.to_f64());
                let opts = PlanarOptions { parallel: false, ..Default::default() };
                let (ms, v) = time_it(runs, || Ok(igl_planar_with(&pf, &opts)?.value))?;
                let mut row =
                    json!({ "suite": "planar-scaling", "n": n, "r": default_r(n), "median_ms": ms, "checksum": v });
                if i == 0 {
                    let exact = igl_planar_with(&pg, &opts)?.value;
                    row["exact"] = json!(exact.to_fraction());
                    row["checksum_ok"] = json!(((exact.to_f64() - v) / v).abs() <= 1e-9);
                }
                row
            }
            Suite::PolyMicro => {
                let mut rng = generate::rng(seed);
                let weights: Vec<f64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, 1.0..1e6)).collect();
                let points: Vec<f64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, 0.0..1e6)).collect();
                let kernel = DistanceKernel::Inverse;
                let (ms, v) = time_it(runs, || Ok(f64::kernel_sum_eval(kernel, &weights, &points)?.iter().sum::<f64>()))?;
                let (direct_ms, d) = time_it(runs, || {
                    Ok(points.iter().map(|x| weights.iter().map(|w| kernel.apply(&(x + w))).sum::<f64>()).sum::<f64>())
                })?;
                json!({ "suite": "poly-micro", "n": n, "median_ms": ms, "direct_ms": direct_ms, "checksum": v, "rel_diff": ((v - d) / d).abs() })
            }
        };
        let ms = row["median_ms"].as_f64().unwrap_or(0.0);
        row["ratio"] = match prev {
            Some(p) if p > 0.0 => json!(ms / p),
            _ => Value::Null,
        };
        prev = Some(ms);
        println!("{row}");
    }
    Ok(())
}

/// Tutte layout: the longest face on a circle, other vertices at the
/// average of their neighbours. Graphs without rotation sit on a circle.
fn layout(parsed: &ParsedGraph) -> Vec<(f64, f64)> {
    let n = parsed.n;
    let circle = |i: usize, k: usize| {
        let t = std::f64::consts::TAU * i as f64 / k.max(1) as f64;
        (t.cos(), t.sin())
    };
    let Ok(pg) = PlaneGraph::from_parsed(parsed) else {
        return (0..n).map(|i| circle(i, n)).collect();
    };
    let outer = pg.faces().iter().max_by_key(|f| f.len()).map(|f| f.iter().map(|&a| pg.tail(a)).collect::<Vec<_>>());
    let mut pos = vec![(0.0, 0.0); n];
    let mut fixed = vec![false; n];
    if let Some(outer) = outer {
        for (i, &v) in outer.iter().enumerate() {
            if !fixed[v] {
                pos[v] = circle(i, outer.len());
                fixed[v] = true;
            }
        }
    }
    let g = pg.graph();
    for _ in 0..400 {
        for v in 0..n {
            if fixed[v] || g.degree(v) == 0 {
                continue;
            }
            let (mut x, mut y) = (0.0, 0.0);
            for &(u, _) in g.neighbors(v) {
                x += pos[u].0;
                y += pos[u].1;
            }
            let d = g.degree(v) as f64;
            pos[v] = (x / d, y / d);
        }
    }
    pos
}

fn draw_svg(parsed: &ParsedGraph, r: Option<usize>) -> String {
    const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"];
    let pos = layout(parsed);
    let px = |p: (f64, f64)| (300.0 + 280.0 * p.0, 300.0 + 280.0 * p.1);
    let mut colour: Vec<usize> = vec![0; parsed.edges.len()];
    let mut boundary = vec![false; parsed.n];
    let mut edges: Vec<(usize, usize)> = parsed.edges.iter().map(|(u, v, _)| (*u, *v)).collect();
    if let Ok(pg) = PlaneGraph::from_parsed(parsed) {
        edges = pg.graph().edges().map(|(u, v, _)| (u, v)).collect();
        colour = vec![0; edges.len()];
        if let Ok(div) = r_division(&pg, r.unwrap_or_else(|| default_r(pg.n()))) {
            for (i, p) in div.pieces.iter().enumerate() {
                for &e in &p.emap {
                    colour[e] = i;
                }
                for &b in &p.boundary {
                    boundary[p.vmap[b]] = true;
                }
            }
        }
    }
    let mut s = String::from("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\">\n");
    for (e, &(u, v)) in edges.iter().enumerate() {
        let (a, b) = (px(pos[u]), px(pos[v]));
        let c = PALETTE[colour[e] % PALETTE.len()];
        writeln!(s, "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"{c}\"/>", a.0, a.1, b.0, b.1).unwrap();
    }
    for (v, &p) in pos.iter().enumerate() {
        let (x, y) = px(p);
        let fill = if boundary[v] { "black" } else { "white" };
        writeln!(s, "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"3\" fill=\"{fill}\" stroke=\"black\"/>").unwrap();
    }
    s.push_str("</svg>\n");
    s
}
