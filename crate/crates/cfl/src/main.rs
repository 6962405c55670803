use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;

use cfl::encode::{encode_balls, encode_spider, format_bits, parse_bits, EncodedInstance, SpiderStyle};
use cfl::generate::{gen_grid, gen_path, gen_random, gen_random_connected, gen_tree, gen_wheel, rng, Coloring, Topology};
use cfl::labels::{LabelFile, Scheme};
use cfl::measure::{loglog_slope, SizeReport};
use cfl::oracle::brute_force_connected;
use cfl::verify::{sample_queries, sweep_large, sweep_oracle, sweep_recursive, sweep_single, sweep_two, Agreement};
use cfl::{CflError, CflResult};
use cfl_core::format::{parse_graph, serialize_graph};
use cfl_core::graph::bfs_distances;
use cfl_core::multi_fault::label_recursive;
use cfl_core::nca::OneFaultOracle;
use cfl_core::reductions::{build_all_pairs, ExactSingleSource};
use cfl_core::routing::build_routing_scheme;
use cfl_core::single_fault::label_single_fault;
use cfl_core::sketch::SketchParams;
use cfl_core::{ColorMode, ColoredGraph, FaultSet};

#[derive(Parser)]
#[command(name = "cfl", version, about = "Connectivity labels for graphs with color faults")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Edge,
    Vertex,
}

impl From<Mode> for ColorMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Edge => ColorMode::Edge,
            Mode::Vertex => ColorMode::Vertex,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Path,
    Wheel,
    Grid,
    Tree,
    Random,
    Connected,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Path,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Decoder {
    Oracle,
    Scheme,
}

#[derive(Clone, Copy, ValueEnum)]
enum Inner {
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Thick,
    Subdivided,
    Vertex,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a colored graph in the text format.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Edge count for random kinds.
        #[arg(long)]
        m: Option<usize>,
        /// Grid rows; the column count is n.
        #[arg(long, default_value_t = 1)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        palette: usize,
        #[arg(long, value_enum, default_value = "uniform")]
        coloring: Coloring,
        #[arg(long, value_enum, default_value = "edge")]
        mode: Mode,
        #[arg(long, env = "CFL_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Label a graph and print the size report.
    Label {
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[arg(long)]
        graph: PathBuf,
        /// Fault bound for the recursive scheme.
        #[arg(long, default_value_t = 2)]
        f: usize,
        #[arg(long, env = "CFL_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Answer a query from a label file.
    Query {
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        /// Comma-separated failed colors.
        #[arg(long, value_delimiter = ',')]
        faults: Vec<usize>,
    },
    /// Compare a scheme with brute force on random graphs.
    Verify {
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, env = "CFL_SEED", default_value_t = 0)]
        seed: u64,
        /// Largest vertex count.
        #[arg(long, default_value_t = 24)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        palette: usize,
        #[arg(long, value_enum, default_value = "edge")]
        mode: Mode,
        #[arg(long, default_value_t = 2)]
        f: usize,
        /// Sampled queries per graph for the multi-fault schemes.
        #[arg(long, default_value_t = 200)]
        queries: usize,
        /// Machine-readable summary file (JSON).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Maximum label size across graph sizes, with the log-log slope.
    Bench {
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[arg(long, value_delimiter = ',', default_values_t = [64usize, 128, 256, 512])]
        sizes: Vec<usize>,
        #[arg(long, value_enum, default_value = "path")]
        family: Family,
        #[arg(long, default_value_t = 2)]
        f: usize,
        #[arg(long, env = "CFL_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Route a message from s to t avoiding one color.
    Route {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        color: usize,
        /// Print every hop.
        #[arg(long)]
        trace: bool,
    },
    /// All-pairs labels from the single-source reduction.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, env = "CFL_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "exact")]
        inner: Inner,
        #[arg(long, default_value_t = 1)]
        f: usize,
        #[arg(long, requires = "w")]
        u: Option<usize>,
        #[arg(long, requires = "u")]
        w: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        faults: Vec<usize>,
    },
    /// Hide a bit string in a coloring and read it back.
    Encode {
        #[command(subcommand)]
        what: EncodeCommand,
    },
    /// Centralized single-fault oracle.
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
}

#[derive(Subcommand)]
enum EncodeCommand {
    /// Layers of disjoint proper balls; the colors of the input are ignored.
    Balls {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        bits: String,
        /// Ball centers; searched exhaustively when absent.
        #[arg(long, value_delimiter = ',', requires = "radius")]
        centers: Vec<usize>,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, value_enum, default_value = "oracle")]
        decode_with: Decoder,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Bundles of an f-thick spider.
    Spider {
        #[arg(long)]
        f: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        arms: usize,
        #[arg(long)]
        bits: String,
        #[arg(long, value_enum, default_value = "thick")]
        style: Style,
        #[arg(long, value_enum, default_value = "oracle")]
        decode_with: Decoder,
        #[arg(long, env = "CFL_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    Query {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        color: usize,
    },
}

fn read_graph(path: &Path) -> CflResult<ColoredGraph> {
    Ok(parse_graph(&fs::read_to_string(path)?)?)
}

fn write_or_print(out: Option<&Path>, text: &str) -> CflResult<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn print_reports(reports: &[SizeReport]) {
    for r in reports {
        println!("{}", r.to_kv());
    }
}

fn diameter(g: &ColoredGraph) -> Option<usize> {
    let mut best = 0;
    for s in 0..g.n() {
        for d in bfs_distances(g, s) {
            best = best.max(d?);
        }
    }
    Some(best)
}

fn two_fault_warning(g: &ColoredGraph) {
    match diameter(g) {
        Some(d) if d * d > g.n() => println!("warning=diameter {d} exceeds sqrt(n); two-fault labels grow with the diameter"),
        None => println!("warning=graph is disconnected; diameters are taken per component"),
        _ => {}
    }
}

fn generate(kind: Kind, n: usize, m: Option<usize>, rows: usize, seed: u64) -> CflResult<Topology> {
    let m = || m.ok_or_else(|| CflError::Input("--m is required for random kinds".into()));
    match kind {
        Kind::Path => Ok(gen_path(n)),
        Kind::Wheel => gen_wheel(n),
        Kind::Grid => Ok(gen_grid(rows, n)),
        Kind::Tree => Ok(gen_tree(n, seed)),
        Kind::Random => gen_random(n, m()?, seed),
        Kind::Connected => gen_random_connected(n, m()?, seed),
    }
}

#[derive(serde::Serialize)]
struct VerifySummary {
    scheme: Scheme,
    seed: u64,
    trials: usize,
    skipped: usize,
    agreement: Agreement,
    rate: f64,
}

#[allow(clippy::too_many_arguments)]
fn verify(
    scheme: Scheme,
    trials: usize,
    seed: u64,
    max_n: usize,
    palette: usize,
    mode: ColorMode,
    f: usize,
    queries: usize,
) -> CflResult<VerifySummary> {
    let mut agreement = Agreement::default();
    let mut skipped = 0;
    for trial in 0..trials {
        let tseed = cfl_core::hash::derive_seed(seed, trial as u64);
        let mut r = rng(tseed);
        let n = r.gen_range(2..=max_n.max(2));
        let m = r.gen_range(n - 1..=(n * (n - 1) / 2).min(3 * n));
        let top = gen_random_connected(n, m, tseed)?;
        let g = top.colored(mode, palette, Coloring::Uniform, tseed)?;
        let part = match scheme {
            Scheme::Single => sweep_single(&g, &label_single_fault(&g))?,
            Scheme::Nca => sweep_oracle(&g, &OneFaultOracle::build(&g))?,
            Scheme::TwoDiam => {
                if diameter(&g).is_none_or(|d| d * d > n) {
                    skipped += 1;
                    continue;
                }
                sweep_two(&g, &cfl_core::two_fault::label_two_fault(&g))?
            }
            Scheme::Multi => {
                let q = sample_queries(&g, f, queries, &mut r);
                sweep_recursive(&g, &label_recursive(&g, f, SketchParams::new(tseed)), &q)?
            }
            Scheme::Large => {
                let q = sample_queries(&g, f, queries, &mut r);
                sweep_large(&g, &cfl_core::multi_fault::label_large_f(&g, SketchParams::new(tseed)), &q)?
            }
        };
        agreement.merge(part);
    }
    Ok(VerifySummary {
        scheme,
        seed,
        trials,
        skipped,
        rate: agreement.rate(),
        agreement,
    })
}

fn decode_instance(inst: &EncodedInstance, with: Decoder, f: usize, seed: u64) -> CflResult<Vec<bool>> {
    match with {
        Decoder::Oracle => inst.decode(|u, v, fs| brute_force_connected(&inst.graph, u, v, fs)),
        Decoder::Scheme if f == 1 => {
            let l = label_single_fault(&inst.graph);
            inst.decode(|u, v, fs| Ok(l.connected(u, v, fs[0])?))
        }
        Decoder::Scheme => {
            let l = label_recursive(&inst.graph, f, SketchParams::new(seed));
            inst.decode(|u, v, fs| Ok(l.connected(u, v, &FaultSet::from_colors(fs.iter().copied()))?))
        }
    }
}

fn report_roundtrip(inst: &EncodedInstance, x: &[bool], decoded: &[bool], out: Option<&Path>) -> CflResult<()> {
    println!("capacity={}", inst.capacity());
    println!("encoded={}", format_bits(x));
    println!("decoded={}", format_bits(decoded));
    println!("match={}", x == decoded);
    if let Some(p) = out {
        fs::write(p, serialize_graph(&inst.graph))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CflResult<()> {
    match cli.command {
        Command::Gen { kind, n, m, rows, palette, coloring, mode, seed, out } => {
            let g = generate(kind, n, m, rows, seed)?.colored(mode.into(), palette, coloring, seed)?;
            write_or_print(out.as_deref(), &serialize_graph(&g))?;
        }
        Command::Label { scheme, graph, f, seed, out } => {
            let g = read_graph(&graph)?;
            if scheme == Scheme::TwoDiam {
                two_fault_warning(&g);
            }
            let labels = LabelFile::build(scheme, &g, f, seed)?;
            print_reports(&labels.size_reports()?);
            if let Some(p) = out {
                fs::write(p, serde_json::to_string(&labels)?)?;
            }
        }
        Command::Query { labels, u, v, faults } => {
            let file: LabelFile = serde_json::from_str(&fs::read_to_string(labels)?)?;
            println!("connected={}", file.connected(u, v, &faults)?);
        }
        Command::Verify { scheme, trials, seed, n, palette, mode, f, queries, summary } => {
            let s = verify(scheme, trials, seed, n, palette, mode.into(), f, queries)?;
            println!("seed={} trials={} skipped={}", s.seed, s.trials, s.skipped);
            println!("total={} agree={} rate={:.6}", s.agreement.total, s.agreement.agree, s.rate);
            for m in &s.agreement.mismatches {
                println!("mismatch={m}");
            }
            if let Some(p) = summary {
                fs::write(p, serde_json::to_string_pretty(&s)?)?;
            }
        }
        Command::Bench { scheme, sizes, family, f, seed, summary } => {
            let mut rows = Vec::new();
            for &n in &sizes {
                let g = match family {
                    Family::Path => gen_path(n).colored(ColorMode::Edge, 0, Coloring::Unique, seed)?,
                    Family::Random => gen_random_connected(n, 2 * n, seed)?.colored(
                        ColorMode::Edge,
                        (n / 8).max(2),
                        Coloring::Uniform,
                        seed,
                    )?,
                };
                let labels = LabelFile::build(scheme, &g, f, seed)?;
                let max = labels.size_reports()?.iter().map(|r| r.max).max().unwrap_or(0);
                println!("n={n} max_bits={max}");
                rows.push((n as f64, max as f64));
            }
            let slope = (rows.len() >= 2).then(|| loglog_slope(&rows));
            if let Some(s) = slope {
                println!("slope={s:.4}");
            }
            if let Some(p) = summary {
                let json = serde_json::json!({ "scheme": scheme, "seed": seed, "points": rows, "slope": slope });
                fs::write(p, serde_json::to_string_pretty(&json)?)?;
            }
        }
        Command::Route { graph, s, t, color, trace } => {
            let g = read_graph(&graph)?;
            let scheme = build_routing_scheme(&g)?;
            let (permanent, mutable) = scheme.header_bits(&scheme.header(t, color));
            let hops = scheme.route(s, t, color)?;
            if trace {
                for h in &hops {
                    println!("hop from={} port={} to={} edge={} color={}", h.from, h.port, h.to, h.edge, h.color);
                }
            }
            println!("delivered={} hops={}", s == t || hops.last().map(|h| h.to) == Some(t), hops.len());
            println!("header_bits={permanent} mutable_bits={mutable}");
        }
        Command::Reduce { graph, alpha, seed, inner, f, u, w, faults } => {
            let g = read_graph(&graph)?;
            let Inner::Exact = inner;
            let scheme = ExactSingleSource { f };
            let labels = build_all_pairs(&g, &scheme, alpha, seed)?;
            println!("rows={} cols={}", labels.grid.rows, labels.grid.cols);
            let sizes: Vec<usize> = (0..g.n()).map(|v| labels.vertex_bits(&scheme, v)).collect();
            println!("{}", SizeReport::from_sizes("vertex", &sizes).to_kv());
            if let (Some(u), Some(w)) = (u, w) {
                println!("connected={}", labels.connected(&scheme, u, w, &faults)?);
            }
        }
        Command::Encode { what } => match what {
            EncodeCommand::Balls { graph, bits, centers, radius, decode_with, out } => {
                let g = read_graph(&graph)?;
                let top = Topology { n: g.n(), edges: g.edges().to_vec() };
                let x = parse_bits(&bits)?;
                let inst = encode_balls(&top, &x, radius.map(|r| (r, centers)))?;
                let decoded = decode_instance(&inst, decode_with, 1, 0)?;
                report_roundtrip(&inst, &x, &decoded, out.as_deref())?;
            }
            EncodeCommand::Spider { f, q, arms, bits, style, decode_with, seed, out } => {
                let x = parse_bits(&bits)?;
                let style = match style {
                    Style::Thick => SpiderStyle::Thick,
                    Style::Subdivided => SpiderStyle::Subdivided,
                    Style::Vertex => SpiderStyle::Vertex,
                };
                let inst = encode_spider(f, q, arms, &x, style)?;
                let decoded = decode_instance(&inst, decode_with, f, seed)?;
                report_roundtrip(&inst, &x, &decoded, out.as_deref())?;
            }
        },
        Command::Oracle { what } => match what {
            OracleCommand::Build { graph, out } => {
                let o = OneFaultOracle::build(&read_graph(&graph)?);
                println!("size_bits={}", o.size_bits());
                fs::write(out, o.encode().into_bytes())?;
            }
            OracleCommand::Query { oracle, u, v, color } => {
                let o = OneFaultOracle::decode(&fs::read(oracle)?)?;
                println!("connected={}", o.connected(u, v, color)?);
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
