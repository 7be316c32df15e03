use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use locness::io::{self as files, CoverJson, IoError, LabeledGraph};
use locness::pipeline::detect_checked;
use locness::scores::score;
use locness::sweep::{run_sweep, summarize, CsvSink, SweepConfig};
use locness_core::detect::{DetectConfig, Preference, TiePolicy};
use locness_core::flooding::flooding_reference;
use locness_core::{generate, EngineStats, GenParams};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "locness",
    version,
    about = "Overlapping community detection by local leader selection"
)]
struct Cli {
    /// Seed for tie-breaking, generation and sweeps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// How ties between equal-degree leaders are broken.
    #[arg(long, global = true, value_enum)]
    tie_policy: Option<TieArg>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieArg {
    Random,
    LowestId,
}

impl From<TieArg> for TiePolicy {
    fn from(t: TieArg) -> Self {
        match t {
            TieArg::Random => TiePolicy::Random,
            TieArg::LowestId => TiePolicy::LowestId,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PrefArg {
    Agreement,
    Jaccard,
}

impl From<PrefArg> for Preference {
    fn from(p: PrefArg) -> Self {
        match p {
            PrefArg::Agreement => Preference::Agreement,
            PrefArg::Jaccard => Preference::Jaccard,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Detect overlapping communities in an edge list.
    Detect {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = PrefArg::Agreement)]
        pref: PrefArg,
        /// Cover output (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Engine statistics as JSON.
        #[arg(long)]
        stats_out: Option<PathBuf>,
    },
    /// Score a detected cover against a reference cover.
    Eval {
        detected: PathBuf,
        truth: PathBuf,
        graph: PathBuf,
    },
    /// Generate a planted-overlap benchmark graph with its ground truth.
    Gen {
        /// JSON file of generator parameters; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        avg_degree: Option<f64>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        size_min: Option<usize>,
        #[arg(long)]
        size_max: Option<usize>,
        #[arg(long)]
        o_n: Option<f64>,
        #[arg(long)]
        o_m: Option<usize>,
        #[arg(long)]
        edges_out: PathBuf,
        #[arg(long)]
        truth_out: PathBuf,
    },
    /// Run a parameter sweep and write one CSV row per detection run.
    Sweep {
        config: PathBuf,
        /// 3 instances x 3 seeds per cell.
        #[arg(long)]
        fast: bool,
        /// CSV output (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graph statistics, optionally with message counts.
    Stats {
        graph: PathBuf,
        /// Also count detection and label-flooding messages.
        #[arg(long)]
        flood: bool,
    },
}

enum Failure {
    Usage(String),
    Io(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Io(_) => 2,
            Self::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Io(m) | Self::Runtime(m) => m,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

fn runtime<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Runtime(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("locness: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => files::write_file(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn load_graph(path: &Path) -> Result<LabeledGraph, Failure> {
    let g = files::load_edge_list(path)?;
    if g.report.duplicate_edges + g.report.self_loops > 0 {
        eprintln!(
            "locness: warning: dropped {} duplicate edges and {} self-loops",
            g.report.duplicate_edges, g.report.self_loops
        );
    }
    let diag = g.graph.validate().map_err(runtime)?;
    for w in &diag.warnings {
        eprintln!("locness: warning: {w}");
    }
    Ok(g)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let seed = cli.seed.unwrap_or(0);
    let tie_policy = cli.tie_policy.map_or(TiePolicy::default(), TiePolicy::from);
    match cli.command {
        Command::Detect {
            graph,
            pref,
            out,
            stats_out,
        } => {
            let g = load_graph(&graph)?;
            let cfg = DetectConfig {
                seed,
                preference: pref.into(),
                tie_policy,
                ..DetectConfig::default()
            };
            let d = detect_checked(&g.graph, &cfg).map_err(runtime)?;
            let text = match cli.format {
                Format::Text => files::format_communities(&g, &d.cover),
                Format::Json => to_json(&CoverJson::new(&g, &d.cover)),
            };
            emit(out.as_deref(), &text)?;
            if let Some(p) = stats_out {
                files::write_file(&p, &to_json(&d.stats))?;
            }
            Ok(())
        }
        Command::Eval { detected, truth, graph } => {
            let g = load_graph(&graph)?;
            let detected = files::load_cover(&g, &detected)?;
            let truth = files::load_cover(&g, &truth)?;
            let s = score(&detected, &truth).map_err(runtime)?;
            let text = match cli.format {
                Format::Json => to_json(&s),
                Format::Text => format!(
                    "nmi {:.6}\nomega {:.6}\nprecision {:.6}\nrecall {:.6}\nf1 {:.6}\n",
                    s.nmi, s.omega, s.precision, s.recall, s.f1
                ),
            };
            emit(None, &text)
        }
        Command::Gen {
            config,
            n,
            mu,
            avg_degree,
            max_degree,
            size_min,
            size_max,
            o_n,
            o_m,
            edges_out,
            truth_out,
        } => {
            let mut p: GenParams = match &config {
                Some(path) => serde_json::from_str(&files::read_file(path)?)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => GenParams::default(),
            };
            macro_rules! set {
                ($($flag:ident => $field:expr),*) => {$(if let Some(v) = $flag { $field = v; })*};
            }
            set!(n => p.n, mu => p.mu, avg_degree => p.avg_degree, max_degree => p.max_degree,
                 size_min => p.size_range.0, size_max => p.size_range.1, o_n => p.o_n, o_m => p.o_m);
            if let Some(s) = cli.seed {
                p.seed = s;
            }
            p.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let (graph, truth) = generate(&p).map_err(runtime)?;
            let g = LabeledGraph::identity(graph);
            let mut edges = Vec::new();
            files::write_edge_list(&g, &mut edges)?;
            files::write_file(&edges_out, std::str::from_utf8(&edges).expect("ascii"))?;
            files::write_file(&truth_out, &files::format_communities(&g, &truth))?;
            let summary = GenSummary {
                params: &p,
                vertices: g.graph.vertex_count(),
                edges: g.graph.edge_count(),
                mean_degree: g.graph.mean_degree(),
                communities: truth.community_count(),
                overlapping: truth.overlapping_vertices().len(),
            };
            let text = match cli.format {
                Format::Json => to_json(&summary),
                Format::Text => format!(
                    "vertices {}\nedges {}\nmean_degree {:.3}\ncommunities {}\noverlapping {}\n",
                    summary.vertices, summary.edges, summary.mean_degree, summary.communities, summary.overlapping
                ),
            };
            emit(None, &text)
        }
        Command::Sweep { config, fast, out } => {
            let text = files::read_file(&config)?;
            let mut cfg: SweepConfig =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
            if let Some(s) = cli.seed {
                cfg.master_seed = s;
            }
            if let Some(t) = cli.tie_policy {
                cfg.tie_policy = t.into();
            }
            if fast {
                cfg = cfg.fast();
            }
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let sink: Box<dyn Write> = match &out {
                Some(p) => Box::new(fs::File::create(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?),
                None => Box::new(io::stdout()),
            };
            let mut csv = CsvSink::new(sink).map_err(|e| Failure::Io(e.to_string()))?;
            let mut write_error = None;
            let records = run_sweep(&cfg, |r| {
                if write_error.is_none() {
                    write_error = csv.append(r).err();
                }
            })
            .map_err(|e| Failure::Usage(e.to_string()))?;
            if let Some(e) = write_error {
                return Err(Failure::Io(e.to_string()));
            }
            let summary = summarize(&records);
            // the CSV may be on stdout, so the summary goes to stderr
            match cli.format {
                Format::Json => eprint!("{}", to_json(&summary)),
                Format::Text => {
                    for c in &summary {
                        eprintln!(
                            "{}={} runs={} failures={} nmi={:.4} omega={:.4} recall={:.4} f1={:.4}",
                            c.parameter, c.value, c.runs, c.failures, c.nmi, c.omega, c.recall, c.f1
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Stats { graph, flood } => {
            let g = load_graph(&graph)?;
            let diag = g.graph.validate().map_err(runtime)?;
            let mut stats = GraphStats {
                vertices: g.graph.vertex_count(),
                edges: g.graph.edge_count(),
                mean_degree: g.graph.mean_degree(),
                components: diag.components,
                isolated_vertices: diag.isolated_vertices,
                duplicate_edges_dropped: g.report.duplicate_edges,
                self_loops_dropped: g.report.self_loops,
                detect_messages: None,
                flooding_messages: None,
                flooding_label_messages: None,
            };
            if flood {
                let cfg = DetectConfig {
                    seed,
                    tie_policy,
                    ..DetectConfig::default()
                };
                let d = detect_checked(&g.graph, &cfg).map_err(runtime)?;
                let f = flooding_reference(&g.graph, g.graph.vertex_count() + 2).map_err(runtime)?;
                stats.detect_messages = Some(d.stats);
                stats.flooding_messages = Some(f.engine);
                stats.flooding_label_messages = Some(f.label_messages);
            }
            let text = match cli.format {
                Format::Json => to_json(&stats),
                Format::Text => stats.to_text(),
            };
            emit(None, &text)
        }
    }
}

#[derive(Serialize)]
struct GenSummary<'a> {
    params: &'a GenParams,
    vertices: usize,
    edges: usize,
    mean_degree: f64,
    communities: usize,
    overlapping: usize,
}

#[derive(Serialize)]
struct GraphStats {
    vertices: usize,
    edges: usize,
    mean_degree: f64,
    components: usize,
    isolated_vertices: usize,
    duplicate_edges_dropped: usize,
    self_loops_dropped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    detect_messages: Option<EngineStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flooding_messages: Option<EngineStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flooding_label_messages: Option<u64>,
}

impl GraphStats {
    fn to_text(&self) -> String {
        let mut s = format!(
            "vertices {}\nedges {}\nmean_degree {:.3}\ncomponents {}\nisolated_vertices {}\nduplicate_edges_dropped {}\nself_loops_dropped {}\n",
            self.vertices,
            self.edges,
            self.mean_degree,
            self.components,
            self.isolated_vertices,
            self.duplicate_edges_dropped,
            self.self_loops_dropped
        );
        if let (Some(d), Some(f)) = (&self.detect_messages, &self.flooding_messages) {
            s.push_str(&format!(
                "detect_messages {}\nflooding_messages {}\nflooding_label_messages {}\nflooding_ratio {:.2}\n",
                d.total_messages,
                f.total_messages,
                self.flooding_label_messages.unwrap_or(0),
                f.total_messages as f64 / d.total_messages.max(1) as f64
            ));
        }
        s
    }
}
