use std::fs::File;
use std::io::{BufWriter, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rinx_cli::bench::{run_benchmark, summary, write_csv, BenchConfig};
use rinx_cli::input::{load_trajectory, parse_list, InputFormat};
use rinx_core::analytics::{compute_measure, AnalysisParams, Measure};
use rinx_core::export::{analysis_to_json, export_graph, graph_from_json, layout_from_json, layout_to_json, GraphFormat};
use rinx_core::layout::{maxent_stress_layout, LayoutParams};
use rinx_core::rin::build_rin;
use rinx_core::synthetic::{helix_bundle, lattice_protein};
use rinx_core::trajectory::write_traj_json;
use rinx_core::{DistanceCriterion, RinConfig, Trajectory};
use rinx_server::app::{run, AppConfig, AppState};
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(name = "rin", version, about = "Residue interaction networks from MD trajectories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the RIN of one frame and export it (JSON, or GraphML for `.graphml`).
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_input_format)]
        format: Option<InputFormat>,
        #[arg(long, value_parser = parse_criterion, default_value = "min")]
        criterion: DistanceCriterion,
        /// Å
        #[arg(long, default_value_t = 4.5)]
        cutoff: f64,
        #[arg(long, default_value_t = 0)]
        frame: usize,
        #[arg(long)]
        exclude_backbone: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Centrality scores or communities of an exported graph.
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_measure)]
        measure: Measure,
        /// Modularity resolution for plm / leiden.
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Maxent-Stress 3D layout of an exported graph.
    Layout {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Earlier layout document to start from.
        #[arg(long)]
        warm: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve sessions over HTTP and WebSocket until interrupted.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Directory server-side trajectory paths are resolved against.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Static client assets.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
        /// Write the last snapshot of every session here on shutdown.
        #[arg(long)]
        snapshot_dir: Option<PathBuf>,
    },
    /// Phase timings of headless sessions, as CSV.
    Bench {
        /// Trajectory to benchmark; a synthetic protein is generated otherwise.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_parser = parse_input_format)]
        format: Option<InputFormat>,
        /// Residues of the synthetic protein.
        #[arg(long, default_value_t = 1000)]
        synthetic: usize,
        #[arg(long, value_parser = parse_criterion, default_value = "min")]
        criterion: DistanceCriterion,
        #[arg(long, default_value = "4.5,8.0")]
        cutoffs: String,
        #[arg(long, default_value = "degree,closeness,betweenness,pagerank,pagerank-norm,plm,leiden")]
        measures: String,
        #[arg(long, default_value = "0,1")]
        frames: String,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Never warm-start layouts.
        #[arg(long)]
        cold: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a synthetic trajectory as trajectory JSON.
    Synth {
        #[arg(long, value_enum, default_value_t = SynthKind::Lattice)]
        kind: SynthKind,
        #[arg(long, default_value_t = 1000)]
        residues: usize,
        #[arg(long, default_value_t = 4)]
        frames: usize,
        /// Thermal noise (Å).
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthKind {
    Lattice,
    /// Three-helix bundle (73 residues).
    Bundle,
}

fn parse_input_format(s: &str) -> Result<InputFormat, String> {
    s.parse().map_err(|e: rinx_core::Error| e.to_string())
}

fn parse_criterion(s: &str) -> Result<DistanceCriterion, String> {
    s.parse().map_err(|e: rinx_core::Error| e.to_string())
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse().map_err(|e: rinx_core::Error| e.to_string())
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    let mut out = create(path)?;
    out.write_all(text.as_bytes())?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn graph_format(path: &Path) -> GraphFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("graphml") => GraphFormat::GraphMl,
        _ => GraphFormat::JsonGraph,
    }
}

fn build(input: &Path, format: Option<InputFormat>, config: RinConfig, frame: usize, out: &Path) -> anyhow::Result<()> {
    let traj = load_trajectory(input, format).with_context(|| format!("loading {}", input.display()))?;
    let Some(f) = traj.frame(frame) else {
        bail!("frame {frame} out of range ({} frames)", traj.frame_count());
    };
    let rin = build_rin(f, traj.topology(), &config)?;
    tracing::info!(nodes = rin.node_count(), edges = rin.edge_count(), "graph built");
    let mut sink = create(out)?;
    export_graph(&rin, graph_format(out), &mut sink)?;
    sink.flush()?;
    Ok(())
}

fn analyze(graph: &Path, measure: Measure, gamma: f64, seed: u64, out: &Path) -> anyhow::Result<()> {
    let rin = graph_from_json(&read(graph)?)?;
    let params = AnalysisParams { gamma, seed, ..Default::default() };
    let analysis = compute_measure(rin.graph(), measure, &params)?;
    write_text(out, &analysis_to_json(measure, &analysis))
}

fn layout(graph: &Path, seed: u64, warm: Option<&Path>, out: &Path) -> anyhow::Result<()> {
    let rin = graph_from_json(&read(graph)?)?;
    let warm = warm.map(|p| read(p).map(|b| layout_from_json(&b))).transpose()?.transpose()?;
    let params = LayoutParams { seed, ..Default::default() };
    let (layout, report) = maxent_stress_layout(rin.graph(), &params, warm.as_ref())?;
    tracing::info!(rounds = report.rounds, converged = report.converged, warm = report.warm_started, "layout done");
    write_text(out, &layout_to_json(&layout, Some(&params)))
}

async fn serve(addr: SocketAddr, config: AppConfig) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
        tracing::info!("shutting down");
    };
    run(listener, AppState::new(config), shutdown).await?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench(
    trajectory: Trajectory,
    protein_id: String,
    criterion: DistanceCriterion,
    cutoffs: &str,
    measures: &str,
    frames: &str,
    reps: usize,
    cold: bool,
    seed: u64,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let mut config = BenchConfig::new(protein_id);
    config.criterion = criterion;
    config.cutoffs = parse_list(cutoffs).context("--cutoffs")?;
    config.measures = parse_list(measures).context("--measures")?;
    config.frames = parse_list(frames).context("--frames")?;
    config.repetitions = reps;
    config.cold = cold;
    config.layout.seed = seed;
    config.analysis.seed = seed;
    let report = run_benchmark(Arc::new(trajectory), &config)?;
    match out {
        Some(path) => {
            let mut sink = create(path)?;
            write_csv(&report.records, &mut sink)?;
            sink.flush()?;
        }
        None => write_csv(&report.records, std::io::stdout().lock())?,
    }
    eprint!("{}", summary(&report.records));
    for f in &report.failures {
        eprintln!("failed: {:?} cutoff {} {}: {}", f.event_kind, f.cutoff, f.measure, f.error);
    }
    if !report.failures.is_empty() {
        bail!("{} benchmark cells failed", report.failures.len());
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();
    match Cli::parse().command {
        Command::Build { input, format, criterion, cutoff, frame, exclude_backbone, out } => {
            let config = RinConfig { criterion, cutoff, exclude_backbone_neighbors: exclude_backbone };
            build(&input, format, config, frame, &out)
        }
        Command::Analyze { graph, measure, gamma, seed, out } => analyze(&graph, measure, gamma, seed, &out),
        Command::Layout { graph, seed, warm, out } => layout(&graph, seed, warm.as_deref(), &out),
        Command::Serve { port, host, data, static_dir, snapshot_dir } => {
            let config = AppConfig { data_dir: data, static_dir, snapshot_dir, ..Default::default() };
            tokio::runtime::Runtime::new()?.block_on(serve(SocketAddr::new(host, port), config))
        }
        Command::Bench { input, format, synthetic, criterion, cutoffs, measures, frames, reps, out, cold, seed } => {
            let (trajectory, id) = match input {
                Some(path) => {
                    let id = path.file_stem().map_or_else(|| "input".into(), |s| s.to_string_lossy().into_owned());
                    (load_trajectory(&path, format).with_context(|| format!("loading {}", path.display()))?, id)
                }
                None => (lattice_protein(synthetic, 4, 0.5, seed)?, format!("synthetic-{synthetic}")),
            };
            bench(trajectory, id, criterion, &cutoffs, &measures, &frames, reps, cold, seed, out.as_deref())
        }
        Command::Synth { kind, residues, frames, sigma, seed, out } => {
            let traj = match kind {
                SynthKind::Lattice => lattice_protein(residues, frames, sigma, seed)?,
                SynthKind::Bundle => helix_bundle(frames, sigma, seed)?,
            };
            write_text(&out, &write_traj_json(&traj))
        }
    }
}
