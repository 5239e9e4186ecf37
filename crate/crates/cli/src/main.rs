//! `gwac`: generate graphs, compress and decompress them, and run
//! rate–distortion sweeps.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on bad input data or a
//! bad bitstream (the message names the failing section).

mod config;

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gwac::codec::{compress, decompress_with_transform, Bitstream, CodecConfig};
use gwac::eval::{
    cluster_consistency, diffusion_snr, generate, rd_sweep, snr, spectral_clustering, to_json, write_csv, Diffusion,
    DiffusionConfig, GenParams, GenSpec, GraphKind, Method, MetricReport, SweepConfig,
};
use gwac::graph::{read_edge_list, write_edge_list};
use gwac::{OperatorMode, UGraph};

use config::FileConfig;

const DEFAULT_POINTS: [f64; 8] = [0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0];

#[derive(Parser)]
#[command(name = "gwac", version, about = "Weighted adjacency matrix codec")]
struct Cli {
    /// TOML file with default flag values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded synthetic graph as an edge list.
    Generate(GenerateArgs),
    /// Code an edge list into a bitstream.
    Compress(CompressArgs),
    /// Decode a bitstream back into an edge list.
    Decompress(DecompressArgs),
    /// Compare a bitstream's reconstruction against a reference graph.
    Eval(EvalArgs),
    /// Run every method over a grid of operating points.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// sensor, community, knn or er.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability: ER p, or the intra-block probability for community.
    #[arg(long)]
    p: Option<f64>,
    /// Neighbor count for sensor and knn.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CodecArgs {
    /// line or edge.
    #[arg(long)]
    mode: Option<String>,
    /// Fraction of transform coefficients kept.
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    /// Filter order (even).
    #[arg(long = "K")]
    filter_order: Option<usize>,
    /// Maximum number of Harary levels.
    #[arg(long)]
    mmax: Option<usize>,
}

#[derive(Args)]
struct CompressArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    codec: CodecArgs,
}

#[derive(Args)]
struct DecompressArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MetricArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Cluster count for the consistency metric; 0 skips it.
    #[arg(long)]
    clusters: Option<usize>,
    /// Diffusion trials; 0 skips the metric.
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    /// Bitstream to evaluate.
    #[arg(long = "in")]
    input: PathBuf,
    /// Reference edge list.
    #[arg(long)]
    graph: PathBuf,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    metrics: MetricArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Generator kind (generated with --n and --seed) or an edge-list path.
    #[arg(long)]
    graph: String,
    /// Comma-separated method names.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Comma-separated operating points ρ.
    #[arg(long, value_delimiter = ',')]
    points: Option<Vec<f64>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "K")]
    filter_order: Option<usize>,
    #[arg(long)]
    mmax: Option<usize>,
    #[arg(long)]
    step: Option<f64>,
    /// Report path; a `<out>.refs.json` sidecar holds the reference sizes.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    metrics: MetricArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl From<gwac::Error> for Failure {
    fn from(e: gwac::Error) -> Self {
        match e {
            gwac::Error::InvalidConfig(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<gwac::DecodeError> for Failure {
    fn from(e: gwac::DecodeError) -> Self {
        Failure::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = FileConfig::load(cli.config.as_deref()).map_err(Failure::Usage)?;
    match cli.command {
        Command::Generate(a) => cmd_generate(a, &file),
        Command::Compress(a) => cmd_compress(a, &file),
        Command::Decompress(a) => cmd_decompress(a),
        Command::Eval(a) => cmd_eval(a, &file),
        Command::Sweep(a) => cmd_sweep(a, &file),
    }
}

fn parse_kind(name: &str) -> Result<GraphKind, Failure> {
    GraphKind::from_name(name).ok_or_else(|| Failure::Usage(format!("unknown graph kind `{name}`")))
}

fn parse_mode(name: &str) -> Result<OperatorMode, Failure> {
    match name {
        "line" => Ok(OperatorMode::Line),
        "edge" => Ok(OperatorMode::Edge),
        _ => Err(Failure::Usage(format!("unknown mode `{name}`, expected line or edge"))),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn parse_format(name: &str) -> Result<Format, Failure> {
    match name {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => Err(Failure::Usage(format!("unknown format `{name}`, expected csv or json"))),
    }
}

fn gen_spec(kind: GraphKind, n: usize, p: Option<f64>, k: Option<usize>, seed: u64) -> GenSpec {
    let mut params = GenParams::default();
    if let Some(p) = p {
        match kind {
            GraphKind::Community => params.p_in = p,
            _ => params.er_p = p,
        }
    }
    if let Some(k) = k {
        params.sensor_k = k;
        params.knn_k = k;
    }
    GenSpec {
        params,
        ..GenSpec::new(kind, seed).with_n(n)
    }
}

fn cmd_generate(a: GenerateArgs, file: &FileConfig) -> Result<(), Failure> {
    let kind_name = a
        .kind
        .or_else(|| file.kind.clone())
        .ok_or_else(|| Failure::Usage("generate needs --kind".into()))?;
    let spec = gen_spec(
        parse_kind(&kind_name)?,
        a.n.or(file.n).unwrap_or(500),
        a.p.or(file.p),
        a.k.or(file.k),
        a.seed.or(file.seed).unwrap_or(0),
    );
    let g = generate(&spec)?;
    write_atomic(&a.out, |w| Ok(write_edge_list(&g, w)?))
}

fn read_graph(path: &Path) -> Result<UGraph, Failure> {
    let f = File::open(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    read_edge_list(BufReader::new(f)).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn read_bitstream(path: &Path) -> Result<Bitstream, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    Ok(Bitstream::from_bytes(&bytes)?)
}

fn cmd_compress(a: CompressArgs, file: &FileConfig) -> Result<(), Failure> {
    let defaults = CodecConfig::default();
    let mode = match a.codec.mode.as_deref().or(file.mode.as_deref()) {
        Some(m) => parse_mode(m)?,
        None => defaults.operator_mode,
    };
    let cfg = CodecConfig {
        quant_step: a.codec.step.or(file.step).unwrap_or(defaults.quant_step),
        keep_fraction: a.codec.rho.or(file.rho).unwrap_or(defaults.keep_fraction),
        operator_mode: mode,
        filter_order: a.codec.filter_order.or(file.filter_order).unwrap_or(defaults.filter_order),
        m_max: a.codec.mmax.or(file.mmax).unwrap_or(defaults.m_max),
        format_version: defaults.format_version,
    };
    cfg.validate()?;
    let g = read_graph(&a.input)?;
    let b = compress(&g, &cfg)?;
    write_atomic(&a.out, |w| Ok(w.write_all(&b.to_bytes())?))
}

fn cmd_decompress(a: DecompressArgs) -> Result<(), Failure> {
    let b = read_bitstream(&a.input)?;
    let g = decompress_with_transform(&b)?.graph;
    write_atomic(&a.out, |w| Ok(write_edge_list(&g, w)?))
}

struct MetricSettings {
    seed: u64,
    format: Format,
    clusters: Option<usize>,
    diffusion: Option<DiffusionConfig>,
}

fn metric_settings(a: &MetricArgs, file: &FileConfig, n: usize) -> Result<MetricSettings, Failure> {
    let format = parse_format(a.format.as_deref().or(file.format.as_deref()).unwrap_or("csv"))?;
    let clusters = match a.clusters.or(file.clusters).unwrap_or(5) {
        0 => None,
        k => Some(k),
    };
    let defaults = DiffusionConfig::default();
    let diffusion = match a.trials.or(file.trials).unwrap_or(defaults.trials) {
        0 => None,
        trials => Some(DiffusionConfig { trials, ..defaults }),
    };
    if diffusion.is_some_and(|d| n < d.ones) {
        return Err(Failure::Usage(format!(
            "diffusion needs at least {} nodes (graph has {n}); pass --trials 0 to skip it",
            defaults.ones
        )));
    }
    Ok(MetricSettings {
        seed: a.seed.or(file.seed).unwrap_or(0),
        format,
        clusters,
        diffusion,
    })
}

fn cmd_eval(a: EvalArgs, file: &FileConfig) -> Result<(), Failure> {
    let reference = read_graph(&a.graph)?;
    let b = read_bitstream(&a.input)?;
    let decoded = decompress_with_transform(&b)?;
    if decoded.graph.edges() != reference.edges() || decoded.graph.node_count() != reference.node_count() {
        return Err(Failure::Data("bitstream topology differs from the reference graph".into()));
    }
    let s = metric_settings(&a.metrics, file, reference.node_count())?;
    let w = reference.weighted_adjacency().to_dense();
    let rec = decoded.graph.weighted_adjacency().to_dense();
    let diffusion_snr_db = match s.diffusion {
        Some(cfg) => Some(diffusion_snr(
            &Diffusion::from_weights(&w)?,
            &Diffusion::from_weights(&rec)?,
            cfg,
            s.seed,
        )?),
        None => None,
    };
    let consistency = match s.clusters {
        Some(k) => Some(cluster_consistency(
            &spectral_clustering(&w, k, s.seed)?,
            &spectral_clustering(&rec, k, s.seed)?,
        )?),
        None => None,
    };
    let method = match decoded.config.operator_mode {
        OperatorMode::Line => Method::ProposedLine,
        OperatorMode::Edge => Method::ProposedEdge,
    };
    let report = MetricReport {
        method: method.name().to_string(),
        operating_point: decoded.config.keep_fraction,
        bytes_topology: b.header_bytes() + b.topology_bytes(),
        bytes_weights: b.weights_bytes(),
        bytes_total: b.total_bytes(),
        snr_db: snr(w.as_slice(), rec.as_slice())?,
        diffusion_snr_db,
        cluster_consistency: consistency,
        seed: s.seed,
    };
    let render = |out: &mut dyn Write| -> Result<(), Failure> {
        match s.format {
            Format::Csv => write_csv(std::slice::from_ref(&report), out)?,
            Format::Json => writeln!(out, "{}", to_json(&report)?).map_err(gwac::Error::from)?,
        }
        Ok(())
    };
    match &a.out {
        Some(path) => write_atomic(path, |w| render(w)),
        None => render(&mut std::io::stdout().lock()),
    }
}

fn cmd_sweep(a: SweepArgs, file: &FileConfig) -> Result<(), Failure> {
    let seed = a.metrics.seed.or(file.seed).unwrap_or(0);
    let g = match GraphKind::from_name(&a.graph) {
        Some(kind) => generate(&gen_spec(kind, a.n.or(file.n).unwrap_or(500), file.p, file.k, seed))?,
        None => read_graph(Path::new(&a.graph))?,
    };
    let method_names = a
        .methods
        .or_else(|| file.methods.clone())
        .unwrap_or_else(|| Method::ALL.iter().map(|m| m.name().to_string()).collect());
    let methods = method_names
        .iter()
        .map(|name| Method::from_name(name).ok_or_else(|| Failure::Usage(format!("unknown method `{name}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let points = a.points.or_else(|| file.points.clone()).unwrap_or(DEFAULT_POINTS.to_vec());
    let s = metric_settings(&a.metrics, file, g.node_count())?;
    let defaults = SweepConfig::default();
    let cfg = SweepConfig {
        quant_step: a.step.or(file.step).unwrap_or(defaults.quant_step),
        filter_order: a.filter_order.or(file.filter_order).unwrap_or(defaults.filter_order),
        m_max: a.mmax.or(file.mmax).unwrap_or(defaults.m_max),
        diffusion: s.diffusion,
        clusters: s.clusters,
        kmeans: defaults.kmeans,
    };
    CodecConfig {
        quant_step: cfg.quant_step,
        filter_order: cfg.filter_order,
        m_max: cfg.m_max,
        ..CodecConfig::default()
    }
    .validate()?;
    let report = rd_sweep(&g, &methods, &points, &cfg, seed)?;
    write_atomic(&a.out, |w| {
        match s.format {
            Format::Csv => write_csv(&report.rows, w)?,
            Format::Json => writeln!(w, "{}", to_json(&report.rows)?).map_err(gwac::Error::from)?,
        }
        Ok(())
    })?;
    let mut sidecar = a.out.clone().into_os_string();
    sidecar.push(".refs.json");
    write_atomic(Path::new(&sidecar), |w| {
        writeln!(w, "{}", to_json(&report.references)?).map_err(gwac::Error::from)?;
        Ok(())
    })
}

/// Writes through a temporary file in the target directory, then renames
/// it over `path`, so readers never see a partial file.
fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> Result<(), Failure>) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::Data(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    // Temporary files start owner-only; outputs are ordinary files.
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(io)?;
    }
    {
        let mut w = std::io::BufWriter::new(tmp.as_file_mut());
        fill(&mut w)?;
        w.flush().map_err(io)?;
    }
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
