use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use l1spectral::{
    indicators_to_partition, io, l1_spectral_with_report, select_representatives,
    spectral_clustering, AdjacencyMatrix, Algorithm, Error, L1Config, LaplacianKind, Partition,
    Representatives, Result, SolveStatus, SpectralConfig,
};

#[derive(Args, Debug)]
pub struct ClusterArgs {
    /// Graph file: edge list (`u<TAB>v` lines) or dense matrix (node
    /// count, then 0/1 rows); the format is detected from the first line.
    #[arg(long)]
    input: PathBuf,
    /// Node count override for edge lists whose trailing nodes are
    /// isolated (otherwise inferred as max id + 1).
    #[arg(long)]
    n: Option<usize>,
    /// spectral or l1spectral.
    #[arg(long, value_parser = parse_algorithm, default_value = "l1spectral")]
    algo: Algorithm,
    /// Number of clusters.
    #[arg(long)]
    k: usize,
    /// Comma-separated representative node per cluster; auto-selected
    /// from a rough partition when omitted (l1spectral only).
    #[arg(long, value_delimiter = ',')]
    reps: Option<Vec<usize>>,
    /// Laplacian for the spectral baseline: unnormalized, symmetric, or
    /// randomwalk.
    #[arg(long, value_parser = parse_laplacian, default_value = "unnormalized")]
    laplacian: LaplacianKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Labels output path (`node_id<TAB>label` lines).
    #[arg(long)]
    out: PathBuf,
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_laplacian(s: &str) -> std::result::Result<LaplacianKind, String> {
    match s {
        "unnormalized" => Ok(LaplacianKind::Unnormalized),
        "symmetric" => Ok(LaplacianKind::Symmetric),
        "randomwalk" | "random-walk" => Ok(LaplacianKind::RandomWalk),
        other => Err(format!(
            "unknown Laplacian {other:?} (expected unnormalized, symmetric, or randomwalk)"
        )),
    }
}

pub fn run(args: &ClusterArgs) -> Result<()> {
    if args.k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let text = std::fs::read_to_string(&args.input)?;
    let graph = read_graph(&text, args.n)?;

    match args.algo {
        Algorithm::Spectral => {
            let cfg = SpectralConfig {
                laplacian: args.laplacian,
                seed: args.seed,
                ..SpectralConfig::new(args.k)
            };
            let labels = spectral_clustering::<f64>(&graph, &cfg)?;
            write_labels(&labels, &args.out)?;
            println!(
                "n={} k={} algorithm=spectral labels={}",
                graph.n(),
                args.k,
                args.out.display()
            );
        }
        Algorithm::L1Spectral => {
            let reps = match &args.reps {
                Some(ids) => Representatives::new(ids.clone())?,
                None => select_representatives(&graph, args.k)?,
            };
            let out = l1_spectral_with_report(&graph, args.k, &reps, &L1Config::default())?;
            let failed: Vec<usize> = out
                .columns
                .iter()
                .enumerate()
                .filter(|(_, c)| c.status != SolveStatus::Optimal)
                .map(|(j, _)| j)
                .collect();
            if failed.len() == out.columns.len() {
                return Err(Error::SolverFailure {
                    column: failed[0],
                    status: out.columns[failed[0]].status,
                });
            }
            if !failed.is_empty() {
                eprintln!(
                    "warning: solver finished non-optimal on column(s) {failed:?}; \
                     labels come from the best iterates"
                );
            }

            let labels = indicators_to_partition(&out.indicators);
            write_labels(&labels, &args.out)?;
            let raw_path = sidecar_path(&args.out);
            write_raw_matrix(&out.indicators, &raw_path)?;
            println!(
                "n={} k={} algorithm=l1spectral reps={:?} labels={} raw={}",
                graph.n(),
                args.k,
                reps.indices(),
                args.out.display(),
                raw_path.display()
            );
        }
    }
    Ok(())
}

/// A lone leading integer means a dense matrix; anything else is read as
/// an edge list.
fn read_graph(text: &str, n: Option<usize>) -> Result<AdjacencyMatrix> {
    let first = text.lines().find(|l| !l.trim().is_empty());
    match first {
        Some(line) if line.split_whitespace().count() == 1 => io::read_dense(text.as_bytes()),
        _ => io::read_edge_list(text.as_bytes(), n),
    }
}

fn write_labels(labels: &Partition, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for (node, label) in labels.labels().iter().enumerate() {
        writeln!(w, "{node}\t{label}")?;
    }
    Ok(())
}

/// `labels.tsv` gets its raw indicator values next to it as
/// `labels.raw.tsv`.
fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("raw.tsv")
}

fn write_raw_matrix(f: &l1spectral::IndicatorMatrix64, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let raw = f.raw();
    for i in 0..f.n() {
        let row: Vec<String> = (0..f.k()).map(|j| raw[[i, j]].to_string()).collect();
        writeln!(w, "{}", row.join("\t"))?;
    }
    Ok(())
}
