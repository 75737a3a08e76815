use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::Args;
use l1spectral::{
    generate_er, generate_ideal, io, perturb, random_permutation, BlockSpec, Result,
};

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// Comma-separated block sizes, each at least 2 (e.g. 2,3).
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Probability of flipping each node pair.
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-list output path (one `u<TAB>v` line per edge).
    #[arg(long)]
    out: PathBuf,
    /// Also write the dense 0/1 matrix to this path.
    #[arg(long)]
    dense_out: Option<PathBuf>,
    /// Relabel nodes by a seeded shuffle so blocks are not contiguous.
    #[arg(long)]
    shuffle: bool,
}

pub fn run(args: &GenerateArgs) -> Result<()> {
    let spec = BlockSpec::from_unsorted(args.sizes.clone())?;
    let ideal = generate_ideal(&spec);
    let noise = generate_er(spec.n(), args.p, args.seed)?;
    let mut graph = perturb(&ideal, &noise)?;
    if args.shuffle {
        // A distinct stream from the edge noise, still pinned to --seed.
        let perm = random_permutation(spec.n(), args.seed.wrapping_add(1));
        graph = graph.permuted(&perm)?;
    }

    io::write_edge_list(&graph, BufWriter::new(File::create(&args.out)?))?;
    if let Some(path) = &args.dense_out {
        io::write_dense(&graph, BufWriter::new(File::create(path)?))?;
    }
    println!(
        "n={} k={} edges={} -> {}",
        spec.n(),
        spec.k(),
        graph.edge_count(),
        args.out.display()
    );
    Ok(())
}
