use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::Args;
use l1spectral::bench::{write_curves_csv, write_trials_csv};
use l1spectral::{
    aggregate, run_experiment_with_jobs, Algorithm, Error, ExperimentPlan, Result,
};

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Plan file of `key=value` lines; keys are p_grid, trials, k_min,
    /// k_max, size_min, size_max, algorithms, seed. Flags override it.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// 20 trials per grid point instead of 100.
    #[arg(long, conflicts_with = "trials")]
    quick: bool,
    /// Comma-separated edge-flip probabilities.
    #[arg(long, value_delimiter = ',')]
    p_grid: Option<Vec<f64>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    k_min: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    size_min: Option<usize>,
    #[arg(long)]
    size_max: Option<usize>,
    /// Comma-separated subset of: spectral, l1spectral.
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    algorithms: Option<Vec<Algorithm>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all available cores). Any value yields
    /// the same records.
    #[arg(long)]
    jobs: Option<usize>,
    /// Directory receiving trials.csv and curves.csv.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Write measured per-trial runtimes; off by default so runs with
    /// equal seeds stay byte-identical.
    #[arg(long)]
    timings: bool,
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

pub fn run(args: &BenchArgs) -> Result<()> {
    let mut plan = ExperimentPlan::standard(0);
    if let Some(path) = &args.plan {
        apply_plan_file(&mut plan, &std::fs::read_to_string(path)?)?;
    }
    if let Some(p_grid) = &args.p_grid {
        plan.p_grid = p_grid.clone();
    }
    if let Some(trials) = args.trials {
        plan.trials = trials;
    }
    if let Some(k_min) = args.k_min {
        plan.k_range.0 = k_min;
    }
    if let Some(k_max) = args.k_max {
        plan.k_range.1 = k_max;
    }
    if let Some(size_min) = args.size_min {
        plan.size_range.0 = size_min;
    }
    if let Some(size_max) = args.size_max {
        plan.size_range.1 = size_max;
    }
    if let Some(algorithms) = &args.algorithms {
        plan.algorithms = algorithms.clone();
    }
    if let Some(seed) = args.seed {
        plan.base_seed = seed;
    }
    if args.quick {
        plan = plan.quick();
    }

    let jobs = args.jobs.unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    });
    let records = run_experiment_with_jobs(&plan, jobs)?;
    let points = aggregate(&records)?;

    std::fs::create_dir_all(&args.out_dir)?;
    let trials_path = args.out_dir.join("trials.csv");
    write_trials_csv(
        &records,
        BufWriter::new(File::create(&trials_path)?),
        args.timings,
    )?;
    let curves_path = args.out_dir.join("curves.csv");
    write_curves_csv(&points, BufWriter::new(File::create(&curves_path)?))?;
    println!(
        "wrote {} ({} trials) and {} ({} curve points)",
        trials_path.display(),
        records.len(),
        curves_path.display(),
        points.len()
    );
    Ok(())
}

fn apply_plan_file(plan: &mut ExperimentPlan, text: &str) -> Result<()> {
    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: idx + 1,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected key=value, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "p_grid" => {
                plan.p_grid = value
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| parse_err(format!("p_grid: {e}")))?;
            }
            "trials" => plan.trials = parse_field(value, "trials", idx)?,
            "k_min" => plan.k_range.0 = parse_field(value, "k_min", idx)?,
            "k_max" => plan.k_range.1 = parse_field(value, "k_max", idx)?,
            "size_min" => plan.size_range.0 = parse_field(value, "size_min", idx)?,
            "size_max" => plan.size_range.1 = parse_field(value, "size_max", idx)?,
            "seed" => plan.base_seed = parse_field(value, "seed", idx)?,
            "algorithms" => {
                plan.algorithms = value
                    .split(',')
                    .map(|t| t.trim().parse::<Algorithm>())
                    .collect::<Result<_>>()
                    .map_err(|e| parse_err(e.to_string()))?;
            }
            other => return Err(parse_err(format!("unknown plan key {other:?}"))),
        }
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(value: &str, key: &str, idx: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| Error::Parse {
        line: idx + 1,
        message: format!("{key}: {e}"),
    })
}
