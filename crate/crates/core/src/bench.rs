//! Robustness benchmark: sweep the edge-flip probability over an
//! ensemble of random block graphs and score both clustering algorithms
//! by the fraction of correctly assigned nodes.
//!
//! Every trial derives its own seed from `(base_seed, grid index, trial
//! index)`, so results are bit-identical across runs and across worker
//! counts; parallel execution only changes who computes which trial.

use std::io::{Read, Write};
use std::time::Instant;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::assign::min_cost_assignment;
use crate::cluster::{
    indicators_to_partition, l1_spectral_with_report, select_representatives,
    spectral_clustering, L1Config, SpectralConfig,
};
use crate::error::{Error, Result};
use crate::graph::{generate_er, generate_ideal, perturb, BlockSpec, Partition};

/// The two competing algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Spectral,
    L1Spectral,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Spectral => write!(f, "spectral"),
            Algorithm::L1Spectral => write!(f, "l1spectral"),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Algorithm::Spectral),
            "l1spectral" | "l1" => Ok(Algorithm::L1Spectral),
            other => Err(Error::invalid(format!(
                "unknown algorithm {other:?} (expected spectral or l1spectral)"
            ))),
        }
    }
}

/// Parameters of a benchmark sweep.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    /// Edge-flip probabilities to sweep, each in [0,1].
    pub p_grid: Vec<f64>,
    /// Graphs per grid point.
    pub trials: usize,
    /// Inclusive bounds for the number of blocks.
    pub k_range: (usize, usize),
    /// Inclusive bounds for each block size (at least 2).
    pub size_range: (usize, usize),
    pub algorithms: Vec<Algorithm>,
    pub base_seed: u64,
}

impl ExperimentPlan {
    /// The reference protocol: p from 0 to 0.4 in steps of 0.05, 100
    /// trials per point, 5..=10 blocks of size 10..=20, both algorithms.
    pub fn standard(base_seed: u64) -> Self {
        ExperimentPlan {
            p_grid: (0..=8).map(|i| i as f64 / 20.0).collect(),
            trials: 100,
            k_range: (5, 10),
            size_range: (10, 20),
            algorithms: vec![Algorithm::Spectral, Algorithm::L1Spectral],
            base_seed,
        }
    }

    /// Same grid at 20 trials per point.
    pub fn quick(mut self) -> Self {
        self.trials = 20;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_grid.is_empty() {
            return Err(Error::invalid("p grid is empty"));
        }
        if let Some(&p) = self
            .p_grid
            .iter()
            .find(|p| !p.is_finite() || !(0.0..=1.0).contains(*p))
        {
            return Err(Error::invalid(format!("probability {p} outside [0,1]")));
        }
        if self.trials == 0 {
            return Err(Error::invalid("need at least one trial per grid point"));
        }
        let (k_min, k_max) = self.k_range;
        if k_min == 0 || k_min > k_max {
            return Err(Error::invalid(format!(
                "invalid cluster-count range {k_min}..={k_max}"
            )));
        }
        let (c_min, c_max) = self.size_range;
        if c_min < 2 || c_min > c_max {
            return Err(Error::invalid(format!(
                "invalid block-size range {c_min}..={c_max}"
            )));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("no algorithms selected"));
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].contains(a) {
                return Err(Error::invalid(format!("algorithm {a} listed twice")));
            }
        }
        Ok(())
    }
}

/// One (graph, algorithm) evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub p: f64,
    pub algorithm: Algorithm,
    /// Trial index within the grid point.
    pub trial: usize,
    /// The derived seed this trial's randomness came from.
    pub seed: u64,
    pub k: usize,
    pub n: usize,
    pub sizes: Vec<usize>,
    /// 1 − misassignment against the planted blocks.
    pub correct_fraction: f64,
    /// Wall-clock time of the algorithm run (measured; see
    /// [`write_trials_csv`] for how it is serialized).
    pub runtime_ms: u64,
}

/// Aggregated curve sample for one (p, algorithm) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub p: f64,
    pub algorithm: Algorithm,
    pub mean_correct: f64,
    pub std_correct: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub n_trials: usize,
}

/// Fraction of nodes whose predicted label differs from the true label
/// under the best bijection between label sets.
///
/// Computes the k×k confusion matrix (padded square over the larger
/// label count) and maximizes the matched overlap with the assignment
/// solver, then normalizes by n.
pub fn misassignment(truth: &Partition, pred: &Partition) -> Result<f64> {
    let n = truth.n();
    if n != pred.n() {
        return Err(Error::invalid(format!(
            "partition sizes differ: {n} vs {}",
            pred.n()
        )));
    }
    let k = truth.k().max(pred.k());
    let mut neg_confusion = Array2::<f64>::zeros((k, k));
    for i in 0..n {
        neg_confusion[[truth.labels()[i], pred.labels()[i]]] -= 1.0;
    }
    let (_, neg_overlap) = min_cost_assignment(&neg_confusion)?;
    Ok(1.0 + neg_overlap / n as f64)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes the base seed with the grid position so each trial owns an
/// independent, reproducible RNG stream.
fn derive_seed(base: u64, p_index: u64, trial: u64) -> u64 {
    let mut s = splitmix64(base);
    s = splitmix64(s.wrapping_add(p_index));
    splitmix64(s.wrapping_add(trial))
}

/// Runs the sweep on the global thread pool. See
/// [`run_experiment_with_jobs`] for the record layout.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<Vec<TrialRecord>> {
    run_experiment_with_jobs(plan, 0)
}

/// Runs the sweep with an explicit worker count (0 = library default).
///
/// For each grid point and trial: draw the number of blocks and their
/// sizes, build the ideal graph, flip edges with the trial's own seed,
/// then score each requested algorithm (the spectral baseline gets k;
/// the ℓ1 variant also picks its own representatives). Records come back
/// sorted by (grid index, trial, algorithm order) and are identical for
/// any worker count. A failing algorithm never aborts the sweep: its
/// labels fall back to a single cluster and score accordingly.
pub fn run_experiment_with_jobs(plan: &ExperimentPlan, jobs: usize) -> Result<Vec<TrialRecord>> {
    plan.validate()?;
    let cells: Vec<(usize, usize)> = (0..plan.p_grid.len())
        .flat_map(|pi| (0..plan.trials).map(move |t| (pi, t)))
        .collect();

    let nested: Vec<Vec<TrialRecord>> = if jobs == 1 {
        cells.iter().map(|&(pi, t)| run_trial(plan, pi, t)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::invalid(format!("worker pool: {e}")))?;
        pool.install(|| {
            cells
                .par_iter()
                .map(|&(pi, t)| run_trial(plan, pi, t))
                .collect()
        })
    };
    Ok(nested.into_iter().flatten().collect())
}

fn run_trial(plan: &ExperimentPlan, p_index: usize, trial: usize) -> Vec<TrialRecord> {
    let p = plan.p_grid[p_index];
    let seed = derive_seed(plan.base_seed, p_index as u64, trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let k = rng.gen_range(plan.k_range.0..=plan.k_range.1);
    let sizes: Vec<usize> = (0..k)
        .map(|_| rng.gen_range(plan.size_range.0..=plan.size_range.1))
        .collect();
    let spec = BlockSpec::from_unsorted(sizes).expect("plan validation bounds sizes");
    let graph_seed = rng.gen::<u64>();
    let kmeans_seed = rng.gen::<u64>();

    let n = spec.n();
    let ideal = generate_ideal(&spec);
    let noise = generate_er(n, p, graph_seed).expect("plan validation bounds p");
    let noisy = perturb(&ideal, &noise).expect("equal sizes");
    let truth = spec.partition();

    let mut records = Vec::with_capacity(plan.algorithms.len());
    for &algorithm in &plan.algorithms {
        let start = Instant::now();
        let labels = match algorithm {
            Algorithm::Spectral => {
                let cfg = SpectralConfig {
                    seed: kmeans_seed,
                    ..SpectralConfig::new(k)
                };
                spectral_clustering::<f64>(&noisy, &cfg)
            }
            Algorithm::L1Spectral => select_representatives(&noisy, k).and_then(|reps| {
                let out = l1_spectral_with_report(&noisy, k, &reps, &L1Config::<f64>::default())?;
                Ok(indicators_to_partition(&out.indicators))
            }),
        }
        // Fallback labeling keeps the sweep alive through hard failures
        // (an eigensolver cap, say): everything in one cluster.
        .unwrap_or_else(|_| Partition::new(vec![0; n], k).expect("k >= 1"));
        let runtime_ms = start.elapsed().as_millis() as u64;

        let correct_fraction = 1.0 - misassignment(&truth, &labels).expect("equal sizes");
        records.push(TrialRecord {
            p,
            algorithm,
            trial,
            seed,
            k,
            n,
            sizes: spec.sizes().to_vec(),
            correct_fraction,
            runtime_ms,
        });
    }
    records
}

/// Collapses records into one [`CurvePoint`] per (p, algorithm) cell:
/// mean, sample standard deviation (0 for a single record), and the
/// normal-approximation 95% interval clamped to [0,1]. Cells appear in
/// first-encounter order of the input.
pub fn aggregate(records: &[TrialRecord]) -> Result<Vec<CurvePoint>> {
    if records.is_empty() {
        return Err(Error::invalid("no records to aggregate"));
    }
    let mut cells: Vec<((u64, Algorithm), Vec<f64>)> = Vec::new();
    for r in records {
        let key = (r.p.to_bits(), r.algorithm);
        match cells.iter_mut().find(|(k, _)| *k == key) {
            Some((_, values)) => values.push(r.correct_fraction),
            None => cells.push((key, vec![r.correct_fraction])),
        }
    }
    Ok(cells
        .into_iter()
        .map(|((p_bits, algorithm), values)| {
            let n = values.len();
            let mean = values.iter().sum::<f64>() / n as f64;
            let std = if n > 1 {
                let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
                (ss / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            let half = 1.96 * std / (n as f64).sqrt();
            CurvePoint {
                p: f64::from_bits(p_bits),
                algorithm,
                mean_correct: mean,
                std_correct: std,
                ci95_low: (mean - half).max(0.0),
                ci95_high: (mean + half).min(1.0),
                n_trials: n,
            }
        })
        .collect())
}

/// Writes the per-trial CSV (`p,algorithm,trial,seed,k,n,
/// correct_fraction,runtime_ms`, LF line endings).
///
/// `with_timings` controls the last column: false writes 0 there so two
/// equal-seed runs produce byte-identical files, true writes the
/// measured wall-clock milliseconds.
pub fn write_trials_csv<W: Write>(
    records: &[TrialRecord],
    w: W,
    with_timings: bool,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "p",
        "algorithm",
        "trial",
        "seed",
        "k",
        "n",
        "correct_fraction",
        "runtime_ms",
    ])?;
    for r in records {
        let runtime = if with_timings { r.runtime_ms } else { 0 };
        out.write_record([
            r.p.to_string(),
            r.algorithm.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.k.to_string(),
            r.n.to_string(),
            r.correct_fraction.to_string(),
            runtime.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Writes the aggregated-curve CSV
/// (`p,algorithm,mean,std,ci_low,ci_high,n_trials`).
pub fn write_curves_csv<W: Write>(points: &[CurvePoint], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["p", "algorithm", "mean", "std", "ci_low", "ci_high", "n_trials"])?;
    for c in points {
        out.write_record([
            c.p.to_string(),
            c.algorithm.to_string(),
            c.mean_correct.to_string(),
            c.std_correct.to_string(),
            c.ci95_low.to_string(),
            c.ci95_high.to_string(),
            c.n_trials.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Reads back a curve CSV written by [`write_curves_csv`].
pub fn read_curves_csv<R: Read>(r: R) -> Result<Vec<CurvePoint>> {
    let mut reader = csv::Reader::from_reader(r);
    {
        let headers = reader.headers()?;
        let expected = ["p", "algorithm", "mean", "std", "ci_low", "ci_high", "n_trials"];
        if headers.len() != expected.len()
            || headers.iter().zip(expected.iter()).any(|(h, e)| h != *e)
        {
            return Err(Error::Parse {
                line: 1,
                message: format!("unexpected header {headers:?}"),
            });
        }
    }
    let mut points = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let line = idx + 2;
        let field = |i: usize| -> Result<&str> {
            record.get(i).ok_or_else(|| Error::Parse {
                line,
                message: format!("missing field {i}"),
            })
        };
        let parse_f64 = |i: usize| -> Result<f64> {
            field(i)?.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("invalid number {:?}", record.get(i).unwrap_or("")),
            })
        };
        points.push(CurvePoint {
            p: parse_f64(0)?,
            algorithm: field(1)?.parse()?,
            mean_correct: parse_f64(2)?,
            std_correct: parse_f64(3)?,
            ci95_low: parse_f64(4)?,
            ci95_high: parse_f64(5)?,
            n_trials: field(6)?.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: "invalid trial count".into(),
            })?,
        });
    }
    Ok(points)
}
