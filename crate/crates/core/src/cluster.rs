//! The two clustering algorithms.
//!
//! Classical spectral clustering embeds nodes with eigenvectors of a
//! Laplacian and groups the rows by k-means. The ℓ1 variant instead
//! recovers one cluster indicator at a time: anchor a representative
//! node, solve a basis-pursuit problem forcing the indicator to be
//! orthogonal to the low part of the spectrum, deflate the recovered
//! direction out of the matrix, and repeat. A final 0.5 threshold turns
//! the raw columns into 0/1 memberships.

use ndarray::{Array1, Array2};

use crate::bp::{solve_bp_with, BasisPursuitProblem, BpConfig, SolveStatus};
use crate::eigen::{deflate, eig_sym};
use crate::error::{Error, Result};
use crate::graph::{degrees, laplacian, AdjacencyMatrix, LaplacianKind, Partition};
use crate::kmeans::kmeans;
use crate::scalar::Scalar;

/// Settings for the spectral-clustering baseline.
#[derive(Debug, Clone)]
pub struct SpectralConfig {
    pub laplacian: LaplacianKind,
    /// Number of clusters (assumed known).
    pub k: usize,
    pub kmeans_restarts: usize,
    pub kmeans_max_iter: usize,
    pub seed: u64,
}

impl SpectralConfig {
    /// Unnormalized Laplacian, 10 restarts, 100 Lloyd iterations, seed 0.
    pub fn new(k: usize) -> Self {
        SpectralConfig {
            laplacian: LaplacianKind::Unnormalized,
            k,
            kmeans_restarts: 10,
            kmeans_max_iter: 100,
            seed: 0,
        }
    }
}

/// Laplacian embedding plus k-means.
///
/// The embedding takes the k eigenvectors carrying component structure:
/// the bottom of the spectrum for `Unnormalized`, the top for `Symmetric`
/// (that matrix is the normalized adjacency, whose informative
/// eigenvalues are the largest), and for `RandomWalk` the right
/// eigenvectors of its k smallest eigenvalues, obtained from the
/// symmetric normalized adjacency by the similarity transform
/// `D^{-1/2}`.
pub fn spectral_clustering<S: Scalar>(a: &AdjacencyMatrix, cfg: &SpectralConfig) -> Result<Partition> {
    let n = a.n();
    if cfg.k == 0 || cfg.k > n {
        return Err(Error::invalid(format!(
            "cluster count {} outside 1..={n}",
            cfg.k
        )));
    }
    let embedding: Array2<S> = match cfg.laplacian {
        LaplacianKind::Unnormalized => {
            let l = laplacian::<S>(a, LaplacianKind::Unnormalized)?;
            eig_sym(&l)?.bottom_k(cfg.k)?
        }
        LaplacianKind::Symmetric => {
            let norm_adj = laplacian::<S>(a, LaplacianKind::Symmetric)?;
            eig_sym(&norm_adj)?.top_k(cfg.k)?
        }
        LaplacianKind::RandomWalk => {
            // I - D⁻¹A is similar to I - D^{-1/2}AD^{-1/2}: if z is an
            // eigenvector of the normalized adjacency with eigenvalue ν,
            // then D^{-1/2}z is a right eigenvector of the random-walk
            // Laplacian with eigenvalue 1 - ν. The k smallest of those
            // correspond to the k largest ν; columns are reordered to
            // ascending random-walk eigenvalue.
            let norm_adj = laplacian::<S>(a, LaplacianKind::Symmetric)?;
            let top = eig_sym(&norm_adj)?.top_k(cfg.k)?;
            let d = degrees(a);
            let mut emb = Array2::<S>::zeros((n, cfg.k));
            for j in 0..cfg.k {
                let src = cfg.k - 1 - j;
                for i in 0..n {
                    let scale = S::one() / S::of((d.get(i) as f64).sqrt());
                    emb[[i, j]] = top[[i, src]] * scale;
                }
            }
            emb
        }
    };
    let outcome = kmeans(
        &embedding,
        cfg.k,
        cfg.kmeans_restarts,
        cfg.kmeans_max_iter,
        cfg.seed,
    )?;
    Ok(outcome.partition)
}

/// One anchor node per intended cluster; indices are distinct original
/// node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representatives(Vec<usize>);

impl Representatives {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::invalid("need at least one representative"));
        }
        for (pos, &i) in indices.iter().enumerate() {
            if indices[..pos].contains(&i) {
                return Err(Error::invalid(format!("representative {i} repeated")));
            }
        }
        Ok(Representatives(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }
}

/// Per-cluster membership columns, raw and thresholded.
#[derive(Debug, Clone)]
pub struct IndicatorMatrix<S: Scalar = f64> {
    raw: Array2<S>,
    binary: Array2<u8>,
    threshold: S,
}

impl<S: Scalar> IndicatorMatrix<S> {
    /// Applies the strict threshold: `binary = 1` iff `raw > threshold`.
    pub fn from_raw(raw: Array2<S>, threshold: S) -> Self {
        let binary = raw.mapv(|x| u8::from(x > threshold));
        IndicatorMatrix {
            raw,
            binary,
            threshold,
        }
    }

    pub fn raw(&self) -> &Array2<S> {
        &self.raw
    }

    pub fn binary(&self) -> &Array2<u8> {
        &self.binary
    }

    pub fn threshold(&self) -> S {
        self.threshold
    }

    pub fn n(&self) -> usize {
        self.raw.nrows()
    }

    pub fn k(&self) -> usize {
        self.raw.ncols()
    }
}

/// How many bottom eigenvectors form the orthogonality constraint at
/// iteration j (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WidthMode {
    /// `n - k + j - 1`: grows as deflation removes recovered directions.
    #[default]
    Growing,
    /// `n - k` at every iteration, for comparison.
    Fixed,
}

/// Which matrix the ℓ1 loop decomposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpectrumSource {
    /// The adjacency matrix itself; component indicators sit at the top
    /// of its spectrum.
    #[default]
    Adjacency,
    /// The negated unnormalized Laplacian, which also places component
    /// indicators at the top.
    NegatedLaplacian,
}

/// Settings for the ℓ1 clustering loop.
#[derive(Debug, Clone)]
pub struct L1Config<S: Scalar = f64> {
    /// Strict cutoff turning raw indicator values into memberships.
    pub threshold: S,
    pub width: WidthMode,
    pub source: SpectrumSource,
    pub solver: BpConfig<S>,
}

impl<S: Scalar> Default for L1Config<S> {
    fn default() -> Self {
        L1Config {
            threshold: S::of(0.5),
            width: WidthMode::Growing,
            source: SpectrumSource::Adjacency,
            solver: BpConfig::default(),
        }
    }
}

/// Outcome of one basis-pursuit column inside the loop.
#[derive(Debug, Clone)]
pub struct ColumnReport<S: Scalar = f64> {
    pub status: SolveStatus,
    pub iterations: usize,
    pub objective: S,
    pub constraint_residual: S,
}

/// Indicators together with per-column solver outcomes.
#[derive(Debug, Clone)]
pub struct L1Outcome<S: Scalar = f64> {
    pub indicators: IndicatorMatrix<S>,
    pub columns: Vec<ColumnReport<S>>,
}

/// ℓ1-spectral clustering with strict error propagation: the first
/// cluster whose subproblem ends non-optimal aborts with
/// [`Error::SolverFailure`] naming the column.
pub fn l1_spectral<S: Scalar>(
    a: &AdjacencyMatrix,
    k: usize,
    reps: &Representatives,
    cfg: &L1Config<S>,
) -> Result<IndicatorMatrix<S>> {
    let outcome = run_l1(a, k, reps, cfg)?;
    for (j, col) in outcome.columns.iter().enumerate() {
        if col.status != SolveStatus::Optimal {
            return Err(Error::SolverFailure {
                column: j,
                status: col.status,
            });
        }
    }
    Ok(outcome.indicators)
}

/// ℓ1-spectral clustering that keeps going when a column's solve ends
/// non-optimal: the best iterate is used for that column (and for the
/// deflation) and the per-column report records the status, so a caller
/// can still label every node and knows what to distrust.
pub fn l1_spectral_with_report<S: Scalar>(
    a: &AdjacencyMatrix,
    k: usize,
    reps: &Representatives,
    cfg: &L1Config<S>,
) -> Result<L1Outcome<S>> {
    run_l1(a, k, reps, cfg)
}

fn run_l1<S: Scalar>(
    a: &AdjacencyMatrix,
    k: usize,
    reps: &Representatives,
    cfg: &L1Config<S>,
) -> Result<L1Outcome<S>> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("cluster count {k} outside 1..={n}")));
    }
    if reps.k() != k {
        return Err(Error::invalid(format!(
            "{} representatives for k={k} clusters",
            reps.k()
        )));
    }
    if let Some(&bad) = reps.indices().iter().find(|&&r| r >= n) {
        return Err(Error::invalid(format!(
            "representative {bad} out of range for n={n}"
        )));
    }

    let mut current: Array2<S> = match cfg.source {
        SpectrumSource::Adjacency => a.to_dense(),
        SpectrumSource::NegatedLaplacian => {
            laplacian::<S>(a, LaplacianKind::Unnormalized)?.mapv(|x| -x)
        }
    };
    let mut raw = Array2::<S>::zeros((n, k));
    let mut columns = Vec::with_capacity(k);

    for j in 1..=k {
        let rep = reps.indices()[j - 1];
        let width = match cfg.width {
            WidthMode::Growing => n - k + j - 1,
            WidthMode::Fixed => n - k,
        };

        let full = if width == 0 {
            // No orthogonality constraints: the cheapest anchored vector
            // is the anchor alone.
            columns.push(ColumnReport {
                status: SolveStatus::Optimal,
                iterations: 0,
                objective: S::zero(),
                constraint_residual: S::zero(),
            });
            let mut e = Array1::<S>::zeros(n);
            e[rep] = S::one();
            e
        } else {
            let basis = eig_sym(&current)?;
            let low = basis.bottom_k(width)?; // n×width
            // Constraint rows: the indicator must be orthogonal to each
            // low eigenvector. Split the anchored coordinate out:
            // rows·v over the remaining coordinates must equal the
            // negated anchor column.
            let mut w_mat = Array2::<S>::zeros((width, n - 1));
            let mut w_vec = Array1::<S>::zeros(width);
            for r in 0..width {
                w_vec[r] = low[[rep, r]];
                let mut c = 0;
                for i in 0..n {
                    if i != rep {
                        w_mat[[r, c]] = low[[i, r]];
                        c += 1;
                    }
                }
            }
            let problem = BasisPursuitProblem::new(w_mat, w_vec)?;
            let report = solve_bp_with(&problem, &cfg.solver);
            columns.push(ColumnReport {
                status: report.status,
                iterations: report.iterations,
                objective: report.objective,
                constraint_residual: report.constraint_residual,
            });
            let mut full = Array1::<S>::zeros(n);
            let mut c = 0;
            for i in 0..n {
                if i == rep {
                    full[i] = S::one();
                } else {
                    full[i] = report.solution[c];
                    c += 1;
                }
            }
            full
        };

        raw.column_mut(j - 1).assign(&full);
        current = deflate(&current, full.view())?;
    }

    Ok(L1Outcome {
        indicators: IndicatorMatrix::from_raw(raw, cfg.threshold),
        columns,
    })
}

/// Hub picking guided by a rough partition: cluster once with the plain
/// spectral baseline (fixed seed), then take the node of highest
/// within-cluster degree from each nonempty cluster (ties toward the
/// lowest id). Raw degree is misleading once noise edges appear, so the
/// hub score only counts edges that stay inside the candidate's cluster.
/// The rough pass embeds with the random-walk Laplacian, which separates
/// noisy blocks far better than the unnormalized one; graphs it rejects
/// (isolated nodes) retry unnormalized. Any slots the rough pass leaves
/// open, or all k when it fails outright, are filled greedily: highest
/// global degree first, excluding picked nodes and their neighbors, then
/// anything unpicked once exclusion runs dry. Picks are ordered by
/// decreasing degree, ties toward the lowest id.
pub fn select_representatives(a: &AdjacencyMatrix, k: usize) -> Result<Representatives> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("cluster count {k} outside 1..={n}")));
    }
    let d = degrees(a);
    let mut picked: Vec<usize> = Vec::with_capacity(k);

    let rough_pass = [LaplacianKind::RandomWalk, LaplacianKind::Unnormalized]
        .iter()
        .find_map(|&kind| {
            let cfg = SpectralConfig {
                laplacian: kind,
                ..SpectralConfig::new(k)
            };
            spectral_clustering::<f64>(a, &cfg).ok()
        });
    if let Some(rough) = rough_pass {
        for c in 0..k {
            let members: Vec<usize> = (0..n).filter(|&i| rough.labels()[i] == c).collect();
            let hub = members.iter().copied().max_by_key(|&i| {
                let within = members.iter().filter(|&&v| a.get(i, v) == 1).count();
                (within, std::cmp::Reverse(i))
            });
            picked.extend(hub);
        }
    }

    let mut is_picked = vec![false; n];
    let mut excluded = vec![false; n];
    for &i in &picked {
        is_picked[i] = true;
        excluded[i] = true;
        for v in 0..n {
            if a.get(i, v) == 1 {
                excluded[v] = true;
            }
        }
    }
    while picked.len() < k {
        let best = (0..n)
            .filter(|&i| !excluded[i] && !is_picked[i])
            .max_by_key(|&i| (d.get(i), std::cmp::Reverse(i)))
            .or_else(|| {
                (0..n)
                    .filter(|&i| !is_picked[i])
                    .max_by_key(|&i| (d.get(i), std::cmp::Reverse(i)))
            })
            .expect("k <= n leaves an unpicked node");
        picked.push(best);
        is_picked[best] = true;
        excluded[best] = true;
        for v in 0..n {
            if a.get(best, v) == 1 {
                excluded[v] = true;
            }
        }
    }
    picked.sort_by_key(|&i| (std::cmp::Reverse(d.get(i)), i));
    Representatives::new(picked)
}

/// Per-node labels from the raw indicator values: node i takes the
/// column of its largest raw entry, ties toward the lowest column. Total
/// even when a row is all below threshold or multi-hot.
pub fn indicators_to_partition<S: Scalar>(f: &IndicatorMatrix<S>) -> Partition {
    let n = f.n();
    let k = f.k();
    let raw = f.raw();
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let mut best = 0usize;
        for j in 1..k {
            if raw[[i, j]] > raw[[i, best]] {
                best = j;
            }
        }
        labels.push(best);
    }
    Partition::new(labels, k).expect("argmax labels are within 0..k")
}
