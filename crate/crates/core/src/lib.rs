//! Spectral clustering of noisy graphs with an l1 sparsity stage.
//!
//! The library covers the full pipeline: generation of block graphs and
//! Bernoulli edge noise, graph Laplacians, a dense symmetric eigensolver,
//! basis-pursuit solvers for the sparse indicator recovery, classical
//! spectral clustering with k-means, cluster-assignment scoring, and a
//! benchmark harness that sweeps the noise level.
//!
//! Numeric routines are generic over the [`Scalar`] floating-point type;
//! `f64` is the default everywhere and the type aliases at the crate root
//! ([`EigenBasis64`], [`SolverReport64`], ...) pin it explicitly.

pub use ndarray;

mod scalar;
pub use scalar::Scalar;

mod error;
pub use error::{Error, Result};

pub mod graph;
pub use graph::{
    connected_components, degrees, generate_er, generate_ideal, laplacian, perturb,
    random_permutation, AdjacencyMatrix, BlockSpec, Degrees, LaplacianKind, Partition,
};

pub mod io;

pub(crate) mod linalg;

pub mod eigen;
pub use eigen::{deflate, eig_sym, eig_sym_with, EigenBasis, JacobiParams};

pub mod bp;
pub use bp::{
    lp_oracle, solve_bp, solve_bp_penalized, solve_bp_penalized_with, solve_bp_with,
    BasisPursuitProblem, BpConfig, SolveStatus, SolverReport,
};

pub(crate) mod simplex;

pub mod kmeans;
pub use kmeans::{kmeans, KmeansOutcome};

pub mod cluster;
pub use cluster::{
    indicators_to_partition, l1_spectral, l1_spectral_with_report, select_representatives,
    spectral_clustering, ColumnReport, IndicatorMatrix, L1Config, L1Outcome, Representatives,
    SpectralConfig, SpectrumSource, WidthMode,
};

pub mod assign;
pub use assign::{brute_force_assignment, min_cost_assignment};

pub mod bench;
pub use bench::{
    aggregate, misassignment, run_experiment, run_experiment_with_jobs, Algorithm, CurvePoint,
    ExperimentPlan, TrialRecord,
};

/// [`EigenBasis`] over `f64`.
pub type EigenBasis64 = EigenBasis<f64>;
/// [`SolverReport`] over `f64`.
pub type SolverReport64 = SolverReport<f64>;
/// [`BasisPursuitProblem`] over `f64`.
pub type BasisPursuitProblem64 = BasisPursuitProblem<f64>;
/// [`IndicatorMatrix`] over `f64`.
pub type IndicatorMatrix64 = IndicatorMatrix<f64>;
