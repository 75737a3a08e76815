//! Basis pursuit: min ‖v‖₁ subject to W·v = −w.
//!
//! The workhorse is a Mehrotra predictor-corrector interior-point method
//! on the split linear program min 1ᵀ(v⁺+v⁻) s.t. [W −W](v⁺;v⁻) = −w,
//! v± ≥ 0. A two-phase simplex ([`lp_oracle`]) solves the same LP exactly
//! at small sizes and serves as an independent check. The penalized
//! variant min ‖Wv+w‖₂² + λ‖v‖₁ is solved by FISTA soft-thresholding.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::linalg::{self, SpdSolver};
use crate::scalar::Scalar;
use crate::simplex::{self, SimplexOutcome};

/// Equality-constrained ℓ1 problem: minimize `‖v‖₁` over `W v = -w`,
/// with `W` of shape m×d and `w` of length m.
#[derive(Debug, Clone)]
pub struct BasisPursuitProblem<S: Scalar = f64> {
    coeffs: Array2<S>,
    offset: Array1<S>,
}

impl<S: Scalar> BasisPursuitProblem<S> {
    pub fn new(coeffs: Array2<S>, offset: Array1<S>) -> Result<Self> {
        let (m, d) = coeffs.dim();
        if m == 0 || d == 0 {
            return Err(Error::invalid(format!(
                "constraint matrix must be nonempty, got {m}x{d}"
            )));
        }
        if offset.len() != m {
            return Err(Error::invalid(format!(
                "offset length {} does not match {m} constraint rows",
                offset.len()
            )));
        }
        if coeffs.iter().chain(offset.iter()).any(|x| !x.is_finite()) {
            return Err(Error::invalid("constraint entries must be finite"));
        }
        Ok(BasisPursuitProblem { coeffs, offset })
    }

    /// The matrix `W`.
    pub fn coeffs(&self) -> &Array2<S> {
        &self.coeffs
    }

    /// The vector `w`; the constraint is `W v = -w`.
    pub fn offset(&self) -> &Array1<S> {
        &self.offset
    }

    /// Number of constraint rows m.
    pub fn m(&self) -> usize {
        self.coeffs.nrows()
    }

    /// Number of unknowns d.
    pub fn d(&self) -> usize {
        self.coeffs.ncols()
    }

    fn residual(&self, v: &Array1<S>) -> S {
        let mut r = self.coeffs.dot(v);
        r += &self.offset;
        linalg::norm2(r.view())
    }
}

/// Terminal state of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Converged within tolerances.
    Optimal,
    /// Iteration cap reached; the report carries the best iterate.
    IterationCap,
    /// No point satisfies the constraints within the feasibility
    /// tolerance; the report carries the least-squares point.
    Infeasible,
}

/// Outcome of a basis-pursuit or penalized solve.
///
/// `objective` is always `‖solution‖₁`, and an `Optimal` status from the
/// equality-constrained solvers implies `constraint_residual` is within
/// the feasibility tolerance (the penalized solver reports the residual
/// of its stationary point, which is genuinely nonzero for λ > 0).
#[derive(Debug, Clone)]
pub struct SolverReport<S: Scalar = f64> {
    pub solution: Array1<S>,
    pub objective: S,
    pub constraint_residual: S,
    pub iterations: usize,
    pub status: SolveStatus,
}

impl<S: Scalar> SolverReport<S> {
    fn from_solution(p: &BasisPursuitProblem<S>, v: Array1<S>, iterations: usize, status: SolveStatus) -> Self {
        let objective = linalg::norm1(v.view());
        let constraint_residual = p.residual(&v);
        SolverReport {
            solution: v,
            objective,
            constraint_residual,
            iterations,
            status,
        }
    }
}

/// Tolerances and iteration caps for the solvers.
#[derive(Debug, Clone)]
pub struct BpConfig<S: Scalar = f64> {
    /// Feasibility tolerance, relative to `1 + ‖w‖₂`.
    pub feas_tol: S,
    /// Optimality tolerance (relative duality gap for the interior point,
    /// subgradient residual scale for the penalized solver).
    pub opt_tol: S,
    /// Iteration cap for the interior-point method.
    pub max_iter: usize,
    /// Iteration cap for the penalized (FISTA) solver, whose per-iteration
    /// cost is far lower.
    pub penalized_max_iter: usize,
}

impl<S: Scalar> Default for BpConfig<S> {
    fn default() -> Self {
        BpConfig {
            feas_tol: S::solver_tol(),
            opt_tol: S::solver_tol(),
            max_iter: 100,
            penalized_max_iter: 50_000,
        }
    }
}

/// [`solve_bp_with`] under default tolerances.
pub fn solve_bp<S: Scalar>(p: &BasisPursuitProblem<S>) -> SolverReport<S> {
    solve_bp_with(p, &BpConfig::default())
}

/// Minimizes `‖v‖₁` subject to `W v = -w` by a predictor-corrector
/// interior-point method on the split LP.
///
/// Infeasible systems are detected up front from the least-squares
/// residual of the constraints; the report then carries the least-squares
/// point for diagnostics.
pub fn solve_bp_with<S: Scalar>(p: &BasisPursuitProblem<S>, cfg: &BpConfig<S>) -> SolverReport<S> {
    let m = p.m();
    let d = p.d();
    let w_norm = linalg::norm2(p.offset().view());
    let feas_limit = cfg.feas_tol * (S::one() + w_norm);

    // Trivial case: w = 0 makes v = 0 feasible and obviously ℓ1-minimal.
    if w_norm == S::zero() {
        return SolverReport::from_solution(p, Array1::zeros(d), 0, SolveStatus::Optimal);
    }

    // Least-squares feasibility probe: v_ls = Wᵀ(WWᵀ)⁻¹(−w) reaches the
    // minimum possible constraint residual; if even that misses the
    // tolerance the problem is infeasible.
    let wwt = gram(p.coeffs());
    let neg_w = p.offset().mapv(|x| -x);
    let v_ls = match SpdSolver::factor_jittered(&wwt) {
        Some(f) => p.coeffs().t().dot(&f.solve(neg_w.view())),
        None => Array1::zeros(d),
    };
    if p.residual(&v_ls) > feas_limit {
        return SolverReport::from_solution(p, v_ls, 0, SolveStatus::Infeasible);
    }

    // Split LP over x = (v⁺, v⁻): A = [W −W], b = −w, c = 1.
    let n2 = 2 * d;
    let b = neg_w;
    let b_scale = S::one() + linalg::norm2(b.view());
    let c_scale = S::one() + S::of((n2 as f64).sqrt());

    // Mehrotra starting point. For this A, A·c = 0 makes the dual start
    // λ = 0, s = 1; the primal start shifts the least-norm point of
    // A x = b into the positive orthant.
    let mut x = Array1::<S>::zeros(n2);
    {
        let half_b = b.mapv(|t| t * S::of(0.5));
        let y = match SpdSolver::factor_jittered(&wwt) {
            Some(f) => f.solve(half_b.view()),
            None => Array1::zeros(m),
        };
        let wty = p.coeffs().t().dot(&y);
        for j in 0..d {
            x[j] = wty[j];
            x[d + j] = -wty[j];
        }
        let min_x = x.iter().fold(S::infinity(), |a, &t| a.min(t));
        let shift = (-S::of(1.5) * min_x).max(S::zero());
        x.mapv_inplace(|t| t + shift);
        let total: S = x.iter().copied().sum();
        let pad = S::of(0.5) * total / S::of(n2 as f64);
        let pad = pad.max(S::of(1.0));
        x.mapv_inplace(|t| t + pad);
    }
    let mut lam = Array1::<S>::zeros(m);
    let mut s = Array1::<S>::from_elem(n2, S::of(1.5));

    let eta = S::of(0.995);
    let mut iterations = 0usize;
    let mut status = SolveStatus::IterationCap;

    while iterations < cfg.max_iter {
        // Residuals of the KKT system.
        let v_cur = extract(&x, d);
        let wv = p.coeffs().dot(&v_cur);
        let rb = &wv - &b; // A x − b
        let wtl = p.coeffs().t().dot(&lam);
        let mut rc = Array1::<S>::zeros(n2); // Aᵀλ + s − c
        for j in 0..d {
            rc[j] = wtl[j] + s[j] - S::one();
            rc[d + j] = -wtl[j] + s[d + j] - S::one();
        }
        let gap_primal: S = x.iter().copied().sum(); // cᵀx
        let gap_dual: S = b
            .iter()
            .zip(lam.iter())
            .map(|(&bi, &li)| bi * li)
            .sum();
        let rel_gap = (gap_primal - gap_dual).abs() / (S::one() + gap_primal.abs());
        let pinf = linalg::norm2(rb.view()) / b_scale;
        let dinf = linalg::norm2(rc.view()) / c_scale;
        if pinf <= cfg.feas_tol && dinf <= cfg.feas_tol && rel_gap <= cfg.opt_tol {
            status = SolveStatus::Optimal;
            break;
        }

        let mu = x
            .iter()
            .zip(s.iter())
            .map(|(&xi, &si)| xi * si)
            .sum::<S>()
            / S::of(n2 as f64);

        // Normal equations matrix M = A diag(x/s) Aᵀ = W (E₁+E₂) Wᵀ.
        let e: Array1<S> = x
            .iter()
            .zip(s.iter())
            .map(|(&xi, &si)| xi / si)
            .collect();
        let mut scale = Array1::<S>::zeros(d);
        for j in 0..d {
            scale[j] = e[j] + e[d + j];
        }
        let m_mat = scaled_gram(p.coeffs(), &scale);
        let Some(factor) = SpdSolver::factor_jittered(&m_mat) else {
            break;
        };

        // Affine-scaling predictor: r_xs = −x∘s.
        let r_xs_aff: Array1<S> = x
            .iter()
            .zip(s.iter())
            .map(|(&xi, &si)| -xi * si)
            .collect();
        let (dx_a, _, ds_a) = kkt_step(p, &factor, &x, &s, &rb, &rc, &r_xs_aff, d);

        let alpha_p_aff = max_step(&x, &dx_a);
        let alpha_d_aff = max_step(&s, &ds_a);
        let mu_aff = {
            let mut acc = S::zero();
            for i in 0..n2 {
                acc += (x[i] + alpha_p_aff * dx_a[i]) * (s[i] + alpha_d_aff * ds_a[i]);
            }
            acc / S::of(n2 as f64)
        };
        let sigma = {
            let ratio = (mu_aff / mu).max(S::zero()).min(S::one());
            ratio * ratio * ratio
        };

        // Corrector: r_xs = −x∘s − dx_aff∘ds_aff + σμ.
        let r_xs: Array1<S> = (0..n2)
            .map(|i| -x[i] * s[i] - dx_a[i] * ds_a[i] + sigma * mu)
            .collect();
        let (dx, dlam, ds) = kkt_step(p, &factor, &x, &s, &rb, &rc, &r_xs, d);

        let alpha_p = (eta * max_step(&x, &dx)).min(S::one());
        let alpha_d = (eta * max_step(&s, &ds)).min(S::one());
        for i in 0..n2 {
            x[i] += alpha_p * dx[i];
            s[i] += alpha_d * ds[i];
        }
        for i in 0..m {
            lam[i] += alpha_d * dlam[i];
        }
        iterations += 1;

        // A stall with no usable step means numerical exhaustion.
        if alpha_p < S::of(1e-14) && alpha_d < S::of(1e-14) {
            break;
        }
    }

    let v = extract(&x, d);
    SolverReport::from_solution(p, v, iterations, status)
}

/// One Newton solve of the KKT system via the normal equations, for a
/// given complementarity right-hand side `r_xs`:
///   A dx = −rb,  Aᵀ dλ + ds = −rc,  S dx + X ds = r_xs.
fn kkt_step<S: Scalar>(
    p: &BasisPursuitProblem<S>,
    factor: &SpdSolver<S>,
    x: &Array1<S>,
    s: &Array1<S>,
    rb: &Array1<S>,
    rc: &Array1<S>,
    r_xs: &Array1<S>,
    d: usize,
) -> (Array1<S>, Array1<S>, Array1<S>) {
    let n2 = 2 * d;
    // g = r_xs/s + (x/s)∘rc; rhs for M dλ = −rb − A g.
    let mut g = Array1::<S>::zeros(n2);
    for i in 0..n2 {
        g[i] = r_xs[i] / s[i] + x[i] / s[i] * rc[i];
    }
    let a_g = {
        // A g = W (g₁ − g₂).
        let mut diff = Array1::<S>::zeros(d);
        for j in 0..d {
            diff[j] = g[j] - g[d + j];
        }
        p.coeffs().dot(&diff)
    };
    let rhs: Array1<S> = (0..p.m()).map(|i| -rb[i] - a_g[i]).collect();
    let dlam = factor.solve(rhs.view());

    let wt_dlam = p.coeffs().t().dot(&dlam);
    let mut dx = Array1::<S>::zeros(n2);
    let mut ds = Array1::<S>::zeros(n2);
    for j in 0..n2 {
        let at_dlam = if j < d { wt_dlam[j] } else { -wt_dlam[j - d] };
        ds[j] = -rc[j] - at_dlam;
        dx[j] = (r_xs[j] - x[j] * ds[j]) / s[j];
    }
    (dx, dlam, ds)
}

/// Largest α ≤ 1 keeping `z + α dz > 0` (up to the caller's damping).
fn max_step<S: Scalar>(z: &Array1<S>, dz: &Array1<S>) -> S {
    let mut alpha = S::one();
    for i in 0..z.len() {
        if dz[i] < S::zero() {
            alpha = alpha.min(-z[i] / dz[i]);
        }
    }
    alpha
}

fn extract<S: Scalar>(x: &Array1<S>, d: usize) -> Array1<S> {
    (0..d).map(|j| x[j] - x[d + j]).collect()
}

/// `W Wᵀ`.
fn gram<S: Scalar>(w: &Array2<S>) -> Array2<S> {
    w.dot(&w.t())
}

/// `W diag(scale) Wᵀ`.
fn scaled_gram<S: Scalar>(w: &Array2<S>, scale: &Array1<S>) -> Array2<S> {
    let m = w.nrows();
    let d = w.ncols();
    let mut out = Array2::<S>::zeros((m, m));
    for i in 0..m {
        for l in i..m {
            let mut acc = S::zero();
            for j in 0..d {
                acc += w[[i, j]] * scale[j] * w[[l, j]];
            }
            out[[i, l]] = acc;
            out[[l, i]] = acc;
        }
    }
    out
}

/// [`solve_bp_penalized_with`] under default tolerances.
pub fn solve_bp_penalized<S: Scalar>(p: &BasisPursuitProblem<S>, lambda: S) -> Result<SolverReport<S>> {
    solve_bp_penalized_with(p, lambda, &BpConfig::default())
}

/// Minimizes `‖W v + w‖₂² + λ‖v‖₁` by FISTA with soft-thresholding.
///
/// Small penalties are reached by continuation: the solver sweeps a
/// geometric ladder of penalties from `‖2Wᵀw‖_∞` down to λ, warm-starting
/// each stage at the previous solution. Without the ladder, first-order
/// iterations needed from a cold start grow like 1/λ.
///
/// Success (`Optimal`) means the minimal-norm subgradient of the
/// penalized objective at the iterate is below `opt_tol` relative to the
/// gradient scale at zero; `constraint_residual` reports `‖Wv+w‖₂` of the
/// stationary point, which stays positive for λ > 0.
pub fn solve_bp_penalized_with<S: Scalar>(
    p: &BasisPursuitProblem<S>,
    lambda: S,
    cfg: &BpConfig<S>,
) -> Result<SolverReport<S>> {
    if !(lambda > S::zero()) || !lambda.is_finite() {
        return Err(Error::invalid(format!("lambda must be positive, got {lambda}")));
    }
    let d = p.d();

    // Lipschitz constant of the gradient 2Wᵀ(Wv+w) is 2‖WᵀW‖₂; estimated
    // by power iteration with a small safety margin.
    let wtw_norm = {
        let mut z = Array1::<S>::from_elem(d, S::one() / S::of((d as f64).sqrt()));
        let mut estimate = S::zero();
        for _ in 0..200 {
            let wz = p.coeffs().dot(&z);
            let next = p.coeffs().t().dot(&wz);
            let norm = linalg::norm2(next.view());
            if norm == S::zero() {
                break;
            }
            estimate = norm;
            z = next.mapv(|t| t / norm);
        }
        estimate
    };
    let lips = (S::of(2.0) * wtw_norm * S::of(1.02)).max(S::of(1e-12));

    let grad_at_zero = p.coeffs().t().dot(p.offset()).mapv(|t| t * S::of(2.0));
    let lambda_max = grad_at_zero
        .iter()
        .fold(S::zero(), |acc, t| acc.max(t.abs()));
    let subgrad_scale = S::one() + lambda_max;
    let tol = cfg.opt_tol * subgrad_scale;

    // At or above ‖2Wᵀw‖_∞ the soft threshold absorbs the whole gradient
    // and zero is already stationary.
    if lambda >= lambda_max {
        return Ok(SolverReport::from_solution(
            p,
            Array1::zeros(d),
            0,
            SolveStatus::Optimal,
        ));
    }

    let mut ladder = Vec::new();
    let mut rung = lambda_max * S::of(0.1);
    while rung > lambda {
        ladder.push(rung);
        rung *= S::of(0.1);
    }
    ladder.push(lambda);

    let mut v = Array1::<S>::zeros(d);
    let mut iterations = 0usize;
    let mut status = SolveStatus::IterationCap;
    for (idx, &stage_lambda) in ladder.iter().enumerate() {
        let last = idx + 1 == ladder.len();
        // Intermediate rungs only seed the next warm start.
        let stage_tol = if last { tol } else { tol * S::of(100.0) };
        let budget = cfg.penalized_max_iter.saturating_sub(iterations);
        let (used, converged) = fista_stage(p, stage_lambda, lips, stage_tol, budget, &mut v);
        iterations += used;
        if last {
            status = if converged {
                SolveStatus::Optimal
            } else {
                SolveStatus::IterationCap
            };
        } else if !converged && iterations >= cfg.penalized_max_iter {
            break;
        }
    }
    if status != SolveStatus::Optimal && subgrad_residual(p, &v, lambda) <= tol {
        status = SolveStatus::Optimal;
    }

    Ok(SolverReport::from_solution(p, v, iterations, status))
}

/// One FISTA run at a fixed penalty, mutating `v` in place. Returns the
/// iterations consumed and whether the subgradient test passed.
fn fista_stage<S: Scalar>(
    p: &BasisPursuitProblem<S>,
    lambda: S,
    lips: S,
    tol: S,
    budget: usize,
    v: &mut Array1<S>,
) -> (usize, bool) {
    let d = p.d();
    let mut y = v.clone();
    let mut t = S::one();
    let mut iterations = 0usize;
    if subgrad_residual(p, v, lambda) <= tol {
        return (0, true);
    }
    while iterations < budget {
        let mut wy = p.coeffs().dot(&y);
        wy += p.offset();
        let grad = p.coeffs().t().dot(&wy).mapv(|g| g * S::of(2.0));
        let step = lambda / lips;
        let v_next: Array1<S> = (0..d)
            .map(|j| soft_threshold(y[j] - grad[j] / lips, step))
            .collect();
        iterations += 1;

        // Restart the momentum when it points against the descent
        // direction; keeps FISTA monotone in practice.
        let mut momentum_bad = S::zero();
        for j in 0..d {
            momentum_bad += (y[j] - v_next[j]) * (v_next[j] - v[j]);
        }
        let t_next = if momentum_bad > S::zero() {
            S::one()
        } else {
            (S::one() + (S::one() + S::of(4.0) * t * t).sqrt()) * S::of(0.5)
        };
        let beta = (t - S::one()) / t_next;
        let y_next: Array1<S> = (0..d)
            .map(|j| v_next[j] + beta * (v_next[j] - v[j]))
            .collect();

        *v = v_next;
        y = y_next;
        t = t_next;

        if (iterations % 10 == 0 || iterations == budget)
            && subgrad_residual(p, v, lambda) <= tol
        {
            return (iterations, true);
        }
    }
    (iterations, false)
}

fn soft_threshold<S: Scalar>(z: S, tau: S) -> S {
    if z > tau {
        z - tau
    } else if z < -tau {
        z + tau
    } else {
        S::zero()
    }
}

/// ∞-norm of the minimal subgradient of `‖Wv+w‖₂² + λ‖v‖₁` at `v`.
fn subgrad_residual<S: Scalar>(p: &BasisPursuitProblem<S>, v: &Array1<S>, lambda: S) -> S {
    let mut wv = p.coeffs().dot(v);
    wv += p.offset();
    let grad = p.coeffs().t().dot(&wv).mapv(|g| g * S::of(2.0));
    let mut worst = S::zero();
    for j in 0..p.d() {
        let r = if v[j] > S::zero() {
            (grad[j] + lambda).abs()
        } else if v[j] < S::zero() {
            (grad[j] - lambda).abs()
        } else {
            (grad[j].abs() - lambda).max(S::zero())
        };
        worst = worst.max(r);
    }
    worst
}

/// Exact small-scale reference: solves the same split LP with a two-phase
/// simplex under Bland's rule. Intended for d ≤ 30.
pub fn lp_oracle<S: Scalar>(p: &BasisPursuitProblem<S>) -> SolverReport<S> {
    let m = p.m();
    let d = p.d();
    let n2 = 2 * d;
    let mut a = Array2::<S>::zeros((m, n2));
    for i in 0..m {
        for j in 0..d {
            a[[i, j]] = p.coeffs()[[i, j]];
            a[[i, d + j]] = -p.coeffs()[[i, j]];
        }
    }
    let b = p.offset().mapv(|x| -x);
    let c = Array1::<S>::ones(n2);
    match simplex::solve_standard_form(&a, &b, &c, 50_000) {
        SimplexOutcome::Optimal { x, iterations, .. } => {
            let v = extract(&x, d);
            SolverReport::from_solution(p, v, iterations, SolveStatus::Optimal)
        }
        SimplexOutcome::Infeasible { iterations } => {
            SolverReport::from_solution(p, Array1::zeros(d), iterations, SolveStatus::Infeasible)
        }
        // The split objective is bounded below by zero, so an unbounded
        // ray cannot improve it; treat a report to the contrary as a
        // numerical failure, like hitting the pivot cap.
        SimplexOutcome::Unbounded { iterations } | SimplexOutcome::IterationCap { iterations } => {
            SolverReport::from_solution(p, Array1::zeros(d), iterations, SolveStatus::IterationCap)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn problem(w_mat: Array2<f64>, w_vec: Array1<f64>) -> BasisPursuitProblem<f64> {
        BasisPursuitProblem::new(w_mat, w_vec).unwrap()
    }

    fn gauss(rng: &mut ChaCha8Rng) -> f64 {
        // Box-Muller from two uniforms.
        let u1: f64 = rng.gen::<f64>().max(1e-12);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Random feasible problem with a sparse planted solution.
    fn random_feasible(rng: &mut ChaCha8Rng) -> BasisPursuitProblem<f64> {
        let d = rng.gen_range(2..=20);
        let m = rng.gen_range(1..d.max(2));
        let mut w_mat = Array2::zeros((m, d));
        for e in w_mat.iter_mut() {
            *e = gauss(rng);
        }
        let mut v0 = Array1::zeros(d);
        let nnz = rng.gen_range(1..=(d / 2).max(1));
        for _ in 0..nnz {
            let idx = rng.gen_range(0..d);
            v0[idx] = gauss(rng);
        }
        let w_vec = w_mat.dot(&v0).mapv(|x| -x);
        problem(w_mat, w_vec)
    }

    #[test]
    fn line_constraint_prefers_sparse_axis() {
        // v1 + 2 v2 = 2: cheapest ℓ1 point is (0, 1).
        let p = problem(array![[1.0, 2.0]], array![-2.0]);
        for report in [solve_bp(&p), lp_oracle(&p)] {
            assert_eq!(report.status, SolveStatus::Optimal);
            assert!((report.objective - 1.0).abs() < 1e-7, "{report:?}");
            assert!(report.solution[0].abs() < 1e-6);
            assert!((report.solution[1] - 1.0).abs() < 1e-6);
            assert!(report.constraint_residual <= 1e-8 * 3.0);
        }
    }

    #[test]
    fn identity_constraint_forces_unit_vector() {
        let eye: Array2<f64> = Array2::eye(3);
        let p = problem(eye, array![-1.0, 0.0, 0.0]);
        for report in [solve_bp(&p), lp_oracle(&p)] {
            assert_eq!(report.status, SolveStatus::Optimal);
            assert!((report.objective - 1.0).abs() < 1e-7);
            assert!((report.solution[0] - 1.0).abs() < 1e-6);
            assert!(report.solution[1].abs() < 1e-7);
        }
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let p = problem(array![[1.0], [1.0]], array![-1.0, -2.0]);
        assert_eq!(solve_bp(&p).status, SolveStatus::Infeasible);
        assert_eq!(lp_oracle(&p).status, SolveStatus::Infeasible);
    }

    #[test]
    fn zero_rhs_returns_zero() {
        let p = problem(array![[1.0, -1.0]], array![0.0]);
        for report in [solve_bp(&p), lp_oracle(&p)] {
            assert_eq!(report.status, SolveStatus::Optimal);
            assert!(report.objective.abs() <= 1e-8);
        }
    }

    #[test]
    fn oracle_and_interior_point_agree_on_random_problems() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let p = random_feasible(&mut rng);
            let ip = solve_bp(&p);
            let lp = lp_oracle(&p);
            assert_eq!(ip.status, SolveStatus::Optimal, "{:?}", p.coeffs().dim());
            assert_eq!(lp.status, SolveStatus::Optimal);
            let gap = (ip.objective - lp.objective).abs();
            assert!(
                gap <= 1e-6 * (1.0 + lp.objective),
                "objective gap {gap} on {:?}",
                p.coeffs().dim()
            );
            let w_norm = linalg::norm2(p.offset().view());
            assert!(ip.constraint_residual <= 1e-8 * (1.0 + w_norm));
        }
    }

    #[test]
    fn scaling_the_problem_preserves_the_solution() {
        let p = problem(array![[1.0, 2.0, -1.0]], array![-2.0]);
        let base = solve_bp(&p);
        let scaled = problem(
            p.coeffs().mapv(|x| 37.0 * x),
            p.offset().mapv(|x| 37.0 * x),
        );
        let s = solve_bp(&scaled);
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.objective - base.objective).abs() < 1e-6);
    }

    #[test]
    fn square_full_rank_system_recovers_unique_point() {
        // With W invertible the constraint pins v exactly.
        let w_mat = array![[2.0, 1.0], [1.0, 3.0]];
        let target = array![0.5, -1.5];
        let w_vec = w_mat.dot(&target).mapv(|x: f64| -x);
        let p = problem(w_mat, w_vec);
        let report = solve_bp(&p);
        assert_eq!(report.status, SolveStatus::Optimal);
        for j in 0..2 {
            assert!((report.solution[j] - target[j]).abs() < 1e-6);
        }
    }

    #[test]
    fn penalized_large_lambda_gives_zero() {
        let p = problem(array![[1.0, 2.0]], array![-2.0]);
        // λ at twice ‖2Wᵀw‖_∞ kills every coordinate.
        let report = solve_bp_penalized(&p, 16.0).unwrap();
        assert_eq!(report.status, SolveStatus::Optimal);
        assert!(report.objective == 0.0);
    }

    #[test]
    fn penalized_identity_soft_thresholds() {
        let eye: Array2<f64> = Array2::eye(2);
        let p = problem(eye, array![-1.0, 0.0]);
        let report = solve_bp_penalized(&p, 0.2).unwrap();
        assert_eq!(report.status, SolveStatus::Optimal);
        assert!((report.solution[0] - 0.9).abs() < 1e-6, "{:?}", report.solution);
        assert!(report.solution[1].abs() < 1e-9);
    }

    #[test]
    fn penalized_approaches_constrained_solution() {
        let p = problem(array![[1.0, 2.0]], array![-2.0]);
        let constrained = solve_bp(&p).objective;
        let mut lambda = 1.0;
        let mut last_gap = f64::INFINITY;
        while lambda >= 1e-6 {
            let report = solve_bp_penalized(&p, lambda).unwrap();
            let gap = (report.objective - constrained).abs();
            assert!(gap <= last_gap + 1e-9, "gap grew at lambda={lambda}");
            last_gap = gap;
            lambda /= 10.0;
        }
        assert!(last_gap <= 1e-3, "final gap {last_gap}");
    }

    #[test]
    fn penalized_rejects_bad_lambda() {
        let p = problem(array![[1.0]], array![-1.0]);
        assert!(solve_bp_penalized(&p, 0.0).is_err());
        assert!(solve_bp_penalized(&p, -1.0).is_err());
    }

    #[test]
    fn problem_validation() {
        assert!(BasisPursuitProblem::new(Array2::<f64>::zeros((0, 2)), Array1::zeros(0)).is_err());
        assert!(BasisPursuitProblem::new(Array2::<f64>::zeros((2, 2)), Array1::zeros(3)).is_err());
        assert!(
            BasisPursuitProblem::new(array![[f64::NAN, 1.0]], array![1.0]).is_err()
        );
    }

    #[test]
    fn report_invariants_hold_on_random_problems() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let p = random_feasible(&mut rng);
            let report = solve_bp(&p);
            assert!((report.objective - linalg::norm1(report.solution.view())).abs() < 1e-12);
            if report.status == SolveStatus::Optimal {
                let w_norm = linalg::norm2(p.offset().view());
                assert!(report.constraint_residual <= 1e-8 * (1.0 + w_norm));
            }
        }
    }

    #[test]
    fn works_in_single_precision() {
        let p = BasisPursuitProblem::<f32>::new(array![[1.0f32, 2.0]], array![-2.0f32]).unwrap();
        let report = solve_bp(&p);
        assert_eq!(report.status, SolveStatus::Optimal);
        assert!((report.objective - 1.0).abs() < 1e-3);
    }
}
