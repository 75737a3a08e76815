//! Textbook two-phase simplex on standard-form problems, used as an
//! independent small-scale oracle for the interior-point solver.
//!
//! Bland's rule (lowest eligible index for both entering and leaving
//! variables) guarantees termination without cycling at the cost of
//! speed, which is irrelevant at oracle sizes.

use ndarray::{Array1, Array2};

use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub(crate) enum SimplexOutcome<S: Scalar> {
    Optimal {
        x: Array1<S>,
        iterations: usize,
    },
    Infeasible {
        iterations: usize,
    },
    Unbounded {
        iterations: usize,
    },
    IterationCap {
        iterations: usize,
    },
}

/// Minimizes `cᵀx` subject to `A x = b`, `x ≥ 0`.
pub(crate) fn solve_standard_form<S: Scalar>(
    a: &Array2<S>,
    b: &Array1<S>,
    c: &Array1<S>,
    max_pivots: usize,
) -> SimplexOutcome<S> {
    let m = a.nrows();
    let n = a.ncols();
    debug_assert_eq!(b.len(), m);
    debug_assert_eq!(c.len(), n);
    let tol = S::pivot_tol();

    // Tableau over n original + m artificial columns, plus the rhs column.
    // Row `m` is the objective row in z_j - c_j form.
    let cols = n + m + 1;
    let rhs = n + m;
    let mut t = Array2::<S>::zeros((m + 1, cols));
    for i in 0..m {
        let flip = b[i] < S::zero();
        for j in 0..n {
            t[[i, j]] = if flip { -a[[i, j]] } else { a[[i, j]] };
        }
        t[[i, n + i]] = S::one();
        t[[i, rhs]] = b[i].abs();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut iterations = 0usize;

    // Phase 1: minimize the sum of artificials. With the artificial basis,
    // z_j - c_j for an original column is the column sum.
    for j in 0..n {
        let mut sum = S::zero();
        for i in 0..m {
            sum += t[[i, j]];
        }
        t[[m, j]] = sum;
    }
    let mut rhs_sum = S::zero();
    for i in 0..m {
        rhs_sum += t[[i, rhs]];
    }
    t[[m, rhs]] = rhs_sum;

    match pivot_loop(&mut t, &mut basis, n, tol, max_pivots, &mut iterations) {
        LoopEnd::Optimal => {}
        LoopEnd::Unbounded => return SimplexOutcome::Unbounded { iterations },
        LoopEnd::Cap => return SimplexOutcome::IterationCap { iterations },
    }
    if t[[m, rhs]] > tol {
        return SimplexOutcome::Infeasible { iterations };
    }

    // Drive remaining artificials out of the basis where a pivot exists;
    // rows without one are redundant and keep a zero-valued artificial,
    // which phase 2 never re-enters (entering scan stops at column n).
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[[i, j]].abs() > tol) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }

    // Phase 2: rebuild the objective row for the real costs.
    for j in 0..cols {
        t[[m, j]] = S::zero();
    }
    for j in 0..n {
        t[[m, j]] = -c[j];
    }
    for i in 0..m {
        if basis[i] < n {
            let cb = c[basis[i]];
            if cb != S::zero() {
                for j in 0..cols {
                    let tij = t[[i, j]];
                    t[[m, j]] += cb * tij;
                }
            }
        }
    }

    match pivot_loop(&mut t, &mut basis, n, tol, max_pivots, &mut iterations) {
        LoopEnd::Optimal => {}
        LoopEnd::Unbounded => return SimplexOutcome::Unbounded { iterations },
        LoopEnd::Cap => return SimplexOutcome::IterationCap { iterations },
    }

    let mut x = Array1::<S>::zeros(n);
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[[i, rhs]];
        }
    }
    SimplexOutcome::Optimal { x, iterations }
}

enum LoopEnd {
    Optimal,
    Unbounded,
    Cap,
}

/// Bland pivoting until optimality: entering = lowest column with
/// positive reduced cost (z_j - c_j > tol), leaving = minimum ratio with
/// ties broken by lowest basis variable.
fn pivot_loop<S: Scalar>(
    t: &mut Array2<S>,
    basis: &mut [usize],
    n_enterable: usize,
    tol: S,
    max_pivots: usize,
    iterations: &mut usize,
) -> LoopEnd {
    let m = t.nrows() - 1;
    let rhs = t.ncols() - 1;
    loop {
        let entering = (0..n_enterable).find(|&j| t[[m, j]] > tol);
        let Some(j) = entering else {
            return LoopEnd::Optimal;
        };
        let mut leave: Option<(usize, S)> = None;
        for i in 0..m {
            if t[[i, j]] > tol {
                let ratio = t[[i, rhs]] / t[[i, j]];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && basis[i] < basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
        }
        let Some((i, _)) = leave else {
            return LoopEnd::Unbounded;
        };
        pivot(t, basis, i, j);
        *iterations += 1;
        if *iterations >= max_pivots {
            return LoopEnd::Cap;
        }
    }
}

fn pivot<S: Scalar>(t: &mut Array2<S>, basis: &mut [usize], row: usize, col: usize) {
    let rows = t.nrows();
    let cols = t.ncols();
    let p = t[[row, col]];
    for j in 0..cols {
        t[[row, j]] /= p;
    }
    for i in 0..rows {
        if i != row {
            let factor = t[[i, col]];
            if factor != S::zero() {
                for j in 0..cols {
                    let trj = t[[row, j]];
                    t[[i, j]] -= factor * trj;
                }
            }
        }
    }
    basis[row] = col;
}
