//! Dense symmetric eigendecomposition by cyclic Jacobi rotations.
//!
//! The decomposition underpins both clustering algorithms, so its output
//! contract is strict: eigenvalues ascending, eigenvector columns
//! orthonormal, and a deterministic sign convention (the entry of largest
//! magnitude in each column is positive, ties resolved toward the lowest
//! index) so equal inputs produce identical bases.

use ndarray::{s, Array1, Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// Eigenvalues sorted ascending, paired with orthonormal eigenvector
/// columns: `vectors.column(j)` belongs to `values[j]`.
#[derive(Debug, Clone)]
pub struct EigenBasis<S: Scalar = f64> {
    values: Vec<S>,
    vectors: Array2<S>,
}

impl<S: Scalar> EigenBasis<S> {
    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn vectors(&self) -> &Array2<S> {
        &self.vectors
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// The `count` eigenvectors of smallest eigenvalue, ascending.
    pub fn bottom_k(&self, count: usize) -> Result<Array2<S>> {
        self.check_count(count)?;
        Ok(self.vectors.slice(s![.., 0..count]).to_owned())
    }

    /// The `count` eigenvectors of largest eigenvalue, still in ascending
    /// eigenvalue order (the trailing columns of the basis).
    pub fn top_k(&self, count: usize) -> Result<Array2<S>> {
        self.check_count(count)?;
        let n = self.n();
        Ok(self.vectors.slice(s![.., n - count..n]).to_owned())
    }

    fn check_count(&self, count: usize) -> Result<()> {
        if count == 0 || count > self.n() {
            return Err(Error::invalid(format!(
                "eigenvector count {count} outside 1..={}",
                self.n()
            )));
        }
        Ok(())
    }
}

/// Stopping parameters for the Jacobi sweep.
#[derive(Debug, Clone)]
pub struct JacobiParams<S: Scalar = f64> {
    /// Convergence when the off-diagonal Frobenius norm drops below
    /// `rel_tol` times the Frobenius norm of the input.
    pub rel_tol: S,
    /// Hard cap on full sweeps over the upper triangle.
    pub max_sweeps: usize,
}

impl<S: Scalar> Default for JacobiParams<S> {
    fn default() -> Self {
        JacobiParams {
            rel_tol: S::eig_tol(),
            max_sweeps: 100,
        }
    }
}

/// Eigendecomposition with default parameters. See [`eig_sym_with`].
pub fn eig_sym<S: Scalar>(m: &Array2<S>) -> Result<EigenBasis<S>> {
    eig_sym_with(m, &JacobiParams::default())
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Rejects non-square or visibly asymmetric input; fails with
/// [`Error::NonConvergence`] if the sweep cap is hit first.
pub fn eig_sym_with<S: Scalar>(m: &Array2<S>, params: &JacobiParams<S>) -> Result<EigenBasis<S>> {
    let n = m.nrows();
    if n == 0 || n != m.ncols() {
        return Err(Error::invalid(format!(
            "eigendecomposition needs a square nonempty matrix, got {}x{}",
            n,
            m.ncols()
        )));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (m[[i, j]] - m[[j, i]]).abs() > S::sym_tol() {
                return Err(Error::invalid(format!(
                    "matrix is not symmetric at ({i},{j})"
                )));
            }
        }
    }

    let mut a = m.clone();
    // Fold in any sub-tolerance asymmetry so the iteration sees an exactly
    // symmetric matrix.
    let half = S::of(0.5);
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (a[[i, j]] + a[[j, i]]) * half;
            a[[i, j]] = avg;
            a[[j, i]] = avg;
        }
    }
    let mut v = Array2::<S>::eye(n);
    let threshold = params.rel_tol * linalg::fro_norm(m.view());

    let mut converged = linalg::off_diag_fro(a.view()) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < params.max_sweeps {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq == S::zero() {
                    continue;
                }
                // Rotation angle zeroing a[p][q]: t is the stable root of
                // t^2 + 2*theta*t - 1 = 0 with |t| <= 1.
                let theta = (a[[q, q]] - a[[p, p]]) / (S::of(2.0) * apq);
                let t = if theta >= S::zero() {
                    S::one() / (theta + (theta * theta + S::one()).sqrt())
                } else {
                    S::one() / (theta - (theta * theta + S::one()).sqrt())
                };
                let c = S::one() / (t * t + S::one()).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
        converged = linalg::off_diag_fro(a.view()) <= threshold;
    }
    if !converged {
        return Err(Error::NonConvergence {
            sweeps: params.max_sweeps,
        });
    }

    // Ascending eigenvalue sort; equal values keep their sweep order so
    // the result stays deterministic.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[[i, i]]
            .partial_cmp(&a[[j, j]])
            .expect("eigenvalues are finite")
            .then(i.cmp(&j))
    });

    let mut values = Vec::with_capacity(n);
    let mut vectors = Array2::<S>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        values.push(a[[src, src]]);
        // Sign convention: largest-magnitude entry positive, scanning from
        // index 0 so ties pick the lowest index.
        let col = v.column(src);
        let mut lead = 0;
        for i in 1..n {
            if col[i].abs() > col[lead].abs() {
                lead = i;
            }
        }
        let flip = col[lead] < S::zero();
        for i in 0..n {
            vectors[[i, dst]] = if flip { -col[i] } else { col[i] };
        }
    }

    Ok(EigenBasis { values, vectors })
}

/// Rank-one downdate `m - v vᵀ`.
pub fn deflate<S: Scalar>(m: &Array2<S>, v: ArrayView1<S>) -> Result<Array2<S>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::invalid("deflation needs a square matrix"));
    }
    if v.len() != n {
        return Err(Error::invalid(format!(
            "vector length {} does not match matrix size {n}",
            v.len()
        )));
    }
    let mut out = m.clone();
    for i in 0..n {
        for j in 0..n {
            out[[i, j]] -= v[i] * v[j];
        }
    }
    Ok(out)
}

/// Residual of `x` against the span of the orthonormal columns `q`:
/// `‖x − q qᵀ x‖₂ / ‖x‖₂`. Zero means `x` lies in the span.
pub fn span_residual<S: Scalar>(q: &Array2<S>, x: ArrayView1<S>) -> S {
    let coeffs: Array1<S> = q.t().dot(&x);
    let projected = q.dot(&coeffs);
    let mut diff = x.to_owned();
    diff -= &projected;
    linalg::norm2(diff.view()) / linalg::norm2(x)
}
