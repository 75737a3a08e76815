//! Small dense linear-algebra helpers shared by the solvers.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::scalar::Scalar;

pub(crate) fn norm1<S: Scalar>(v: ArrayView1<S>) -> S {
    v.iter().map(|x| x.abs()).sum()
}

pub(crate) fn norm2<S: Scalar>(v: ArrayView1<S>) -> S {
    v.iter().map(|x| *x * *x).sum::<S>().sqrt()
}

#[cfg(test)]
pub(crate) fn max_abs<S: Scalar>(m: ArrayView2<S>) -> S {
    m.iter().fold(S::zero(), |acc, x| acc.max(x.abs()))
}

pub(crate) fn fro_norm<S: Scalar>(m: ArrayView2<S>) -> S {
    m.iter().map(|x| *x * *x).sum::<S>().sqrt()
}

/// Frobenius norm of the strictly off-diagonal part.
pub(crate) fn off_diag_fro<S: Scalar>(m: ArrayView2<S>) -> S {
    let n = m.nrows();
    let mut acc = S::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[[i, j]] * m[[i, j]];
            }
        }
    }
    acc.sqrt()
}

/// Cholesky factorization of a symmetric positive-definite matrix,
/// stored as the lower factor. Used by the interior-point normal
/// equations, where near-singular systems get a diagonal jitter.
pub(crate) struct SpdSolver<S: Scalar> {
    l: Array2<S>,
}

impl<S: Scalar> SpdSolver<S> {
    /// Plain factorization; `None` when a pivot is non-positive or loses
    /// all significance.
    pub(crate) fn factor(a: &Array2<S>) -> Option<Self> {
        let n = a.nrows();
        debug_assert_eq!(n, a.ncols());
        let mut l = Array2::<S>::zeros((n, n));
        for j in 0..n {
            let mut diag = a[[j, j]];
            for k in 0..j {
                diag -= l[[j, k]] * l[[j, k]];
            }
            if !(diag > S::zero()) || !diag.is_finite() {
                return None;
            }
            let root = diag.sqrt();
            l[[j, j]] = root;
            for i in (j + 1)..n {
                let mut sum = a[[i, j]];
                for k in 0..j {
                    sum -= l[[i, k]] * l[[j, k]];
                }
                l[[i, j]] = sum / root;
            }
        }
        Some(SpdSolver { l })
    }

    /// Factorization with an escalating diagonal jitter: retries with
    /// `a + t*I` for growing `t` until a factorization succeeds.
    pub(crate) fn factor_jittered(a: &Array2<S>) -> Option<Self> {
        if let Some(s) = Self::factor(a) {
            return Some(s);
        }
        let n = a.nrows();
        let mut scale = S::zero();
        for i in 0..n {
            scale = scale.max(a[[i, i]].abs());
        }
        scale = scale.max(S::one());
        let mut jitter = scale * S::epsilon() * S::of(100.0);
        for _ in 0..14 {
            let mut shifted = a.clone();
            for i in 0..n {
                shifted[[i, i]] += jitter;
            }
            if let Some(s) = Self::factor(&shifted) {
                return Some(s);
            }
            jitter *= S::of(10.0);
        }
        None
    }

    /// Solves `A x = b` given the stored factor.
    pub(crate) fn solve(&self, b: ArrayView1<S>) -> Array1<S> {
        let n = self.l.nrows();
        let mut y = Array1::<S>::zeros(n);
        for i in 0..n {
            let mut sum = b[i];
            for k in 0..i {
                sum -= self.l[[i, k]] * y[k];
            }
            y[i] = sum / self.l[[i, i]];
        }
        let mut x = Array1::<S>::zeros(n);
        for i in (0..n).rev() {
            let mut sum = y[i];
            for k in (i + 1)..n {
                sum -= self.l[[k, i]] * x[k];
            }
            x[i] = sum / self.l[[i, i]];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn spd_solve_recovers_known_solution() {
        let a: Array2<f64> = array![[4.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]];
        let x_true = array![1.0, -2.0, 0.5];
        let b = a.dot(&x_true);
        let solver = SpdSolver::factor(&a).expect("SPD");
        let x = solver.solve(b.view());
        for i in 0..3 {
            assert!((x[i] - x_true[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn factor_rejects_indefinite() {
        let a: Array2<f64> = array![[1.0, 2.0], [2.0, 1.0]];
        assert!(SpdSolver::factor(&a).is_none());
    }

    #[test]
    fn jitter_rescues_singular() {
        let a: Array2<f64> = array![[1.0, 1.0], [1.0, 1.0]];
        let solver = SpdSolver::factor_jittered(&a).expect("jitter should rescue");
        let x = solver.solve(array![2.0, 2.0].view());
        // Jittered system stays close to a least-squares-style answer;
        // just require finiteness and rough symmetry of the two entries.
        assert!(x[0].is_finite() && x[1].is_finite());
        assert!((x[0] - x[1]).abs() < 1e-6);
    }

    #[test]
    fn norms() {
        let v = array![3.0, -4.0];
        assert_eq!(norm1(v.view()), 7.0);
        assert_eq!(norm2(v.view()), 5.0);
        let m = array![[1.0, -2.0], [2.0, 1.0]];
        assert_eq!(max_abs(m.view()), 2.0);
        assert!((fro_norm(m.view()) - 10.0f64.sqrt()).abs() < 1e-15);
        assert!((off_diag_fro(m.view()) - 8.0f64.sqrt()).abs() < 1e-15);
    }
}
