use ndarray::{LinalgScalar, ScalarOperand};
use num_traits::{Float, FromPrimitive, NumAssignOps};

/// Floating-point scalar usable by every numeric routine in this crate.
///
/// The trait bundles the arithmetic bounds the kernels need and adds
/// per-type default tolerances, so `f32` runs with thresholds that match
/// its precision instead of inheriting `f64` ones it can never reach.
pub trait Scalar:
    Float
    + FromPrimitive
    + NumAssignOps
    + LinalgScalar
    + ScalarOperand
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Relative off-diagonal tolerance at which the Jacobi sweep stops.
    fn eig_tol() -> Self;

    /// Absolute tolerance when checking that an input matrix is symmetric.
    fn sym_tol() -> Self;

    /// Default feasibility and optimality tolerance for the basis-pursuit
    /// solvers and for downstream residual checks.
    fn solver_tol() -> Self;

    /// Pivot magnitude below which the simplex oracle treats a column as zero.
    fn pivot_tol() -> Self;

    /// Lossless conversion from `f64` (modulo rounding for `f32`).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to any Scalar")
    }

    /// Conversion to `f64` for reporting and aggregation.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }
}

impl Scalar for f64 {
    fn eig_tol() -> Self {
        1e-12
    }

    fn sym_tol() -> Self {
        1e-10
    }

    fn solver_tol() -> Self {
        1e-8
    }

    fn pivot_tol() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn eig_tol() -> Self {
        1e-6
    }

    fn sym_tol() -> Self {
        1e-5
    }

    fn solver_tol() -> Self {
        1e-4
    }

    fn pivot_tol() -> Self {
        1e-5
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip<S: Scalar>(x: f64) -> f64 {
        S::of(x).as_f64()
    }

    #[test]
    fn conversions_roundtrip() {
        assert_eq!(roundtrip::<f64>(0.3125), 0.3125);
        assert_eq!(roundtrip::<f32>(0.3125), 0.3125);
        assert_eq!(roundtrip::<f64>(-7.0), -7.0);
    }

    #[test]
    fn f32_tolerances_are_looser() {
        assert!(<f32 as Scalar>::eig_tol() > <f64 as Scalar>::eig_tol() as f32);
        assert!(<f32 as Scalar>::solver_tol() > <f64 as Scalar>::solver_tol() as f32);
    }
}
