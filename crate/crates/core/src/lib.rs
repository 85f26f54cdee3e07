//! Evaluation of quadratic forms `z^T p(A) z` for symmetric `A`, with the
//! polynomial `p` of degree `n` in the monomial or Chebyshev basis.
//!
//! The two-sided evaluators in [`quadform`] need only `ceil(n/2)`
//! matrix-vector products instead of the `n` a plain forward recurrence
//! uses. Around them sit the pieces a stochastic trace estimator needs:
//!
//! * [`operator`]: dense, sparse and matvec-counting symmetric operators,
//!   synthetic matrices and Matrix Market input.
//! * [`chebyshev`]: nodes, interpolation, Clenshaw evaluation and interval maps.
//! * [`spectrum`]: extremal eigenvalue bounds and affine rescaling onto `[-1, 1]`.
//! * [`hutchinson`]: Rademacher probes and the trace estimator itself.
//!
//! ```
//! use quadtrace_core::chebyshev::interpolate;
//! use quadtrace_core::*;
//!
//! # fn main() -> quadtrace_core::Result<()> {
//! let a = random_symmetric(100, 1);
//! let iv = SpectralInterval::exact(&a)?;
//! let p = interpolate(|x| (10.0 * x).exp(), 20, Interval::CANONICAL)?;
//! let scaled = scale_operator(&a, iv);
//! let est = estimate_trace(&scaled, &p, Evaluator::TwoSidedChebyshev, 50, 0, Execution::Parallel)?;
//! assert!(est.mean > 0.0 && est.standard_error().is_some());
//! # Ok(())
//! # }
//! ```

pub mod chebyshev;
pub mod error;
pub mod hutchinson;
pub mod operator;
pub mod quadform;
pub mod spectrum;

pub use chebyshev::{Basis, Interval, PolynomialCoefficients};
pub use error::{Error, Result};
pub use hutchinson::{
    estimate_trace, exact_trace_f, Execution, ProbeResult, ProbeSequence, TraceEstimate,
};
pub use operator::{
    load_matrix_market, random_symmetric, CountingOperator, DenseSymmetric, LoadedMatrix,
    SparseSymmetric, SymmetricOperator,
};
pub use quadform::{EvalReport, Evaluator};
pub use spectrum::{
    estimate_interval, scale_operator, PowerIteration, ScaledOperator, SpectralInterval,
};

/// Dot product accumulated left to right in index order.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
