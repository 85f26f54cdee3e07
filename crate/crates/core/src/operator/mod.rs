//! Symmetric linear operators.
//!
//! Every evaluator in this crate touches the matrix only through
//! [`SymmetricOperator::apply`], so anything that can produce `A v` for a
//! symmetric `A` can be plugged in. [`CountingOperator`] records how many
//! products were taken, which is the cost measure everything here is judged by.

mod dense;
mod matrix_market;
mod sparse;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

pub use dense::{random_symmetric, DenseSymmetric};
pub use matrix_market::{load_matrix_market, parse_matrix_market, LoadedMatrix};
pub use sparse::SparseSymmetric;

/// A `d x d` symmetric linear map, accessed only through products with vectors.
///
/// Implementations must be deterministic (the same `v` gives bit-identical
/// output) and safe to apply from several threads at once.
pub trait SymmetricOperator: Send + Sync {
    fn dim(&self) -> usize;

    /// Writes `A v` into `out`.
    ///
    /// Both slices must have length [`dim`](Self::dim); implementations may
    /// panic otherwise. Use [`matvec`](Self::matvec) for a checked product.
    fn apply(&self, v: &[f64], out: &mut [f64]);

    /// Checked `A v`.
    fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), v.len())?;
        let mut out = vec![0.0; self.dim()];
        self.apply(v, &mut out);
        Ok(out)
    }
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

impl<T: SymmetricOperator + ?Sized> SymmetricOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        (**self).apply(v, out)
    }
}

impl<T: SymmetricOperator + ?Sized> SymmetricOperator for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        (**self).apply(v, out)
    }
}

impl<T: SymmetricOperator + ?Sized> SymmetricOperator for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        (**self).apply(v, out)
    }
}

/// Wraps an operator and counts calls to `apply`.
#[derive(Debug)]
pub struct CountingOperator<O> {
    inner: O,
    count: AtomicUsize,
}

impl<O: SymmetricOperator> CountingOperator<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            count: AtomicUsize::new(0),
        }
    }

    /// Number of products taken since construction or the last [`reset`](Self::reset).
    pub fn count(&self) -> usize {
        self.count.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.count.store(0, Ordering::Relaxed);
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: SymmetricOperator> SymmetricOperator for CountingOperator<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.inner.apply(v, out);
    }
}
