use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use super::SymmetricOperator;
use crate::dot;
use crate::error::{Error, Result};

/// Fully stored dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymmetric {
    dim: usize,
    entries: Vec<f64>,
}

impl DenseSymmetric {
    /// Builds from `dim * dim` row-major entries, which must be exactly symmetric.
    pub fn from_row_major(dim: usize, entries: Vec<f64>) -> Result<Self> {
        super::check_len(dim * dim, entries.len())?;
        for i in 0..dim {
            for j in (i + 1)..dim {
                let upper = entries[i * dim + j];
                let lower = entries[j * dim + i];
                if upper != lower {
                    return Err(Error::NotSymmetric {
                        row: i,
                        col: j,
                        upper,
                        lower,
                    });
                }
            }
        }
        Ok(Self { dim, entries })
    }

    /// Builds from a function of `(row, col)` evaluated on the lower triangle
    /// and mirrored, so the result is symmetric by construction.
    pub fn from_lower_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                let x = f(i, j);
                entries[i * dim + j] = x;
                entries[j * dim + i] = x;
            }
        }
        Self { dim, entries }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut entries = vec![0.0; dim * dim];
        for (i, &x) in diag.iter().enumerate() {
            entries[i * dim + i] = x;
        }
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.entries
    }

    /// Copies any operator into dense form by applying it to unit vectors.
    ///
    /// Rounding can leave the columns very slightly asymmetric; the result is
    /// symmetrized by averaging.
    pub fn from_operator<O: SymmetricOperator + ?Sized>(op: &O) -> Self {
        let d = op.dim();
        let mut cols = vec![0.0; d * d];
        let mut e = vec![0.0; d];
        for j in 0..d {
            e[j] = 1.0;
            op.apply(&e, &mut cols[j * d..(j + 1) * d]);
            e[j] = 0.0;
        }
        // cols is column-major; entry (i, j) lives at j * d + i.
        Self::from_lower_fn(d, |i, j| 0.5 * (cols[j * d + i] + cols[i * d + j]))
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let max_iter = 50 * self.dim.max(10);
        let eig = SymmetricEigen::try_new(self.to_nalgebra(), f64::EPSILON, max_iter)
            .ok_or(Error::EigenFailed)?;
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }
}

impl SymmetricOperator for DenseSymmetric {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.dim);
        assert_eq!(out.len(), self.dim);
        for (o, row) in out.iter_mut().zip(self.entries.chunks_exact(self.dim)) {
            *o = dot(row, v);
        }
    }
}

/// `(B + B^T) / 2` for `B` with i.i.d. standard normal entries.
///
/// `B` is drawn row-major from a ChaCha20 stream seeded with `seed`, so the
/// same `(dim, seed)` reproduces the matrix bit for bit.
pub fn random_symmetric(dim: usize, seed: u64) -> DenseSymmetric {
    assert!(dim >= 1, "matrix dimension must be positive");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let b: Vec<f64> = (0..dim * dim)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    DenseSymmetric::from_lower_fn(dim, |i, j| 0.5 * (b[i * dim + j] + b[j * dim + i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_action() {
        let a = DenseSymmetric::from_diagonal(&[2.0, 3.0]);
        assert_eq!(a.matvec(&[1.0, 1.0]).unwrap(), vec![2.0, 3.0]);
    }

    #[test]
    fn identity_action() {
        let a = DenseSymmetric::identity(3);
        assert_eq!(a.matvec(&[1.0, -2.0, 5.0]).unwrap(), vec![1.0, -2.0, 5.0]);
    }

    #[test]
    fn permutation_action() {
        let a = DenseSymmetric::from_row_major(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(a.matvec(&[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn rejects_asymmetric_entries() {
        let err = DenseSymmetric::from_row_major(2, vec![1.0, 2.0, 2.5, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { row: 0, col: 1, .. }));
    }

    #[test]
    fn random_is_symmetric_and_reproducible() {
        let m = random_symmetric(50, 7);
        let mut worst: f64 = 0.0;
        for i in 0..50 {
            for j in 0..50 {
                worst = worst.max((m.get(i, j) - m.get(j, i)).abs());
            }
        }
        assert_eq!(worst, 0.0);
        assert_eq!(m, random_symmetric(50, 7));
        assert_ne!(m, random_symmetric(50, 8));

        let one = random_symmetric(1, 3);
        assert_eq!(one.dim(), 1);
        assert!(one.get(0, 0).is_finite());
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let a = DenseSymmetric::from_diagonal(&[3.0, -1.0, 2.0]);
        let ev = a.eigenvalues().unwrap();
        for (got, want) in ev.iter().zip([-1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn from_operator_round_trips() {
        let a = random_symmetric(12, 1);
        assert_eq!(DenseSymmetric::from_operator(&a), a);
    }
}
