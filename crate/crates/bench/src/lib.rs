//! Fixtures shared by the benchmarks.

use quadtrace_core::chebyshev::interpolate;
use quadtrace_core::{
    random_symmetric, DenseSymmetric, Interval, PolynomialCoefficients, SparseSymmetric,
    SpectralInterval,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random symmetric matrix scaled so its spectrum lies in `[-1, 1]`.
pub fn dense_fixture(dim: usize, seed: u64) -> DenseSymmetric {
    let a = random_symmetric(dim, seed);
    let iv = SpectralInterval::exact(&a).expect("random matrices are not degenerate");
    let (c, w) = (iv.lo + iv.hi, iv.hi - iv.lo);
    DenseSymmetric::from_lower_fn(dim, |i, j| {
        let diag = if i == j { c } else { 0.0 };
        (2.0 * a.get(i, j) - diag) / w
    })
}

/// Sparse symmetric matrix with about `per_row` off-diagonal entries per row,
/// with entries small enough that its spectrum stays near `[-1, 1]`.
pub fn sparse_fixture(dim: usize, per_row: usize, seed: u64) -> SparseSymmetric {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triplets = Vec::with_capacity(dim * (per_row + 1));
    let weight = 0.5 / per_row.max(1) as f64;
    for i in 0..dim {
        for _ in 0..per_row.div_ceil(2) {
            let j = rng.random_range(0..dim);
            if j != i {
                let v = weight * rng.random_range(-1.0..=1.0);
                triplets.push((i, j, v));
                triplets.push((j, i, v));
            }
        }
        triplets.push((i, i, 0.4 * rng.random_range(-1.0..=1.0)));
    }
    SparseSymmetric::from_triplets(dim, &triplets).expect("pattern is symmetric by construction")
}

/// Chebyshev interpolant of `exp(10x)` on `[-1, 1]`.
pub fn exp_coefficients(degree: usize) -> PolynomialCoefficients {
    interpolate(|x| (10.0 * x).exp(), degree, Interval::CANONICAL)
        .expect("exp is finite on [-1, 1]")
}

/// Rademacher-like sign vector.
pub fn sign_vector(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect()
}
