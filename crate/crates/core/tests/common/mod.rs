//! Brute-force reference computations shared by the integration tests.
//!
//! Nothing here goes through the evaluators, Clenshaw, or the cosine-sum
//! interpolation it is used to check.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use quadtrace_core::{DenseSymmetric, SpectralInterval, SymmetricOperator};

pub type Mat = Vec<Vec<f64>>;

pub fn to_mat(a: &DenseSymmetric) -> Mat {
    (0..a.dim()).map(|i| a.row(i).to_vec()).collect()
}

pub fn identity(d: usize) -> Mat {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let d = a.len();
    let mut c = vec![vec![0.0; d]; d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i][k];
            for j in 0..d {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

pub fn quadratic(z: &[f64], m: &Mat) -> f64 {
    m.iter()
        .zip(z)
        .map(|(row, zi)| zi * row.iter().zip(z).map(|(x, y)| x * y).sum::<f64>())
        .sum()
}

/// `[a_j z^T A^j z]_j` from explicit dense powers of `A`.
pub fn standard_terms(a: &DenseSymmetric, z: &[f64], coeffs: &[f64]) -> Vec<f64> {
    let a = to_mat(a);
    let mut power = identity(a.len());
    coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if j > 0 {
                power = matmul(&power, &a);
            }
            c * quadratic(z, &power)
        })
        .collect()
}

/// `[a_j z^T T_j(A) z]_j` with `T_j(A)` built by the dense matrix recurrence.
pub fn chebyshev_terms(a: &DenseSymmetric, z: &[f64], coeffs: &[f64]) -> Vec<f64> {
    let a = to_mat(a);
    let d = a.len();
    let mut prev = identity(d);
    let mut cur = a.clone();
    let mut out = Vec::with_capacity(coeffs.len());
    for (j, c) in coeffs.iter().enumerate() {
        match j {
            0 => out.push(c * quadratic(z, &prev)),
            1 => out.push(c * quadratic(z, &cur)),
            _ => {
                let ac = matmul(&a, &cur);
                let next: Mat = (0..d)
                    .map(|i| (0..d).map(|k| 2.0 * ac[i][k] - prev[i][k]).collect())
                    .collect();
                out.push(c * quadratic(z, &next));
                prev = std::mem::replace(&mut cur, next);
            }
        }
    }
    out
}

/// `T_j(x)` from the three-term recurrence.
pub fn t_recurrence(j: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if j == 0 {
        return 1.0;
    }
    for _ in 1..j {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `T_j(x) = cos(j arccos x)` on `[-1, 1]`.
pub fn t_trig(j: usize, x: f64) -> f64 {
    (j as f64 * x.clamp(-1.0, 1.0).acos()).cos()
}

/// Chebyshev coefficients on `[-1, 1]` of the degree-`n` interpolant of `f`
/// at `cos(j pi / n)`, by solving the `(n+1) x (n+1)` collocation system.
pub fn linear_system_interpolant(f: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let nodes: Vec<f64> = (0..=n)
        .map(|j| (j as f64 * std::f64::consts::PI / n as f64).cos())
        .collect();
    let v = DMatrix::from_fn(n + 1, n + 1, |k, j| t_trig(j, nodes[k]));
    let rhs = DVector::from_iterator(n + 1, nodes.iter().map(|&x| f(x)));
    let sol = v
        .lu()
        .solve(&rhs)
        .expect("collocation matrix is nonsingular");
    sol.iter().copied().collect()
}

/// Evaluates a Chebyshev series on `[-1, 1]` through the trig definition.
pub fn chebyshev_series_trig(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c * t_trig(j, x))
        .sum()
}

/// `random_symmetric(d, seed)` mapped so its spectrum is exactly `[-1, 1]`
/// (up to rounding), materialized densely.
pub fn scaled_random(d: usize, seed: u64) -> DenseSymmetric {
    let a = quadtrace_core::random_symmetric(d, seed);
    let iv = SpectralInterval::exact(&a).unwrap();
    DenseSymmetric::from_operator(&quadtrace_core::scale_operator(&a, iv))
}

pub fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn sum(v: &[f64]) -> f64 {
    v.iter().sum()
}
