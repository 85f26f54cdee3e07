//! Spectral bounds and rescaling onto `[-1, 1]`.
//!
//! Chebyshev series only behave on `[-1, 1]`, so an operator is first bounded
//! (`lo <= lambda_min`, `lambda_max <= hi`) and then wrapped in a
//! [`ScaledOperator`] applying `(2A - (lo + hi) I) / (hi - lo)`.
//!
//! The bounds come from power iteration. A plain power iteration on `A`
//! stalls when `lambda_min ~ -lambda_max` (common for random matrices: the
//! iterate keeps mixing both ends), so the spectral radius `r` is found
//! first from `|A x|` and the ends are then taken from the positive
//! semidefinite shifts `A + r I` and `r I - A`, whose dominant eigenvalues
//! are unambiguous.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::chebyshev::Interval;
use crate::dot;
use crate::error::{Error, Result};
use crate::operator::{DenseSymmetric, SymmetricOperator};

/// Bounds on the spectrum of an operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralInterval {
    /// Lower bound, margin included.
    pub lo: f64,
    /// Upper bound, margin included.
    pub hi: f64,
    /// Relative outward margin applied to the raw estimates.
    pub margin: f64,
    /// False when power iteration ran out of iterations before reaching its
    /// tolerance; the bounds are then the last iterates.
    pub converged: bool,
}

impl SpectralInterval {
    /// Widens `[lo, hi]` by `margin * (hi - lo) / 2` on each side.
    pub fn with_margin(lo: f64, hi: f64, margin: f64, converged: bool) -> Result<Self> {
        if hi - lo < 1e-14 * lo.abs().max(hi.abs()).max(1.0) {
            return Err(Error::DegenerateSpectrum { lo, hi });
        }
        let pad = margin * 0.5 * (hi - lo);
        Ok(Self {
            lo: lo - pad,
            hi: hi + pad,
            margin,
            converged,
        })
    }

    /// The exact extremal eigenvalues of a dense matrix, no margin.
    pub fn exact(a: &DenseSymmetric) -> Result<Self> {
        let ev = a.eigenvalues()?;
        Self::with_margin(ev[0], ev[ev.len() - 1], 0.0, true)
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo, self.hi).expect("spectral interval is non-degenerate")
    }

    /// Image of an eigenvalue of the original operator under the rescaling.
    pub fn map(&self, lambda: f64) -> f64 {
        (2.0 * lambda - (self.lo + self.hi)) / (self.hi - self.lo)
    }

    pub fn contains(&self, lambda: f64) -> bool {
        self.lo <= lambda && lambda <= self.hi
    }
}

/// Settings for [`estimate_interval`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerIteration {
    /// Iteration budget for each of the three runs.
    pub iters: usize,
    /// Stop once successive estimates differ by at most `tol` relative.
    pub tol: f64,
    pub seed: u64,
    pub margin: f64,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            iters: 500,
            tol: 1e-8,
            seed: 0,
            margin: 0.01,
        }
    }
}

struct Run {
    value: f64,
    converged: bool,
}

/// Power iteration on `v <- (A + shift I) v`.
///
/// With `norm_only` the estimate is `|B x|` (the spectral radius of `B`),
/// otherwise the Rayleigh quotient `x^T B x`.
fn power_run<O: SymmetricOperator + ?Sized>(
    op: &O,
    shift: f64,
    start: &[f64],
    cfg: &PowerIteration,
    norm_only: bool,
) -> Run {
    let mut x = start.to_vec();
    let mut y = vec![0.0; x.len()];
    let mut estimate = f64::NAN;
    for _ in 0..cfg.iters {
        op.apply(&x, &mut y);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += shift * xi;
        }
        let norm = dot(&y, &y).sqrt();
        let next = if norm_only { norm } else { dot(&x, &y) };
        if norm == 0.0 {
            // x lies in the null space of A + shift I.
            return Run {
                value: next,
                converged: true,
            };
        }
        let done = (next - estimate).abs() <= cfg.tol * next.abs();
        estimate = next;
        std::mem::swap(&mut x, &mut y);
        x.iter_mut().for_each(|v| *v /= norm);
        if done {
            return Run {
                value: estimate,
                converged: true,
            };
        }
    }
    Run {
        value: estimate,
        converged: false,
    }
}

/// Estimates `[lambda_min, lambda_max]` of `op` by power iteration and
/// widens it by `cfg.margin`.
///
/// Not converging within `cfg.iters` is reported through
/// [`SpectralInterval::converged`], not as an error. A (near) single-point
/// spectrum is an error since it cannot be mapped onto `[-1, 1]`.
pub fn estimate_interval<O: SymmetricOperator + ?Sized>(
    op: &O,
    cfg: &PowerIteration,
) -> Result<SpectralInterval> {
    let d = op.dim();
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mut start: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
    let norm = dot(&start, &start).sqrt();
    start.iter_mut().for_each(|v| *v /= norm);

    let radius = power_run(op, 0.0, &start, cfg, true);
    if radius.value == 0.0 {
        return Err(Error::DegenerateSpectrum { lo: 0.0, hi: 0.0 });
    }
    let r = radius.value;
    let top = power_run(op, r, &start, cfg, false);
    let bottom = power_run(op, -r, &start, cfg, false);
    let hi = top.value - r;
    let lo = bottom.value + r;
    SpectralInterval::with_margin(
        lo,
        hi,
        cfg.margin,
        radius.converged && top.converged && bottom.converged,
    )
}

/// `(2A - (lo + hi) I) / (hi - lo)`; one inner product per application.
#[derive(Debug, Clone)]
pub struct ScaledOperator<O> {
    inner: O,
    interval: SpectralInterval,
}

pub fn scale_operator<O: SymmetricOperator>(
    op: O,
    interval: SpectralInterval,
) -> ScaledOperator<O> {
    ScaledOperator::new(op, interval)
}

impl<O: SymmetricOperator> ScaledOperator<O> {
    pub fn new(inner: O, interval: SpectralInterval) -> Self {
        assert!(
            interval.lo < interval.hi,
            "spectral interval must satisfy lo < hi"
        );
        Self { inner, interval }
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn interval(&self) -> SpectralInterval {
        self.interval
    }
}

impl<O: SymmetricOperator> SymmetricOperator for ScaledOperator<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        self.inner.apply(v, out);
        let SpectralInterval { lo, hi, .. } = self.interval;
        let (center, width) = (lo + hi, hi - lo);
        for (o, x) in out.iter_mut().zip(v) {
            *o = (2.0 * *o - center * x) / width;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::CountingOperator;

    #[test]
    fn known_diagonal_spectrum() {
        let a = DenseSymmetric::from_diagonal(&[1.0, 2.0, 3.0]);
        let cfg = PowerIteration {
            iters: 2000,
            tol: 1e-12,
            seed: 1,
            margin: 0.0,
        };
        let iv = estimate_interval(&a, &cfg).unwrap();
        assert!((iv.lo - 1.0).abs() < 1e-8, "{iv:?}");
        assert!((iv.hi - 3.0).abs() < 1e-8, "{iv:?}");
        assert!(iv.converged);
    }

    #[test]
    fn multiple_of_identity_is_degenerate() {
        let a = DenseSymmetric::from_diagonal(&[-1.0; 5]);
        let err = estimate_interval(&a, &PowerIteration::default()).unwrap_err();
        assert!(matches!(err, Error::DegenerateSpectrum { .. }));
        let zero = DenseSymmetric::from_diagonal(&[0.0; 3]);
        assert!(estimate_interval(&zero, &PowerIteration::default()).is_err());
    }

    #[test]
    fn unconverged_is_flagged_not_fatal() {
        let a = DenseSymmetric::from_diagonal(&[1.0, 1.001, 2.0, 2.001]);
        let cfg = PowerIteration {
            iters: 3,
            tol: 1e-15,
            seed: 2,
            margin: 0.01,
        };
        let iv = estimate_interval(&a, &cfg).unwrap();
        assert!(!iv.converged);
        assert!(iv.lo < iv.hi);
    }

    #[test]
    fn margin_widens_symmetrically() {
        let iv = SpectralInterval::with_margin(-2.0, 4.0, 0.1, true).unwrap();
        assert!((iv.lo + 2.3).abs() < 1e-15);
        assert!((iv.hi - 4.3).abs() < 1e-15);
    }

    #[test]
    fn scaled_endpoints() {
        let a = DenseSymmetric::from_diagonal(&[1.0, 3.0]);
        let iv = SpectralInterval::with_margin(1.0, 3.0, 0.0, true).unwrap();
        let s = scale_operator(&a, iv);
        assert_eq!(s.matvec(&[1.0, 1.0]).unwrap(), vec![-1.0, 1.0]);
        assert_eq!(iv.map(1.0), -1.0);
        assert_eq!(iv.map(3.0), 1.0);
    }

    #[test]
    fn canonical_scaling_is_identity() {
        let a = crate::operator::random_symmetric(30, 3);
        let iv = SpectralInterval::with_margin(-1.0, 1.0, 0.0, true).unwrap();
        let s = scale_operator(&a, iv);
        let v: Vec<f64> = (0..30).map(|i| (i as f64 * 0.37).sin()).collect();
        let got = s.matvec(&v).unwrap();
        let want = a.matvec(&v).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-15 * w.abs().max(1.0));
        }
    }

    #[test]
    fn scaling_costs_one_product() {
        let a = DenseSymmetric::from_diagonal(&[1.0, 5.0]);
        let counted = CountingOperator::new(&a);
        let s = ScaledOperator::new(
            &counted,
            SpectralInterval::with_margin(1.0, 5.0, 0.0, true).unwrap(),
        );
        let mut out = [0.0; 2];
        for _ in 0..7 {
            s.apply(&[1.0, 2.0], &mut out);
        }
        assert_eq!(counted.count(), 7);
    }
}
