//! Hutchinson's estimator `tr f(A) ~ (1/m) sum_i z_i^T p(A) z_i` over
//! Rademacher probes `z_i`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebyshev::PolynomialCoefficients;
use crate::error::{Error, Result};
use crate::operator::{DenseSymmetric, SymmetricOperator};
use crate::quadform::Evaluator;

/// Index-addressable Rademacher vectors.
///
/// Probe `i` is drawn from ChaCha20 seeded with `seed` on stream `i`, so it
/// depends only on `(seed, i, dim)` and not on which probes were generated
/// before it or on which thread.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeSequence {
    seed: u64,
    dim: usize,
}

impl ProbeSequence {
    pub fn new(seed: u64, dim: usize) -> Self {
        Self { seed, dim }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `i`-th probe, entries in `{-1, +1}`.
    pub fn rademacher(&self, i: u64) -> Vec<f64> {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(i);
        let mut z = Vec::with_capacity(self.dim);
        while z.len() < self.dim {
            let bits = rng.next_u64();
            let take = (self.dim - z.len()).min(64);
            z.extend((0..take).map(|b| if bits >> b & 1 == 1 { 1.0 } else { -1.0 }));
        }
        z
    }
}

/// FNV-1a hash of the sign pattern of `z`, used to check that two runs
/// consumed the same probes.
pub fn probe_checksum(z: &[f64]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    z.chunks(8).fold(OFFSET, |h, chunk| {
        let byte = chunk
            .iter()
            .enumerate()
            .fold(0u8, |b, (k, &x)| b | (u8::from(x.is_sign_negative()) << k));
        (h ^ u64::from(byte)).wrapping_mul(PRIME)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// One probe's contribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub index: u64,
    pub value: f64,
    pub matvecs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<f64>>,
    pub checksum: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEstimate {
    pub mean: f64,
    /// `m - 1` denominator; absent for a single probe.
    pub sample_stddev: Option<f64>,
    pub m: usize,
    pub total_matvecs: usize,
    pub probe_values: Vec<f64>,
}

impl TraceEstimate {
    pub fn from_probes(probes: &[ProbeResult]) -> Result<Self> {
        if probes.is_empty() {
            return Err(Error::NoProbes);
        }
        let m = probes.len();
        let probe_values: Vec<f64> = probes.iter().map(|p| p.value).collect();
        let mean = probe_values.iter().sum::<f64>() / m as f64;
        let sample_stddev = (m > 1).then(|| {
            let ss: f64 = probe_values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (m - 1) as f64).sqrt()
        });
        Ok(Self {
            mean,
            sample_stddev,
            m,
            total_matvecs: probes.iter().map(|p| p.matvecs).sum(),
            probe_values,
        })
    }

    /// `sample_stddev / sqrt(m)`, if defined.
    pub fn standard_error(&self) -> Option<f64> {
        self.sample_stddev.map(|s| s / (self.m as f64).sqrt())
    }
}

/// Evaluates probes `0..m` of `ProbeSequence::new(seed, op.dim())`.
///
/// Results come back in probe order whatever the execution mode.
pub fn run_probes<O: SymmetricOperator + ?Sized>(
    op: &O,
    coeffs: &PolynomialCoefficients,
    evaluator: Evaluator,
    m: usize,
    seed: u64,
    with_terms: bool,
    execution: Execution,
) -> Result<Vec<ProbeResult>> {
    if m == 0 {
        return Err(Error::NoProbes);
    }
    let probes = ProbeSequence::new(seed, op.dim());
    let one = |i: u64| -> Result<ProbeResult> {
        let z = probes.rademacher(i);
        let report = evaluator.evaluate(op, &z, coeffs, with_terms)?;
        Ok(ProbeResult {
            index: i,
            value: report.value,
            matvecs: report.matvecs,
            terms: report.terms,
            checksum: probe_checksum(&z),
        })
    };
    match execution {
        Execution::Serial => (0..m as u64).map(one).collect(),
        Execution::Parallel => (0..m as u64).into_par_iter().map(one).collect(),
    }
}

/// Hutchinson estimate of `tr p(A)` from `m` probes.
pub fn estimate_trace<O: SymmetricOperator + ?Sized>(
    op: &O,
    coeffs: &PolynomialCoefficients,
    evaluator: Evaluator,
    m: usize,
    seed: u64,
    execution: Execution,
) -> Result<TraceEstimate> {
    let probes = run_probes(op, coeffs, evaluator, m, seed, false, execution)?;
    TraceEstimate::from_probes(&probes)
}

/// `sum_i f(lambda_i)` over all eigenvalues of a dense matrix.
///
/// Meant as a reference value at small sizes; it costs a full
/// eigendecomposition.
pub fn exact_trace_f(a: &DenseSymmetric, f: impl Fn(f64) -> f64) -> Result<f64> {
    Ok(a.eigenvalues()?.into_iter().map(f).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probes_are_signs_and_deterministic() {
        let seq = ProbeSequence::new(9, 100);
        let z = seq.rademacher(0);
        assert_eq!(z.len(), 100);
        assert!(z.iter().all(|x| x.abs() == 1.0));
        assert_eq!(z, seq.rademacher(0));
        assert_ne!(z, seq.rademacher(1));
        assert_ne!(z, ProbeSequence::new(10, 100).rademacher(0));
        assert_eq!(ProbeSequence::new(1, 4).rademacher(3).len(), 4);
    }

    #[test]
    fn probe_entries_are_balanced() {
        let z = ProbeSequence::new(9, 10_000).rademacher(0);
        let mean = z.iter().sum::<f64>() / z.len() as f64;
        assert!(mean.abs() <= 0.04, "mean {mean}");
    }

    #[test]
    fn probe_order_does_not_matter() {
        let seq = ProbeSequence::new(42, 33);
        let forward: Vec<_> = (0..10).map(|i| seq.rademacher(i)).collect();
        let backward: Vec<_> = (0..10).rev().map(|i| seq.rademacher(i)).collect();
        assert!(forward.iter().eq(backward.iter().rev()));
    }

    #[test]
    fn checksum_sees_sign_flips() {
        let z = ProbeSequence::new(3, 20).rademacher(0);
        let mut w = z.clone();
        w[13] = -w[13];
        assert_ne!(probe_checksum(&z), probe_checksum(&w));
        assert_eq!(probe_checksum(&z), probe_checksum(&z.clone()));
    }

    #[test]
    fn identity_gives_d_times_coefficient_sum() {
        let a = DenseSymmetric::identity(7);
        let c = PolynomialCoefficients::chebyshev(vec![0.5, -0.25, 2.0, 1.0]).unwrap();
        for e in [Evaluator::OneSidedChebyshev, Evaluator::TwoSidedChebyshev] {
            for m in [1, 3, 10] {
                let est = estimate_trace(&a, &c, e, m, 5, Execution::Serial).unwrap();
                assert_eq!(est.mean, 7.0 * 3.25);
                assert_eq!(est.total_matvecs, m * e.matvec_count(3));
            }
        }
    }

    #[test]
    fn single_probe_has_no_stddev() {
        let a = DenseSymmetric::identity(3);
        let c = PolynomialCoefficients::chebyshev(vec![1.0]).unwrap();
        let est = estimate_trace(
            &a,
            &c,
            Evaluator::TwoSidedChebyshev,
            1,
            0,
            Execution::Serial,
        )
        .unwrap();
        assert_eq!(est.sample_stddev, None);
        assert!(matches!(
            estimate_trace(
                &a,
                &c,
                Evaluator::TwoSidedChebyshev,
                0,
                0,
                Execution::Serial
            ),
            Err(Error::NoProbes)
        ));
    }

    #[test]
    fn stddev_uses_m_minus_one() {
        let probes: Vec<ProbeResult> = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .enumerate()
            .map(|(i, &v)| ProbeResult {
                index: i as u64,
                value: v,
                matvecs: 2,
                terms: None,
                checksum: 0,
            })
            .collect();
        let est = TraceEstimate::from_probes(&probes).unwrap();
        assert_eq!(est.mean, 2.5);
        assert!((est.sample_stddev.unwrap() - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(est.total_matvecs, 8);
    }

    #[test]
    fn exact_trace_small_cases() {
        let a = DenseSymmetric::from_diagonal(&[1.0, 2.0, 3.0]);
        assert!((exact_trace_f(&a, |x| x).unwrap() - 6.0).abs() < 1e-14);
        let i = DenseSymmetric::identity(5);
        let want = 5.0 * std::f64::consts::E;
        assert!((exact_trace_f(&i, f64::exp).unwrap() - want).abs() < 1e-13);
    }
}
