//! Runs several evaluators over one probe sequence and compares them probe
//! by probe and term by term.

use std::time::Instant;

use quadtrace_core::hutchinson::run_probes;
use quadtrace_core::{
    Basis, Evaluator, Execution, PolynomialCoefficients, SymmetricOperator, TraceEstimate,
};
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Terms at least this fraction of the largest term are compared relatively,
/// smaller ones absolutely (scaled by the largest term).
pub const TERM_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatorRun {
    pub evaluator: Evaluator,
    pub matvecs_per_probe: usize,
    pub total_matvecs: usize,
    pub estimate: TraceEstimate,
    pub probe_checksums: Vec<u64>,
    #[serde(skip)]
    pub probe_terms: Option<Vec<Vec<f64>>>,
    #[serde(skip)]
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermComparison {
    pub threshold: f64,
    /// Largest relative difference among terms above the threshold.
    pub max_rel_diff_large: f64,
    /// Largest `|a - b| / max_j |term_j|` among terms below the threshold.
    pub max_abs_diff_small_scaled: f64,
    pub large_terms: usize,
    pub small_terms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub first: Evaluator,
    pub second: Evaluator,
    /// Relative difference of the two means.
    pub aggregate_rel_diff: f64,
    pub max_per_probe_rel_diff: f64,
    pub per_probe_rel_diff: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_term: Option<TermComparison>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairedRun {
    pub runs: Vec<EvaluatorRun>,
    pub comparisons: Vec<Comparison>,
    /// Whether every evaluator saw the same probe vectors.
    pub paired_probes: bool,
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn coefficients_for(
    evaluator: Evaluator,
    coeffs: &PolynomialCoefficients,
) -> PolynomialCoefficients {
    match evaluator.basis() {
        Basis::Standard => coeffs.to_standard(),
        Basis::Chebyshev => coeffs.to_chebyshev(),
    }
}

pub fn run_paired<O: SymmetricOperator + ?Sized>(
    op: &O,
    coeffs: &PolynomialCoefficients,
    evaluators: &[Evaluator],
    probes: usize,
    seed: u64,
    with_terms: bool,
    execution: Execution,
) -> Result<PairedRun> {
    let mut runs = Vec::with_capacity(evaluators.len());
    for &evaluator in evaluators {
        let p = coefficients_for(evaluator, coeffs);
        let start = Instant::now();
        let results = run_probes(op, &p, evaluator, probes, seed, with_terms, execution)?;
        let wall_seconds = start.elapsed().as_secs_f64();
        let estimate = TraceEstimate::from_probes(&results)?;
        runs.push(EvaluatorRun {
            evaluator,
            matvecs_per_probe: evaluator.matvec_count(p.degree()),
            total_matvecs: estimate.total_matvecs,
            probe_checksums: results.iter().map(|r| r.checksum).collect(),
            probe_terms: with_terms.then(|| {
                results
                    .into_iter()
                    .map(|r| r.terms.unwrap_or_default())
                    .collect()
            }),
            estimate,
            wall_seconds,
        });
    }

    let paired_probes = runs
        .windows(2)
        .all(|w| w[0].probe_checksums == w[1].probe_checksums);

    let mut comparisons = Vec::new();
    for (i, a) in runs.iter().enumerate() {
        for b in &runs[i + 1..] {
            comparisons.push(compare(a, b));
        }
    }
    Ok(PairedRun {
        runs,
        comparisons,
        paired_probes,
    })
}

fn compare(a: &EvaluatorRun, b: &EvaluatorRun) -> Comparison {
    let per_probe_rel_diff: Vec<f64> = a
        .estimate
        .probe_values
        .iter()
        .zip(&b.estimate.probe_values)
        .map(|(x, y)| rel_diff(*x, *y))
        .collect();
    let per_term = match (&a.probe_terms, &b.probe_terms) {
        (Some(ta), Some(tb)) if a.evaluator.basis() == b.evaluator.basis() => {
            Some(compare_terms(ta, tb))
        }
        _ => None,
    };
    Comparison {
        first: a.evaluator,
        second: b.evaluator,
        aggregate_rel_diff: rel_diff(a.estimate.mean, b.estimate.mean),
        max_per_probe_rel_diff: per_probe_rel_diff.iter().copied().fold(0.0, f64::max),
        per_probe_rel_diff,
        per_term,
    }
}

/// Compares per-term breakdowns probe by probe. The threshold is relative
/// to the largest term of the same probe.
pub fn compare_terms(a: &[Vec<f64>], b: &[Vec<f64>]) -> TermComparison {
    let mut out = TermComparison {
        threshold: TERM_THRESHOLD,
        max_rel_diff_large: 0.0,
        max_abs_diff_small_scaled: 0.0,
        large_terms: 0,
        small_terms: 0,
    };
    for (ta, tb) in a.iter().zip(b) {
        let largest = ta.iter().chain(tb).fold(0.0f64, |m, x| m.max(x.abs()));
        if largest == 0.0 {
            continue;
        }
        for (x, y) in ta.iter().zip(tb) {
            if x.abs().max(y.abs()) > TERM_THRESHOLD * largest {
                out.large_terms += 1;
                out.max_rel_diff_large = out.max_rel_diff_large.max(rel_diff(*x, *y));
            } else {
                out.small_terms += 1;
                out.max_abs_diff_small_scaled =
                    out.max_abs_diff_small_scaled.max((x - y).abs() / largest);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use quadtrace_core::DenseSymmetric;

    #[test]
    fn rel_diff_edge_cases() {
        assert_eq!(rel_diff(0.0, 0.0), 0.0);
        assert_eq!(rel_diff(1.0, 0.0), 1.0);
        assert_eq!(rel_diff(2.0, 1.0), 0.5);
    }

    #[test]
    fn term_split() {
        let a = vec![vec![1.0, 1e-10, 0.5]];
        let b = vec![vec![1.0 + 1e-12, 2e-10, 0.5]];
        let c = compare_terms(&a, &b);
        assert_eq!((c.large_terms, c.small_terms), (2, 1));
        assert!((c.max_abs_diff_small_scaled - 1e-10).abs() < 1e-20);
        assert!(c.max_rel_diff_large < 1e-11);
    }

    #[test]
    fn paired_run_over_identity() {
        let a = DenseSymmetric::identity(10);
        let p = PolynomialCoefficients::chebyshev(vec![0.0, 1.0]).unwrap();
        let run = run_paired(
            &a,
            &p,
            &[Evaluator::OneSidedChebyshev, Evaluator::TwoSidedChebyshev],
            1,
            0,
            true,
            Execution::Serial,
        )
        .unwrap();
        assert!(run.paired_probes);
        for r in &run.runs {
            assert_eq!(r.estimate.mean, 10.0);
            assert_eq!(r.total_matvecs, 1);
        }
        assert_eq!(run.comparisons.len(), 1);
        assert_eq!(run.comparisons[0].aggregate_rel_diff, 0.0);
        assert!(run.comparisons[0].per_term.is_some());
    }

    #[test]
    fn cross_basis_pairs_skip_term_comparison() {
        let a = DenseSymmetric::from_diagonal(&[0.5, -0.25, 0.75]);
        let p = PolynomialCoefficients::chebyshev(vec![1.0, 0.5, 0.25]).unwrap();
        let run = run_paired(&a, &p, &Evaluator::ALL, 3, 4, true, Execution::Serial).unwrap();
        assert_eq!(run.comparisons.len(), 6);
        for c in &run.comparisons {
            assert_eq!(c.per_term.is_some(), c.first.basis() == c.second.basis());
            assert!(c.max_per_probe_rel_diff < 1e-14);
        }
    }
}
