//! Quadratic forms `s = z^T p(A) z` for symmetric `A`.
//!
//! One-sided evaluation forms `p(A) z` with a forward recurrence and dots the
//! result with `z`: `n` products for degree `n`. Two-sided evaluation moves
//! half of every power onto the left factor, which symmetry permits:
//!
//! * monomials: `z^T A^{2j} z = |A^j z|^2` and `z^T A^{2j-1} z = (A^{j-1} z)^T (A^j z)`;
//! * Chebyshev: `T_{2j} = 2 T_j^2 - T_0` and `T_{2j+1} = 2 T_j T_{j+1} - T_1`,
//!   so with `z_j = T_j(A) z` the forms are `2 z_j^T z_j - z^T z` and
//!   `2 z_j^T z_{j+1} - z^T A z`.
//!
//! Either way only `z_1 .. z_{ceil(n/2)}` are needed, i.e. `ceil(n/2)`
//! products, and only the two latest iterates are kept alive.
//!
//! Dots are plain left-to-right sums. Terms are accumulated into `s` in index
//! order `j = 0, 1, .., n`, so an [`EvalReport`]'s `terms` add up to its
//! `value` exactly when summed in order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chebyshev::{Basis, PolynomialCoefficients};
use crate::dot;
use crate::error::{Error, Result};
use crate::operator::{check_len, SymmetricOperator};

/// Outcome of one quadratic-form evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub value: f64,
    /// Products with the operator taken by this evaluation.
    pub matvecs: usize,
    /// `terms[j]` is the contribution of `a_j`, i.e. `a_j z^T A^j z` or
    /// `a_j z^T T_j(A) z` as this evaluator computed it. Only filled in when
    /// requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evaluator {
    OneSidedStandard,
    TwoSidedStandard,
    OneSidedChebyshev,
    TwoSidedChebyshev,
}

impl Evaluator {
    pub const ALL: [Evaluator; 4] = [
        Evaluator::OneSidedStandard,
        Evaluator::TwoSidedStandard,
        Evaluator::OneSidedChebyshev,
        Evaluator::TwoSidedChebyshev,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Evaluator::OneSidedStandard => "one-sided-standard",
            Evaluator::TwoSidedStandard => "two-sided-standard",
            Evaluator::OneSidedChebyshev => "one-sided-chebyshev",
            Evaluator::TwoSidedChebyshev => "two-sided-chebyshev",
        }
    }

    pub fn basis(self) -> Basis {
        match self {
            Evaluator::OneSidedStandard | Evaluator::TwoSidedStandard => Basis::Standard,
            Evaluator::OneSidedChebyshev | Evaluator::TwoSidedChebyshev => Basis::Chebyshev,
        }
    }

    pub fn is_two_sided(self) -> bool {
        matches!(
            self,
            Evaluator::TwoSidedStandard | Evaluator::TwoSidedChebyshev
        )
    }

    /// Products one evaluation of a degree-`n` polynomial takes:
    /// `n` one-sided, `ceil(n/2)` two-sided.
    pub fn matvec_count(self, degree: usize) -> usize {
        if self.is_two_sided() {
            degree.div_ceil(2)
        } else {
            degree
        }
    }

    /// Human-readable form of [`matvec_count`](Self::matvec_count).
    pub fn matvec_formula(self) -> &'static str {
        if self.is_two_sided() {
            "ceil(n/2)"
        } else {
            "n"
        }
    }

    pub fn evaluate<O: SymmetricOperator + ?Sized>(
        self,
        op: &O,
        z: &[f64],
        coeffs: &PolynomialCoefficients,
        with_terms: bool,
    ) -> Result<EvalReport> {
        match self {
            Evaluator::OneSidedStandard => one_sided_standard(op, z, coeffs, with_terms),
            Evaluator::TwoSidedStandard => two_sided_standard(op, z, coeffs, with_terms),
            Evaluator::OneSidedChebyshev => one_sided_chebyshev(op, z, coeffs, with_terms),
            Evaluator::TwoSidedChebyshev => two_sided_chebyshev(op, z, coeffs, with_terms),
        }
    }
}

impl fmt::Display for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Evaluator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Evaluator::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Evaluator::ALL.iter().map(|e| e.name()).collect();
                format!(
                    "unknown evaluator `{s}`; expected one of {}",
                    names.join(", ")
                )
            })
    }
}

struct Accumulator {
    value: f64,
    terms: Option<Vec<f64>>,
    matvecs: usize,
}

impl Accumulator {
    fn new(degree: usize, with_terms: bool) -> Self {
        Self {
            value: 0.0,
            terms: with_terms.then(|| Vec::with_capacity(degree + 1)),
            matvecs: 0,
        }
    }

    fn add(&mut self, term: f64) {
        self.value += term;
        if let Some(t) = &mut self.terms {
            t.push(term);
        }
    }

    fn apply<O: SymmetricOperator + ?Sized>(&mut self, op: &O, v: &[f64], out: &mut [f64]) {
        op.apply(v, out);
        self.matvecs += 1;
    }

    fn finish(self) -> EvalReport {
        EvalReport {
            value: self.value,
            matvecs: self.matvecs,
            terms: self.terms,
        }
    }
}

fn check_inputs<O: SymmetricOperator + ?Sized>(
    evaluator: Evaluator,
    op: &O,
    z: &[f64],
    coeffs: &PolynomialCoefficients,
) -> Result<()> {
    if coeffs.basis() != evaluator.basis() {
        return Err(Error::BasisMismatch {
            evaluator: evaluator.name(),
            expected: evaluator.basis(),
            actual: coeffs.basis(),
        });
    }
    check_len(op.dim(), z.len())
}

/// `v <- 2 v - w`
fn chebyshev_step(v: &mut [f64], w: &[f64]) {
    for (x, y) in v.iter_mut().zip(w) {
        *x = 2.0 * *x - y;
    }
}

/// `sum_j a_j z^T (A^j z)` with `z_j = A z_{j-1}`; `n` products.
pub fn one_sided_standard<O: SymmetricOperator + ?Sized>(
    op: &O,
    z: &[f64],
    coeffs: &PolynomialCoefficients,
    with_terms: bool,
) -> Result<EvalReport> {
    check_inputs(Evaluator::OneSidedStandard, op, z, coeffs)?;
    let a = coeffs.coeffs();
    let mut acc = Accumulator::new(coeffs.degree(), with_terms);

    acc.add(a[0] * dot(z, z));
    let mut cur = z.to_vec();
    let mut next = vec![0.0; z.len()];
    for &aj in &a[1..] {
        acc.apply(op, &cur, &mut next);
        acc.add(aj * dot(z, &next));
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(acc.finish())
}

/// Monomial-basis quadratic form in `ceil(n/2)` products.
///
/// With `z_0 = z` and `z_j = A z_{j-1}`, step `j` adds
/// `a_{2j-1} z_{j-1}^T z_j` and, unless `n = 2j - 1`, `a_{2j} z_j^T z_j`.
pub fn two_sided_standard<O: SymmetricOperator + ?Sized>(
    op: &O,
    z: &[f64],
    coeffs: &PolynomialCoefficients,
    with_terms: bool,
) -> Result<EvalReport> {
    check_inputs(Evaluator::TwoSidedStandard, op, z, coeffs)?;
    let a = coeffs.coeffs();
    let n = coeffs.degree();
    let mut acc = Accumulator::new(n, with_terms);

    acc.add(a[0] * dot(z, z));
    let mut prev = z.to_vec();
    let mut cur = vec![0.0; z.len()];
    for j in 1..=n.div_ceil(2) {
        acc.apply(op, &prev, &mut cur);
        acc.add(a[2 * j - 1] * dot(&prev, &cur));
        if n == 2 * j - 1 {
            break;
        }
        acc.add(a[2 * j] * dot(&cur, &cur));
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(acc.finish())
}

/// `sum_j a_j z^T T_j(A) z` with `z_{j+1} = 2 A z_j - z_{j-1}`; `n` products.
pub fn one_sided_chebyshev<O: SymmetricOperator + ?Sized>(
    op: &O,
    z: &[f64],
    coeffs: &PolynomialCoefficients,
    with_terms: bool,
) -> Result<EvalReport> {
    check_inputs(Evaluator::OneSidedChebyshev, op, z, coeffs)?;
    let a = coeffs.coeffs();
    let n = coeffs.degree();
    let mut acc = Accumulator::new(n, with_terms);

    acc.add(a[0] * dot(z, z));
    if n == 0 {
        return Ok(acc.finish());
    }
    let mut prev = z.to_vec();
    let mut cur = vec![0.0; z.len()];
    acc.apply(op, z, &mut cur);
    acc.add(a[1] * dot(z, &cur));

    let mut next = vec![0.0; z.len()];
    for &aj in &a[2..] {
        acc.apply(op, &cur, &mut next);
        chebyshev_step(&mut next, &prev);
        acc.add(aj * dot(z, &next));
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(acc.finish())
}

/// Chebyshev-basis quadratic form in `ceil(n/2)` products.
///
/// With `z_j = T_j(A) z`, `zeta_0 = z^T z` and `zeta_1 = z^T z_1`:
/// the first three terms are `a_0 zeta_0`, `a_1 zeta_1` and
/// `a_2 (2 z_1^T z_1 - zeta_0)`; step `j >= 2` forms
/// `z_j = 2 A z_{j-1} - z_{j-2}` and adds `a_{2j-1} (2 z_{j-1}^T z_j - zeta_1)`
/// and, unless `n = 2j - 1`, `a_{2j} (2 z_j^T z_j - zeta_0)`.
///
/// Degree 0 takes no product; degrees 1 and 2 take one.
pub fn two_sided_chebyshev<O: SymmetricOperator + ?Sized>(
    op: &O,
    z: &[f64],
    coeffs: &PolynomialCoefficients,
    with_terms: bool,
) -> Result<EvalReport> {
    check_inputs(Evaluator::TwoSidedChebyshev, op, z, coeffs)?;
    let a = coeffs.coeffs();
    let n = coeffs.degree();
    let mut acc = Accumulator::new(n, with_terms);

    let zeta0 = dot(z, z);
    acc.add(a[0] * zeta0);
    if n == 0 {
        return Ok(acc.finish());
    }

    let mut prev = z.to_vec();
    let mut cur = vec![0.0; z.len()];
    acc.apply(op, z, &mut cur);
    let zeta1 = dot(z, &cur);
    acc.add(a[1] * zeta1);
    if n == 1 {
        return Ok(acc.finish());
    }
    acc.add(a[2] * (2.0 * dot(&cur, &cur) - zeta0));

    // prev = z_{j-2}, cur = z_{j-1}
    let mut next = vec![0.0; z.len()];
    for j in 2..=n.div_ceil(2) {
        acc.apply(op, &cur, &mut next);
        chebyshev_step(&mut next, &prev);
        acc.add(a[2 * j - 1] * (2.0 * dot(&cur, &next) - zeta1));
        if n == 2 * j - 1 {
            break;
        }
        acc.add(a[2 * j] * (2.0 * dot(&next, &next) - zeta0));
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(acc.finish())
}
