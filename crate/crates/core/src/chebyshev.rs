//! Chebyshev polynomials of the first kind.
//!
//! `T_0 = 1`, `T_1 = x`, `T_{j+1} = 2x T_j - T_{j-1}`. Polynomials are kept as
//! coefficient lists together with the interval `[lo, hi]` they live on; a
//! point `x` of that interval is mapped affinely onto `t` in `[-1, 1]` before
//! the basis is evaluated.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const CANONICAL: Interval = Interval { lo: -1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo, hi })
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_canonical(&self) -> bool {
        *self == Self::CANONICAL
    }

    /// Maps `x` in `[lo, hi]` to `t = (2x - lo - hi) / (hi - lo)` in `[-1, 1]`.
    pub fn to_canonical(&self, x: f64) -> f64 {
        affine_to_canonical(*self, x)
    }

    /// Inverse of [`to_canonical`](Self::to_canonical).
    pub fn from_canonical(&self, t: f64) -> f64 {
        0.5 * (self.hi - self.lo) * t + 0.5 * (self.hi + self.lo)
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;
    fn try_from([lo, hi]: [f64; 2]) -> Result<Self> {
        Interval::new(lo, hi)
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

impl Default for Interval {
    fn default() -> Self {
        Self::CANONICAL
    }
}

/// `(2x - a - b) / (b - a)`: sends `a` to -1 and `b` to 1.
pub fn affine_to_canonical(interval: Interval, x: f64) -> f64 {
    (2.0 * x - (interval.lo + interval.hi)) / (interval.hi - interval.lo)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `p(t) = sum a_j t^j`
    Standard,
    /// `p(t) = sum a_j T_j(t)`
    Chebyshev,
}

/// `p(x) = sum_j a_j B_j(t(x))` for the chosen basis `B` and the affine map
/// `t` from `interval` onto `[-1, 1]`.
///
/// With the default interval `[-1, 1]` the map is the identity. The matrix
/// evaluators in [`crate::quadform`] ignore the interval: they evaluate the
/// polynomial in the operator they are given, which for a non-canonical
/// interval should be the matching [`crate::spectrum::ScaledOperator`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoefficientFile", into = "CoefficientFile")]
pub struct PolynomialCoefficients {
    basis: Basis,
    coeffs: Vec<f64>,
    interval: Interval,
}

impl PolynomialCoefficients {
    pub fn new(basis: Basis, coeffs: Vec<f64>, interval: Interval) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        if let Some((index, &value)) = coeffs.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(Error::NonFiniteCoefficient { index, value });
        }
        Ok(Self {
            basis,
            coeffs,
            interval,
        })
    }

    pub fn standard(coeffs: Vec<f64>) -> Result<Self> {
        Self::new(Basis::Standard, coeffs, Interval::CANONICAL)
    }

    pub fn chebyshev(coeffs: Vec<f64>) -> Result<Self> {
        Self::new(Basis::Chebyshev, coeffs, Interval::CANONICAL)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn with_interval(mut self, interval: Interval) -> Self {
        self.interval = interval;
        self
    }

    /// Scalar value at `x`; see [`eval_scalar`].
    pub fn eval(&self, x: f64) -> f64 {
        eval_scalar(self, x)
    }

    /// Same polynomial in the monomial basis of `t`.
    ///
    /// Monomial coefficients of high-degree Chebyshev series grow like `2^n`,
    /// so this is only well conditioned for modest degrees.
    pub fn to_standard(&self) -> Self {
        let coeffs = match self.basis {
            Basis::Standard => self.coeffs.clone(),
            Basis::Chebyshev => chebyshev_to_monomial(&self.coeffs),
        };
        Self {
            basis: Basis::Standard,
            coeffs,
            interval: self.interval,
        }
    }

    /// Same polynomial in the Chebyshev basis of `t`.
    pub fn to_chebyshev(&self) -> Self {
        let coeffs = match self.basis {
            Basis::Chebyshev => self.coeffs.clone(),
            Basis::Standard => monomial_to_chebyshev(&self.coeffs),
        };
        Self {
            basis: Basis::Chebyshev,
            coeffs,
            interval: self.interval,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("coefficient serialization cannot fail")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|source| Error::CoefficientFormat {
            path: path.to_path_buf(),
            source,
        })
    }
}

pub const COEFFICIENT_FORMAT: &str = "quadtrace-coefficients";
pub const COEFFICIENT_FORMAT_VERSION: u32 = 1;

/// On-disk layout. Floats are written in shortest round-trip form, so a
/// save/load cycle reproduces every coefficient bit for bit.
#[derive(Serialize, Deserialize)]
struct CoefficientFile {
    format: String,
    version: u32,
    basis: Basis,
    interval: Interval,
    coefficients: Vec<f64>,
}

impl TryFrom<CoefficientFile> for PolynomialCoefficients {
    type Error = String;
    fn try_from(f: CoefficientFile) -> std::result::Result<Self, String> {
        if f.format != COEFFICIENT_FORMAT {
            return Err(format!("unexpected format tag `{}`", f.format));
        }
        if f.version != COEFFICIENT_FORMAT_VERSION {
            return Err(format!(
                "unsupported coefficient file version {}",
                f.version
            ));
        }
        PolynomialCoefficients::new(f.basis, f.coefficients, f.interval).map_err(|e| e.to_string())
    }
}

impl From<PolynomialCoefficients> for CoefficientFile {
    fn from(p: PolynomialCoefficients) -> Self {
        CoefficientFile {
            format: COEFFICIENT_FORMAT.to_string(),
            version: COEFFICIENT_FORMAT_VERSION,
            basis: p.basis,
            interval: p.interval,
            coefficients: p.coeffs,
        }
    }
}

/// `cos(m * pi / n)`, written as a sine so that symmetric arguments give
/// exactly symmetric values and `cos(pi / 2)` is exactly zero.
fn cos_pi_ratio(m: usize, n: usize) -> f64 {
    let m = m % (2 * n);
    ((n as f64 - 2.0 * m as f64) * PI / (2.0 * n as f64)).sin()
}

/// The `n + 1` points `cos(j pi / n)`, `j = 0..=n`, from 1 down to -1.
pub fn chebyshev_nodes(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::DegreeTooSmall { degree: 0, min: 1 });
    }
    Ok((0..=n).map(|j| cos_pi_ratio(j, n)).collect())
}

/// Degree-`n` Chebyshev interpolant of `f` on `interval`.
///
/// `f` is sampled at the mapped nodes `x_j = from_canonical(cos(j pi / n))`
/// and the coefficients are the discrete cosine sums
///
/// ```text
/// a_k = (2/n) * sum''_{j=0..n} f(x_j) cos(j k pi / n)
/// ```
///
/// where `''` halves the first and last summands; `a_0` and `a_n` are halved
/// once more. The sums are evaluated directly in `O(n^2)`.
pub fn interpolate(
    f: impl Fn(f64) -> f64,
    n: usize,
    interval: Interval,
) -> Result<PolynomialCoefficients> {
    let nodes = chebyshev_nodes(n)?;
    let mut samples = Vec::with_capacity(n + 1);
    for &t in &nodes {
        let x = interval.from_canonical(t);
        let value = f(x);
        if !value.is_finite() {
            return Err(Error::NonFiniteSample { node: x, value });
        }
        samples.push(value);
    }

    let scale = 2.0 / n as f64;
    let coeffs = (0..=n)
        .map(|k| {
            let mut acc = 0.0;
            for (j, &fj) in samples.iter().enumerate() {
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                acc += w * fj * cos_pi_ratio(j * k, n);
            }
            let a = scale * acc;
            if k == 0 || k == n {
                0.5 * a
            } else {
                a
            }
        })
        .collect();
    PolynomialCoefficients::new(Basis::Chebyshev, coeffs, interval)
}

/// Evaluates `p` at the scalar `x`.
///
/// Chebyshev series use the Clenshaw recurrence, monomial series use Horner.
/// Points outside `p.interval()` are extrapolated; nothing is checked.
pub fn eval_scalar(p: &PolynomialCoefficients, x: f64) -> f64 {
    let t = p.interval.to_canonical(x);
    match p.basis {
        Basis::Standard => p.coeffs.iter().rev().fold(0.0, |acc, &a| acc * t + a),
        Basis::Chebyshev => clenshaw(&p.coeffs, t),
    }
}

fn clenshaw(coeffs: &[f64], t: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &a in coeffs[1..].iter().rev() {
        let b0 = a + 2.0 * t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + t * b1 - b2
}

fn chebyshev_to_monomial(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    let mut out = vec![0.0; n];
    // Monomial expansions of T_{j-1} and T_j.
    let mut prev = vec![0.0; n];
    let mut cur = vec![0.0; n];
    cur[0] = 1.0;
    for (j, &a) in coeffs.iter().enumerate() {
        if j == 1 {
            prev.copy_from_slice(&cur);
            cur.iter_mut().for_each(|c| *c = 0.0);
            cur[1] = 1.0;
        } else if j > 1 {
            let mut next = vec![0.0; n];
            for k in 0..n {
                let shifted = if k > 0 { 2.0 * cur[k - 1] } else { 0.0 };
                next[k] = shifted - prev[k];
            }
            prev = std::mem::replace(&mut cur, next);
        }
        for (o, c) in out.iter_mut().zip(&cur) {
            *o += a * c;
        }
    }
    out
}

fn monomial_to_chebyshev(coeffs: &[f64]) -> Vec<f64> {
    // Horner in the Chebyshev basis: p <- t * p + a_k, with
    // t T_0 = T_1 and t T_j = (T_{j+1} + T_{j-1}) / 2.
    let n = coeffs.len();
    let mut p = vec![0.0; n];
    for &a in coeffs.iter().rev() {
        let mut next = vec![0.0; n];
        for (j, &c) in p.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if j == 0 {
                next[1] += c;
            } else {
                next[j + 1] += 0.5 * c;
                next[j - 1] += 0.5 * c;
            }
        }
        next[0] += a;
        p = next;
    }
    p
}
