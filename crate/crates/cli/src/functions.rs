//! Scalar functions the CLI can interpolate.
//!
//! Names are `name[:params]`. `log` and the reciprocal are singular at
//! `x = -1`, so they are offered shifted by `1 + eps` to stay finite on
//! `[-1, 1]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const DEFAULT_SHIFT: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FunctionSpec {
    /// `exp(c x)`
    ExpScaled(f64),
    /// `1 / (x + 1 + eps)`
    InverseShifted(f64),
    /// `log(x + 1 + eps)`
    LogShifted(f64),
    /// `x^p`
    Power(f64),
    Identity,
    /// `sum_j c_j x^j`
    Polynomial(Vec<f64>),
}

impl FunctionSpec {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            FunctionSpec::ExpScaled(c) => (c * x).exp(),
            FunctionSpec::InverseShifted(eps) => 1.0 / (x + 1.0 + eps),
            FunctionSpec::LogShifted(eps) => (x + 1.0 + eps).ln(),
            FunctionSpec::Power(p) if p.fract() == 0.0 && p.abs() < i32::MAX as f64 => {
                x.powi(*p as i32)
            }
            FunctionSpec::Power(p) => x.powf(*p),
            FunctionSpec::Identity => x,
            FunctionSpec::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &a| acc * x + a),
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::ExpScaled(c) => write!(f, "exp_scaled:{c}"),
            FunctionSpec::InverseShifted(e) => write!(f, "inverse_shifted:{e}"),
            FunctionSpec::LogShifted(e) => write!(f, "log_shifted:{e}"),
            FunctionSpec::Power(p) => write!(f, "power:{p}"),
            FunctionSpec::Identity => f.write_str("identity"),
            FunctionSpec::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(f64::to_string).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

fn parse_param(name: &str, text: Option<&str>, default: Option<f64>) -> Result<f64, String> {
    let value = match (text, default) {
        (Some(t), _) => t
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("`{t}` is not a valid parameter for {name}"))?,
        (None, Some(d)) => d,
        (None, None) => return Err(format!("{name} needs a parameter, e.g. `{name}:2`")),
    };
    if !value.is_finite() {
        return Err(format!("parameter of {name} must be finite"));
    }
    Ok(value)
}

impl FromStr for FunctionSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), Some(p)),
            None => (s.trim(), None),
        };
        let spec = match name {
            "exp_scaled" | "exp" => FunctionSpec::ExpScaled(parse_param(name, param, Some(1.0))?),
            "inverse_shifted" => {
                FunctionSpec::InverseShifted(parse_param(name, param, Some(DEFAULT_SHIFT))?)
            }
            "log_shifted" => {
                FunctionSpec::LogShifted(parse_param(name, param, Some(DEFAULT_SHIFT))?)
            }
            "power" => FunctionSpec::Power(parse_param(name, param, None)?),
            "identity" if param.is_none() => FunctionSpec::Identity,
            "poly" => {
                let text = param.ok_or("poly needs coefficients, e.g. `poly:1,0,2`")?;
                let coeffs = text
                    .split(',')
                    .map(|t| parse_param("poly", Some(t), None))
                    .collect::<Result<Vec<_>, _>>()?;
                FunctionSpec::Polynomial(coeffs)
            }
            _ => {
                return Err(format!(
                    "unknown function `{s}`; expected exp_scaled[:c], inverse_shifted[:eps], \
                     log_shifted[:eps], power:p, identity or poly:c0,c1,..."
                ))
            }
        };
        Ok(spec)
    }
}

impl From<FunctionSpec> for String {
    fn from(f: FunctionSpec) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for FunctionSpec {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}
