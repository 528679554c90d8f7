use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScaleError {
    #[error("scale is undefined for an empty graph (n + m = 0)")]
    EmptyGraph,
    #[error("scale {0} is outside the class table (6.5 to 10.4)")]
    OutOfTable(Scale),
    #[error("unknown size class {0:?}")]
    UnknownClass(String),
}

/// Graph scale `floor(10 * log10(n + m)) / 10`, held as an integer count of tenths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "f64", try_from = "f64")]
pub struct Scale(i32);

impl Scale {
    pub const fn from_tenths(tenths: i32) -> Scale {
        Scale(tenths)
    }

    pub fn tenths(self) -> i32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 10.0
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        write!(f, "{sign}{}.{}", self.0.abs() / 10, self.0.abs() % 10)
    }
}

impl From<Scale> for f64 {
    fn from(s: Scale) -> f64 {
        s.as_f64()
    }
}

impl TryFrom<f64> for Scale {
    type Error = String;
    fn try_from(v: f64) -> Result<Self, Self::Error> {
        let tenths = (v * 10.0).round();
        if !tenths.is_finite() || (tenths - v * 10.0).abs() > 1e-6 {
            return Err(format!("{v} is not a one-decimal scale"));
        }
        Ok(Scale(tenths as i32))
    }
}

/// Computes the scale of a graph with `n` vertices and `m` edges.
///
/// The floating-point estimate is corrected with exact integer comparisons
/// (`10^s <= (n+m)^10 < 10^(s+1)`), so powers of ten land on `k.0` exactly.
pub fn scale_of(n: u64, m: u64) -> Result<Scale, ScaleError> {
    let total = u128::from(n) + u128::from(m);
    if total == 0 {
        return Err(ScaleError::EmptyGraph);
    }
    let tenth_power = BigUint::from(total).pow(10u32);
    let ten = BigUint::from(10u32);
    let mut s = ((total as f64).log10() * 10.0).floor() as i64;
    s = s.max(0);
    while s > 0 && ten.pow(s as u32) > tenth_power {
        s -= 1;
    }
    while ten.pow(s as u32 + 1) <= tenth_power {
        s += 1;
    }
    Ok(Scale(s as i32))
}

/// "T-shirt" size classes, each spanning half a scale unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SizeClass {
    #[serde(rename = "2XS")]
    XXS,
    XS,
    S,
    M,
    L,
    XL,
    #[serde(rename = "2XL")]
    XXL,
    #[serde(rename = "3XL")]
    XXXL,
}

impl SizeClass {
    pub const ALL: [SizeClass; 8] = [
        SizeClass::XXS,
        SizeClass::XS,
        SizeClass::S,
        SizeClass::M,
        SizeClass::L,
        SizeClass::XL,
        SizeClass::XXL,
        SizeClass::XXXL,
    ];

    /// Inclusive scale range covered by this class.
    pub fn range(self) -> (Scale, Scale) {
        let lo = 65 + 5 * self as i32;
        (Scale(lo), Scale(lo + 4))
    }

    pub fn label(self) -> &'static str {
        match self {
            SizeClass::XXS => "2XS",
            SizeClass::XS => "XS",
            SizeClass::S => "S",
            SizeClass::M => "M",
            SizeClass::L => "L",
            SizeClass::XL => "XL",
            SizeClass::XXL => "2XL",
            SizeClass::XXXL => "3XL",
        }
    }
}

impl fmt::Display for SizeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SizeClass {
    type Err = ScaleError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SizeClass::ALL
            .into_iter()
            .find(|c| c.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| ScaleError::UnknownClass(s.to_string()))
    }
}

pub fn size_class(scale: Scale) -> Result<SizeClass, ScaleError> {
    SizeClass::ALL
        .into_iter()
        .find(|c| {
            let (lo, hi) = c.range();
            lo <= scale && scale <= hi
        })
        .ok_or(ScaleError::OutOfTable(scale))
}
