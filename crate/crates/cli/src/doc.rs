//! Input and output document schemas.
//!
//! Complex numbers travel as two-element arrays `[re, im]`; exact rationals
//! are `"p/q"` strings (or JSON integers), floats are JSON numbers. The
//! top-level `mode` flag decides which encodings are admissible: exact mode
//! rejects fractional floats rather than guessing an intent, float mode
//! accepts both and converts rationals explicitly.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cdv_core::matrix::Matrix;
use cdv_core::scalar::{Exact, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// One real number in transit.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RNum {
    Str(String),
    Int(i64),
    Float(f64),
}

/// One complex number in transit: `[re, im]`.
pub type CNum = [RNum; 2];

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub mode: Mode,
    #[serde(default)]
    pub frobenius_point: Option<FrobeniusPointDoc>,
    #[serde(default)]
    pub raw_system: Option<RawSystemDoc>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrobeniusPointDoc {
    pub m: usize,
    pub u: Vec<CNum>,
    pub eta_first: Vec<CNum>,
    pub eta_second: Vec<Vec<CNum>>,
    pub d: RNum,
    #[serde(default)]
    pub kappa: Option<Vec<Vec<CNum>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSystemDoc {
    #[serde(rename = "U")]
    pub u: Vec<Vec<CNum>>,
    #[serde(rename = "V", default)]
    pub v: Option<Vec<Vec<CNum>>>,
    #[serde(rename = "Q", default)]
    pub q: Option<Vec<Vec<CNum>>>,
    #[serde(rename = "Udag", default)]
    pub udag: Option<Vec<Vec<CNum>>>,
}

#[derive(Debug)]
pub struct DocError(pub String);

impl std::fmt::Display for DocError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn parse_rational(n: &RNum) -> Result<BigRational, DocError> {
    match n {
        RNum::Str(s) => BigRational::from_str(s.trim())
            .map_err(|e| DocError(format!("cannot parse rational {s:?}: {e}"))),
        RNum::Int(i) => Ok(BigRational::from_integer(BigInt::from(*i))),
        RNum::Float(f) => Err(DocError(format!(
            "exact mode rejects the non-integer float {f}; encode it as \"p/q\""
        ))),
    }
}

pub fn parse_f64(n: &RNum) -> Result<f64, DocError> {
    let value = match n {
        RNum::Str(s) => BigRational::from_str(s.trim())
            .map_err(|e| DocError(format!("cannot parse rational {s:?}: {e}")))?
            .to_f64()
            .ok_or_else(|| DocError(format!("rational {s:?} overflows f64")))?,
        RNum::Int(i) => *i as f64,
        RNum::Float(f) => *f,
    };
    if !value.is_finite() {
        return Err(DocError("float values must be finite".into()));
    }
    Ok(value)
}

pub fn parse_exact(c: &CNum) -> Result<Exact, DocError> {
    Ok(Exact::new(parse_rational(&c[0])?, parse_rational(&c[1])?))
}

pub fn parse_c64(c: &CNum) -> Result<C64, DocError> {
    Ok(C64::new(parse_f64(&c[0])?, parse_f64(&c[1])?))
}

pub fn parse_exact_matrix(rows: &[Vec<CNum>]) -> Result<Matrix<Exact>, DocError> {
    let parsed: Result<Vec<Vec<Exact>>, DocError> = rows
        .iter()
        .map(|r| r.iter().map(parse_exact).collect())
        .collect();
    Matrix::from_rows(parsed?).map_err(|e| DocError(e.to_string()))
}

pub fn parse_c64_matrix(rows: &[Vec<CNum>]) -> Result<Matrix<C64>, DocError> {
    let parsed: Result<Vec<Vec<C64>>, DocError> = rows
        .iter()
        .map(|r| r.iter().map(parse_c64).collect())
        .collect();
    Matrix::from_rows(parsed?).map_err(|e| DocError(e.to_string()))
}

// ---- output encoding ----------------------------------------------------

pub fn rational_json(r: &BigRational) -> Value {
    Value::String(r.to_string())
}

pub fn exact_json(x: &Exact) -> Value {
    json!([x.re.to_string(), x.im.to_string()])
}

pub fn c64_json(x: &C64) -> Value {
    json!([x.re, x.im])
}

pub fn exact_matrix_json(m: &Matrix<Exact>) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(exact_json).collect()))
            .collect(),
    )
}

pub fn c64_matrix_json(m: &Matrix<C64>) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(c64_json).collect()))
            .collect(),
    )
}

pub fn exact_vec_json(v: &[Exact]) -> Value {
    Value::Array(v.iter().map(exact_json).collect())
}

/// Exact polynomial-matrix coefficients, ascending in `z`.
pub fn poly_matrix_json(p: &cdv_core::PolyMatrix<Exact>) -> Value {
    Value::Array(p.coeffs().iter().map(exact_matrix_json).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing_accepts_both_encodings() {
        assert_eq!(
            parse_rational(&RNum::Str("3/4".into())).unwrap(),
            BigRational::new(3.into(), 4.into())
        );
        assert_eq!(
            parse_rational(&RNum::Int(-5)).unwrap(),
            BigRational::from_integer((-5).into())
        );
        assert!(parse_rational(&RNum::Float(0.5)).is_err());
    }

    #[test]
    fn float_parsing_converts_rationals() {
        assert_eq!(parse_f64(&RNum::Str("1/2".into())).unwrap(), 0.5);
        assert!(parse_f64(&RNum::Float(f64::NAN)).is_err());
    }

    #[test]
    fn exact_json_round_trips_through_the_parser() {
        let x = Exact::new(
            BigRational::new(22.into(), 7.into()),
            BigRational::new((-1).into(), 3.into()),
        );
        let encoded = exact_json(&x);
        let as_cnum: CNum = [
            RNum::Str(encoded[0].as_str().unwrap().to_string()),
            RNum::Str(encoded[1].as_str().unwrap().to_string()),
        ];
        assert_eq!(parse_exact(&as_cnum).unwrap(), x);
    }
}
