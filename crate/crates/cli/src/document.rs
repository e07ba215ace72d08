//! JSON documents read and written by `concom compute`.
//!
//! Input (`BivectorDocument`):
//!
//! ```json
//! { "E": [[1, 0], ["1/2", "-3/4"], [0, 0]], "B": [[0, 0], [0, 0], [0, 1]], "backend": "rational" }
//! ```
//!
//! Each entry is a `[re, im]` pair; a bare number or string is a real entry.
//! Numbers and `"p/q"` strings are accepted by both backends. Instead of
//! `E`/`B` a 4×4 `"F"` matrix of entries may be given; it must be
//! antisymmetric.
//!
//! Output (`ConcomitantDocument`): a schema version, the convention block,
//! one entry per selected concomitant and optionally the duality signs
//! measured on the input. Real-valued concomitants are stored as numbers
//! (float) or `"p/q"` strings (rational); complex-valued ones as `[re, im]`.
//! Tensors are dense nested arrays indexed `[α][β]…`.

use std::collections::BTreeMap;

use concom_core::concomitants::{Concomitant, ConcomitantSet, Convention};
use concom_core::scalar::{format_rational, gaussian, parse_rational, Backend, Complex64, GaussianRational, Scalar};
use concom_core::tensor::{SmallTensor, Variance};
use concom_core::verify::irreducibility::duality_sign_of;
use concom_core::verify::DualitySign;
use concom_core::{compute, Bivector, BivectorError};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BivectorDocument {
    #[serde(rename = "E", default)]
    pub e: Option<Vec<Value>>,
    #[serde(rename = "B", default)]
    pub b: Option<Vec<Value>>,
    #[serde(rename = "F", default)]
    pub f: Option<Vec<Vec<Value>>>,
    #[serde(default)]
    pub backend: Option<Backend>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcomitantDocument {
    pub schema_version: u32,
    pub convention: Convention,
    pub concomitants: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duality_signs: Option<BTreeMap<String, DualitySign>>,
}

impl ConcomitantDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    #[cfg(test)]
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: Self = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(CliError::Parse(format!("unsupported schema_version {}", doc.schema_version)));
        }
        Ok(doc)
    }
}

fn parse_real(v: &Value) -> Result<GaussianRational, CliError> {
    let bad = || CliError::Parse(format!("not a finite number or \"p/q\" string: {v}"));
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(bad()),
    };
    parse_rational(&text).map(|r| gaussian(r, 0.into())).or_else(|| {
        // exponent notation or very long decimals: go through f64
        let x: f64 = text.parse().ok().filter(|x: &f64| x.is_finite())?;
        let r = concom_core::scalar::Rational::approximate_float(x)?;
        Some(gaussian(r, 0.into()))
    })
    .ok_or_else(bad)
}

fn parse_entry(v: &Value) -> Result<GaussianRational, CliError> {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            let (re, im) = (parse_real(&pair[0])?, parse_real(&pair[1])?);
            Ok(gaussian(re.re, im.re))
        }
        Value::Array(pair) => Err(CliError::Parse(format!("expected a [re, im] pair, found {} entries", pair.len()))),
        other => parse_real(other),
    }
}

fn parse_float_real(v: &Value) -> Result<f64, CliError> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| CliError::Parse(format!("bad number {n}"))),
        Value::String(s) => parse_rational(s)
            .map(|r| concom_core::scalar::ratio_to_f64(&r))
            .or_else(|| s.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
            .ok_or_else(|| CliError::Parse(format!("bad number \"{s}\""))),
        other => Err(CliError::Parse(format!("not a number: {other}"))),
    }
}

fn parse_float_entry(v: &Value) -> Result<Complex64, CliError> {
    match v {
        Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(parse_float_real(&pair[0])?, parse_float_real(&pair[1])?)),
        Value::Array(pair) => Err(CliError::Parse(format!("expected a [re, im] pair, found {} entries", pair.len()))),
        other => Ok(Complex64::new(parse_float_real(other)?, 0.0)),
    }
}

/// Converts an entry to the backend scalar.
pub trait EntryScalar: Scalar {
    fn parse_entry(v: &Value) -> Result<Self, CliError>;
    fn to_json(&self, real: bool) -> Value;
}

impl EntryScalar for GaussianRational {
    fn parse_entry(v: &Value) -> Result<Self, CliError> {
        parse_entry(v)
    }

    fn to_json(&self, real: bool) -> Value {
        let re = Value::String(format_rational(&self.re));
        if real {
            re
        } else {
            Value::Array(vec![re, Value::String(format_rational(&self.im))])
        }
    }
}

fn float_json(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

impl EntryScalar for Complex64 {
    fn parse_entry(v: &Value) -> Result<Self, CliError> {
        parse_float_entry(v)
    }

    fn to_json(&self, real: bool) -> Value {
        if real {
            float_json(self.re)
        } else {
            Value::Array(vec![float_json(self.re), float_json(self.im)])
        }
    }
}

fn three<S: EntryScalar>(name: &str, v: &[Value]) -> Result<[S; 3], CliError> {
    if v.len() != 3 {
        return Err(CliError::Parse(format!("`{name}` must have exactly 3 entries, found {}", v.len())));
    }
    Ok([S::parse_entry(&v[0])?, S::parse_entry(&v[1])?, S::parse_entry(&v[2])?])
}

impl BivectorDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn bivector<S: EntryScalar>(&self) -> Result<Bivector<S>, CliError> {
        match (&self.e, &self.b, &self.f) {
            (Some(e), Some(b), None) => Ok(Bivector::new(three("E", e)?, three("B", b)?)),
            (None, None, Some(rows)) => {
                if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                    return Err(CliError::Parse("`F` must be a 4x4 matrix".into()));
                }
                let mut values = Vec::with_capacity(16);
                for row in rows {
                    for v in row {
                        values.push(S::parse_entry(v)?);
                    }
                }
                let m = SmallTensor::from_components(&[Variance::Upper; 2], values).map_err(|e| CliError::Parse(e.to_string()))?;
                Bivector::from_matrix(&m).map_err(|e| match e {
                    BivectorError::NotAntisymmetric { .. } => CliError::NotAntisymmetric(e.to_string()),
                    other => CliError::Parse(other.to_string()),
                })
            }
            _ => Err(CliError::Parse("give either both `E` and `B`, or `F`".into())),
        }
    }
}

fn tensor_json<S: EntryScalar>(t: &SmallTensor<S>, real: bool) -> Value {
    fn nest<S: EntryScalar>(c: &[S], rank: usize, real: bool) -> Value {
        if rank == 0 {
            return c[0].to_json(real);
        }
        let step = c.len() / 4;
        Value::Array((0..4).map(|i| nest(&c[i * step..(i + 1) * step], rank - 1, real)).collect())
    }
    nest(t.components(), t.rank(), real)
}

/// Parses a comma-separated concomitant list; an empty list is an error.
pub fn parse_selection(s: &str) -> Result<Vec<Concomitant>, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if parts.is_empty() {
        return Err(CliError::Selection("empty selection".into()));
    }
    let mut tags = Vec::new();
    for p in parts {
        let tag: Concomitant = p.parse().map_err(CliError::Selection)?;
        if !tags.contains(&tag) {
            tags.push(tag);
        }
    }
    Ok(tags)
}

pub fn build_document<S: EntryScalar>(f: &Bivector<S>, selection: &[Concomitant], duality: bool) -> ConcomitantDocument {
    let set: ConcomitantSet<S> = compute(f);
    let concomitants = selection
        .iter()
        .map(|&tag| (tag.name().to_string(), tensor_json(&set.get(tag), tag.is_real_valued())))
        .collect();
    let duality_signs = duality.then(|| {
        let after = compute(&f.duality_transform());
        selection
            .iter()
            .map(|&tag| (tag.name().to_string(), duality_sign_of(&set.components(tag), &after.components(tag), 1e-12)))
            .collect()
    });
    ConcomitantDocument { schema_version: SCHEMA_VERSION, convention: set.convention.clone(), concomitants, duality_signs }
}
