//! Generator parameters: loosely typed values checked against a per-family
//! schema, and the `(family, params, seed)` spec that reproduces an image.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Text(String),
    List(Vec<f64>),
}

pub type Params = BTreeMap<String, ParamValue>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("parameter `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

impl ParamError {
    pub fn new(key: &str, reason: impl Into<String>) -> Self {
        Self::Invalid {
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    pub fn key(&self) -> &str {
        match self {
            Self::Invalid { key, .. } => key,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamKind {
    Number { min: f64, max: f64, integer: bool },
    Choice(&'static [&'static str]),
    List { min_len: usize, max_len: usize, min: f64, max: f64 },
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub doc: &'static str,
}

impl ParamSpec {
    pub const fn number(name: &'static str, min: f64, max: f64, doc: &'static str) -> Self {
        Self {
            name,
            kind: ParamKind::Number { min, max, integer: false },
            doc,
        }
    }

    pub const fn integer(name: &'static str, min: f64, max: f64, doc: &'static str) -> Self {
        Self {
            name,
            kind: ParamKind::Number { min, max, integer: true },
            doc,
        }
    }

    pub const fn choice(name: &'static str, options: &'static [&'static str], doc: &'static str) -> Self {
        Self {
            name,
            kind: ParamKind::Choice(options),
            doc,
        }
    }

    fn check(&self, v: &ParamValue) -> Result<(), ParamError> {
        let err = |r: String| Err(ParamError::new(self.name, r));
        match (self.kind, v) {
            (ParamKind::Number { min, max, integer }, ParamValue::Number(x)) => {
                if !x.is_finite() || *x < min || *x > max {
                    return err(format!("{x} is outside [{min}, {max}]"));
                }
                if integer && x.fract() != 0.0 {
                    return err(format!("{x} is not an integer"));
                }
                Ok(())
            }
            (ParamKind::Choice(options), ParamValue::Text(s)) => {
                if options.contains(&s.as_str()) {
                    Ok(())
                } else {
                    err(format!("`{s}` is not one of {}", options.join(", ")))
                }
            }
            (ParamKind::List { min_len, max_len, min, max }, ParamValue::List(xs)) => {
                if xs.len() < min_len || xs.len() > max_len {
                    return err(format!("expected {min_len}..={max_len} values, got {}", xs.len()));
                }
                if let Some(x) = xs.iter().find(|x| !x.is_finite() || **x < min || **x > max) {
                    return err(format!("{x} is outside [{min}, {max}]"));
                }
                Ok(())
            }
            (ParamKind::Text, ParamValue::Text(_)) => Ok(()),
            (kind, _) => err(format!("wrong type, expected {}", kind_name(kind))),
        }
    }
}

fn kind_name(k: ParamKind) -> &'static str {
    match k {
        ParamKind::Number { integer: true, .. } => "an integer",
        ParamKind::Number { .. } => "a number",
        ParamKind::Choice(_) => "one of the listed strings",
        ParamKind::List { .. } => "a list of numbers",
        ParamKind::Text => "a string",
    }
}

/// Rejects unknown keys, wrong types and out-of-range values.
pub fn validate_params(schema: &[ParamSpec], params: &Params) -> Result<(), ParamError> {
    for (key, value) in params {
        let spec = schema
            .iter()
            .find(|s| s.name == key)
            .ok_or_else(|| ParamError::new(key, "unknown parameter"))?;
        spec.check(value)?;
    }
    Ok(())
}

/// Typed lookups with defaults, for use after validation.
pub struct ParamReader<'a>(pub &'a Params);

impl ParamReader<'_> {
    pub fn number(&self, key: &str, default: f64) -> f64 {
        match self.0.get(key) {
            Some(ParamValue::Number(x)) => *x,
            _ => default,
        }
    }

    pub fn usize(&self, key: &str, default: usize) -> usize {
        match self.0.get(key) {
            Some(ParamValue::Number(x)) => *x as usize,
            _ => default,
        }
    }

    pub fn text<'b>(&'b self, key: &str, default: &'b str) -> &'b str {
        match self.0.get(key) {
            Some(ParamValue::Text(s)) => s,
            _ => default,
        }
    }

    pub fn list(&self, key: &str) -> Option<&[f64]> {
        match self.0.get(key) {
            Some(ParamValue::List(xs)) => Some(xs),
            _ => None,
        }
    }
}

/// The reproducibility unit: rendering the same spec at the same size gives
/// the same bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: String,
    #[serde(default)]
    pub params: Params,
    pub seed: u64,
}

/// Written next to each generated PNG.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(flatten)]
    pub spec: GeneratorSpec,
    pub width: usize,
    pub height: usize,
}
