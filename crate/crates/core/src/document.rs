//! JSON wire formats.
//!
//! Operators travel as
//! `{"shape": [n_1, …], "blocks": [[[re, im], …], …], "label": …, "unit": …}`
//! with every block row-major. Numbers are written in shortest round-trip
//! form, so parse ∘ serialise is the identity. Reports use
//! [`to_json_17`], which writes every float with 17 significant digits.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{AlgebraShape, Element};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitKeyword {
    Identity,
}

/// The identified unit: the keyword `"identity"` or explicit blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnitSpec {
    Keyword(UnitKeyword),
    Blocks(Vec<Vec<Complex64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDocument {
    pub shape: AlgebraShape,
    pub blocks: Vec<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<UnitSpec>,
}

impl OperatorDocument {
    pub fn from_element(x: &Element, label: Option<String>) -> Self {
        OperatorDocument {
            shape: x.shape().clone(),
            blocks: x.blocks().iter().map(|b| b.entries().to_vec()).collect(),
            label,
            unit: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Indented JSON with floats in shortest round-trip form.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("documents serialise");
        let mut out = String::new();
        write_value(&v, 0, &mut out, shortest);
        out
    }

    pub fn element(&self) -> Result<Element> {
        Element::from_entries(self.shape.clone(), self.blocks.clone())
    }

    /// The unit named by the document, if any.
    pub fn unit_element(&self) -> Result<Option<Element>> {
        match &self.unit {
            None => Ok(None),
            Some(UnitSpec::Keyword(UnitKeyword::Identity)) => Ok(Some(Element::unit(&self.shape))),
            Some(UnitSpec::Blocks(b)) => Element::from_entries(self.shape.clone(), b.clone()).map(Some),
        }
    }
}

/// Pretty JSON with every float written as `d.dddddddddddddddde±x`
/// (17 significant digits). Integers are written as integers and
/// non-finite floats as `null`.
pub fn to_json_17<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = String::new();
    write_value(&v, 0, &mut out, seventeen);
    out.push('\n');
    Ok(out)
}

fn seventeen(f: f64) -> String {
    format!("{f:.16e}")
}

fn shortest(f: f64) -> String {
    format!("{f:?}")
}

fn indent(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_value(v: &Value, level: usize, out: &mut String, float: fn(f64) -> String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) if !n.is_f64() => out.push_str(&u.to_string()),
            (_, Some(i), _) if !n.is_f64() => out.push_str(&i.to_string()),
            (_, _, Some(f)) if f.is_finite() => out.push_str(&float(f)),
            _ => out.push_str("null"),
        },
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // arrays of scalars stay on one line
            if items.iter().all(|i| !i.is_array() && !i.is_object()) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(item, level, out, float);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                indent(level + 1, out);
                write_value(item, level + 1, out, float);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            indent(level, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                indent(level + 1, out);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(item, level + 1, out, float);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            indent(level, out);
            out.push('}');
        }
    }
}
