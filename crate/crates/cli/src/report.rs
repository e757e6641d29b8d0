//! Report values: exact numbers as strings, elements as text plus
//! coefficient maps, rendered as JSON or as indented text.

use confalg::algebra::rational::format_rational;
use confalg::*;
use serde_json::{json, Map, Value};

pub fn rational(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

/// `{"text": "x*e11 - 1/2*e22", "terms": {"e22": "-1/2", "x*e11": "1"}}`.
pub fn algebra_element(a: &AlgebraElement) -> Value {
    let terms: Map<String, Value> = a
        .terms()
        .iter()
        .map(|(b, c)| (b.label(a.shape()), rational(c)))
        .collect();
    json!({ "text": a.to_string(), "terms": terms })
}

/// Terms map each base label to its ∂-polynomial, keyed by degree.
pub fn conformal_element(e: &ConformalElement) -> Value {
    let terms: Map<String, Value> = e
        .terms()
        .iter()
        .map(|(b, p)| (b.label(e.shape()), polynomial(p)))
        .collect();
    json!({ "text": e.to_string(), "terms": terms })
}

pub fn polynomial(p: &Polynomial) -> Value {
    let coeffs: Map<String, Value> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != confalg::algebra::rational::int(0))
        .map(|(k, c)| (k.to_string(), rational(c)))
        .collect();
    Value::Object(coeffs)
}

/// `{"t^k": element}` keyed by the power of `t`.
pub fn ore_element(x: &OreElement) -> Value {
    let terms: Map<String, Value> = x
        .terms()
        .iter()
        .map(|(k, b)| (k.to_string(), algebra_element(b)))
        .collect();
    json!({ "text": x.to_string(), "terms": terms })
}

pub fn elements(v: &[ConformalElement]) -> Value {
    Value::Array(v.iter().map(conformal_element).collect())
}

pub fn base_elements(v: &[AlgebraElement]) -> Value {
    Value::Array(v.iter().map(algebra_element).collect())
}

/// Indented `key: value` text. Elements print as their text form.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    write_text(&mut out, v, 0);
    out
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::Object(m) if m.contains_key("text") && m.contains_key("terms") => {
            m["text"].as_str().map(str::to_string)
        }
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && scalar_text(x).is_some() && !x.is_object()) => {
            Some(a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", "))
        }
        _ => None,
    }
}

fn write_text(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_text(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_text(out, x, indent + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other).unwrap_or_default())),
    }
}
