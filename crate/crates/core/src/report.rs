//! Helpers for the JSON-lines reports written by the command line driver.

use std::fmt::Display;

use serde::Serializer;
use serde_json::{json, Value};

/// Serialize any displayable value as a JSON string.
pub fn as_string<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// A failure record: `{"kind": "failure", "check": .., "detail": ..}`.
pub fn failure(check: &str, detail: impl Into<Value>) -> Value {
    json!({ "kind": "failure", "check": check, "detail": detail.into() })
}

/// Tag a record with its kind, keeping the remaining fields.
pub fn tagged(kind: &str, mut record: Value) -> Value {
    if let Value::Object(m) = &mut record {
        m.insert("kind".to_string(), Value::String(kind.to_string()));
    }
    record
}

pub fn is_failure(record: &Value) -> bool {
    record.get("kind").and_then(Value::as_str) == Some("failure")
}
