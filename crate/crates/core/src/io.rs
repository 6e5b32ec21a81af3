//! Instance and report files. Both carry `"schema": 1`.
//!
//! An instance is `{"schema", "ground_size", "edges", "meta", "fixed"?}`
//! where `fixed` is `{"palette": x, "assignment": {"v": c, ...}}`. Keys are
//! written in sorted order, so equal values give identical bytes.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::coloring::PartialColoring;
use crate::error::{Error, Result};
use crate::system::SetSystem;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub system: SetSystem,
    pub fixed: Option<PartialColoring>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    #[serde(default = "default_schema")]
    schema: u64,
    #[serde(flatten)]
    system: SetSystem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fixed: Option<PartialColoring>,
}

fn default_schema() -> u64 {
    SCHEMA_VERSION
}

impl Instance {
    pub fn new(system: SetSystem) -> Self {
        Instance {
            system,
            fixed: None,
        }
    }

    pub fn with_fixed(system: SetSystem, fixed: PartialColoring) -> Self {
        Instance {
            system,
            fixed: Some(fixed),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawInstance = serde_json::from_str(text)?;
        check_schema(raw.schema)?;
        if let Some(f) = &raw.fixed {
            f.check_domain(raw.system.ground_size())?;
        }
        Ok(Instance {
            system: raw.system,
            fixed: raw.fixed,
        })
    }

    pub fn to_json(&self) -> String {
        let raw = RawInstance {
            schema: SCHEMA_VERSION,
            system: self.system.clone(),
            fixed: self.fixed.clone(),
        };
        to_pretty(&serde_json::to_value(raw).expect("instance serializes"))
    }

    /// Reads from a path, or from stdin when the path is `-`.
    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&read_text(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }
}

fn check_schema(schema: u64) -> Result<()> {
    if schema != SCHEMA_VERSION {
        return Err(Error::Format(format!(
            "unsupported schema {schema}, expected {SCHEMA_VERSION}"
        )));
    }
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

/// Wraps a report body as `{"schema": 1, "command": ..., ...body}`.
pub fn report(command: &str, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), Value::from(SCHEMA_VERSION));
    map.insert("command".into(), Value::from(command));
    match body {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("result".into(), other);
        }
    }
    Value::Object(map)
}

/// Writes to `path`, or to stdout when `path` is `None` or `-`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, text)?,
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Accepts a bare coloring, or a report holding one under `coloring` or
/// `witness`.
pub fn coloring_from_json(text: &str) -> Result<PartialColoring> {
    let value: Value = serde_json::from_str(text)?;
    if let Some(schema) = value.get("schema").and_then(Value::as_u64) {
        check_schema(schema)?;
    }
    let inner = if value.get("palette").is_some() {
        value
    } else if let Some(c) = value.get("coloring").or_else(|| value.get("witness")) {
        c.clone()
    } else {
        return Err(Error::Format(
            "expected a coloring or a report with a \"coloring\" or \"witness\" field".into(),
        ));
    };
    Ok(serde_json::from_value(inner)?)
}

pub fn read_coloring(path: &Path) -> Result<PartialColoring> {
    coloring_from_json(&read_text(path)?)
}
