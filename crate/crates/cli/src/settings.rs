//! Flag/config-file merging. Every subcommand's settings struct is both a
//! clap argument group and a serde object; a config file supplies defaults
//! and explicit flags override it key by key.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Loads a config object. A run manifest is accepted too: its `config`
/// member is used after checking that it belongs to `subcommand`.
fn load_object(path: &Path, subcommand: &str) -> CliResult<Map<String, Value>> {
    let value: Value =
        serde_json::from_str(&read_text(path)?).map_err(|e| CliError::input(path, e))?;
    let Value::Object(mut obj) = value else {
        return Err(CliError::input(path, "config must be a JSON object"));
    };
    if let (Some(Value::String(sub)), Some(_)) = (obj.get("subcommand"), obj.get("config")) {
        if sub != subcommand {
            return Err(CliError::input(
                path,
                format!("manifest belongs to `{sub}`, not `{subcommand}`"),
            ));
        }
        return match obj.remove("config") {
            Some(Value::Object(inner)) => Ok(inner),
            _ => Err(CliError::input(path, "manifest `config` must be an object")),
        };
    }
    Ok(obj)
}

/// Overlays the non-null flag values onto the config file (if any).
pub fn resolve<T: Serialize + DeserializeOwned>(
    flags: &T,
    config: Option<&Path>,
    subcommand: &str,
) -> CliResult<T> {
    let mut merged = match config {
        Some(p) => load_object(p, subcommand)?,
        None => Map::new(),
    };
    if let Value::Object(over) = serde_json::to_value(flags).expect("settings serialise") {
        for (k, v) in over {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| match config {
        Some(p) => CliError::input(p, e),
        None => CliError::usage(e.to_string()),
    })
}

pub fn required<T>(value: Option<T>, name: &str) -> CliResult<T> {
    value.ok_or_else(|| {
        CliError::usage(format!(
            "`{name}` is required (flag --{} or config key)",
            name.replace('_', "-")
        ))
    })
}
