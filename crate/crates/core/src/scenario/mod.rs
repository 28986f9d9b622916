//! Declarative scenario loading, run orchestration, and result
//! serialization.
//!
//! A scenario is a JSON file with a `kind`, a flat `parameters` map, an
//! optional `output` directory, and a `seed`. Every parameter any run can
//! consume is declared in [`schema`]; unknown keys and constraint violations
//! are rejected before any compute, all at once.

mod output;
mod run;
pub mod schema;

pub use output::{csv_string, write_results, Column, ResultTable};
pub use run::run_scenario;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Classical,
    ClassicalHeat,
    Quantum,
    ThermoSpectrum,
    T0Roundtrip,
    Validate,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] = [
        ScenarioKind::Classical,
        ScenarioKind::ClassicalHeat,
        ScenarioKind::Quantum,
        ScenarioKind::ThermoSpectrum,
        ScenarioKind::T0Roundtrip,
        ScenarioKind::Validate,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioKind::Classical => "classical",
            ScenarioKind::ClassicalHeat => "classical-heat",
            ScenarioKind::Quantum => "quantum",
            ScenarioKind::ThermoSpectrum => "thermo-spectrum",
            ScenarioKind::T0Roundtrip => "t0-roundtrip",
            ScenarioKind::Validate => "validate",
        }
    }

    pub fn parse(s: &str) -> Option<ScenarioKind> {
        Self::ALL.iter().copied().find(|k| k.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    #[serde(default)]
    pub parameters: BTreeMap<String, ParamValue>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn new(kind: ScenarioKind) -> Self {
        ScenarioConfig {
            kind,
            parameters: BTreeMap::new(),
            output: None,
            seed: 0,
        }
    }

    pub fn set_number(&mut self, key: &str, value: f64) -> &mut Self {
        self.parameters
            .insert(key.to_string(), ParamValue::Number(value));
        self
    }

    pub fn set_text(&mut self, key: &str, value: &str) -> &mut Self {
        self.parameters
            .insert(key.to_string(), ParamValue::Text(value.to_string()));
        self
    }

    /// Applies a `key=value` override; the key must be schema-known for this
    /// config's kind.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment.split_once('=').ok_or_else(|| {
            Error::invalid(format!(
                "override `{assignment}` is not of the form key=value"
            ))
        })?;
        let spec = schema::params_for(self.kind)
            .iter()
            .find(|s| s.key == key)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "override references unknown parameter `{key}` for kind `{}`",
                    self.kind.as_str()
                ))
            })?;
        let value = match spec.ty {
            schema::ParamType::Number => {
                let number: f64 = raw.parse().map_err(|_| {
                    Error::invalid(format!("override `{key}` expects a number, got `{raw}`"))
                })?;
                ParamValue::Number(number)
            }
            schema::ParamType::Text => ParamValue::Text(raw.to_string()),
        };
        self.parameters.insert(key.to_string(), value);
        Ok(())
    }

    /// Schema-validates parameters; aggregates every violation.
    pub fn validate(&self) -> Result<()> {
        let violations = schema::validate_params(self.kind, &self.parameters);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::ConfigValidation(violations))
        }
    }
}

/// Loads and validates a scenario file, aggregating all schema violations
/// into one error.
pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        context: format!("reading config {}", path.display()),
        source,
    })?;
    parse_config(&text)
}

/// Parses and validates scenario JSON.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::ConfigValidation(vec![format!("malformed JSON: {e}")]))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::ConfigValidation(vec!["config must be a JSON object".into()]))?;

    let mut violations = Vec::new();
    for key in obj.keys() {
        if !matches!(key.as_str(), "kind" | "parameters" | "output" | "seed") {
            violations.push(format!("unknown top-level key `{key}`"));
        }
    }

    let kind = match obj.get("kind") {
        None => {
            violations.push("missing required field `kind`".into());
            None
        }
        Some(serde_json::Value::String(s)) => match ScenarioKind::parse(s) {
            Some(k) => Some(k),
            None => {
                violations.push(format!(
                    "field `kind`: unknown kind `{s}` (expected one of {})",
                    ScenarioKind::ALL
                        .iter()
                        .map(|k| k.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
                None
            }
        },
        Some(_) => {
            violations.push("field `kind` must be a string".into());
            None
        }
    };

    let mut parameters = BTreeMap::new();
    match obj.get("parameters") {
        None => {}
        Some(serde_json::Value::Object(map)) => {
            for (key, v) in map {
                match v {
                    serde_json::Value::Number(n) => match n.as_f64() {
                        Some(x) => {
                            parameters.insert(key.clone(), ParamValue::Number(x));
                        }
                        None => {
                            violations.push(format!("parameter `{key}` is not a finite number"))
                        }
                    },
                    serde_json::Value::String(s) => {
                        parameters.insert(key.clone(), ParamValue::Text(s.clone()));
                    }
                    _ => violations.push(format!("parameter `{key}` must be a number or a string")),
                }
            }
        }
        Some(_) => violations.push("field `parameters` must be an object".into()),
    }

    let output = match obj.get("output") {
        None | Some(serde_json::Value::Null) => None,
        Some(serde_json::Value::String(s)) => Some(PathBuf::from(s)),
        Some(_) => {
            violations.push("field `output` must be a string path".into());
            None
        }
    };

    let seed = match obj.get("seed") {
        None => 0,
        Some(serde_json::Value::Number(n)) if n.as_u64().is_some() => n.as_u64().unwrap(),
        Some(_) => {
            violations.push("field `seed` must be a non-negative integer".into());
            0
        }
    };

    if let Some(kind) = kind {
        violations.extend(schema::validate_params(kind, &parameters));
        if violations.is_empty() {
            return Ok(ScenarioConfig {
                kind,
                parameters,
                output,
                seed,
            });
        }
    }
    Err(Error::ConfigValidation(violations))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_classical_config_parses() {
        let cfg =
            parse_config(r#"{"kind": "classical", "parameters": {"dt": 1e-3, "steps": 100}}"#)
                .unwrap();
        assert_eq!(cfg.kind, ScenarioKind::Classical);
        assert_eq!(cfg.seed, 0);
    }

    #[test]
    fn unknown_kind_names_the_field() {
        let err = parse_config(r#"{"kind": "foo"}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("kind"), "{msg}");
        assert!(msg.contains("foo"), "{msg}");
    }

    #[test]
    fn negative_dt_names_the_constraint() {
        let err = parse_config(r#"{"kind": "classical", "parameters": {"dt": -1, "steps": 100}}"#)
            .unwrap_err();
        assert!(err.to_string().contains("dt must be positive"), "{err}");
    }

    #[test]
    fn violations_are_aggregated() {
        let err = parse_config(
            r#"{"kind": "classical", "parameters": {"dt": -1, "bogus": 1}, "extra": 0}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("dt must be positive"), "{msg}");
        assert!(msg.contains("bogus"), "{msg}");
        assert!(msg.contains("extra"), "{msg}");
        assert!(msg.contains("steps"), "{msg}");
    }

    #[test]
    fn overrides_respect_schema() {
        let mut cfg = ScenarioConfig::new(ScenarioKind::Classical);
        cfg.apply_override("dt=0.001").unwrap();
        cfg.apply_override("force=linear-drag").unwrap();
        assert!(cfg.apply_override("nonsense=1").is_err());
        assert!(cfg.apply_override("just-a-key").is_err());
        assert!(cfg.apply_override("dt=abc").is_err());
    }
}
