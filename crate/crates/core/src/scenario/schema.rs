//! Parameter schema for every scenario kind.
//!
//! Each parameter any run consumes is declared here; validation rejects
//! unknown keys and aggregates all violations.

use std::collections::BTreeMap;

use super::{ParamValue, ScenarioKind};
use crate::constants::RYDBERG_EV;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamType {
    Number,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    Any,
    Positive,
    NonNegative,
    /// Positive integer-valued number.
    PositiveInt,
    OneOf(&'static [&'static str]),
}

#[derive(Debug, Clone, Copy)]
pub enum Default {
    Required,
    Number(f64),
    Text(&'static str),
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub key: &'static str,
    pub ty: ParamType,
    pub constraint: Constraint,
    pub default: Default,
    /// Valid exemplar for required parameters (round-trip tested).
    pub example: f64,
    pub doc: &'static str,
}

impl ParamSpec {
    const fn num(
        key: &'static str,
        constraint: Constraint,
        default: Default,
        example: f64,
        doc: &'static str,
    ) -> Self {
        ParamSpec {
            key,
            ty: ParamType::Number,
            constraint,
            default,
            example,
            doc,
        }
    }

    const fn text(
        key: &'static str,
        options: &'static [&'static str],
        default: &'static str,
        doc: &'static str,
    ) -> Self {
        ParamSpec {
            key,
            ty: ParamType::Text,
            constraint: Constraint::OneOf(options),
            default: Default::Text(default),
            example: 0.0,
            doc,
        }
    }
}

const CLASSICAL: &[ParamSpec] = &[
    ParamSpec::num(
        "dt",
        Constraint::Positive,
        Default::Required,
        1e-3,
        "time step, s",
    ),
    ParamSpec::num(
        "steps",
        Constraint::PositiveInt,
        Default::Required,
        1000.0,
        "number of RK4 steps",
    ),
    ParamSpec::num(
        "mass",
        Constraint::Positive,
        Default::Number(1.0),
        1.0,
        "particle mass, kg",
    ),
    ParamSpec::num(
        "spring",
        Constraint::NonNegative,
        Default::Number(1.0),
        1.0,
        "harmonic stiffness, N/m",
    ),
    ParamSpec::text(
        "force",
        &["none", "linear-drag", "radiant"],
        "none",
        "nonconservative force law",
    ),
    ParamSpec::num(
        "drag",
        Constraint::NonNegative,
        Default::Number(0.0),
        0.1,
        "drag coefficient k, kg/s",
    ),
    ParamSpec::text(
        "radiant-mode",
        &["absorb", "deliver"],
        "absorb",
        "radiant force sign: absorb gives -k*v, deliver gives +k*v",
    ),
    ParamSpec::num(
        "q0",
        Constraint::Any,
        Default::Number(1.0),
        1.0,
        "initial coordinate, m",
    ),
    ParamSpec::num(
        "v0",
        Constraint::Any,
        Default::Number(0.0),
        0.0,
        "initial velocity, m/s",
    ),
];

const CLASSICAL_HEAT: &[ParamSpec] = &[
    ParamSpec::num(
        "dt",
        Constraint::Positive,
        Default::Required,
        1e-3,
        "time step, s",
    ),
    ParamSpec::num(
        "steps",
        Constraint::PositiveInt,
        Default::Required,
        1000.0,
        "number of RK4 steps",
    ),
    ParamSpec::num(
        "mass",
        Constraint::Positive,
        Default::Number(1.0),
        1.0,
        "particle mass, kg",
    ),
    ParamSpec::num(
        "spring",
        Constraint::NonNegative,
        Default::Number(1.0),
        1.0,
        "harmonic stiffness, N/m",
    ),
    ParamSpec::num(
        "entropy",
        Constraint::Any,
        Default::Number(1.0),
        1.0,
        "constant entropy S, J/K",
    ),
    ParamSpec::num(
        "temp-base",
        Constraint::Positive,
        Default::Number(300.0),
        300.0,
        "temperature field offset, K",
    ),
    ParamSpec::num(
        "temp-slope",
        Constraint::Any,
        Default::Number(0.1),
        0.1,
        "temperature field gradient, K/m",
    ),
    ParamSpec::num(
        "q0",
        Constraint::Any,
        Default::Number(1.0),
        1.0,
        "initial coordinate, m",
    ),
    ParamSpec::num(
        "v0",
        Constraint::Any,
        Default::Number(0.0),
        0.0,
        "initial velocity, m/s",
    ),
];

const QUANTUM: &[ParamSpec] = &[
    ParamSpec::num(
        "dt",
        Constraint::Positive,
        Default::Required,
        1e-3,
        "time step (natural units by default)",
    ),
    ParamSpec::num(
        "steps",
        Constraint::PositiveInt,
        Default::Required,
        1000.0,
        "number of propagation steps",
    ),
    ParamSpec::num(
        "grid-points",
        Constraint::PositiveInt,
        Default::Number(512.0),
        512.0,
        "spatial grid size (>= 16)",
    ),
    ParamSpec::num(
        "half-width",
        Constraint::Positive,
        Default::Number(15.0),
        15.0,
        "grid spans [-half-width, half-width]",
    ),
    ParamSpec::num(
        "mass",
        Constraint::Positive,
        Default::Number(1.0),
        1.0,
        "particle mass",
    ),
    ParamSpec::num(
        "hbar",
        Constraint::Positive,
        Default::Number(1.0),
        1.0,
        "reduced Planck constant",
    ),
    ParamSpec::num(
        "k",
        Constraint::NonNegative,
        Default::Number(0.0),
        0.5,
        "dissipation coefficient",
    ),
    ParamSpec::num(
        "dim-factor",
        Constraint::PositiveInt,
        Default::Number(3.0),
        3.0,
        "D in the decay rate D*k/m",
    ),
    ParamSpec::text(
        "propagator",
        &["cayley", "factored"],
        "cayley",
        "propagation scheme",
    ),
    ParamSpec::text(
        "potential",
        &["free", "harmonic"],
        "free",
        "external potential",
    ),
    ParamSpec::num(
        "omega",
        Constraint::Positive,
        Default::Number(1.0),
        1.0,
        "harmonic frequency (potential=harmonic)",
    ),
    ParamSpec::num(
        "packet-x0",
        Constraint::Any,
        Default::Number(0.0),
        0.0,
        "initial packet center",
    ),
    ParamSpec::num(
        "packet-p0",
        Constraint::Any,
        Default::Number(0.0),
        0.0,
        "initial packet momentum",
    ),
    ParamSpec::num(
        "packet-sigma",
        Constraint::Positive,
        Default::Number(1.0),
        1.0,
        "initial packet width",
    ),
];

const THERMO_SPECTRUM: &[ParamSpec] = &[
    ParamSpec::num(
        "t0",
        Constraint::NonNegative,
        Default::Required,
        250.0,
        "temperature constant T0, K",
    ),
    ParamSpec::num(
        "n-max",
        Constraint::PositiveInt,
        Default::Number(6.0),
        6.0,
        "highest principal quantum number",
    ),
    ParamSpec::num(
        "rydberg-ev",
        Constraint::Positive,
        Default::Number(RYDBERG_EV),
        RYDBERG_EV,
        "Rydberg energy, eV",
    ),
];

const T0_ROUNDTRIP: &[ParamSpec] = &[
    ParamSpec::num(
        "t0",
        Constraint::Positive,
        Default::Required,
        250.0,
        "reference temperature constant T0, K",
    ),
    ParamSpec::num(
        "m-max",
        Constraint::PositiveInt,
        Default::Number(6.0),
        6.0,
        "highest upper level m",
    ),
    ParamSpec::num(
        "rydberg-ev",
        Constraint::Positive,
        Default::Number(RYDBERG_EV),
        RYDBERG_EV,
        "Rydberg energy, eV",
    ),
];

const VALIDATE: &[ParamSpec] = &[];

pub fn params_for(kind: ScenarioKind) -> &'static [ParamSpec] {
    match kind {
        ScenarioKind::Classical => CLASSICAL,
        ScenarioKind::ClassicalHeat => CLASSICAL_HEAT,
        ScenarioKind::Quantum => QUANTUM,
        ScenarioKind::ThermoSpectrum => THERMO_SPECTRUM,
        ScenarioKind::T0Roundtrip => T0_ROUNDTRIP,
        ScenarioKind::Validate => VALIDATE,
    }
}

/// Returns every violation (unknown keys, missing required keys, type and
/// constraint failures); empty means valid.
pub fn validate_params(kind: ScenarioKind, params: &BTreeMap<String, ParamValue>) -> Vec<String> {
    let specs = params_for(kind);
    let mut violations = Vec::new();

    for key in params.keys() {
        if !specs.iter().any(|s| s.key == key) {
            violations.push(format!(
                "unknown parameter `{key}` for kind `{}`",
                kind.as_str()
            ));
        }
    }

    for spec in specs {
        let value = params.get(spec.key);
        let value = match (value, &spec.default) {
            (Some(v), _) => v,
            (None, Default::Required) => {
                violations.push(format!("missing required parameter `{}`", spec.key));
                continue;
            }
            (None, _) => continue,
        };
        match (spec.ty, value) {
            (ParamType::Number, ParamValue::Number(x)) => {
                if let Some(v) = check_number(spec, *x) {
                    violations.push(v);
                }
            }
            (ParamType::Text, ParamValue::Text(s)) => {
                if let Constraint::OneOf(options) = spec.constraint {
                    if !options.contains(&s.as_str()) {
                        violations.push(format!(
                            "{} must be one of {}",
                            spec.key,
                            options.join(", ")
                        ));
                    }
                }
            }
            (ParamType::Number, ParamValue::Text(_)) => {
                violations.push(format!("{} must be a number", spec.key));
            }
            (ParamType::Text, ParamValue::Number(_)) => {
                violations.push(format!("{} must be a string", spec.key));
            }
        }
    }
    violations
}

fn check_number(spec: &ParamSpec, x: f64) -> Option<String> {
    if !x.is_finite() {
        return Some(format!("{} must be finite", spec.key));
    }
    match spec.constraint {
        Constraint::Any => None,
        Constraint::Positive => (x <= 0.0).then(|| format!("{} must be positive", spec.key)),
        Constraint::NonNegative => (x < 0.0).then(|| format!("{} must be non-negative", spec.key)),
        Constraint::PositiveInt => (x < 1.0 || x.fract() != 0.0)
            .then(|| format!("{} must be a positive integer", spec.key)),
        Constraint::OneOf(_) => None,
    }
}

/// Full schema as JSON, for the `schema` CLI subcommand.
pub fn schema_json() -> serde_json::Value {
    let kinds: Vec<serde_json::Value> = ScenarioKind::ALL
        .iter()
        .map(|kind| {
            let params: Vec<serde_json::Value> = params_for(*kind)
                .iter()
                .map(|spec| {
                    serde_json::json!({
                        "key": spec.key,
                        "type": match spec.ty {
                            ParamType::Number => "number",
                            ParamType::Text => "string",
                        },
                        "required": matches!(spec.default, Default::Required),
                        "default": match spec.default {
                            Default::Required => serde_json::Value::Null,
                            Default::Number(x) => serde_json::json!(x),
                            Default::Text(s) => serde_json::json!(s),
                        },
                        "constraint": constraint_doc(&spec.constraint),
                        "doc": spec.doc,
                    })
                })
                .collect();
            serde_json::json!({ "kind": kind.as_str(), "parameters": params })
        })
        .collect();
    serde_json::json!({
        "top-level": {
            "kind": "scenario kind (string)",
            "parameters": "flat map of scenario parameters",
            "output": "optional output directory (string)",
            "seed": "non-negative integer seed for randomized suites",
        },
        "kinds": kinds,
    })
}

fn constraint_doc(c: &Constraint) -> String {
    match c {
        Constraint::Any => "any finite number".into(),
        Constraint::Positive => "> 0".into(),
        Constraint::NonNegative => ">= 0".into(),
        Constraint::PositiveInt => "positive integer".into(),
        Constraint::OneOf(options) => format!("one of: {}", options.join(", ")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ScenarioConfig;

    #[test]
    fn every_documented_key_round_trips() {
        for kind in ScenarioKind::ALL {
            let mut cfg = ScenarioConfig::new(kind);
            for spec in params_for(kind) {
                match spec.ty {
                    ParamType::Number => {
                        cfg.set_number(spec.key, spec.example);
                    }
                    ParamType::Text => {
                        if let Default::Text(s) = spec.default {
                            cfg.set_text(spec.key, s);
                        }
                    }
                }
            }
            cfg.validate().unwrap_or_else(|e| {
                panic!(
                    "kind {} rejected its own schema exemplars: {e}",
                    kind.as_str()
                )
            });
            let json = serde_json::to_string(&cfg).unwrap();
            let reparsed = crate::scenario::parse_config(&json).unwrap();
            assert_eq!(cfg, reparsed);
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut cfg = ScenarioConfig::new(ScenarioKind::Validate);
        cfg.set_number("typo", 1.0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn integer_constraint() {
        let mut cfg = ScenarioConfig::new(ScenarioKind::Classical);
        cfg.set_number("dt", 1e-3);
        cfg.set_number("steps", 10.5);
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("steps must be a positive integer"));
    }
}
