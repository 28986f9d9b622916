//! Scenario dispatch: builds systems from validated parameters and produces
//! result tables.

use serde_json::json;

use super::schema::{self, Default as ParamDefault, ParamSpec, ParamType};
use super::{Column, ParamValue, ResultTable, ScenarioConfig, ScenarioKind};
use crate::constants::EV;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::mechanics::{
    integrate_dissipative, integrate_heat, ForceLaw, GeneralizedState, HeatExchangeSystem,
    MechanicalSystem,
};
use crate::quantum::{
    decay_oracle, gaussian_packet, propagate, Propagator, QuantumConfig, QuantumPotential,
    SpatialGrid,
};
use crate::thermoq::{extract_t0, t0_denominator, ThermoLevel};
use crate::validate;

/// Resolved parameter view over a validated config: reads explicit values or
/// schema defaults and records the effective value of every parameter for
/// the metadata echo.
struct Params<'a> {
    config: &'a ScenarioConfig,
    specs: &'static [ParamSpec],
}

impl<'a> Params<'a> {
    fn new(config: &'a ScenarioConfig) -> Params<'a> {
        Params {
            config,
            specs: schema::params_for(config.kind),
        }
    }

    fn spec(&self, key: &str) -> &ParamSpec {
        self.specs
            .iter()
            .find(|s| s.key == key)
            .unwrap_or_else(|| panic!("parameter `{key}` not in schema"))
    }

    fn num(&self, key: &str) -> f64 {
        match self.config.parameters.get(key) {
            Some(ParamValue::Number(x)) => *x,
            Some(ParamValue::Text(_)) => unreachable!("validated as number"),
            None => match self.spec(key).default {
                ParamDefault::Number(x) => x,
                _ => panic!("required parameter `{key}` missing after validation"),
            },
        }
    }

    fn int(&self, key: &str) -> usize {
        self.num(key) as usize
    }

    fn text(&self, key: &str) -> String {
        match self.config.parameters.get(key) {
            Some(ParamValue::Text(s)) => s.clone(),
            Some(ParamValue::Number(_)) => unreachable!("validated as text"),
            None => match self.spec(key).default {
                ParamDefault::Text(s) => s.to_string(),
                _ => panic!("required parameter `{key}` missing after validation"),
            },
        }
    }

    /// Effective value of every schema parameter, for the metadata echo.
    fn echo(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for spec in self.specs {
            let value = match spec.ty {
                ParamType::Number => json!(self.num(spec.key)),
                ParamType::Text => json!(self.text(spec.key)),
            };
            map.insert(spec.key.to_string(), value);
        }
        serde_json::Value::Object(map)
    }
}

fn metadata(
    config: &ScenarioConfig,
    params: &Params,
    solver: serde_json::Value,
) -> serde_json::Value {
    json!({
        "kind": config.kind.as_str(),
        "seed": config.seed,
        "parameters": params.echo(),
        "solver": solver,
        "artifact_version": env!("CARGO_PKG_VERSION"),
    })
}

/// Runs a validated scenario; deterministic given (config, seed).
pub fn run_scenario(config: &ScenarioConfig) -> Result<Vec<ResultTable>> {
    config.validate()?;
    match config.kind {
        ScenarioKind::Classical => run_classical(config),
        ScenarioKind::ClassicalHeat => run_classical_heat(config),
        ScenarioKind::Quantum => run_quantum(config),
        ScenarioKind::ThermoSpectrum => run_thermo_spectrum(config),
        ScenarioKind::T0Roundtrip => run_t0_roundtrip(config),
        ScenarioKind::Validate => run_validate(config),
    }
}

fn run_classical(config: &ScenarioConfig) -> Result<Vec<ResultTable>> {
    let p = Params::new(config);
    let force = match p.text("force").as_str() {
        "none" => ForceLaw::None,
        "linear-drag" => ForceLaw::LinearDrag { k: p.num("drag") },
        "radiant" => ForceLaw::Radiant {
            k: p.num("drag"),
            absorbing: p.text("radiant-mode") == "absorb",
        },
        other => return Err(Error::invalid(format!("unknown force law `{other}`"))),
    };
    let system = MechanicalSystem::new(
        vec![p.num("mass")],
        ScalarField::Harmonic {
            stiffness: vec![p.num("spring")],
        },
        force,
    )?;
    let initial = GeneralizedState::new(0.0, vec![p.num("q0")], vec![p.num("v0")])?;
    let record = integrate_dissipative(&system, initial, p.num("dt"), p.int("steps"))?;

    let n = record.len();
    let mut cols: Vec<(&str, Vec<f64>)> =
        ["t", "q", "qdot", "kinetic", "potential", "H", "w2", "Hbar"]
            .iter()
            .map(|name| (*name, Vec::with_capacity(n)))
            .collect();
    for s in &record.samples {
        let row = [
            s.state.t,
            s.state.q[0],
            s.state.qdot[0],
            s.kinetic,
            s.potential,
            s.hamiltonian,
            s.work,
            s.hbar,
        ];
        for (col, v) in cols.iter_mut().zip(row) {
            col.1.push(v);
        }
    }
    let table = ResultTable::new(
        "timeseries",
        cols.into_iter().map(|(n, v)| Column::new(n, v)).collect(),
        metadata(
            config,
            &p,
            json!({ "integrator": "rk4", "work_quadrature": "trapezoid" }),
        ),
    )?
    .with_figures(&[("t", "q"), ("t", "Hbar")]);
    Ok(vec![table])
}

fn run_classical_heat(config: &ScenarioConfig) -> Result<Vec<ResultTable>> {
    let p = Params::new(config);
    let base = MechanicalSystem::new(
        vec![p.num("mass")],
        ScalarField::Harmonic {
            stiffness: vec![p.num("spring")],
        },
        ForceLaw::None,
    )?;
    let system = HeatExchangeSystem::new(
        base,
        p.num("entropy"),
        ScalarField::Linear {
            slope: vec![p.num("temp-slope")],
            offset: p.num("temp-base"),
        },
    )?;
    let initial = GeneralizedState::new(0.0, vec![p.num("q0")], vec![p.num("v0")])?;
    let record = integrate_heat(&system, initial, p.num("dt"), p.int("steps"))?;

    let mut cols: Vec<(&str, Vec<f64>)> = ["t", "q", "qdot", "H", "TS", "Hbar"]
        .iter()
        .map(|name| (*name, Vec::with_capacity(record.len())))
        .collect();
    for s in &record.samples {
        let ts = s.hbar - s.hamiltonian;
        let row = [
            s.state.t,
            s.state.q[0],
            s.state.qdot[0],
            s.hamiltonian,
            ts,
            s.hbar,
        ];
        for (col, v) in cols.iter_mut().zip(row) {
            col.1.push(v);
        }
    }
    let table = ResultTable::new(
        "timeseries",
        cols.into_iter().map(|(n, v)| Column::new(n, v)).collect(),
        metadata(config, &p, json!({ "integrator": "rk4" })),
    )?
    .with_figures(&[("t", "q"), ("t", "Hbar")]);
    Ok(vec![table])
}

fn run_quantum(config: &ScenarioConfig) -> Result<Vec<ResultTable>> {
    let p = Params::new(config);
    let grid = SpatialGrid::symmetric(p.num("half-width"), p.int("grid-points"))?;
    let potential = match p.text("potential").as_str() {
        "free" => QuantumPotential::Free,
        "harmonic" => QuantumPotential::Harmonic {
            omega: p.num("omega"),
        },
        other => return Err(Error::invalid(format!("unknown potential `{other}`"))),
    };
    let propagator = match p.text("propagator").as_str() {
        "cayley" => Propagator::Cayley,
        "factored" => Propagator::Factored,
        other => return Err(Error::invalid(format!("unknown propagator `{other}`"))),
    };
    let qc = QuantumConfig {
        potential,
        k: p.num("k"),
        dim_factor: p.num("dim-factor") as u32,
        dt: p.num("dt"),
        steps: p.int("steps"),
        propagator,
    };
    let mass = p.num("mass");
    let hbar = p.num("hbar");
    let psi0 = gaussian_packet(
        &grid,
        p.num("packet-x0"),
        p.num("packet-p0"),
        p.num("packet-sigma"),
        mass,
        hbar,
    )?;
    let (_, series) = propagate(&psi0, &qc)?;

    let mut cols: Vec<(&str, Vec<f64>)> = ["t", "norm", "x_mean", "p_mean", "h0_mean", "decay_ref"]
        .iter()
        .map(|name| (*name, Vec::with_capacity(series.len())))
        .collect();
    for (t, obs) in &series {
        let row = [
            *t,
            obs.norm,
            obs.x_mean,
            obs.p_mean,
            obs.h0_mean,
            decay_oracle(*t, qc.k, mass, qc.dim_factor),
        ];
        for (col, v) in cols.iter_mut().zip(row) {
            col.1.push(v);
        }
    }
    let table = ResultTable::new(
        "observables",
        cols.into_iter().map(|(n, v)| Column::new(n, v)).collect(),
        metadata(
            config,
            &p,
            json!({ "scheme": "crank-nicolson", "boundary": "dirichlet" }),
        ),
    )?
    .with_figures(&[("t", "norm"), ("t", "x_mean")]);
    Ok(vec![table])
}

fn run_thermo_spectrum(config: &ScenarioConfig) -> Result<Vec<ResultTable>> {
    let p = Params::new(config);
    let t0 = p.num("t0");
    let n_max = p.int("n-max") as u32;
    let rydberg_j = p.num("rydberg-ev") * EV;

    let levels: Vec<ThermoLevel> = (1..=n_max)
        .map(|n| ThermoLevel::hydrogen(n, rydberg_j))
        .collect::<Result<_>>()?;

    let mut n_col = Vec::new();
    let mut base = Vec::new();
    let mut corrected = Vec::new();
    let mut correction = Vec::new();
    for level in &levels {
        let e_t = crate::thermoq::corrected_level(level, t0)?;
        n_col.push(level.n as f64);
        base.push(level.base_energy / EV);
        corrected.push(e_t / EV);
        correction.push((e_t - level.base_energy) / EV);
    }
    let meta = metadata(config, &p, json!({ "statistics": "fermi" }));
    let levels_table = ResultTable::new(
        "levels",
        vec![
            Column::new("n", n_col),
            Column::new("base_energy_ev", base),
            Column::new("corrected_energy_ev", corrected),
            Column::new("correction_ev", correction),
        ],
        meta.clone(),
    )?
    .with_figures(&[("n", "correction_ev")]);

    let mut m_col = Vec::new();
    let mut n2_col = Vec::new();
    let mut nu_th = Vec::new();
    let mut nu_corr = Vec::new();
    let mut shift = Vec::new();
    for m in 2..=n_max {
        for n in 1..m {
            let upper = &levels[(m - 1) as usize];
            let lower = &levels[(n - 1) as usize];
            let base = crate::thermoq::transition_frequency(upper, lower, 0.0)?;
            let corrected = crate::thermoq::transition_frequency(upper, lower, t0)?;
            m_col.push(m as f64);
            n2_col.push(n as f64);
            nu_th.push(base);
            nu_corr.push(corrected);
            shift.push(corrected - base);
        }
    }
    let transitions_table = ResultTable::new(
        "transitions",
        vec![
            Column::new("m", m_col),
            Column::new("n", n2_col),
            Column::new("nu_th_hz", nu_th),
            Column::new("nu_corrected_hz", nu_corr),
            Column::new("shift_hz", shift),
        ],
        meta,
    )?;
    Ok(vec![levels_table, transitions_table])
}

fn run_t0_roundtrip(config: &ScenarioConfig) -> Result<Vec<ResultTable>> {
    let p = Params::new(config);
    let t0 = p.num("t0");
    let m_max = p.int("m-max") as u32;
    let rydberg_j = p.num("rydberg-ev") * EV;

    let mut m_col = Vec::new();
    let mut n_col = Vec::new();
    let mut t0_in = Vec::new();
    let mut t0_out = Vec::new();
    let mut rel_err = Vec::new();
    let mut denom = Vec::new();
    let mut max_rel_err: f64 = 0.0;
    for m in 2..=m_max {
        for n in 1..m {
            let upper = ThermoLevel::hydrogen(m, rydberg_j)?;
            let lower = ThermoLevel::hydrogen(n, rydberg_j)?;
            let nu_th = crate::thermoq::transition_frequency(&upper, &lower, 0.0)?;
            let nu_exp = crate::thermoq::transition_frequency(&upper, &lower, t0)?;
            let recovered = extract_t0(nu_exp, nu_th, m, n)?;
            let err = (recovered - t0).abs() / t0;
            max_rel_err = max_rel_err.max(err);
            m_col.push(m as f64);
            n_col.push(n as f64);
            t0_in.push(t0);
            t0_out.push(recovered);
            rel_err.push(err);
            denom.push(t0_denominator(m, n)?);
        }
    }
    let table = ResultTable::new(
        "t0_roundtrip",
        vec![
            Column::new("m", m_col),
            Column::new("n", n_col),
            Column::new("t0_in", t0_in),
            Column::new("t0_recovered", t0_out),
            Column::new("rel_err", rel_err),
            Column::new("denominator_kb_units", denom),
        ],
        {
            let mut meta = metadata(config, &p, json!({}));
            meta["summary"] = json!({ "max_rel_err": max_rel_err });
            meta
        },
    )?;
    Ok(vec![table])
}

fn run_validate(config: &ScenarioConfig) -> Result<Vec<ResultTable>> {
    let p = Params::new(config);
    let report = validate::run_suite(config.seed);
    let names: Vec<&str> = report.iter().map(|c| c.name).collect();
    let table = ResultTable::new(
        "validation",
        vec![
            Column::new("check", (0..report.len()).map(|i| i as f64).collect()),
            Column::new("measured", report.iter().map(|c| c.measured).collect()),
            Column::new("threshold", report.iter().map(|c| c.threshold).collect()),
            Column::new(
                "pass",
                report
                    .iter()
                    .map(|c| if c.pass { 1.0 } else { 0.0 })
                    .collect(),
            ),
        ],
        {
            let mut meta = metadata(config, &p, json!({}));
            meta["checks"] = json!(names);
            meta["all_pass"] = json!(report.iter().all(|c| c.pass));
            meta
        },
    )?;
    Ok(vec![table])
}
