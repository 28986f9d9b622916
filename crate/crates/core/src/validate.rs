//! Invariant suite behind the `validate` subcommand.
//!
//! Each check pins desk-scale parameters and a tolerance; the whole suite is
//! deterministic given the seed and runs in seconds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{gradient_defect, ScalarField};
use crate::mechanics::{
    analytic_damped_oscillator, el_residual, integrate_dissipative, integrate_heat, ForceLaw,
    GeneralizedState, HeatExchangeSystem, MechanicalSystem, TrajectoryRecord, TrajectorySample,
};
use crate::quantum::{
    build_hamiltonian, decay_oracle, gaussian_packet, propagate, Propagator, QuantumConfig,
    QuantumPotential, SpatialGrid, Wavefunction,
};
use crate::scenario::{csv_string, run_scenario, ScenarioConfig, ScenarioKind};
use crate::thermoq::{
    adjoint_defect, apply_t_ddt, bump_function, commutator_check, corrected_level,
    eigen_residual_of, entropy_bose, entropy_fermi, extract_t0, inner_product, t0_denominator,
    temp_eigen_residual, transition_frequency, Polynomial, TGrid, TemperatureWave, ThermoLevel,
};

/// Outcome of one invariant check.
#[derive(Debug, Clone, Copy)]
pub struct CheckResult {
    pub name: &'static str,
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckResult {
    fn below(name: &'static str, measured: f64, threshold: f64) -> Self {
        CheckResult {
            name,
            measured,
            threshold,
            pass: measured < threshold,
        }
    }

    fn above(name: &'static str, measured: f64, threshold: f64) -> Self {
        CheckResult {
            name,
            measured,
            threshold,
            pass: measured > threshold,
        }
    }

    fn in_band(name: &'static str, measured: f64, lo: f64, hi: f64) -> Self {
        CheckResult {
            name,
            measured,
            threshold: hi,
            pass: (lo..=hi).contains(&measured),
        }
    }
}

/// Runs every invariant check; deterministic given `seed`.
pub fn run_suite(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    out.extend(mechanics_checks(&mut rng));
    out.extend(quantum_checks());
    out.extend(thermoq_checks(&mut rng));
    out.extend(scenario_checks());
    out
}

fn oscillator(k: f64) -> MechanicalSystem {
    let force = if k == 0.0 {
        ForceLaw::None
    } else {
        ForceLaw::LinearDrag { k }
    };
    MechanicalSystem::new(
        vec![1.0],
        ScalarField::Harmonic {
            stiffness: vec![1.0],
        },
        force,
    )
    .expect("valid system")
}

fn unit_state(q: f64, v: f64) -> GeneralizedState {
    GeneralizedState::new(0.0, vec![q], vec![v]).expect("valid state")
}

fn damped_period(k: f64) -> f64 {
    2.0 * std::f64::consts::PI / (1.0 - k * k / 4.0).sqrt()
}

/// Relative drift of the `hbar` column over a record.
fn hbar_drift(record: &TrajectoryRecord) -> f64 {
    let first = record.samples[0].hbar;
    record
        .samples
        .iter()
        .map(|s| (s.hbar - first).abs())
        .fold(0.0, f64::max)
        / first.abs()
}

/// Analytic damped-oscillator trajectory sampled at spacing `dt`, as a
/// record usable by the residual checks.
fn analytic_record(k: f64, dt: f64, steps: usize) -> TrajectoryRecord {
    let samples = (0..=steps)
        .map(|i| {
            let t = i as f64 * dt;
            let (q, v) = analytic_damped_oscillator(1.0, 1.0, k, 1.0, 0.0, t).expect("underdamped");
            let mut state = unit_state(q, v);
            state.t = t;
            TrajectorySample {
                kinetic: 0.5 * v * v,
                potential: 0.5 * q * q,
                hamiltonian: 0.5 * (v * v + q * q),
                work: 0.0,
                hbar: 0.0,
                state,
            }
        })
        .collect();
    TrajectoryRecord { samples }
}

fn max_el_residual(system: &MechanicalSystem, record: &TrajectoryRecord) -> f64 {
    (1..record.len() - 1)
        .map(|i| el_residual(system, record, i).expect("interior")[0].abs())
        .fold(0.0, f64::max)
}

pub fn mechanics_checks(rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let mut out = Vec::new();

    // conservative energy drift, >= 100 steps per period
    let sys = oscillator(0.0);
    let dt = damped_period(0.0) / 1000.0;
    let record = integrate_dissipative(&sys, unit_state(1.0, 0.0), dt, 10_000).expect("run");
    let h0 = record.samples[0].hamiltonian;
    let drift = record
        .samples
        .iter()
        .map(|s| (s.hamiltonian - h0).abs())
        .fold(0.0, f64::max)
        / h0;
    out.push(CheckResult::below(
        "mech-conservative-energy-drift",
        drift,
        1e-8,
    ));

    // generalized-energy conservation H - w2 for the damped oscillator
    let sys = oscillator(0.1);
    let dt = 1e-3;
    let steps = (10.0 * damped_period(0.1) / dt).ceil() as usize;
    let damped = integrate_dissipative(&sys, unit_state(1.0, 0.0), dt, steps).expect("run");
    out.push(CheckResult::below(
        "mech-damped-hbar-drift",
        hbar_drift(&damped),
        1e-6,
    ));

    // heat-exchange conservation H + T(q)S
    let base = oscillator(0.0);
    let heat = HeatExchangeSystem::new(
        base,
        1.0,
        ScalarField::Linear {
            slope: vec![0.1],
            offset: 300.0,
        },
    )
    .expect("valid system");
    let heat_run = integrate_heat(&heat, unit_state(1.0, 0.0), 1e-3, 10_000).expect("run");
    out.push(CheckResult::below(
        "mech-heat-hbar-drift",
        hbar_drift(&heat_run),
        1e-8,
    ));

    // cyclic coordinate: conjugate momentum conserved
    let sys2 = MechanicalSystem::new(
        vec![1.0, 2.0],
        ScalarField::Harmonic {
            stiffness: vec![1.0, 0.0],
        },
        ForceLaw::None,
    )
    .expect("valid system");
    let start = GeneralizedState::new(0.0, vec![1.0, 0.0], vec![0.0, 0.7]).expect("state");
    let run2 = integrate_dissipative(&sys2, start, 1e-2, 1000).expect("run");
    let p1_0 = 2.0 * run2.samples[0].state.qdot[1];
    let p_drift = run2
        .samples
        .iter()
        .map(|s| (2.0 * s.state.qdot[1] - p1_0).abs())
        .fold(0.0, f64::max);
    out.push(CheckResult::below(
        "mech-cyclic-momentum-drift",
        p_drift,
        1e-10,
    ));

    // RK4 vs the closed-form oracle over 10 periods
    let sys = oscillator(0.1);
    let worst = damped
        .states()
        .map(|s| {
            let (q, _) = analytic_damped_oscillator(1.0, 1.0, 0.1, 1.0, 0.0, s.t).expect("oracle");
            (s.q[0] - q).abs()
        })
        .fold(0.0, f64::max);
    out.push(CheckResult::below("mech-rk4-oracle-error", worst, 1e-6));

    // RK4 global convergence: halving dt must cut the error by >= 8x
    let error_at = |dt: f64| {
        let steps = (2.0 * damped_period(0.1) / dt).ceil() as usize;
        let rec = integrate_dissipative(&sys, unit_state(1.0, 0.0), dt, steps).expect("run");
        rec.states()
            .map(|s| {
                let (q, _) =
                    analytic_damped_oscillator(1.0, 1.0, 0.1, 1.0, 0.0, s.t).expect("oracle");
                (s.q[0] - q).abs()
            })
            .fold(0.0, f64::max)
    };
    out.push(CheckResult::above(
        "mech-rk4-convergence-ratio",
        error_at(0.02) / error_at(0.01),
        8.0,
    ));

    // discrete Euler-Lagrange residual: order-2 on exact samples
    let coarse = max_el_residual(&sys, &analytic_record(0.1, 1e-2, 1000));
    let fine = max_el_residual(&sys, &analytic_record(0.1, 5e-3, 2000));
    out.push(CheckResult::in_band(
        "mech-el-residual-order",
        coarse / fine,
        3.6,
        4.4,
    ));

    // perturbed non-solution paths must stand out
    let mut perturbed = analytic_record(0.1, 1e-2, 1000);
    for s in &mut perturbed.samples {
        s.state.q[0] += rng.gen_range(-1e-3..1e-3);
        s.state.qdot[0] += rng.gen_range(-1e-3..1e-3);
    }
    out.push(CheckResult::above(
        "mech-el-residual-discrimination",
        max_el_residual(&sys, &perturbed) / coarse,
        10.0,
    ));

    // dH/dt = F2·qdot pointwise
    let mut rate_defect: f64 = 0.0;
    for i in 1..damped.len() - 1 {
        let dh =
            (damped.samples[i + 1].hamiltonian - damped.samples[i - 1].hamiltonian) / (2.0 * dt);
        let v = damped.samples[i].state.qdot[0];
        rate_defect = rate_defect.max((dh + 0.1 * v * v).abs());
    }
    out.push(CheckResult::below(
        "mech-energy-rate-identity",
        rate_defect,
        1e-5,
    ));

    // analytic gradients vs finite differences at random points
    let fields = [
        ScalarField::Harmonic {
            stiffness: vec![1.3, 0.4],
        },
        ScalarField::Linear {
            slope: vec![0.7, -0.2],
            offset: 300.0,
        },
    ];
    let mut grad_worst: f64 = 0.0;
    for field in &fields {
        for _ in 0..32 {
            let q = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            grad_worst = grad_worst.max(gradient_defect(field, &q, 1e-5));
        }
    }
    out.push(CheckResult::below(
        "mech-gradient-consistency",
        grad_worst,
        1e-6,
    ));

    out
}

fn free_quantum(k: f64, dt: f64, steps: usize, propagator: Propagator) -> QuantumConfig {
    QuantumConfig {
        potential: QuantumPotential::Free,
        k,
        dim_factor: 3,
        dt,
        steps,
        propagator,
    }
}

fn normalized_amps(psi: &Wavefunction) -> Vec<num_complex::Complex64> {
    let norm = psi.norm();
    psi.amps.iter().map(|a| a / norm).collect()
}

pub fn quantum_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();

    // unitarity at k = 0 over 1e3 Cayley steps at n = 1024
    let grid = SpatialGrid::symmetric(20.0, 1024).expect("grid");
    let psi0 = gaussian_packet(&grid, 0.0, 0.0, 1.0, 1.0, 1.0).expect("packet");
    let config = free_quantum(0.0, 1e-3, 1000, Propagator::Cayley);
    let (_, series) = propagate(&psi0, &config).expect("run");
    let drift = series
        .iter()
        .map(|(_, o)| (o.norm - 1.0).abs())
        .fold(0.0, f64::max);
    out.push(CheckResult::below("quantum-unitarity-drift", drift, 1e-10));

    // factored decay is exact
    let grid = SpatialGrid::symmetric(20.0, 512).expect("grid");
    let psi0 = gaussian_packet(&grid, 0.0, 0.0, 1.0, 1.0, 1.0).expect("packet");
    let config = free_quantum(0.5, 1e-3, 1000, Propagator::Factored);
    let (psi, _) = propagate(&psi0, &config).expect("run");
    let expected = decay_oracle(1.0, 0.5, 1.0, 3);
    out.push(CheckResult::below(
        "quantum-factored-decay-error",
        (psi.norm() / psi0.norm() - expected).abs(),
        1e-12,
    ));

    // Cayley decay error converges at order 2
    let decay_error = |dt: f64| {
        let steps = (1.0 / dt).round() as usize;
        let config = free_quantum(0.5, dt, steps, Propagator::Cayley);
        let (psi, _) = propagate(&psi0, &config).expect("run");
        (psi.norm() / psi0.norm() - expected).abs()
    };
    out.push(CheckResult::in_band(
        "quantum-cayley-decay-order",
        decay_error(1e-2) / decay_error(5e-3),
        3.6,
        4.4,
    ));

    // cayley and factored agree on normalized amplitudes at order 2
    let equivalence_error = |dt: f64| {
        let steps = (0.5 / dt).round() as usize;
        let cayley = propagate(&psi0, &free_quantum(0.5, dt, steps, Propagator::Cayley))
            .expect("run")
            .0;
        let factored = propagate(&psi0, &free_quantum(0.5, dt, steps, Propagator::Factored))
            .expect("run")
            .0;
        normalized_amps(&cayley)
            .iter()
            .zip(normalized_amps(&factored))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    };
    out.push(CheckResult::in_band(
        "quantum-propagator-equivalence-order",
        equivalence_error(1e-2) / equivalence_error(5e-3),
        3.4,
        4.6,
    ));

    // normalized dynamics are k-invariant in factored mode
    let boosted = gaussian_packet(&grid, -3.0, 1.0, 1.5, 1.0, 1.0).expect("packet");
    let reference = propagate(&boosted, &free_quantum(0.0, 5e-3, 200, Propagator::Cayley))
        .expect("run")
        .1;
    let damped = propagate(
        &boosted,
        &free_quantum(0.5, 5e-3, 200, Propagator::Factored),
    )
    .expect("run")
    .1;
    let invariance = reference
        .iter()
        .zip(&damped)
        .map(|((_, a), (_, b))| (a.x_mean - b.x_mean).abs().max((a.p_mean - b.p_mean).abs()))
        .fold(0.0, f64::max);
    out.push(CheckResult::below(
        "quantum-k-invariance",
        invariance,
        1e-12,
    ));

    // Ehrenfest d<x>/dt = <p>/m at order 2 in dt
    let ehrenfest_error = |dt: f64| {
        let steps = (0.4 / dt).round() as usize;
        let (_, series) =
            propagate(&boosted, &free_quantum(0.0, dt, steps, Propagator::Cayley)).expect("run");
        (1..series.len() - 1)
            .map(|i| {
                let dxdt = (series[i + 1].1.x_mean - series[i - 1].1.x_mean) / (2.0 * dt);
                (dxdt - series[i].1.p_mean).abs()
            })
            .fold(0.0, f64::max)
    };
    out.push(CheckResult::in_band(
        "quantum-ehrenfest-order",
        ehrenfest_error(2e-2) / ehrenfest_error(1e-2),
        3.0,
        5.0,
    ));

    // anti-Hermitian part of the operator is the exact constant shift
    let config = free_quantum(0.7, 1e-3, 0, Propagator::Cayley);
    let op = build_hamiltonian(&config, &grid, 2.0, 1.0);
    let expected_shift = num_complex::Complex64::new(0.0, -2.0 * 3.0 * 0.7 / 2.0);
    let shift_defect = op
        .diag
        .iter()
        .map(|d| (d - d.conj() - expected_shift).norm())
        .fold(0.0, f64::max);
    out.push(CheckResult::below(
        "quantum-anti-hermitian-shift",
        shift_defect,
        1e-15,
    ));

    out
}

pub fn thermoq_checks(rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let ln2 = std::f64::consts::LN_2;

    // pinned entropy values
    let pinned = [
        (entropy_fermi(0.5).expect("valid") - ln2).abs(),
        entropy_fermi(0.0).expect("valid").abs(),
        entropy_fermi(1.0).expect("valid").abs(),
        (entropy_bose(1.0).expect("valid") - 2.0 * ln2).abs(),
    ];
    out.push(CheckResult::below(
        "thermo-entropy-pinned-values",
        pinned.into_iter().fold(0.0, f64::max),
        1e-12,
    ));

    // fermi entropy: symmetric about 1/2, concave, maximal at 1/2
    let mut violations = 0usize;
    let samples = 1000usize;
    for i in 0..=samples {
        let x = i as f64 / samples as f64;
        let s = entropy_fermi(x).expect("valid");
        let mirrored = entropy_fermi(1.0 - x).expect("valid");
        if (s - mirrored).abs() > 1e-12 || s > ln2 + 1e-15 || s < 0.0 {
            violations += 1;
        }
        // midpoint concavity against a fixed partner point
        let y = 0.5;
        let mid = entropy_fermi(0.5 * (x + y)).expect("valid");
        if mid + 1e-12 < 0.5 * (s + entropy_fermi(y).expect("valid")) {
            violations += 1;
        }
    }
    out.push(CheckResult::below(
        "thermo-fermi-concave-symmetric",
        violations as f64,
        0.5,
    ));

    // bose entropy strictly increasing
    let mut monotone_violations = 0usize;
    let mut prev = entropy_bose(1e-3).expect("valid");
    for i in 1..=1000 {
        let x = 1e-3 + i as f64 * 5e-3;
        let s = entropy_bose(x).expect("valid");
        if s <= prev {
            monotone_violations += 1;
        }
        prev = s;
    }
    out.push(CheckResult::below(
        "thermo-bose-monotone",
        monotone_violations as f64,
        0.5,
    ));

    // determinate states carry no correction
    let ry = crate::constants::RYDBERG_EV * crate::constants::EV;
    let ground = ThermoLevel::hydrogen(1, ry).expect("level");
    let determinate = (corrected_level(&ground, 400.0).expect("valid") - ground.base_energy).abs();
    out.push(CheckResult {
        name: "thermo-determinate-correction",
        measured: determinate,
        threshold: 0.0,
        pass: determinate == 0.0,
    });

    // extract_t0 inverts transition_frequency for all (m, n)
    let t0 = 250.0;
    let mut round_trip: f64 = 0.0;
    for m in 2..=6u32 {
        for n in 1..m {
            let upper = ThermoLevel::hydrogen(m, ry).expect("level");
            let lower = ThermoLevel::hydrogen(n, ry).expect("level");
            let nu_th = transition_frequency(&upper, &lower, 0.0).expect("valid");
            let nu_exp = transition_frequency(&upper, &lower, t0).expect("valid");
            let recovered = extract_t0(nu_exp, nu_th, m, n).expect("valid");
            round_trip = round_trip.max((recovered - t0).abs() / t0);
        }
    }
    out.push(CheckResult::below("thermo-t0-roundtrip", round_trip, 1e-10));

    // (2,1) denominator equals 4 ln 4 - 3 ln 3
    let denom_defect =
        (t0_denominator(2, 1).expect("valid") - (4.0 * 4.0f64.ln() - 3.0 * 3.0f64.ln())).abs();
    out.push(CheckResult::below(
        "thermo-denominator-identity",
        denom_defect,
        1e-15,
    ));

    // temperature eigenproblem residual: order-2 convergence
    let wave = TemperatureWave::new(50.0, 1.0).expect("valid");
    let coarse_grid = TGrid::new(10.0, 200.0, 501).expect("grid");
    let fine_grid = TGrid::new(10.0, 200.0, 1001).expect("grid");
    let coarse = temp_eigen_residual(&wave, &coarse_grid);
    out.push(CheckResult::in_band(
        "thermo-eigen-residual-order",
        coarse / temp_eigen_residual(&wave, &fine_grid),
        3.6,
        4.4,
    ));

    // non-eigenfunctions rejected by a large margin
    let bad = eigen_residual_of(|t| t, 50.0, &coarse_grid);
    out.push(CheckResult::above(
        "thermo-eigen-discrimination",
        bad / coarse,
        1e3,
    ));

    // adjoint defect of T d/dT vanishes at order 2
    let defect_at = |n: usize| {
        let grid = TGrid::new(1.0, 11.0, n).expect("grid");
        let f = bump_function(&grid, 6.0, 3.0);
        let g = bump_function(&grid, 5.5, 3.5);
        adjoint_defect(&f, &g, &grid).expect("valid").abs()
    };
    out.push(CheckResult::below(
        "thermo-adjoint-defect",
        defect_at(4096),
        1e-6,
    ));
    out.push(CheckResult::in_band(
        "thermo-adjoint-defect-order",
        defect_at(1024) / defect_at(2048),
        3.4,
        4.6,
    ));

    // <f, Af> + <Af, f> = -<f, f>: the specific non-self-adjoint defect
    let grid = TGrid::new(1.0, 11.0, 4096).expect("grid");
    let f = bump_function(&grid, 6.0, 3.0);
    let mut af = vec![0.0; grid.n];
    apply_t_ddt(&f, &grid, &mut af);
    let sym = 2.0 * inner_product(&f, &af, &grid);
    let ff = inner_product(&f, &f, &grid);
    out.push(CheckResult::below(
        "thermo-self-adjoint-defect-identity",
        (sym + ff).abs(),
        1e-6,
    ));

    // [T, d/dT] = -1 exactly on random polynomials up to degree 8
    let mut comm_worst: f64 = 0.0;
    for _ in 0..100 {
        let degree = rng.gen_range(0..=8usize);
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let poly = Polynomial(coeffs);
        let t = rng.gen_range(0.1..50.0);
        comm_worst = comm_worst.max(commutator_check(&poly, t).abs());
    }
    out.push(CheckResult {
        name: "thermo-commutator-exact",
        measured: comm_worst,
        threshold: 0.0,
        pass: comm_worst == 0.0,
    });

    out
}

pub fn scenario_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();

    // identical (config, seed) must serialize byte-identically
    let mut cfg = ScenarioConfig::new(ScenarioKind::Classical);
    cfg.set_number("dt", 1e-3)
        .set_number("steps", 2000.0)
        .set_text("force", "linear-drag")
        .set_number("drag", 0.1);
    let first = run_scenario(&cfg).expect("run");
    let second = run_scenario(&cfg).expect("run");
    let identical = first.len() == second.len()
        && first
            .iter()
            .zip(&second)
            .all(|(a, b)| csv_string(a) == csv_string(b));
    out.push(CheckResult {
        name: "scenario-determinism",
        measured: if identical { 0.0 } else { 1.0 },
        threshold: 0.5,
        pass: identical,
    });

    // quantum k=0 scenario keeps unit norm
    let mut qcfg = ScenarioConfig::new(ScenarioKind::Quantum);
    qcfg.set_number("dt", 1e-3)
        .set_number("steps", 200.0)
        .set_number("grid-points", 256.0);
    let tables = run_scenario(&qcfg).expect("run");
    let norm_drift = tables[0]
        .column("norm")
        .expect("norm column")
        .values
        .iter()
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max);
    out.push(CheckResult::below(
        "scenario-quantum-unit-norm",
        norm_drift,
        1e-10,
    ));

    // t0-roundtrip scenario recovers its input
    let mut tcfg = ScenarioConfig::new(ScenarioKind::T0Roundtrip);
    tcfg.set_number("t0", 250.0);
    let tables = run_scenario(&tcfg).expect("run");
    let max_err = tables[0]
        .column("rel_err")
        .expect("rel_err column")
        .values
        .iter()
        .fold(0.0f64, |a, &b| a.max(b));
    out.push(CheckResult::below("scenario-t0-roundtrip", max_err, 1e-10));

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes() {
        for check in run_suite(42) {
            assert!(
                check.pass,
                "{}: measured {} vs threshold {}",
                check.name, check.measured, check.threshold
            );
        }
    }

    #[test]
    fn suite_is_deterministic_in_seed() {
        let a = run_suite(7);
        let b = run_suite(7);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.measured.to_bits(), y.measured.to_bits());
        }
    }
}
