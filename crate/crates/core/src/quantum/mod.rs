//! 1D wavepacket propagation under a non-Hermitian Hamiltonian
//! Ĥ = −ħ²/2m ∇² + V − iħDk/m.
//!
//! The anti-Hermitian part is a constant scalar, so the exact evolution
//! factors into a Hermitian evolution times the decay e^(−Dkt/m). Two
//! propagators are provided: a Crank–Nicolson (Cayley) step applied to the
//! full operator, and a `factored` step that performs the Hermitian Cayley
//! step and applies the decay scalar exactly. The factored mode serves as an
//! oracle for the Cayley mode.

mod tridiag;

pub use tridiag::solve_tridiagonal;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform 1D spatial grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
}

impl SpatialGrid {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        if dx.is_nan() || dx <= 0.0 {
            return Err(Error::invalid("grid spacing must be positive"));
        }
        if n < 16 {
            return Err(Error::invalid("grid needs at least 16 points"));
        }
        Ok(SpatialGrid { x0, dx, n })
    }

    /// Symmetric grid spanning [-half_width, half_width].
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        if half_width.is_nan() || half_width <= 0.0 {
            return Err(Error::invalid("half_width must be positive"));
        }
        let dx = 2.0 * half_width / (n as f64 - 1.0);
        SpatialGrid::new(-half_width, dx, n)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + self.dx * i as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.x(i))
    }
}

/// External potential V(x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuantumPotential {
    Free,
    /// ½ m ω² x².
    Harmonic {
        omega: f64,
    },
}

impl QuantumPotential {
    pub fn value(&self, x: f64, mass: f64) -> f64 {
        match self {
            QuantumPotential::Free => 0.0,
            QuantumPotential::Harmonic { omega } => 0.5 * mass * omega * omega * x * x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagator {
    Cayley,
    Factored,
}

/// Propagation settings; `dim_factor` is the D in the decay rate Dk/m
/// (3 for the three-dimensional derivation of the model).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumConfig {
    pub potential: QuantumPotential,
    pub k: f64,
    pub dim_factor: u32,
    pub dt: f64,
    pub steps: usize,
    pub propagator: Propagator,
}

impl QuantumConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dt.is_nan() || self.dt <= 0.0 {
            return Err(Error::invalid("dt must be positive"));
        }
        if self.k < 0.0 {
            return Err(Error::invalid("dissipation coefficient k must be >= 0"));
        }
        if self.dim_factor < 1 {
            return Err(Error::invalid("dim_factor must be >= 1"));
        }
        Ok(())
    }
}

/// Complex amplitudes on a grid, with particle mass and ħ.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    pub grid: SpatialGrid,
    pub amps: Vec<Complex64>,
    pub mass: f64,
    pub hbar: f64,
}

impl Wavefunction {
    pub fn new(grid: SpatialGrid, amps: Vec<Complex64>, mass: f64, hbar: f64) -> Result<Self> {
        if amps.len() != grid.n {
            return Err(Error::DimensionMismatch {
                expected: grid.n,
                got: amps.len(),
            });
        }
        if !(mass > 0.0 && hbar > 0.0) {
            return Err(Error::invalid("mass and hbar must be positive"));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::invalid("amplitudes must be finite"));
        }
        let wf = Wavefunction {
            grid,
            amps,
            mass,
            hbar,
        };
        if wf.norm_sq() <= 0.0 {
            return Err(Error::invalid("wavefunction must have positive norm"));
        }
        Ok(wf)
    }

    /// Σ|ψᵢ|² dx.
    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest |ψ| on the two boundary points.
    pub fn boundary_amplitude(&self) -> f64 {
        self.amps[0].norm().max(self.amps[self.grid.n - 1].norm())
    }
}

/// Tridiagonal operator with a constant real off-diagonal, zero beyond the
/// grid edges (Dirichlet).
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diag: Vec<Complex64>,
    pub off: f64,
}

impl TridiagonalOperator {
    pub fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        let n = self.diag.len();
        for i in 0..n {
            let mut acc = self.diag[i] * psi[i];
            if i > 0 {
                acc += self.off * psi[i - 1];
            }
            if i + 1 < n {
                acc += self.off * psi[i + 1];
            }
            out[i] = acc;
        }
    }
}

/// Discretized Ĥ: kinetic stencil (−ħ²/2m)(ψᵢ₊₁−2ψᵢ+ψᵢ₋₁)/dx², diagonal
/// V(xᵢ) − iħDk/m.
pub fn build_hamiltonian(
    config: &QuantumConfig,
    grid: &SpatialGrid,
    mass: f64,
    hbar: f64,
) -> TridiagonalOperator {
    let off = -hbar * hbar / (2.0 * mass * grid.dx * grid.dx);
    let decay = hbar * config.dim_factor as f64 * config.k / mass;
    let diag = grid
        .points()
        .map(|x| Complex64::new(config.potential.value(x, mass) - 2.0 * off, -decay))
        .collect();
    TridiagonalOperator { diag, off }
}

fn hermitian_config(config: &QuantumConfig) -> QuantumConfig {
    QuantumConfig { k: 0.0, ..*config }
}

fn cayley_advance(psi: &Wavefunction, op: &TridiagonalOperator, dt: f64) -> Result<Vec<Complex64>> {
    let n = psi.grid.n;
    let lambda = Complex64::new(0.0, dt / (2.0 * psi.hbar));
    // rhs = (1 - iλH)ψ
    let mut rhs = vec![Complex64::default(); n];
    op.apply(&psi.amps, &mut rhs);
    for (r, a) in rhs.iter_mut().zip(&psi.amps) {
        *r = a - lambda * *r;
    }
    // solve (1 + iλH)ψ' = rhs
    let diag: Vec<Complex64> = op
        .diag
        .iter()
        .map(|d| Complex64::new(1.0, 0.0) + lambda * d)
        .collect();
    let off = vec![lambda * op.off; n - 1];
    solve_tridiagonal(&off, &diag, &off, &mut rhs)?;
    Ok(rhs)
}

/// Crank–Nicolson (Cayley) step of the full non-Hermitian operator.
pub fn step_cayley(psi: &Wavefunction, config: &QuantumConfig) -> Result<Wavefunction> {
    config.validate()?;
    let op = build_hamiltonian(config, &psi.grid, psi.mass, psi.hbar);
    let amps = cayley_advance(psi, &op, config.dt)?;
    Wavefunction::new(psi.grid, amps, psi.mass, psi.hbar)
}

/// Hermitian Cayley step followed by the exact decay scalar e^(−Dk·dt/m).
pub fn step_factored(psi: &Wavefunction, config: &QuantumConfig) -> Result<Wavefunction> {
    config.validate()?;
    let hermitian = hermitian_config(config);
    let op = build_hamiltonian(&hermitian, &psi.grid, psi.mass, psi.hbar);
    let mut amps = cayley_advance(psi, &op, config.dt)?;
    let factor = decay_oracle(config.dt, config.k, psi.mass, config.dim_factor);
    if factor != 1.0 {
        for a in &mut amps {
            *a *= factor;
        }
    }
    Wavefunction::new(psi.grid, amps, psi.mass, psi.hbar)
}

/// Dispatches on `config.propagator`.
pub fn step(psi: &Wavefunction, config: &QuantumConfig) -> Result<Wavefunction> {
    match config.propagator {
        Propagator::Cayley => step_cayley(psi, config),
        Propagator::Factored => step_factored(psi, config),
    }
}

/// Exact amplitude decay ratio e^(−Dkt/m).
pub fn decay_oracle(t: f64, k: f64, mass: f64, dim_factor: u32) -> f64 {
    (-(dim_factor as f64) * k * t / mass).exp()
}

/// Diagnostics on the normalized wavefunction; `h0_mean` uses the Hermitian
/// part of the operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub norm: f64,
    pub x_mean: f64,
    pub p_mean: f64,
    pub h0_mean: f64,
}

pub fn observables(psi: &Wavefunction, config: &QuantumConfig) -> Result<Observables> {
    let norm_sq = psi.norm_sq();
    if norm_sq <= 0.0 {
        return Err(Error::invalid("zero-norm wavefunction"));
    }
    let dx = psi.grid.dx;
    let n = psi.grid.n;

    let x_mean = psi
        .amps
        .iter()
        .enumerate()
        .map(|(i, a)| psi.grid.x(i) * a.norm_sqr())
        .sum::<f64>()
        * dx
        / norm_sq;

    // <p> = ħ Im Σ ψ* (central difference ψ) dx
    let mut p_sum = 0.0;
    for i in 0..n {
        let up = if i + 1 < n {
            psi.amps[i + 1]
        } else {
            Complex64::default()
        };
        let down = if i > 0 {
            psi.amps[i - 1]
        } else {
            Complex64::default()
        };
        let derivative = (up - down) / (2.0 * dx);
        p_sum += (psi.amps[i].conj() * derivative).im;
    }
    let p_mean = psi.hbar * p_sum * dx / norm_sq;

    let h0 = build_hamiltonian(&hermitian_config(config), &psi.grid, psi.mass, psi.hbar);
    let mut h_psi = vec![Complex64::default(); n];
    h0.apply(&psi.amps, &mut h_psi);
    let h0_mean = psi
        .amps
        .iter()
        .zip(&h_psi)
        .map(|(a, h)| (a.conj() * h).re)
        .sum::<f64>()
        * dx
        / norm_sq;

    Ok(Observables {
        norm: norm_sq.sqrt(),
        x_mean,
        p_mean,
        h0_mean,
    })
}

/// Normalized Gaussian packet exp(−(x−x₀)²/4σ² + ip₀x/ħ).
pub fn gaussian_packet(
    grid: &SpatialGrid,
    x0: f64,
    p0: f64,
    sigma: f64,
    mass: f64,
    hbar: f64,
) -> Result<Wavefunction> {
    if sigma < 4.0 * grid.dx {
        return Err(Error::invalid(format!(
            "packet width {sigma} under-resolved: need sigma >= 4*dx = {}",
            4.0 * grid.dx
        )));
    }
    let left = grid.x(0);
    let right = grid.x(grid.n - 1);
    if x0 <= left || x0 >= right {
        return Err(Error::invalid("packet center must lie inside the grid"));
    }
    let amps: Vec<Complex64> = grid
        .points()
        .map(|x| {
            let u = x - x0;
            let envelope = (-u * u / (4.0 * sigma * sigma)).exp();
            envelope * Complex64::new(0.0, p0 * x / hbar).exp()
        })
        .collect();
    let mut wf = Wavefunction::new(*grid, amps, mass, hbar)?;
    let norm = wf.norm();
    for a in &mut wf.amps {
        *a /= norm;
    }
    Ok(wf)
}

/// Runs `config.steps` steps from `psi0`, recording observables at every
/// sample time (including t = 0).
pub fn propagate(
    psi0: &Wavefunction,
    config: &QuantumConfig,
) -> Result<(Wavefunction, Vec<(f64, Observables)>)> {
    config.validate()?;
    let mut psi = psi0.clone();
    let mut series = Vec::with_capacity(config.steps + 1);
    series.push((0.0, observables(&psi, config)?));
    for i in 0..config.steps {
        psi = step(&psi, config).map_err(|e| match e {
            Error::Propagation { reason, .. } => Error::Propagation { step: i, reason },
            Error::InvalidInput(reason) => Error::Propagation { step: i, reason },
            other => other,
        })?;
        series.push(((i + 1) as f64 * config.dt, observables(&psi, config)?));
    }
    Ok((psi, series))
}
