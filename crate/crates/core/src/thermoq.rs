//! Quantum thermodynamics: occupation entropies, the temperature
//! eigenproblem T²∂φ/∂T = T₀φ, temperature-corrected spectra, and extraction
//! of the temperature constant T₀ from line shifts.

use crate::constants::{K_B, PLANCK_H};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    Fermi,
    Bose,
}

/// Average occupation of a single-particle state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupationSpec {
    pub statistics: Statistics,
    pub ni: f64,
}

impl OccupationSpec {
    pub fn new(statistics: Statistics, ni: f64) -> Result<Self> {
        match statistics {
            Statistics::Fermi if !(0.0..=1.0).contains(&ni) => {
                return Err(Error::invalid("fermi occupation must lie in [0, 1]"))
            }
            Statistics::Bose if ni.is_nan() || ni <= 0.0 => {
                return Err(Error::invalid("bose occupation must be positive"))
            }
            _ => {}
        }
        Ok(OccupationSpec { statistics, ni })
    }

    /// Per-state entropy in units of k_B.
    pub fn entropy(&self) -> Result<f64> {
        match self.statistics {
            Statistics::Fermi => entropy_fermi(self.ni),
            Statistics::Bose => entropy_bose(self.ni),
        }
    }
}

/// An energy level with degeneracy and per-state occupation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoLevel {
    pub n: u32,
    /// E_n, J.
    pub base_energy: f64,
    /// f_n.
    pub degeneracy: f64,
    /// n_i, per-state occupation.
    pub occupation: f64,
}

impl ThermoLevel {
    /// Hydrogen level: E_n = −R_y/n², f_n = n², n_i = 1/n².
    pub fn hydrogen(n: u32, rydberg_j: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("principal quantum number must be >= 1"));
        }
        let n_sq = (n as f64) * (n as f64);
        Ok(ThermoLevel {
            n,
            base_energy: -rydberg_j / n_sq,
            degeneracy: n_sq,
            occupation: 1.0 / n_sq,
        })
    }
}

/// φ(T) = A·e^(−T₀/T).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureWave {
    pub t0: f64,
    pub a: f64,
}

impl TemperatureWave {
    pub fn new(t0: f64, a: f64) -> Result<Self> {
        if a.is_nan() || a <= 0.0 {
            return Err(Error::invalid("normalization A must be positive"));
        }
        Ok(TemperatureWave { t0, a })
    }
}

/// Uniform temperature grid for quadrature and finite differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TGrid {
    pub tmin: f64,
    pub tmax: f64,
    pub n: usize,
}

impl TGrid {
    pub fn new(tmin: f64, tmax: f64, n: usize) -> Result<Self> {
        if !(tmin > 0.0 && tmax > tmin) {
            return Err(Error::invalid("require 0 < Tmin < Tmax"));
        }
        if n < 16 {
            return Err(Error::invalid("temperature grid needs at least 16 points"));
        }
        Ok(TGrid { tmin, tmax, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.tmax - self.tmin) / (self.n as f64 - 1.0)
    }

    pub fn t(&self, i: usize) -> f64 {
        self.tmin + self.spacing() * i as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.t(i))
    }
}

fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Fermi per-state entropy −[n ln n + (1−n) ln(1−n)], in k_B units.
pub fn entropy_fermi(ni: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&ni) {
        return Err(Error::invalid("fermi occupation must lie in [0, 1]"));
    }
    Ok(-(xlnx(ni) + xlnx(1.0 - ni)))
}

/// Bose per-state entropy −[n ln n − (1+n) ln(1+n)], in k_B units.
pub fn entropy_bose(ni: f64) -> Result<f64> {
    if ni.is_nan() || ni <= 0.0 {
        return Err(Error::invalid("bose occupation must be positive"));
    }
    Ok(-(xlnx(ni) - xlnx(1.0 + ni)))
}

/// φ(T) = A·e^(−T₀/T) for T > 0.
pub fn temp_wavefunction(wave: &TemperatureWave, t: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::invalid("temperature must be positive"));
    }
    Ok(wave.a * (-wave.t0 / t).exp())
}

/// Max |T²φ′(T) − T₀φ(T)| over interior grid points with φ′ by central
/// differences; O(dT²) for the analytic eigenfunction.
pub fn temp_eigen_residual(wave: &TemperatureWave, grid: &TGrid) -> f64 {
    eigen_residual_of(|t| wave.a * (-wave.t0 / t).exp(), wave.t0, grid)
}

/// Same residual for an arbitrary candidate φ; non-eigenfunctions give an
/// O(1) residual.
pub fn eigen_residual_of(phi: impl Fn(f64) -> f64, t0: f64, grid: &TGrid) -> f64 {
    let dt = grid.spacing();
    let mut worst: f64 = 0.0;
    for i in 1..grid.n - 1 {
        let t = grid.t(i);
        let derivative = (phi(grid.t(i + 1)) - phi(grid.t(i - 1))) / (2.0 * dt);
        worst = worst.max((t * t * derivative - t0 * phi(t)).abs());
    }
    worst
}

/// Thermal energy correction E_2n = f_n·S(n_i)·k_B·T₀, J.
pub fn energy_correction(level: &ThermoLevel, statistics: Statistics, t0: f64) -> Result<f64> {
    let occ = OccupationSpec::new(statistics, level.occupation)?;
    Ok(level.degeneracy * occ.entropy()? * K_B * t0)
}

/// Temperature-corrected level E_n(T) = E_n + k_B·f_n·S_F(n_i)·T₀, J.
pub fn corrected_level(level: &ThermoLevel, t0: f64) -> Result<f64> {
    Ok(level.base_energy + energy_correction(level, Statistics::Fermi, t0)?)
}

/// Corrected transition frequency (E_m(T) − E_n(T))/h, Hz.
pub fn transition_frequency(upper: &ThermoLevel, lower: &ThermoLevel, t0: f64) -> Result<f64> {
    if upper.base_energy <= lower.base_energy {
        return Err(Error::invalid("upper level must lie above lower level"));
    }
    Ok((corrected_level(upper, t0)? - corrected_level(lower, t0)?) / PLANCK_H)
}

/// Hydrogen m→n denominator ln(m²/n²) − (m²−1)ln(1−1/m²) + (n²−1)ln(1−1/n²),
/// with the 0·ln 0 term at n = 1 taken as 0. Dimensionless (k_B units).
pub fn t0_denominator(m: u32, n: u32) -> Result<f64> {
    if m <= n || n < 1 {
        return Err(Error::invalid("require m > n >= 1"));
    }
    let term = |j: u32| {
        let j_sq = (j as f64) * (j as f64);
        if j == 1 {
            0.0
        } else {
            (j_sq - 1.0) * (1.0 - 1.0 / j_sq).ln()
        }
    };
    let (m_f, n_f) = (m as f64, n as f64);
    Ok((m_f * m_f / (n_f * n_f)).ln() - term(m) + term(n))
}

/// Temperature constant from a measured line shift:
/// T₀ = h(ν_exp − ν_th)/(k_B·denominator).
pub fn extract_t0(nu_exp: f64, nu_th: f64, m: u32, n: u32) -> Result<f64> {
    let denom = t0_denominator(m, n)?;
    Ok(PLANCK_H * (nu_exp - nu_th) / (K_B * denom))
}

/// Trapezoid inner product ⟨f, g⟩ = ∫ f·g dT on the grid.
pub fn inner_product(f: &[f64], g: &[f64], grid: &TGrid) -> f64 {
    let dt = grid.spacing();
    let mut acc = 0.0;
    for i in 0..grid.n - 1 {
        acc += 0.5 * dt * (f[i] * g[i] + f[i + 1] * g[i + 1]);
    }
    acc
}

/// Applies A = T·d/dT with central differences; edge entries are left zero
/// (inputs are required to vanish there).
pub fn apply_t_ddt(f: &[f64], grid: &TGrid, out: &mut [f64]) {
    let dt = grid.spacing();
    out[0] = 0.0;
    out[grid.n - 1] = 0.0;
    for i in 1..grid.n - 1 {
        out[i] = grid.t(i) * (f[i + 1] - f[i - 1]) / (2.0 * dt);
    }
}

/// Integration-by-parts witness for the non-Hermiticity of A = T·d/dT:
/// returns ⟨f, Ag⟩ + ⟨Af, g⟩ + ⟨f, g⟩, which vanishes for functions
/// supported away from the grid edges (so A† = −A − 1 ≠ A).
pub fn adjoint_defect(f: &[f64], g: &[f64], grid: &TGrid) -> Result<f64> {
    if f.len() != grid.n || g.len() != grid.n {
        return Err(Error::DimensionMismatch {
            expected: grid.n,
            got: f.len().min(g.len()),
        });
    }
    let edge = f[0]
        .abs()
        .max(f[grid.n - 1].abs())
        .max(g[0].abs())
        .max(g[grid.n - 1].abs());
    if edge >= 1e-12 {
        return Err(Error::invalid(
            "test functions must vanish at the grid edges",
        ));
    }
    let mut af = vec![0.0; grid.n];
    let mut ag = vec![0.0; grid.n];
    apply_t_ddt(f, grid, &mut af);
    apply_t_ddt(g, grid, &mut ag);
    Ok(inner_product(f, &ag, grid) + inner_product(&af, g, grid) + inner_product(f, g, grid))
}

/// Dense polynomial with exact coefficient arithmetic for operator checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| i as f64 * c)
                .collect(),
        )
    }

    /// Multiply by T (shift coefficients up one degree).
    pub fn times_t(&self) -> Polynomial {
        let mut coeffs = vec![0.0];
        coeffs.extend_from_slice(&self.0);
        Polynomial(coeffs)
    }
}

/// Evaluates (T·f′(T) − d/dT[T·f(T)]) + f(T) by exact polynomial
/// manipulation; zero for every polynomial since [T, d/dT] = −1.
///
/// Degree-i coefficients of the three terms are i·aᵢ, (i+1)·aᵢ, and aᵢ;
/// the integer multipliers are combined exactly before scaling by aᵢ, so
/// the result carries no rounding at all.
pub fn commutator_check(f: &Polynomial, t: f64) -> f64 {
    let combined = Polynomial(
        f.0.iter()
            .enumerate()
            .map(|(i, a)| {
                let multiplier = (i as i64) - (i as i64 + 1) + 1;
                multiplier as f64 * a
            })
            .collect(),
    );
    combined.eval(t)
}

/// Residual of the plane wave ψ = e^{(i/ħ)(px−Et)}·e^(−T₀/T) in the free
/// temperature Schrödinger equation with vanishing entropy term:
/// |E − p²/2m|·|ψ| maximized over (x, t, T) samples.
pub fn plane_wave_residual(p: f64, e: f64, t0: f64, mass: f64, samples: &[(f64, f64, f64)]) -> f64 {
    let defect = (e - p * p / (2.0 * mass)).abs();
    samples
        .iter()
        .map(|&(_, _, temp)| defect * (-t0 / temp).exp())
        .fold(0.0, f64::max)
}

/// Smooth bump supported on the interior of the grid; zero outside
/// (center ± radius).
pub fn bump_function(grid: &TGrid, center: f64, radius: f64) -> Vec<f64> {
    grid.points()
        .map(|t| {
            let u = (t - center) / radius;
            if u.abs() < 1.0 {
                (-1.0 / (1.0 - u * u)).exp()
            } else {
                0.0
            }
        })
        .collect()
}
