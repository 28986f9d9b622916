//! Physical constants (2019 SI exact values where defined).

/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Planck constant, J·s.
pub const PLANCK_H: f64 = 6.626_070_15e-34;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = PLANCK_H / (2.0 * std::f64::consts::PI);

/// Electron volt, J.
pub const EV: f64 = 1.602_176_634e-19;

/// Rydberg energy of hydrogen, eV.
pub const RYDBERG_EV: f64 = 13.605_693_122_994;
