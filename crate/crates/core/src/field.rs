//! Scalar fields over generalized coordinates with analytic gradients.

use crate::error::{Error, Result};

/// A scalar field U(q) (or T(q)) with a closed-form gradient.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarField {
    /// Identically zero.
    Zero,
    /// Sum of per-coordinate quadratic wells, Σ ½ kᵢ qᵢ².
    Harmonic { stiffness: Vec<f64> },
    /// Affine field, offset + slope·q.
    Linear { slope: Vec<f64>, offset: f64 },
}

impl ScalarField {
    pub fn value(&self, q: &[f64]) -> f64 {
        match self {
            ScalarField::Zero => 0.0,
            ScalarField::Harmonic { stiffness } => {
                0.5 * stiffness.iter().zip(q).map(|(k, x)| k * x * x).sum::<f64>()
            }
            ScalarField::Linear { slope, offset } => {
                offset + slope.iter().zip(q).map(|(s, x)| s * x).sum::<f64>()
            }
        }
    }

    pub fn gradient(&self, q: &[f64], out: &mut [f64]) {
        match self {
            ScalarField::Zero => out.fill(0.0),
            ScalarField::Harmonic { stiffness } => {
                for ((g, k), x) in out.iter_mut().zip(stiffness).zip(q) {
                    *g = k * x;
                }
            }
            ScalarField::Linear { slope, .. } => {
                out.copy_from_slice(slope);
            }
        }
    }

    /// Checks that the field's parameter vectors match the coordinate count.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        let field_dim = match self {
            ScalarField::Zero => return Ok(()),
            ScalarField::Harmonic { stiffness } => stiffness.len(),
            ScalarField::Linear { slope, .. } => slope.len(),
        };
        if field_dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: field_dim,
            });
        }
        Ok(())
    }
}

/// Compares the analytic gradient against central finite differences at `q`.
///
/// Returns the worst relative mismatch over all components.
pub fn gradient_defect(field: &ScalarField, q: &[f64], h: f64) -> f64 {
    let mut grad = vec![0.0; q.len()];
    field.gradient(q, &mut grad);
    let mut worst: f64 = 0.0;
    let mut probe = q.to_vec();
    for i in 0..q.len() {
        probe[i] = q[i] + h;
        let up = field.value(&probe);
        probe[i] = q[i] - h;
        let down = field.value(&probe);
        probe[i] = q[i];
        let fd = (up - down) / (2.0 * h);
        let scale = grad[i].abs().max(fd.abs()).max(1.0);
        worst = worst.max((grad[i] - fd).abs() / scale);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_value_and_gradient() {
        let f = ScalarField::Harmonic {
            stiffness: vec![2.0, 3.0],
        };
        let q = [1.0, -2.0];
        assert_eq!(f.value(&q), 0.5 * (2.0 + 12.0));
        let mut g = [0.0; 2];
        f.gradient(&q, &mut g);
        assert_eq!(g, [2.0, -6.0]);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let fields = [
            ScalarField::Zero,
            ScalarField::Harmonic {
                stiffness: vec![1.5, 0.3],
            },
            ScalarField::Linear {
                slope: vec![0.7, -1.2],
                offset: 300.0,
            },
        ];
        for f in &fields {
            assert!(gradient_defect(f, &[0.4, -1.1], 1e-5) < 1e-6);
        }
    }

    #[test]
    fn dim_check_rejects_mismatch() {
        let f = ScalarField::Harmonic {
            stiffness: vec![1.0],
        };
        assert!(f.check_dim(2).is_err());
        assert!(f.check_dim(1).is_ok());
    }
}
