//! Thomas algorithm for complex tridiagonal systems.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Solves A x = rhs for tridiagonal A with sub-diagonal `lower` (len n-1),
/// main diagonal `diag` (len n), super-diagonal `upper` (len n-1).
///
/// `rhs` is overwritten with the solution.
pub fn solve_tridiagonal(
    lower: &[Complex64],
    diag: &[Complex64],
    upper: &[Complex64],
    rhs: &mut [Complex64],
) -> Result<()> {
    let n = diag.len();
    assert_eq!(rhs.len(), n);
    assert_eq!(lower.len(), n - 1);
    assert_eq!(upper.len(), n - 1);

    let mut scratch = vec![Complex64::default(); n - 1];
    let mut pivot = diag[0];
    if pivot.norm_sqr() == 0.0 {
        return Err(Error::invalid("singular tridiagonal system (zero pivot)"));
    }
    rhs[0] /= pivot;
    for i in 1..n {
        scratch[i - 1] = upper[i - 1] / pivot;
        pivot = diag[i] - lower[i - 1] * scratch[i - 1];
        if pivot.norm_sqr() == 0.0 {
            return Err(Error::invalid("singular tridiagonal system (zero pivot)"));
        }
        rhs[i] = (rhs[i] - lower[i - 1] * rhs[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        let correction = scratch[i] * rhs[i + 1];
        rhs[i] -= correction;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_known_system() {
        // A = [[2,1,0],[1,3,1],[0,1,2]], x = [1, i, -2]
        let lower = [c(1.0, 0.0), c(1.0, 0.0)];
        let diag = [c(2.0, 0.0), c(3.0, 0.0), c(2.0, 0.0)];
        let upper = [c(1.0, 0.0), c(1.0, 0.0)];
        let x = [c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 0.0)];
        let mut rhs = [
            diag[0] * x[0] + upper[0] * x[1],
            lower[0] * x[0] + diag[1] * x[1] + upper[1] * x[2],
            lower[1] * x[1] + diag[2] * x[2],
        ];
        solve_tridiagonal(&lower, &diag, &upper, &mut rhs).unwrap();
        for (got, want) in rhs.iter().zip(&x) {
            assert!((got - want).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_singular() {
        let lower = [c(0.0, 0.0)];
        let diag = [c(0.0, 0.0), c(1.0, 0.0)];
        let upper = [c(0.0, 0.0)];
        let mut rhs = [c(1.0, 0.0), c(1.0, 0.0)];
        assert!(solve_tridiagonal(&lower, &diag, &upper, &mut rhs).is_err());
    }
}
