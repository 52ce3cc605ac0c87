use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const HERMITIAN_INPUT_TOL: f64 = 1e-12;

/// `exp(−i H t)` for Hermitian `H`, via the eigendecomposition `H = V Λ V†`.
pub fn matrix_exponential_unitary(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let defect = h.hermiticity_defect();
    if defect >= HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian(defect));
    }
    if !t.is_finite() {
        return Err(Error::param("t", format!("must be finite, got {t}")));
    }
    let eig = h.hermitian_part().to_nalgebra().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = eig
        .eigenvalues
        .map(|lambda| Complex64::new(0.0, -lambda * t).exp());
    let mut u = v.clone();
    for (mut col, phase) in u.column_iter_mut().zip(phases.iter()) {
        col *= *phase;
    }
    ComplexMatrix::from_nalgebra(&(u * v.adjoint()))
}
