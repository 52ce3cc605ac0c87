//! Shared helpers for unit tests.

use num_complex::Complex64;

use crate::quantum::{ComplexMatrix, DensityMatrix};

/// Qubit state from a Bloch vector, clipped to the unit ball.
pub fn bloch_state(x: f64, y: f64, z: f64) -> DensityMatrix {
    let norm = (x * x + y * y + z * z).sqrt().max(1.0);
    let (x, y, z) = (x / norm, y / norm, z / norm);
    let m = ComplexMatrix::from_rows(&[
        Complex64::new(0.5 * (1.0 + z), 0.0),
        Complex64::new(0.5 * x, -0.5 * y),
        Complex64::new(0.5 * x, 0.5 * y),
        Complex64::new(0.5 * (1.0 - z), 0.0),
    ])
    .unwrap();
    DensityMatrix::from_numerical(m).unwrap()
}
