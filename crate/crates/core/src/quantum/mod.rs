//! Dense complex linear algebra for single-qubit and qubit-pair operators.

mod density;
mod expm;
mod matrix;

pub use density::{
    gibbs_state, partial_trace, thermal_qubit, trace_distance, DensityMatrix, Subsystem,
    HERMITIAN_TOL, POSITIVITY_TOL, TRACE_TOL,
};
pub(crate) use density::partial_trace_matrix;
pub use expm::matrix_exponential_unitary;
pub use matrix::{pauli, ComplexMatrix, Pauli, EXCITED, GROUND};
