//! A single qubit dissipating into N thermal reservoirs acts as a binary
//! classifier of the reservoirs' temperatures: its steady-state effective
//! temperature is a rate-weighted combination of the bath temperatures.
//!
//! Three independent routes compute that steady state:
//!
//! * [`lindblad::steady_state`], the closed-form population ratio;
//! * [`lindblad::evolve`], RK4 integration of the N-bath master equation;
//! * [`collision::run_collisions`], a repeated-interaction model with fresh
//!   thermal ancilla qubits.
//!
//! [`classifier`] labels instances and checks linear separability,
//! [`transmon`] holds the hardware timing arithmetic, and [`verify`] runs
//! the reproduction checks.

pub mod classifier;
pub mod collision;
pub mod error;
pub mod lindblad;
pub mod quantum;
pub mod transmon;
pub mod verify;

#[cfg(test)]
mod testing;

pub use classifier::{classify, ClassificationResult, DecisionRule, Label, LabeledPoint, Perceptron};
pub use collision::{CollisionConfig, CollisionTrajectory, Schedule};
pub use error::{Error, Result};
pub use lindblad::{SystemConfig, ThermalBath, Trajectory};
pub use quantum::{ComplexMatrix, DensityMatrix};
