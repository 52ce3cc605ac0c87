use num_complex::Complex64;

use super::matrix::{ComplexMatrix, EXCITED, GROUND};
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect >= HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() >= TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_eig = matrix.hermitian_eigenvalues(HERMITIAN_TOL)?[0];
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(Self(matrix))
    }

    /// Hermitizes and renormalizes `matrix` before validating it. Used on
    /// integrator output where roundoff drift is expected.
    pub fn from_numerical(matrix: ComplexMatrix) -> Result<Self> {
        let herm = matrix.hermitian_part();
        let tr = herm.trace().re;
        if !(tr.is_finite() && tr > 0.0) {
            return Err(Error::InvalidState(format!("non-positive trace {tr}")));
        }
        Self::new(herm.scale_real(1.0 / tr))
    }

    /// Diagonal state from populations; they must sum to one.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(populations)?)
    }

    /// `|e⟩⟨e|`
    pub fn excited() -> Self {
        Self(ComplexMatrix::from_real_diagonal(&[1.0, 0.0]).expect("2x2"))
    }

    /// `|g⟩⟨g|`
    pub fn ground() -> Self {
        Self(ComplexMatrix::from_real_diagonal(&[0.0, 1.0]).expect("2x2"))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Excited-state population of a single qubit.
    pub fn excited_population(&self) -> f64 {
        self.0[(EXCITED, EXCITED)].re
    }

    /// Ground-state population of a single qubit.
    pub fn ground_population(&self) -> f64 {
        self.0[(GROUND, GROUND)].re
    }

    pub fn coherence(&self) -> Complex64 {
        self.0[(EXCITED, GROUND)]
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.0
            .hermitian_eigenvalues(HERMITIAN_TOL)
            .expect("validated density matrix is Hermitian")
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(Self(self.0.kron(&other.0)?))
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self(matrix)
    }
}

/// Gibbs state with populations `p_k ∝ exp(−β E_k)`.
///
/// `beta = f64::INFINITY` gives the ground-state projector, `beta = 0` the
/// maximally mixed state.
pub fn gibbs_state(energies: &[f64], beta: f64) -> Result<DensityMatrix> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::param("beta", format!("must be >= 0, got {beta}")));
    }
    if energies.iter().any(|e| !e.is_finite()) {
        return Err(Error::param("energies", "must be finite"));
    }
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    // shift by the minimum energy so the largest weight is exactly one
    let weights: Vec<f64> = energies
        .iter()
        .map(|&e| {
            let gap = e - e_min;
            if gap == 0.0 {
                1.0
            } else {
                (-beta * gap).exp()
            }
        })
        .collect();
    let z: f64 = weights.iter().sum();
    let pops: Vec<f64> = weights.iter().map(|w| w / z).collect();
    DensityMatrix::new(ComplexMatrix::from_real_diagonal(&pops)?)
}

/// Thermal state of a qubit with level splitting `omega` at temperature `t`
/// (ħ = k_B = 1); `t = 0` gives `|g⟩⟨g|`.
pub fn thermal_qubit(omega: f64, t: f64) -> Result<DensityMatrix> {
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::param("omega", format!("must be > 0, got {omega}")));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::param("temperature", format!("must be >= 0, got {t}")));
    }
    let beta = if t == 0.0 { f64::INFINITY } else { 1.0 / t };
    let mut energies = [0.0; 2];
    energies[EXCITED] = 0.5 * omega;
    energies[GROUND] = -0.5 * omega;
    gibbs_state(&energies, beta)
}

/// Which factor of a system ⊗ ancilla state to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Ancilla,
}

pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_trusted(partial_trace_matrix(rho.matrix(), keep)?))
}

pub(crate) fn partial_trace_matrix(m: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if m.dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            found: m.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros_unchecked(2);
    for a in 0..2 {
        for b in 0..2 {
            out[(a, b)] = (0..2)
                .map(|k| match keep {
                    Subsystem::System => m[(2 * a + k, 2 * b + k)],
                    Subsystem::Ancilla => m[(2 * k + a, 2 * k + b)],
                })
                .sum();
        }
    }
    Ok(out)
}

/// `½ Σ |λ_k(a − b)|`
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let diff = (*a.matrix() - *b.matrix()).hermitian_part();
    let eig = diff.hermitian_eigenvalues(HERMITIAN_TOL)?;
    Ok(0.5 * eig.iter().map(|l| l.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{pauli, Pauli};
    use crate::testing::bloch_state;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gibbs_limits_and_unit_temperature() {
        let energies = [0.5, -0.5];
        let cold = gibbs_state(&energies, f64::INFINITY).unwrap();
        assert_eq!(cold, DensityMatrix::ground());
        let hot = gibbs_state(&energies, 0.0).unwrap();
        assert_eq!(hot.excited_population(), 0.5);
        let unit = gibbs_state(&energies, 1.0).unwrap();
        let expected = 1.0 / (1.0 + std::f64::consts::E);
        assert!((unit.excited_population() - expected).abs() < 1e-15);
        assert!((unit.excited_population() - 0.268941).abs() < 1e-6);
    }

    #[test]
    fn gibbs_rejects_negative_beta() {
        assert!(gibbs_state(&[0.5, -0.5], -1.0).is_err());
        assert!(gibbs_state(&[0.5, -0.5], f64::NAN).is_err());
    }

    #[test]
    fn invalid_states_rejected() {
        let not_unit = ComplexMatrix::from_real_diagonal(&[0.6, 0.6]).unwrap();
        assert!(DensityMatrix::new(not_unit).is_err());
        let negative = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]).unwrap();
        assert!(DensityMatrix::new(negative).is_err());
        let skew = ComplexMatrix::from_rows(&[c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0)])
            .unwrap();
        assert!(matches!(DensityMatrix::new(skew), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        // (|eg⟩ + |ge⟩)/√2
        let mut m = ComplexMatrix::zeros(4).unwrap();
        for (r, cc) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            m[(r, cc)] = c(0.5, 0.0);
        }
        let bell = DensityMatrix::new(m).unwrap();
        for keep in [Subsystem::System, Subsystem::Ancilla] {
            let reduced = partial_trace(&bell, keep).unwrap();
            let mixed = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
            assert!(trace_distance(&reduced, &mixed).unwrap() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_rejects_single_qubit() {
        assert!(partial_trace(&DensityMatrix::ground(), Subsystem::System).is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let e = DensityMatrix::excited();
        let g = DensityMatrix::ground();
        assert_eq!(trace_distance(&e, &e).unwrap(), 0.0);
        assert!((trace_distance(&e, &g).unwrap() - 1.0).abs() < 1e-15);
        let a = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let b = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        assert!((trace_distance(&a, &b).unwrap() - 0.5).abs() < 1e-15);
        let four = e.tensor(&g).unwrap();
        assert!(trace_distance(&e, &four).is_err());
    }

    proptest! {
        #[test]
        fn partial_trace_inverts_tensor_product(
            a in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
            b in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
        ) {
            let ra = bloch_state(a.0, a.1, a.2);
            let rb = bloch_state(b.0, b.1, b.2);
            let joint = ra.tensor(&rb).unwrap();
            let sys = partial_trace(&joint, Subsystem::System).unwrap();
            let anc = partial_trace(&joint, Subsystem::Ancilla).unwrap();
            prop_assert!((*sys.matrix() - *ra.matrix()).max_abs() < 1e-14);
            prop_assert!((*anc.matrix() - *rb.matrix()).max_abs() < 1e-14);
            prop_assert!(DensityMatrix::new(*sys.matrix()).is_ok());
        }

        #[test]
        fn gibbs_excited_population_decreases_with_beta(b1 in 0.0f64..20.0, gap in 1e-3f64..5.0) {
            let energies = [0.5, -0.5];
            let p1 = gibbs_state(&energies, b1).unwrap().excited_population();
            let p2 = gibbs_state(&energies, b1 + gap).unwrap().excited_population();
            prop_assert!(p2 < p1);
        }

        #[test]
        fn trace_distance_symmetric_and_bounded(
            a in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
            b in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
        ) {
            let ra = bloch_state(a.0, a.1, a.2);
            let rb = bloch_state(b.0, b.1, b.2);
            let d_ab = trace_distance(&ra, &rb).unwrap();
            let d_ba = trace_distance(&rb, &ra).unwrap();
            prop_assert!((d_ab - d_ba).abs() < 1e-15);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&d_ab));
        }
    }

    #[test]
    fn sigma_z_expectation_of_thermal_qubit() {
        let rho = thermal_qubit(1.0, 1.0).unwrap();
        let z = rho.matrix().matmul(&pauli(Pauli::Z)).unwrap().trace().re;
        assert!((z - (rho.excited_population() - rho.ground_population())).abs() < 1e-15);
        assert_eq!(thermal_qubit(1.0, 0.0).unwrap(), DensityMatrix::ground());
    }
}
