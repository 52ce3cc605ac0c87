//! Repeated-interaction (collision) model of the same thermal dynamics.
//!
//! A stream of fresh thermal ancilla qubits collides with the system qubit.
//! Each collision applies `U = exp(−i H τ)` with the resonant flip-flop
//! Hamiltonian to `ρ_S ⊗ ρ_R` and traces the ancilla out. Ancillas are never
//! reused.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lindblad::{population_temperature, ThermalBath};
use crate::quantum::{
    matrix_exponential_unitary, partial_trace_matrix, pauli, thermal_qubit, trace_distance, ComplexMatrix,
    DensityMatrix, Pauli, Subsystem,
};

/// Largest admitted `J/h`.
pub const MAX_COUPLING_RATIO: f64 = 0.1;

const PROBABILITY_SUM_TOL: f64 = 1e-12;

/// How reservoirs are interleaved over a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Every step applies the convex combination `Σ_i p_i Λ_i`.
    #[default]
    Mixture,
    /// Every step draws one reservoir with probability `p_i`.
    Sampled { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reservoir {
    pub temperature: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionConfig {
    h: f64,
    j: f64,
    tau: f64,
    reservoirs: Vec<Reservoir>,
    schedule: Schedule,
    record_every: usize,
}

impl CollisionConfig {
    /// `reservoirs` holds `(temperature, probability)` pairs.
    pub fn new(h: f64, j: f64, tau: f64, reservoirs: &[(f64, f64)], schedule: Schedule) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::param("h", format!("must be finite and > 0, got {h}")));
        }
        if !(j > 0.0 && j.is_finite()) {
            return Err(Error::param("j", format!("must be finite and > 0, got {j}")));
        }
        if j / h > MAX_COUPLING_RATIO {
            return Err(Error::WeakCoupling(format!(
                "J/h = {:.4} exceeds {MAX_COUPLING_RATIO}",
                j / h
            )));
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::param("tau", format!("must be finite and >= 0, got {tau}")));
        }
        if reservoirs.is_empty() {
            return Err(Error::param("reservoirs", "at least one reservoir is required"));
        }
        for &(t, p) in reservoirs {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::param("reservoirs", format!("temperature must be >= 0, got {t}")));
            }
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::param("reservoirs", format!("probability must be in (0, 1], got {p}")));
            }
        }
        let total: f64 = reservoirs.iter().map(|r| r.1).sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::param("reservoirs", format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self {
            h,
            j,
            tau,
            reservoirs: reservoirs
                .iter()
                .map(|&(temperature, probability)| Reservoir {
                    temperature,
                    probability,
                })
                .collect(),
            schedule,
            record_every: 1,
        })
    }

    /// Record every `k`-th collision (the initial and final states are always kept).
    pub fn with_record_every(mut self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("record_every", "must be >= 1"));
        }
        self.record_every = k;
        Ok(self)
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn reservoirs(&self) -> &[Reservoir] {
        &self.reservoirs
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }

    pub fn record_every(&self) -> usize {
        self.record_every
    }
}

/// Resonant flip-flop Hamiltonian on system ⊗ ancilla:
/// `(h/2)(σ_z^R + σ_z^S) + J(σ⁺_R σ⁻_S + σ⁻_R σ⁺_S)`.
pub fn flip_flop_hamiltonian(h: f64, j: f64) -> Result<ComplexMatrix> {
    if !(h.is_finite() && j.is_finite()) {
        return Err(Error::param("h/j", "must be finite"));
    }
    let id = ComplexMatrix::identity(2)?;
    let z = pauli(Pauli::Z);
    let plus = pauli(Pauli::Plus);
    let minus = pauli(Pauli::Minus);
    let free = (id.kron(&z)? + z.kron(&id)?).scale_real(0.5 * h);
    let exchange = minus.kron(&plus)? + plus.kron(&minus)?;
    Ok(free + exchange.scale_real(j))
}

/// The single-reservoir collision map `Λ[ρ] = Tr_R[U (ρ ⊗ ρ_R) U†]`.
#[derive(Debug, Clone, Copy)]
pub struct CollisionChannel {
    unitary: ComplexMatrix,
    unitary_dag: ComplexMatrix,
    ancilla: DensityMatrix,
}

impl CollisionChannel {
    pub fn new(h: f64, j: f64, tau: f64, temperature: f64) -> Result<Self> {
        let unitary = matrix_exponential_unitary(&flip_flop_hamiltonian(h, j)?, tau)?;
        Ok(Self {
            unitary,
            unitary_dag: unitary.adjoint(),
            ancilla: thermal_qubit(h, temperature)?,
        })
    }

    pub fn apply(&self, rho_s: &ComplexMatrix) -> ComplexMatrix {
        let joint = rho_s.kron(self.ancilla.matrix()).expect("2x2 factors");
        let evolved = self.unitary * joint * self.unitary_dag;
        partial_trace_matrix(&evolved, Subsystem::System).expect("4x4 joint state")
    }
}

/// One collision of `rho_s` with a fresh ancilla at temperature `t`.
pub fn single_collision(rho_s: &DensityMatrix, t: f64, config: &CollisionConfig) -> Result<DensityMatrix> {
    if rho_s.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: rho_s.dim(),
        });
    }
    let channel = CollisionChannel::new(config.h, config.j, config.tau, t)?;
    DensityMatrix::from_numerical(channel.apply(rho_s.matrix()))
}

/// Recorded states of a collision run; index 0 is the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionTrajectory {
    pub indices: Vec<usize>,
    pub states: Vec<DensityMatrix>,
    pub temperatures: Vec<f64>,
}

impl CollisionTrajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory has at least the initial state")
    }

    pub fn final_temperature(&self) -> f64 {
        *self.temperatures.last().expect("trajectory has at least the initial state")
    }
}

/// Applies `n` collisions under the configured schedule.
pub fn run_collisions(rho0: &DensityMatrix, config: &CollisionConfig, n: usize) -> Result<CollisionTrajectory> {
    if n == 0 {
        return Err(Error::param("n", "at least one collision is required"));
    }
    if rho0.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: rho0.dim(),
        });
    }
    let mut stepper = Stepper::new(config)?;
    let mut traj = CollisionTrajectory {
        indices: vec![0],
        states: vec![*rho0],
        temperatures: vec![population_temperature(rho0, config.h)],
    };
    let mut rho = *rho0.matrix();
    for k in 1..=n {
        rho = stepper.advance(&rho);
        if k % config.record_every == 0 || k == n {
            let state = DensityMatrix::from_numerical(rho)?;
            traj.indices.push(k);
            traj.temperatures.push(population_temperature(&state, config.h));
            traj.states.push(state);
        }
    }
    Ok(traj)
}

/// Applies one schedule step at a time.
struct Stepper<'a> {
    config: &'a CollisionConfig,
    channels: Vec<CollisionChannel>,
    rng: Option<ChaCha8Rng>,
}

impl<'a> Stepper<'a> {
    fn new(config: &'a CollisionConfig) -> Result<Self> {
        let channels = config
            .reservoirs
            .iter()
            .map(|r| CollisionChannel::new(config.h, config.j, config.tau, r.temperature))
            .collect::<Result<Vec<_>>>()?;
        let rng = match config.schedule {
            Schedule::Sampled { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
            Schedule::Mixture => None,
        };
        Ok(Self { config, channels, rng })
    }

    fn advance(&mut self, rho: &ComplexMatrix) -> ComplexMatrix {
        match self.rng.as_mut() {
            None => self
                .config
                .reservoirs
                .iter()
                .zip(&self.channels)
                .fold(ComplexMatrix::zeros_unchecked(2), |acc, (r, ch)| {
                    acc + ch.apply(rho).scale(Complex64::new(r.probability, 0.0))
                }),
            Some(rng) => {
                let pick = sample_index(&self.config.reservoirs, rng.random::<f64>());
                self.channels[pick].apply(rho)
            }
        }
    }
}

fn sample_index(reservoirs: &[Reservoir], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, r) in reservoirs.iter().enumerate() {
        acc += r.probability;
        if u < acc {
            return i;
        }
    }
    reservoirs.len() - 1
}

/// True iff the last two recorded states are closer than `tol` in trace distance.
pub fn converged(traj: &CollisionTrajectory, tol: f64) -> Result<bool> {
    let n = traj.states.len();
    if n < 2 {
        return Err(Error::param("traj", "need at least two recorded states"));
    }
    Ok(trace_distance(&traj.states[n - 1], &traj.states[n - 2])? < tol)
}

/// Number of collisions after which the state is within `tol` of `target`,
/// or `None` if that does not happen within `max_collisions`.
pub fn collisions_to_reach(
    rho0: &DensityMatrix,
    config: &CollisionConfig,
    target: &DensityMatrix,
    tol: f64,
    max_collisions: usize,
) -> Result<Option<usize>> {
    if rho0.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: rho0.dim(),
        });
    }
    if trace_distance(rho0, target)? < tol {
        return Ok(Some(0));
    }
    let mut stepper = Stepper::new(config)?;
    let mut rho = *rho0.matrix();
    for k in 1..=max_collisions {
        rho = stepper.advance(&rho);
        if trace_distance(&DensityMatrix::from_numerical(rho)?, target)? < tol {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Reservoir probabilities `p_i = Γ_i / Σ_j Γ_j`.
pub fn probabilities_from_rates(rates: &[f64]) -> Vec<f64> {
    let total: f64 = rates.iter().sum();
    rates.iter().map(|g| g / total).collect()
}

/// Reservoir probabilities `p_i ∝ Γ_i (2n̄_i + 1)` whose mixture-schedule fixed
/// point coincides with the steady state of the N-bath master equation.
///
/// A thermal qubit ancilla exchanges excitations at a rate independent of its
/// temperature, while a bosonic bath's total exchange rate `Γ(2n̄ + 1)` grows
/// with temperature; weighting by that total rate reconciles the two.
pub fn rate_matched_probabilities(baths: &[ThermalBath]) -> Vec<f64> {
    let weights: Vec<f64> = baths
        .iter()
        .map(|b| b.rate() * (2.0 * b.occupation() + 1.0))
        .collect();
    probabilities_from_rates(&weights)
}
