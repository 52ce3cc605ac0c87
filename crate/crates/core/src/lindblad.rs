//! Thermal Lindblad dynamics of a qubit coupled to N bosonic reservoirs.
//!
//! Units: ħ = k_B = 1, temperatures in units of ħω/k_B and times scaled by ω.
//! The generator is
//!
//! ```text
//! dρ/dt = −i[ω_S σ_z/2, ρ] + Σ_i Γ_i [(n̄_i + 1) D[σ⁻]ρ + n̄_i D[σ⁺]ρ]
//! D[L]ρ = L ρ L† − ½{L†L, ρ}
//! ```

use crate::error::{Error, Result};
use crate::quantum::{pauli, thermal_qubit, trace_distance, ComplexMatrix, DensityMatrix, Pauli};
use num_complex::Complex64;

/// Largest admitted `Γ/ω_S` for any bath (weak-coupling regime).
pub const MAX_RATE_RATIO: f64 = 0.2;

/// Largest admitted `dt · Σ_i Γ_i (n̄_i + 1)` for the RK4 integrator.
pub const MAX_STABILITY_PRODUCT: f64 = 0.1;

/// Trace-distance threshold between states one time unit apart at which
/// [`evolve`] declares the steady state reached.
pub const STEADY_TOL: f64 = 1e-9;

const FREQUENCY_MATCH_TOL: f64 = 1e-12;

/// One thermal reservoir: temperature `T`, relaxation rate `Γ`, mode frequency `ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalBath {
    temperature: f64,
    rate: f64,
    frequency: f64,
}

impl ThermalBath {
    /// `T = 0` is admitted as the explicit zero-temperature limit (n̄ = 0).
    pub fn new(temperature: f64, rate: f64, frequency: f64) -> Result<Self> {
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::param("temperature", format!("must be finite and >= 0, got {temperature}")));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::param("rate", format!("must be finite and > 0, got {rate}")));
        }
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::param("frequency", format!("must be finite and > 0, got {frequency}")));
        }
        Ok(Self {
            temperature,
            rate,
            frequency,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    /// Mean thermal excitation number `n̄` of this bath.
    pub fn occupation(&self) -> f64 {
        occupation(self.frequency, self.temperature)
    }
}

/// A qubit of frequency `ω_S` coupled to a nonempty list of resonant baths.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    omega_s: f64,
    baths: Vec<ThermalBath>,
}

impl SystemConfig {
    pub fn new(omega_s: f64, baths: Vec<ThermalBath>) -> Result<Self> {
        if !(omega_s > 0.0 && omega_s.is_finite()) {
            return Err(Error::param("omega_s", format!("must be finite and > 0, got {omega_s}")));
        }
        if baths.is_empty() {
            return Err(Error::param("baths", "at least one bath is required"));
        }
        for (i, bath) in baths.iter().enumerate() {
            if (bath.frequency - omega_s).abs() > FREQUENCY_MATCH_TOL * omega_s {
                return Err(Error::param(
                    "baths",
                    format!("bath {i} frequency {} differs from omega_s {omega_s}", bath.frequency),
                ));
            }
            if bath.rate / omega_s > MAX_RATE_RATIO {
                return Err(Error::WeakCoupling(format!(
                    "bath {i}: rate/omega_s = {:.4} exceeds {MAX_RATE_RATIO}",
                    bath.rate / omega_s
                )));
            }
        }
        Ok(Self { omega_s, baths })
    }

    /// Baths resonant with the qubit, given as `(temperature, rate)` pairs.
    pub fn resonant(omega_s: f64, baths: &[(f64, f64)]) -> Result<Self> {
        let baths = baths
            .iter()
            .map(|&(t, rate)| ThermalBath::new(t, rate, omega_s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(omega_s, baths)
    }

    pub fn omega_s(&self) -> f64 {
        self.omega_s
    }

    pub fn baths(&self) -> &[ThermalBath] {
        &self.baths
    }

    /// Same configuration with every rate multiplied by `factor`.
    pub fn with_scaled_rates(&self, factor: f64) -> Result<Self> {
        let baths = self
            .baths
            .iter()
            .map(|b| ThermalBath::new(b.temperature, b.rate * factor, b.frequency))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.omega_s, baths)
    }

    /// Total downward (emission) rate `Σ_i Γ_i (n̄_i + 1)`.
    pub fn emission_rate(&self) -> f64 {
        self.baths.iter().map(|b| b.rate * (b.occupation() + 1.0)).sum()
    }

    /// Total upward (absorption) rate `Σ_i Γ_i n̄_i`.
    pub fn absorption_rate(&self) -> f64 {
        self.baths.iter().map(|b| b.rate * b.occupation()).sum()
    }
}

fn occupation(omega: f64, t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        1.0 / (omega / t).exp_m1()
    }
}

/// Bose-Einstein occupation `n̄ = 1/(exp(ω/T) − 1)`, zero at `T = 0`.
pub fn thermal_occupation(omega: f64, t: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::param("omega", format!("must be finite and > 0, got {omega}")));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::param("temperature", format!("must be >= 0, got {t}")));
    }
    Ok(occupation(omega, t))
}

/// The Lindblad generator with the bath sum folded into one emission and one
/// absorption channel (the dissipator is linear in its rate).
#[derive(Debug, Clone, Copy)]
pub struct LindbladGenerator {
    hamiltonian: ComplexMatrix,
    lowering: ComplexMatrix,
    raising: ComplexMatrix,
    emission: f64,
    absorption: f64,
}

impl LindbladGenerator {
    pub fn new(config: &SystemConfig) -> Self {
        Self {
            hamiltonian: pauli(Pauli::Z).scale_real(0.5 * config.omega_s),
            lowering: pauli(Pauli::Minus),
            raising: pauli(Pauli::Plus),
            emission: config.emission_rate(),
            absorption: config.absorption_rate(),
        }
    }

    pub fn emission_rate(&self) -> f64 {
        self.emission
    }

    pub fn absorption_rate(&self) -> f64 {
        self.absorption
    }

    /// `dρ/dt` for an arbitrary 2×2 operator `rho`.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let minus_i = Complex64::new(0.0, -1.0);
        let unitary = (self.hamiltonian * *rho - *rho * self.hamiltonian).scale(minus_i);
        unitary
            + dissipator(&self.lowering, rho).scale_real(self.emission)
            + dissipator(&self.raising, rho).scale_real(self.absorption)
    }
}

fn dissipator(l: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let l_dag = l.adjoint();
    let l_dag_l = l_dag * *l;
    *l * *rho * l_dag - (l_dag_l * *rho + *rho * l_dag_l).scale_real(0.5)
}

/// Right-hand side of the N-bath master equation at state `rho`.
pub fn master_rhs(config: &SystemConfig, rho: &DensityMatrix) -> ComplexMatrix {
    LindbladGenerator::new(config).apply(rho.matrix())
}

/// Integration settings for [`evolve_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub dt: f64,
    pub t_end: f64,
    /// Spacing of recorded states; the initial and final states are always kept.
    pub record_every: f64,
    /// Stop once consecutive states one time unit apart are closer than this.
    pub steady_tol: Option<f64>,
}

impl EvolveOptions {
    pub fn new(t_end: f64, dt: f64) -> Self {
        Self {
            dt,
            t_end,
            record_every: 1.0,
            steady_tol: Some(STEADY_TOL),
        }
    }

    pub fn record_every(mut self, interval: f64) -> Self {
        self.record_every = interval;
        self
    }

    /// Integrate all the way to `t_end` regardless of convergence.
    pub fn full_horizon(mut self) -> Self {
        self.steady_tol = None;
        self
    }
}

/// Recorded states of an integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// Effective temperatures from the populations; negative for inverted states.
    pub temperatures: Vec<f64>,
    /// Time at which steady-state detection fired, if it did.
    pub steady_at: Option<f64>,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory has at least the initial state")
    }

    pub fn final_temperature(&self) -> f64 {
        *self.temperatures.last().expect("trajectory has at least the initial state")
    }

    fn push(&mut self, t: f64, state: DensityMatrix, omega_s: f64) {
        self.times.push(t);
        self.temperatures.push(population_temperature(&state, omega_s));
        self.states.push(state);
    }
}

/// Largest step accepted by the stability guard for `config`.
pub fn max_stable_dt(config: &SystemConfig) -> f64 {
    MAX_STABILITY_PRODUCT / config.emission_rate()
}

/// Fixed-step RK4 integration recording once per time unit, stopping early at
/// the steady state.
pub fn evolve(config: &SystemConfig, rho0: &DensityMatrix, t_end: f64, dt: f64) -> Result<Trajectory> {
    evolve_with(config, rho0, &EvolveOptions::new(t_end, dt))
}

pub fn evolve_with(config: &SystemConfig, rho0: &DensityMatrix, opts: &EvolveOptions) -> Result<Trajectory> {
    if rho0.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: rho0.dim(),
        });
    }
    let EvolveOptions {
        dt,
        t_end,
        record_every,
        steady_tol,
    } = *opts;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", format!("must be finite and > 0, got {dt}")));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::param("t_end", format!("must be finite and > 0, got {t_end}")));
    }
    if record_every.is_nan() || record_every <= 0.0 {
        return Err(Error::param("record_every", format!("must be > 0, got {record_every}")));
    }
    let max_dt = max_stable_dt(config);
    if dt > max_dt {
        return Err(Error::Stability { dt, max_dt });
    }

    let generator = LindbladGenerator::new(config);
    let omega_s = config.omega_s;
    let n_steps = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
    let record_stride = ((record_every / dt).round() as usize).max(1);
    let check_stride = ((1.0 / dt).round() as usize).max(1);

    let mut traj = Trajectory {
        times: Vec::with_capacity(n_steps / record_stride + 2),
        states: Vec::with_capacity(n_steps / record_stride + 2),
        temperatures: Vec::with_capacity(n_steps / record_stride + 2),
        steady_at: None,
    };
    traj.push(0.0, *rho0, omega_s);

    let mut rho = *rho0.matrix();
    let mut checkpoint = *rho0;
    for step in 1..=n_steps {
        let t = if step == n_steps { t_end } else { step as f64 * dt };
        let h = t - (step - 1) as f64 * dt;
        rho = rk4_step(&generator, &rho, h);
        // trace and hermiticity are conserved by the generator; remove roundoff
        let tr = rho.trace().re;
        rho = rho.hermitian_part().scale_real(1.0 / tr);

        let last = step == n_steps;
        let check = steady_tol.is_some() && step % check_stride == 0;
        if step % record_stride == 0 || last || check {
            let state = DensityMatrix::from_numerical(rho)?;
            let mut done = last;
            if let (true, Some(tol)) = (check, steady_tol) {
                if trace_distance(&state, &checkpoint)? < tol {
                    traj.steady_at = Some(t);
                    done = true;
                }
                checkpoint = state;
            }
            if step % record_stride == 0 || done {
                traj.push(t, state, omega_s);
            }
            if done {
                break;
            }
        }
    }
    Ok(traj)
}

fn rk4_step(generator: &LindbladGenerator, rho: &ComplexMatrix, h: f64) -> ComplexMatrix {
    let k1 = generator.apply(rho);
    let k2 = generator.apply(&(*rho + k1.scale_real(0.5 * h)));
    let k3 = generator.apply(&(*rho + k2.scale_real(0.5 * h)));
    let k4 = generator.apply(&(*rho + k3.scale_real(h)));
    *rho + (k1 + k2.scale_real(2.0) + k3.scale_real(2.0) + k4).scale_real(h / 6.0)
}

/// Steady-state population ratio `p_g/p_e = Σ(n̄_i+1)Γ_i / Σ n̄_iΓ_i`.
///
/// Returns `+∞` when every bath is at zero temperature.
pub fn steady_population_ratio(config: &SystemConfig) -> f64 {
    let absorption = config.absorption_rate();
    if absorption == 0.0 {
        f64::INFINITY
    } else {
        config.emission_rate() / absorption
    }
}

/// Effective temperature `T_S = ω_S / ln(p_g/p_e)` of a qubit's populations.
///
/// Zero for `p_e = 0`, `+∞` for `p_g = p_e`; inverted populations are rejected.
pub fn effective_temperature(p_g: f64, p_e: f64, omega_s: f64) -> Result<f64> {
    if omega_s.is_nan() || omega_s <= 0.0 {
        return Err(Error::param("omega_s", format!("must be > 0, got {omega_s}")));
    }
    if !(p_g >= 0.0 && p_e >= 0.0) || (p_g + p_e - 1.0).abs() > 1e-9 {
        return Err(Error::param(
            "populations",
            format!("need p_g, p_e >= 0 summing to 1, got p_g={p_g}, p_e={p_e}"),
        ));
    }
    if p_e > p_g {
        return Err(Error::PopulationInversion { p_g, p_e });
    }
    Ok(temperature_from_ratio(p_g, p_e, omega_s))
}

fn temperature_from_ratio(p_g: f64, p_e: f64, omega_s: f64) -> f64 {
    if p_e <= 0.0 {
        0.0
    } else if p_g == p_e {
        f64::INFINITY
    } else {
        omega_s / (p_g / p_e).ln()
    }
}

/// Effective temperature of a qubit state, signed: inverted populations give a
/// negative temperature instead of an error.
pub fn population_temperature(rho: &DensityMatrix, omega_s: f64) -> f64 {
    let p_e = rho.excited_population().max(0.0);
    let p_g = rho.ground_population().max(0.0);
    if p_g <= 0.0 {
        return -0.0;
    }
    temperature_from_ratio(p_g, p_e, omega_s)
}

/// Diagonal steady state with populations fixed by [`steady_population_ratio`].
pub fn steady_state(config: &SystemConfig) -> DensityMatrix {
    let emission = config.emission_rate();
    let absorption = config.absorption_rate();
    // p_e = γ↑/(γ↑ + γ↓); exact for the T = 0 limit too
    let p_e = absorption / (absorption + emission);
    DensityMatrix::diagonal(&[p_e, 1.0 - p_e]).expect("populations in [0, 1/2]")
}

/// Steady-state effective temperature `T_S^ss` from the exact population ratio.
pub fn steady_temperature(config: &SystemConfig) -> f64 {
    let ratio = steady_population_ratio(config);
    if ratio.is_infinite() {
        0.0
    } else {
        config.omega_s / ratio.ln()
    }
}

/// Arithmetic mean of the bath temperatures.
pub fn mean_bath_temperature(config: &SystemConfig) -> f64 {
    config.baths.iter().map(|b| b.temperature).sum::<f64>() / config.baths.len() as f64
}

/// Gibbs state of a single bath, the fixed point of its dissipator.
pub fn bath_gibbs_state(bath: &ThermalBath) -> DensityMatrix {
    thermal_qubit(bath.frequency, bath.temperature).expect("validated bath")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::bloch_state;
    use proptest::prelude::*;

    fn two_baths(g1: f64, g2: f64) -> SystemConfig {
        SystemConfig::resonant(1.0, &[(3.0, g1), (1.0, g2)]).unwrap()
    }

    /// Closed-form generator for a resonant qubit, written out entrywise:
    /// dp_e/dt = −γ↓ p_e + γ↑ p_g, dρ_eg/dt = (−iω − (γ↓+γ↑)/2) ρ_eg.
    fn rhs_by_hand(config: &SystemConfig, rho: &DensityMatrix) -> [Complex64; 4] {
        let mut down = 0.0;
        let mut up = 0.0;
        for b in config.baths() {
            let n = 1.0 / ((b.frequency() / b.temperature()).exp() - 1.0);
            down += b.rate() * (n + 1.0);
            up += b.rate() * n;
        }
        let pe = rho.excited_population();
        let pg = rho.ground_population();
        let coh = rho.coherence();
        let dpe = -down * pe + up * pg;
        let dcoh = coh * Complex64::new(-0.5 * (down + up), -config.omega_s());
        [Complex64::new(dpe, 0.0), dcoh, dcoh.conj(), Complex64::new(-dpe, 0.0)]
    }

    #[test]
    fn occupation_examples() {
        assert_eq!(thermal_occupation(1.0, 0.0).unwrap(), 0.0);
        assert!((thermal_occupation(1.0, 1.0).unwrap() - 0.581977).abs() < 1e-6);
        assert!((thermal_occupation(1.0, 3.0).unwrap() - 2.527726).abs() < 1e-6);
        assert!(thermal_occupation(0.0, 1.0).is_err());
        assert!(thermal_occupation(-1.0, 1.0).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SystemConfig::resonant(1.0, &[]).is_err());
        assert!(matches!(
            SystemConfig::resonant(1.0, &[(1.0, 0.3)]),
            Err(Error::WeakCoupling(_))
        ));
        let off_resonant = ThermalBath::new(1.0, 0.1, 2.0).unwrap();
        assert!(SystemConfig::new(1.0, vec![off_resonant]).is_err());
        assert!(ThermalBath::new(-1.0, 0.1, 1.0).is_err());
        assert!(ThermalBath::new(1.0, 0.0, 1.0).is_err());
        assert!(ThermalBath::new(0.0, 0.1, 1.0).is_ok());
    }

    #[test]
    fn gibbs_state_is_fixed_point_of_single_bath() {
        let config = SystemConfig::resonant(1.0, &[(2.0, 0.1)]).unwrap();
        let rho = bath_gibbs_state(&config.baths()[0]);
        assert!(master_rhs(&config, &rho).max_abs() < 1e-16);
        let twin = SystemConfig::resonant(1.0, &[(2.0, 0.1), (2.0, 0.03)]).unwrap();
        assert!(master_rhs(&twin, &rho).max_abs() < 1e-16);
    }

    #[test]
    fn ground_state_is_pumped_at_rate_gamma_nbar() {
        let config = SystemConfig::resonant(1.0, &[(1.0, 0.1)]).unwrap();
        let d = master_rhs(&config, &DensityMatrix::ground());
        let expected = 0.1 * 0.5819767068693265;
        assert!((d[(0, 0)].re - expected).abs() < 1e-15);
        assert!((d[(1, 1)].re + expected).abs() < 1e-15);
    }

    #[test]
    fn steady_ratio_examples() {
        let equal = steady_population_ratio(&two_baths(0.1, 0.1));
        assert!((equal - 1.643148199).abs() < 1e-9, "{equal}");
        let unequal = steady_population_ratio(&two_baths(0.1, 0.05));
        assert!((unequal - 1.532157417).abs() < 1e-9, "{unequal}");
        let single = SystemConfig::resonant(1.0, &[(2.0, 0.05)]).unwrap();
        assert!((steady_population_ratio(&single) - 0.5f64.exp()).abs() < 1e-14);
        let frozen = SystemConfig::resonant(1.0, &[(0.0, 0.05), (0.0, 0.1)]).unwrap();
        assert_eq!(steady_population_ratio(&frozen), f64::INFINITY);
        assert_eq!(steady_state(&frozen), DensityMatrix::ground());
        assert_eq!(steady_temperature(&frozen), 0.0);
    }

    #[test]
    fn effective_temperature_examples() {
        assert_eq!(effective_temperature(1.0, 0.0, 1.0).unwrap(), 0.0);
        let p_e = 1.0 / (1.0 + 1.643148199);
        let t = effective_temperature(1.0 - p_e, p_e, 1.0).unwrap();
        assert!((t - 2.01363).abs() < 1e-5, "{t}");
        assert_eq!(effective_temperature(0.5, 0.5, 1.0).unwrap(), f64::INFINITY);
        assert!(matches!(
            effective_temperature(0.3, 0.7, 1.0),
            Err(Error::PopulationInversion { .. })
        ));
        assert!(effective_temperature(0.3, 0.3, 1.0).is_err());
    }

    #[test]
    fn steady_state_examples() {
        let single = SystemConfig::resonant(1.0, &[(2.0, 0.05)]).unwrap();
        let gibbs = thermal_qubit(1.0, 2.0).unwrap();
        assert!(trace_distance(&steady_state(&single), &gibbs).unwrap() < 1e-15);
        let rho = steady_state(&two_baths(0.1, 0.1));
        let ratio = rho.ground_population() / rho.excited_population();
        assert!((ratio - 1.643148199).abs() < 1e-9);
        assert_eq!(rho.coherence(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn mean_temperature_examples() {
        assert_eq!(mean_bath_temperature(&two_baths(0.1, 0.1)), 2.0);
        let same = SystemConfig::resonant(1.0, &[(1.7, 0.1), (1.7, 0.02), (1.7, 0.05)]).unwrap();
        assert!((mean_bath_temperature(&same) - 1.7).abs() < 1e-15);
        let three = SystemConfig::resonant(1.0, &[(5.0, 0.1), (1.0, 0.1), (3.0, 0.1)]).unwrap();
        assert_eq!(mean_bath_temperature(&three), 3.0);
    }

    #[test]
    fn evolve_reaches_two_bath_asymptotes() {
        let traj = evolve(&two_baths(0.1, 0.1), &DensityMatrix::ground(), 2000.0, 0.01).unwrap();
        assert!((traj.final_temperature() - 2.0136).abs() < 1e-3);
        assert_eq!(traj.temperatures[0], 0.0);
        let traj = evolve(&two_baths(0.1, 0.05), &DensityMatrix::ground(), 2000.0, 0.01).unwrap();
        assert!((traj.final_temperature() - 2.3437).abs() < 1e-3);
    }

    #[test]
    fn evolve_preserves_fixed_point() {
        let config = SystemConfig::resonant(1.0, &[(1.5, 0.08)]).unwrap();
        let gibbs = bath_gibbs_state(&config.baths()[0]);
        let opts = EvolveOptions::new(200.0, 0.05).full_horizon();
        let traj = evolve_with(&config, &gibbs, &opts).unwrap();
        for s in &traj.states {
            assert!((*s.matrix() - *gibbs.matrix()).max_abs() < 1e-9);
        }
    }

    #[test]
    fn evolve_rejects_unstable_step() {
        let config = two_baths(0.1, 0.1);
        let err = evolve(&config, &DensityMatrix::ground(), 10.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::Stability { .. }));
        assert!(err.is_numerical_guard());
    }

    #[test]
    fn trajectory_times_strictly_increase() {
        let opts = EvolveOptions::new(10.3, 0.1).record_every(0.7).full_horizon();
        let traj = evolve_with(&two_baths(0.1, 0.05), &DensityMatrix::ground(), &opts).unwrap();
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(traj.times.len(), traj.states.len());
        assert_eq!(traj.times.len(), traj.temperatures.len());
        assert!((traj.times.last().unwrap() - 10.3).abs() < 1e-12);
    }

    #[test]
    fn trace_and_hermiticity_hold_over_long_run() {
        let rho0 = bloch_state(0.6, -0.3, 0.5);
        let opts = EvolveOptions::new(2000.0, 0.01).record_every(10.0).full_horizon();
        let traj = evolve_with(&two_baths(0.1, 0.05), &rho0, &opts).unwrap();
        for s in &traj.states {
            assert!((s.matrix().trace().re - 1.0).abs() < 1e-8);
            assert!(s.matrix().hermiticity_defect() < 1e-8);
        }
    }

    #[test]
    fn high_temperature_mean_within_two_percent() {
        for temps in [[3.0, 3.0], [3.0, 10.0], [4.0, 7.5], [3.0, 25.0]] {
            let config = SystemConfig::resonant(1.0, &[(temps[0], 0.05), (temps[1], 0.05)]).unwrap();
            let ts = steady_temperature(&config);
            let mean = mean_bath_temperature(&config);
            assert!(((ts - mean) / mean).abs() <= 0.02, "{temps:?}: {ts} vs {mean}");
        }
    }

    fn arb_config() -> impl Strategy<Value = SystemConfig> {
        prop::collection::vec((0.05f64..8.0, 0.005f64..0.2), 1..=4)
            .prop_map(|baths| SystemConfig::resonant(1.0, &baths).unwrap())
    }

    proptest! {
        #[test]
        fn rhs_matches_closed_form(
            config in arb_config(),
            bloch in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
        ) {
            let rho = bloch_state(bloch.0, bloch.1, bloch.2);
            let d = master_rhs(&config, &rho);
            let expected = rhs_by_hand(&config, &rho);
            for (got, want) in d.entries().iter().zip(expected) {
                prop_assert!((got - want).norm() < 1e-14);
            }
            prop_assert!(d.hermiticity_defect() < 1e-12);
            prop_assert!(d.trace().norm() < 1e-12);
        }

        #[test]
        fn steady_state_is_fixed_point_and_bracketed(config in arb_config()) {
            let rho = steady_state(&config);
            prop_assert!(master_rhs(&config, &rho).max_abs() < 1e-10);
            let ts = steady_temperature(&config);
            let lo = config.baths().iter().map(|b| b.temperature()).fold(f64::INFINITY, f64::min);
            let hi = config.baths().iter().map(|b| b.temperature()).fold(0.0, f64::max);
            prop_assert!(lo * (1.0 - 1e-12) <= ts && ts <= hi * (1.0 + 1e-12), "{lo} {ts} {hi}");
        }

        #[test]
        fn effective_temperature_inverts_gibbs(t in 0.01f64..50.0, omega in 0.1f64..5.0) {
            let rho = thermal_qubit(omega, t).unwrap();
            let back = effective_temperature(rho.ground_population(), rho.excited_population(), omega).unwrap();
            prop_assert!((back - t).abs() <= 1e-9 * t.max(1.0));
        }
    }
}
