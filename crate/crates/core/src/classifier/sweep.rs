use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lindblad::{evolve_with, steady_temperature, EvolveOptions, SystemConfig};
use crate::quantum::DensityMatrix;

/// Effective-temperature curves `T_S(t)` sharing one time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalizationCurves {
    pub times: Vec<f64>,
    /// One curve per input config, in input order.
    pub temperatures: Vec<Vec<f64>>,
}

/// Integrates every config from the ground state over `[0, t_end]`.
pub fn thermalization_curves(
    configs: &[SystemConfig],
    t_end: f64,
    dt: f64,
    record_every: f64,
) -> Result<ThermalizationCurves> {
    if configs.is_empty() {
        return Err(Error::param("configs", "at least one config is required"));
    }
    let opts = EvolveOptions::new(t_end, dt).record_every(record_every).full_horizon();
    let trajectories = configs
        .par_iter()
        .map(|c| evolve_with(c, &DensityMatrix::ground(), &opts))
        .collect::<Result<Vec<_>>>()?;
    let times = trajectories[0].times.clone();
    Ok(ThermalizationCurves {
        times,
        temperatures: trajectories.into_iter().map(|t| t.temperatures).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSweepPoint {
    pub delta_gamma: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub steady_temperature: f64,
}

/// Steady temperature with rates `Γ₁ = Γ/2 + ΔΓ`, `Γ₂ = Γ/2 − ΔΓ` for `ΔΓ`
/// evenly spaced over `[−Γ/2, Γ/2]`. The endpoints are evaluated as the
/// single-bath limits, where the vanishing rate drops out.
pub fn gamma_sweep(
    t1: f64,
    t2: f64,
    gamma_total: f64,
    n_points: usize,
    omega_s: f64,
) -> Result<Vec<GammaSweepPoint>> {
    if n_points < 3 {
        return Err(Error::param("n_points", format!("must be >= 3, got {n_points}")));
    }
    if !(gamma_total > 0.0 && gamma_total.is_finite()) {
        return Err(Error::param("gamma_total", format!("must be finite and > 0, got {gamma_total}")));
    }
    // validates temperatures, omega_s and the weak-coupling guard up front
    SystemConfig::resonant(omega_s, &[(t1, gamma_total), (t2, gamma_total)])?;
    let half = 0.5 * gamma_total;
    (0..n_points)
        .into_par_iter()
        .map(|k| {
            let (delta, gamma1, gamma2) = if k == 0 {
                (-half, 0.0, gamma_total)
            } else if k == n_points - 1 {
                (half, gamma_total, 0.0)
            } else {
                let delta = -half + gamma_total * k as f64 / (n_points - 1) as f64;
                (delta, half + delta, half - delta)
            };
            let baths: Vec<(f64, f64)> = [(t1, gamma1), (t2, gamma2)]
                .into_iter()
                .filter(|&(_, g)| g > 0.0)
                .collect();
            let config = SystemConfig::resonant(omega_s, &baths)?;
            Ok(GammaSweepPoint {
                delta_gamma: delta,
                gamma1,
                gamma2,
                steady_temperature: steady_temperature(&config),
            })
        })
        .collect()
}
