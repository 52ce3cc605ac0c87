use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{classify, DecisionRule, Label};
use crate::error::{Error, Result};
use crate::lindblad::{SystemConfig, MAX_RATE_RATIO};

/// The plane random instances are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureSpace {
    /// Features `(Γ₁, Γ₂)` drawn from `rates`, bath temperatures fixed.
    Gamma { t1: f64, t2: f64, rates: (f64, f64) },
    /// Features `(T₁, T₂)` drawn from `temperatures`, both rates equal to `gamma`.
    Temperature { gamma: f64, temperatures: (f64, f64) },
}

impl FeatureSpace {
    fn validate(&self, omega_s: f64) -> Result<()> {
        let check_range = |name: &'static str, (lo, hi): (f64, f64)| {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return Err(Error::param(name, format!("need 0 < lo <= hi, got ({lo}, {hi})")));
            }
            Ok(())
        };
        match *self {
            FeatureSpace::Gamma { t1, t2, rates } => {
                check_range("rates", rates)?;
                if rates.1 / omega_s > MAX_RATE_RATIO {
                    return Err(Error::WeakCoupling(format!(
                        "rate range upper bound {} exceeds {MAX_RATE_RATIO}·omega_s",
                        rates.1
                    )));
                }
                SystemConfig::resonant(omega_s, &[(t1, rates.0), (t2, rates.0)]).map(drop)
            }
            FeatureSpace::Temperature { gamma, temperatures } => {
                check_range("temperatures", temperatures)?;
                SystemConfig::resonant(omega_s, &[(temperatures.0, gamma)]).map(drop)
            }
        }
    }

    fn config(&self, features: [f64; 2], omega_s: f64) -> Result<SystemConfig> {
        match *self {
            FeatureSpace::Gamma { t1, t2, .. } => {
                SystemConfig::resonant(omega_s, &[(t1, features[0]), (t2, features[1])])
            }
            FeatureSpace::Temperature { gamma, .. } => {
                SystemConfig::resonant(omega_s, &[(features[0], gamma), (features[1], gamma)])
            }
        }
    }

    fn range(&self) -> (f64, f64) {
        match *self {
            FeatureSpace::Gamma { rates, .. } => rates,
            FeatureSpace::Temperature { temperatures, .. } => temperatures,
        }
    }
}

/// A classified instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledPoint {
    /// `(Γ₁, Γ₂)` or `(T₁, T₂)` depending on the feature space.
    pub features: [f64; 2],
    pub steady_temperature: f64,
    pub label: Label,
}

/// Draws `n` uniform feature pairs under `seed` and labels them with `rule`.
///
/// Sampling is sequential so the point set depends only on the seed; the
/// steady-state evaluations run in parallel and keep input order.
pub fn generate_instances(
    space: FeatureSpace,
    n: usize,
    rule: DecisionRule,
    omega_s: f64,
    seed: u64,
) -> Result<Vec<LabeledPoint>> {
    if n == 0 {
        return Err(Error::param("n", "at least one instance is required"));
    }
    space.validate(omega_s)?;
    let (lo, hi) = space.range();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || if lo == hi { lo } else { rng.random_range(lo..hi) };
    let features: Vec<[f64; 2]> = (0..n).map(|_| [draw(), draw()]).collect();
    features
        .into_par_iter()
        .map(|f| {
            let result = classify(&space.config(f, omega_s)?, rule);
            Ok(LabeledPoint {
                features: f,
                steady_temperature: result.steady_temperature,
                label: result.label,
            })
        })
        .collect()
}
