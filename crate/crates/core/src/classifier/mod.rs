//! Binary classification on the steady-state effective temperature.

mod instances;
mod perceptron;
mod sweep;

pub use instances::{generate_instances, FeatureSpace, LabeledPoint};
pub use perceptron::{activation, perceptron_fit, Activation, NotSeparable, Perceptron};
pub use sweep::{gamma_sweep, thermalization_curves, GammaSweepPoint, ThermalizationCurves};

use crate::error::{Error, Result};
use crate::lindblad::{mean_bath_temperature, steady_temperature, SystemConfig};

/// Threshold the steady temperature is compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecisionRule {
    /// The arithmetic mean of the instance's own bath temperatures.
    InstanceMean,
    /// A fixed temperature `θ > 0`.
    FixedThreshold(f64),
}

impl DecisionRule {
    pub fn fixed(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::param("threshold", format!("must be finite and > 0, got {theta}")));
        }
        Ok(Self::FixedThreshold(theta))
    }

    pub fn threshold(&self, config: &SystemConfig) -> f64 {
        match *self {
            DecisionRule::InstanceMean => mean_bath_temperature(config),
            DecisionRule::FixedThreshold(theta) => theta,
        }
    }
}

impl Default for DecisionRule {
    fn default() -> Self {
        DecisionRule::FixedThreshold(3.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    /// `T_S^ss ≥ threshold`
    Class1,
    /// `T_S^ss < threshold`
    Class2,
}

impl Label {
    /// `+1` for [`Label::Class1`], `−1` for [`Label::Class2`].
    pub fn sign(self) -> f64 {
        match self {
            Label::Class1 => 1.0,
            Label::Class2 => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationResult {
    pub steady_temperature: f64,
    pub threshold: f64,
    pub label: Label,
}

/// Relative slack on the inclusive boundary. A single bath sits exactly on
/// the [`DecisionRule::InstanceMean`] threshold, and without slack its label
/// would depend on the last bit of the logarithm.
pub const BOUNDARY_REL_TOL: f64 = 1e-12;

/// Labels `config` by comparing its analytic steady temperature with the rule's threshold.
pub fn classify(config: &SystemConfig, rule: DecisionRule) -> ClassificationResult {
    let steady_temperature = steady_temperature(config);
    let threshold = rule.threshold(config);
    let label = if steady_temperature >= threshold * (1.0 - BOUNDARY_REL_TOL) {
        Label::Class1
    } else {
        Label::Class2
    };
    ClassificationResult {
        steady_temperature,
        threshold,
        label,
    }
}
