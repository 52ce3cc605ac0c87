use thiserror::Error;

use super::{Label, LabeledPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    /// `+1` for `y ≥ 0`, `−1` otherwise.
    Step,
    /// Identity.
    Linear,
}

pub fn activation(kind: Activation, y: f64) -> f64 {
    match kind {
        Activation::Step => {
            if y >= 0.0 {
                1.0
            } else {
                -1.0
            }
        }
        Activation::Linear => y,
    }
}

/// A linear unit `f(w·x + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Perceptron {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub activation: Activation,
}

impl Perceptron {
    pub fn pre_activation(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + self.bias
    }

    pub fn output(&self, x: &[f64]) -> f64 {
        activation(self.activation, self.pre_activation(x))
    }

    /// Label from the step rule, whatever the configured activation.
    pub fn predict(&self, x: &[f64]) -> Label {
        if activation(Activation::Step, self.pre_activation(x)) > 0.0 {
            Label::Class1
        } else {
            Label::Class2
        }
    }

    pub fn training_errors(&self, points: &[LabeledPoint]) -> usize {
        points.iter().filter(|p| self.predict(&p.features) != p.label).count()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NotSeparable {
    #[error("no separating hyperplane found within {epochs} epochs")]
    Exhausted { epochs: usize },
    #[error("need at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("learning rate must be > 0, got {0}")]
    LearningRate(f64),
}

/// Rosenblatt training on standardized features.
///
/// The returned weights act on the raw features. Sets with a single label get
/// the constant hyperplane `w = 0` with the bias on that label's side.
pub fn perceptron_fit(
    points: &[LabeledPoint],
    max_epochs: usize,
    learning_rate: f64,
) -> Result<Perceptron, NotSeparable> {
    if points.len() < 2 {
        return Err(NotSeparable::TooFewPoints(points.len()));
    }
    if !(learning_rate > 0.0 && learning_rate.is_finite()) {
        return Err(NotSeparable::LearningRate(learning_rate));
    }
    let dim = points[0].features.len();
    if points.iter().all(|p| p.label == points[0].label) {
        return Ok(Perceptron {
            weights: vec![0.0; dim],
            bias: if points[0].label == Label::Class1 { 0.0 } else { -1.0 },
            activation: Activation::Step,
        });
    }

    let n = points.len() as f64;
    let mean: Vec<f64> = (0..dim)
        .map(|j| points.iter().map(|p| p.features[j]).sum::<f64>() / n)
        .collect();
    let scale: Vec<f64> = (0..dim)
        .map(|j| {
            let var = points.iter().map(|p| (p.features[j] - mean[j]).powi(2)).sum::<f64>() / n;
            if var > 0.0 {
                var.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    let standardized: Vec<(Vec<f64>, f64)> = points
        .iter()
        .map(|p| {
            let x = (0..dim).map(|j| (p.features[j] - mean[j]) / scale[j]).collect();
            (x, p.label.sign())
        })
        .collect();

    let mut weights = vec![0.0; dim];
    let mut bias = 0.0;
    for _ in 0..max_epochs {
        let mut mistakes = 0;
        for (x, target) in &standardized {
            let y = weights.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + bias;
            if activation(Activation::Step, y) != *target {
                mistakes += 1;
                for (w, xj) in weights.iter_mut().zip(x) {
                    *w += learning_rate * target * xj;
                }
                bias += learning_rate * target;
            }
        }
        if mistakes == 0 {
            let raw = Perceptron {
                weights: weights.iter().zip(&scale).map(|(w, s)| w / s).collect(),
                bias: bias - (0..dim).map(|j| weights[j] * mean[j] / scale[j]).sum::<f64>(),
                activation: Activation::Step,
            };
            // unstandardizing can move a point sitting on the boundary; keep training if so
            if raw.training_errors(points) == 0 {
                return Ok(raw);
            }
        }
    }
    Err(NotSeparable::Exhausted { epochs: max_epochs })
}
