//! Reproduction checks that tie the three computation paths together.
//!
//! Each check returns a [`CriterionOutcome`]; [`run_all`] runs the whole
//! suite. The CLI `verify` subcommand and the `acceptance` test target both
//! call into this module, so thresholds live here and nowhere else.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classifier::{
    classify, gamma_sweep, generate_instances, perceptron_fit, DecisionRule, FeatureSpace, Label, LabeledPoint,
    NotSeparable,
};
use crate::collision::{
    collisions_to_reach, probabilities_from_rates, rate_matched_probabilities, run_collisions, CollisionConfig,
    Schedule,
};
use crate::error::Result;
use crate::lindblad::{
    evolve, evolve_with, master_rhs, mean_bath_temperature, steady_state, steady_temperature, EvolveOptions,
    SystemConfig,
};
use crate::quantum::{thermal_qubit, trace_distance, ComplexMatrix, DensityMatrix};
use crate::transmon::{budget_report, TimingBudget};

/// Outcome of one reproduction criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail
        )
    }
}

fn outcome(id: u8, title: &'static str, checked: Result<(bool, String)>) -> CriterionOutcome {
    let (passed, detail) = checked.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionOutcome {
        id,
        title,
        passed,
        detail,
    }
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        oracle_equivalence(),
        thermalization_asymptotes(),
        gamma_response(),
        homogenization(),
        collision_cross_oracle(),
        separability(),
        transmon_budget(),
        property_suites(),
    ]
}

pub const ORACLE_CONFIGS: usize = 100;
pub const ORACLE_SEED: u64 = 0x5eed_0001;
pub const ORACLE_TOL: f64 = 1e-6;
pub const ORACLE_DT: f64 = 0.02;
pub const ORACLE_T_CAP: f64 = 20_000.0;
pub const ORACLE_RUNTIME_S: f64 = 60.0;

/// Random configuration with 1–4 resonant baths, `T ∈ [0.5, 5]`, `Γ ∈ [0.01, 0.1]`, `ω = 1`.
pub fn random_config(rng: &mut ChaCha8Rng) -> SystemConfig {
    let n = rng.random_range(1..=4);
    let baths: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random_range(0.5..=5.0), rng.random_range(0.01..=0.1)))
        .collect();
    SystemConfig::resonant(1.0, &baths).expect("ranges satisfy the guards")
}

/// Random mixed qubit state drawn uniformly from the Bloch ball.
pub fn random_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let (x, y, z) = loop {
        let v: (f64, f64, f64) = (
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if v.0 * v.0 + v.1 * v.1 + v.2 * v.2 <= 1.0 {
            break v;
        }
    };
    let c = num_complex::Complex64::new;
    let m = ComplexMatrix::from_rows(&[
        c(0.5 * (1.0 + z), 0.0),
        c(0.5 * x, -0.5 * y),
        c(0.5 * x, 0.5 * y),
        c(0.5 * (1.0 - z), 0.0),
    ])
    .expect("2x2");
    DensityMatrix::from_numerical(m).expect("Bloch ball point is a state")
}

/// Master-equation integration from random states reaches the analytic steady state.
pub fn oracle_equivalence() -> CriterionOutcome {
    let checked = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
        let cases: Vec<(SystemConfig, DensityMatrix)> = (0..ORACLE_CONFIGS)
            .map(|_| {
                let config = random_config(&mut rng);
                let rho0 = random_state(&mut rng);
                (config, rho0)
            })
            .collect();
        let start = Instant::now();
        let distances = cases
            .par_iter()
            .map(|(config, rho0)| {
                let traj = evolve(config, rho0, ORACLE_T_CAP, ORACLE_DT)?;
                trace_distance(traj.final_state(), &steady_state(config))
            })
            .collect::<Result<Vec<f64>>>()?;
        let elapsed = start.elapsed().as_secs_f64();
        let worst = distances.iter().copied().fold(0.0, f64::max);
        let passed = worst < ORACLE_TOL && elapsed < ORACLE_RUNTIME_S;
        Ok((
            passed,
            format!(
                "{ORACLE_CONFIGS} configs, max trace distance {worst:.3e} (< {ORACLE_TOL:e}), runtime {elapsed:.2} s (< {ORACLE_RUNTIME_S} s)"
            ),
        ))
    })();
    outcome(1, "analytic/ODE oracle equivalence", checked)
}

/// Rate pairs `(Γ₁, Γ₂)` of the three thermalization curves, with `T₁ = 3`, `T₂ = 1`.
pub const RELAX_RATES: [(f64, f64); 3] = [(0.1, 0.1), (0.1, 0.05), (0.05, 0.1)];
/// Asymptotic temperatures for [`RELAX_RATES`], evaluated from the exact
/// population ratio by an independent script.
pub const RELAX_ASYMPTOTES: [f64; 3] = [2.013636202, 2.343694237, 1.681284487];
pub const RELAX_TOL: f64 = 1e-3;
pub const RELAX_T_END: f64 = 2000.0;
pub const RELAX_DT: f64 = 0.01;

pub fn relaxation_configs() -> Vec<SystemConfig> {
    RELAX_RATES
        .iter()
        .map(|&(g1, g2)| SystemConfig::resonant(1.0, &[(3.0, g1), (1.0, g2)]).expect("valid"))
        .collect()
}

/// Long-time temperatures of the three two-bath curves.
pub fn thermalization_asymptotes() -> CriterionOutcome {
    let checked = (|| {
        let mut passed = true;
        let mut parts = Vec::new();
        for ((config, expected), rates) in relaxation_configs().iter().zip(RELAX_ASYMPTOTES).zip(RELAX_RATES) {
            let opts = EvolveOptions::new(RELAX_T_END, RELAX_DT).full_horizon().record_every(RELAX_T_END);
            let traj = evolve_with(config, &DensityMatrix::ground(), &opts)?;
            let t = traj.final_temperature();
            let ok = (t - expected).abs() <= RELAX_TOL;
            passed &= ok;
            parts.push(format!("Γ=({}, {}): {t:.5} vs {expected:.5}", rates.0, rates.1));
        }
        let equal = steady_temperature(&relaxation_configs()[0]);
        let mean = mean_bath_temperature(&relaxation_configs()[0]);
        let rel = (equal - mean).abs() / mean;
        passed &= rel <= 0.01;
        parts.push(format!("equal-rate vs mean {mean}: {:.2}% (<= 1%)", 100.0 * rel));
        Ok((passed, parts.join("; ")))
    })();
    outcome(2, "thermalization asymptotes", checked)
}

pub const SWEEP_GAMMA: f64 = 0.08;
pub const SWEEP_POINTS: usize = 41;
pub const SWEEP_ENDPOINT_TOL: f64 = 1e-9;
/// Largest distance between the exact `T_S^ss(ΔΓ)` curve and its chord for
/// `T = (3, 1)`, `Γ = 0.08`, measured on a 2001-point grid (0.7335% of `T₁ − T₂`).
pub const SWEEP_CHORD_DEVIATION: f64 = 0.014671;
pub const SWEEP_CHORD_BOUND_FRACTION: f64 = 0.02;

/// Maximum distance of a sweep from the straight line through its endpoints.
pub fn chord_deviation(points: &[(f64, f64)]) -> f64 {
    let (x0, y0) = points[0];
    let (x1, y1) = points[points.len() - 1];
    points
        .iter()
        .map(|&(x, y)| (y - (y0 + (y1 - y0) * (x - x0) / (x1 - x0))).abs())
        .fold(0.0, f64::max)
}

/// Endpoints, monotonicity and near-linearity of the rate sweep.
pub fn gamma_response() -> CriterionOutcome {
    let checked = (|| {
        let (t1, t2) = (3.0, 1.0);
        let sweep = gamma_sweep(t1, t2, SWEEP_GAMMA, SWEEP_POINTS, 1.0)?;
        let first = sweep[0].steady_temperature;
        let last = sweep[sweep.len() - 1].steady_temperature;
        let endpoints_ok = (first - t2).abs() <= SWEEP_ENDPOINT_TOL && (last - t1).abs() <= SWEEP_ENDPOINT_TOL;
        let monotone = sweep.windows(2).all(|w| w[1].steady_temperature > w[0].steady_temperature);
        let xy: Vec<(f64, f64)> = sweep.iter().map(|p| (p.delta_gamma, p.steady_temperature)).collect();
        let deviation = chord_deviation(&xy);
        let bound = SWEEP_CHORD_DEVIATION.min(SWEEP_CHORD_BOUND_FRACTION * (t1 - t2));
        let linear_ok = deviation <= bound + 1e-9;
        Ok((
            endpoints_ok && monotone && linear_ok,
            format!(
                "endpoints ({first:.12}, {last:.12}), monotone={monotone}, chord deviation {deviation:.6} \
                 (<= {bound:.6} = {:.3}% of T1-T2)",
                100.0 * bound / (t1 - t2)
            ),
        ))
    })();
    outcome(3, "rate-sweep response", checked)
}

pub const HOMOGENIZATION_TEMPERATURES: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const HOMOGENIZATION_H: f64 = 1.0;
pub const HOMOGENIZATION_J: f64 = 0.05;
pub const HOMOGENIZATION_TAU: f64 = 1.0;
pub const HOMOGENIZATION_TOL: f64 = 1e-3;
pub const HOMOGENIZATION_MAX_COLLISIONS: usize = 100_000;
pub const HOMOGENIZATION_RUNTIME_S: f64 = 30.0;

/// Single-reservoir collision runs converge to the reservoir's Gibbs state.
pub fn homogenization() -> CriterionOutcome {
    let checked = (|| {
        let start = Instant::now();
        let mut passed = true;
        let mut parts = Vec::new();
        for t in HOMOGENIZATION_TEMPERATURES {
            let config = CollisionConfig::new(
                HOMOGENIZATION_H,
                HOMOGENIZATION_J,
                HOMOGENIZATION_TAU,
                &[(t, 1.0)],
                Schedule::Mixture,
            )?;
            let gibbs = thermal_qubit(HOMOGENIZATION_H, t)?;
            let reached = collisions_to_reach(
                &DensityMatrix::ground(),
                &config,
                &gibbs,
                HOMOGENIZATION_TOL,
                HOMOGENIZATION_MAX_COLLISIONS,
            )?;
            passed &= reached.is_some();
            parts.push(match reached {
                Some(n) => format!("T={t}: {n} collisions"),
                None => format!("T={t}: not within {HOMOGENIZATION_MAX_COLLISIONS}"),
            });
        }
        let elapsed = start.elapsed().as_secs_f64();
        passed &= elapsed < HOMOGENIZATION_RUNTIME_S;
        parts.push(format!("runtime {elapsed:.2} s"));
        Ok((passed, parts.join("; ")))
    })();
    outcome(4, "quantum homogenization", checked)
}

pub const CROSS_TEMPERATURES: [(f64, f64); 3] = [(3.0, 1.0), (1.0, 5.0), (4.0, 2.0)];
pub const CROSS_RATE_RATIOS: [f64; 3] = [1.0, 2.0, 0.5];
pub const CROSS_GAMMA2: f64 = 0.05;
pub const CROSS_COLLISIONS: usize = 10_000;
pub const CROSS_REL_TOL: f64 = 0.02;

fn collision_steady_temperature(temps: (f64, f64), probs: &[f64]) -> Result<f64> {
    let config = CollisionConfig::new(
        HOMOGENIZATION_H,
        HOMOGENIZATION_J,
        HOMOGENIZATION_TAU,
        &[(temps.0, probs[0]), (temps.1, probs[1])],
        Schedule::Mixture,
    )?
    .with_record_every(CROSS_COLLISIONS)?;
    Ok(run_collisions(&DensityMatrix::ground(), &config, CROSS_COLLISIONS)?.final_temperature())
}

/// Mixture-schedule steady temperature with `p_i = Γ_i/ΣΓ_j` against the
/// master-equation steady temperature.
pub fn collision_cross_oracle() -> CriterionOutcome {
    let checked = (|| {
        let mut worst: f64 = 0.0;
        let mut worst_matched: f64 = 0.0;
        let mut failures = Vec::new();
        for temps in CROSS_TEMPERATURES {
            for ratio in CROSS_RATE_RATIOS {
                let rates = [ratio * CROSS_GAMMA2, CROSS_GAMMA2];
                let system = SystemConfig::resonant(1.0, &[(temps.0, rates[0]), (temps.1, rates[1])])?;
                let expected = steady_temperature(&system);
                let got = collision_steady_temperature(temps, &probabilities_from_rates(&rates))?;
                let rel = (got - expected).abs() / expected;
                if rel > CROSS_REL_TOL {
                    failures.push(format!("T={temps:?} ratio={ratio}: {got:.4} vs {expected:.4}"));
                }
                worst = worst.max(rel);
                let matched =
                    collision_steady_temperature(temps, &rate_matched_probabilities(system.baths()))?;
                worst_matched = worst_matched.max((matched - expected).abs() / expected);
            }
        }
        let mut detail = format!(
            "max relative deviation {:.2}% (<= {:.0}%) over 3x3 grid",
            100.0 * worst,
            100.0 * CROSS_REL_TOL
        );
        if !failures.is_empty() {
            detail.push_str(&format!("; off: {}", failures.join(", ")));
        }
        detail.push_str(&format!(
            "; with p_i ∝ Γ_i(2n̄_i+1): {:.1e}",
            worst_matched
        ));
        Ok((worst <= CROSS_REL_TOL, detail))
    })();
    outcome(5, "collision/Lindblad cross-oracle", checked)
}

pub const SEPARABILITY_SEED: u64 = 42;
pub const SEPARABILITY_POINTS: usize = 20;
pub const SEPARABILITY_GAMMA: f64 = 0.02;
pub const SEPARABILITY_TEMPERATURES: (f64, f64) = (1.0, 5.0);
pub const SEPARABILITY_THRESHOLD: f64 = 3.0;
pub const SEPARABILITY_EPOCHS: usize = 1000;

pub fn separability_space() -> FeatureSpace {
    FeatureSpace::Temperature {
        gamma: SEPARABILITY_GAMMA,
        temperatures: SEPARABILITY_TEMPERATURES,
    }
}

/// Seeded temperature-plane instances are linearly separable; XOR is not.
pub fn separability() -> CriterionOutcome {
    let checked = (|| {
        let points = generate_instances(
            separability_space(),
            SEPARABILITY_POINTS,
            DecisionRule::fixed(SEPARABILITY_THRESHOLD)?,
            1.0,
            SEPARABILITY_SEED,
        )?;
        let class1 = points.iter().filter(|p| p.label == Label::Class1).count();
        let fit = perceptron_fit(&points, SEPARABILITY_EPOCHS, 1.0);
        let fit_ok = matches!(&fit, Ok(p) if p.training_errors(&points) == 0);
        let both = class1 > 0 && class1 < points.len();
        let xor: Vec<LabeledPoint> = [(0.0, 0.0, Label::Class2), (1.0, 1.0, Label::Class2), (0.0, 1.0, Label::Class1), (1.0, 0.0, Label::Class1)]
            .iter()
            .map(|&(x, y, label)| LabeledPoint {
                features: [x, y],
                steady_temperature: 0.0,
                label,
            })
            .collect();
        let xor_ok = matches!(
            perceptron_fit(&xor, SEPARABILITY_EPOCHS, 1.0),
            Err(NotSeparable::Exhausted { .. })
        );
        let fit_desc = match &fit {
            Ok(p) => format!("separated (w={:.4?}, b={:.4})", p.weights, p.bias),
            Err(e) => e.to_string(),
        };
        Ok((
            fit_ok && both && xor_ok,
            format!(
                "{} points ({class1} Class1), {fit_desc}; XOR not separable={xor_ok}",
                points.len()
            ),
        ))
    })();
    outcome(6, "linear separability", checked)
}

/// Timing of the transmon implementation.
pub fn transmon_budget() -> CriterionOutcome {
    let report = budget_report(&TimingBudget::reference());
    let text = report.to_string();
    let passed = (report.total_us - 10.0).abs() < 1e-9
        && report.feasible
        && report.t1_us == 20.0
        && report.speedup >= 100.0
        && text.contains("speedup=100x");
    CriterionOutcome {
        id: 7,
        title: "transmon timing budget",
        passed,
        detail: text,
    }
}

pub const PROPERTY_SEED: u64 = 0x5eed_0008;
pub const PROPERTY_CASES: usize = 200;
pub const FIXED_POINT_TOL: f64 = 1e-10;
pub const SEMIGROUP_TOL: f64 = 1e-12;

/// Randomized invariant checks across every module.
pub fn property_suites() -> CriterionOutcome {
    let checked = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);
        let mut failures: Vec<String> = Vec::new();
        let mut worst_residual: f64 = 0.0;
        for _ in 0..PROPERTY_CASES {
            let config = random_config(&mut rng);
            let rho = steady_state(&config);
            if DensityMatrix::new(*rho.matrix()).is_err() {
                failures.push("steady state invalid".into());
            }
            worst_residual = worst_residual.max(master_rhs(&config, &rho).max_abs());
            let ts = steady_temperature(&config);
            let temps = config.baths().iter().map(|b| b.temperature());
            let lo = temps.clone().fold(f64::INFINITY, f64::min);
            let hi = temps.fold(0.0, f64::max);
            if !(lo * (1.0 - 1e-12) <= ts && ts <= hi * (1.0 + 1e-12)) {
                failures.push(format!("bracketing: {ts} not in [{lo}, {hi}]"));
            }
            let factor = rng.random_range(0.1..1.5);
            let scaled = config.with_scaled_rates(factor)?;
            for rule in [DecisionRule::InstanceMean, DecisionRule::FixedThreshold(2.5)] {
                let (a, b) = (classify(&config, rule), classify(&scaled, rule));
                if a.label != b.label || (a.steady_temperature - b.steady_temperature).abs() >= 1e-12 {
                    failures.push(format!("rescaling by {factor}: {:?} -> {:?} ({:e})", a.label, b.label, a.steady_temperature - b.steady_temperature));
                }
            }
        }
        if worst_residual >= FIXED_POINT_TOL {
            failures.push(format!("fixed-point residual {worst_residual:.3e}"));
        }

        // integrated states stay valid density matrices
        let config = random_config(&mut rng);
        let rho0 = random_state(&mut rng);
        let opts = EvolveOptions::new(200.0, 0.01).full_horizon();
        let traj = evolve_with(&config, &rho0, &opts)?;
        if traj.states.iter().any(|s| DensityMatrix::new(*s.matrix()).is_err()) {
            failures.push("evolve produced an invalid state".into());
        }

        // concatenating collision runs
        let mut worst_semigroup: f64 = 0.0;
        for _ in 0..20 {
            let p = rng.random_range(0.05..0.95);
            let res = [(rng.random_range(0.5..5.0), p), (rng.random_range(0.5..5.0), 1.0 - p)];
            let cc = CollisionConfig::new(1.0, 0.05, 1.0, &res, Schedule::Mixture)?;
            let start = random_state(&mut rng);
            let n = rng.random_range(1..200);
            let m = rng.random_range(1..200);
            let first = run_collisions(&start, &cc, n)?;
            let second = run_collisions(first.final_state(), &cc, m)?;
            let whole = run_collisions(&start, &cc, n + m)?;
            if whole.states.iter().any(|s| DensityMatrix::new(*s.matrix()).is_err()) {
                failures.push("collision run produced an invalid state".into());
            }
            worst_semigroup =
                worst_semigroup.max((*second.final_state().matrix() - *whole.final_state().matrix()).max_abs());
        }
        if worst_semigroup >= SEMIGROUP_TOL {
            failures.push(format!("semigroup composition off by {worst_semigroup:.3e}"));
        }

        // reruns are bit-identical
        let rule = DecisionRule::fixed(SEPARABILITY_THRESHOLD)?;
        let a = generate_instances(separability_space(), 50, rule, 1.0, 7)?;
        let b = generate_instances(separability_space(), 50, rule, 1.0, 7)?;
        let sampled = CollisionConfig::new(1.0, 0.05, 1.0, &[(3.0, 0.5), (1.0, 0.5)], Schedule::Sampled { seed: 3 })?;
        let s1 = run_collisions(&DensityMatrix::ground(), &sampled, 300)?;
        let s2 = run_collisions(&DensityMatrix::ground(), &sampled, 300)?;
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        if a != b || bits(&s1.temperatures) != bits(&s2.temperatures) {
            failures.push("seeded reruns differ".into());
        }

        let detail = if failures.is_empty() {
            format!(
                "{PROPERTY_CASES} configs: residual {worst_residual:.1e} (< {FIXED_POINT_TOL:e}), bracketing, \
                 rescaling invariance; semigroup {worst_semigroup:.1e} (< {SEMIGROUP_TOL:e}); reruns identical"
            )
        } else {
            failures.join("; ")
        };
        Ok((failures.is_empty(), detail))
    })();
    outcome(8, "property suites", checked)
}
