//! Experiment execution. Every parameter is validated by building the core
//! configs before any computation starts.

use tqc_core::classifier::{
    gamma_sweep, generate_instances, perceptron_fit, thermalization_curves, DecisionRule, FeatureSpace, Label,
    LabeledPoint,
};
use tqc_core::collision::{run_collisions, CollisionConfig, Schedule};
use tqc_core::lindblad::{max_stable_dt, mean_bath_temperature, steady_state, steady_temperature, SystemConfig};
use tqc_core::transmon::{budget_report, TimingBudget};
use tqc_core::{verify, DensityMatrix};

use crate::config::{self, Kind, RuleKind, RunConfig, ScheduleKind};
use crate::error::CliError;
use crate::svg::{Plot, Series, Style};
use crate::table::{format_value, ResultTable};

/// Everything a run produces. Nothing is written until the run succeeds.
#[derive(Debug, Clone)]
pub struct Output {
    pub table: ResultTable,
    /// Human-readable lines.
    pub summary: Vec<String>,
    pub plot: Plot,
    /// Set by `verify` when a criterion fails.
    pub failure: Option<CliError>,
}

struct Ctx<'a> {
    source: Option<&'a str>,
}

impl Ctx<'_> {
    fn core(&self, e: tqc_core::Error) -> CliError {
        CliError::from_core(e, self.source)
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn metadata(config: &RunConfig) -> String {
    config.to_toml()
}

fn system(ctx: &Ctx, omega: f64, temperatures: &[f64], rates: &[f64]) -> Result<SystemConfig, CliError> {
    if temperatures.is_empty() {
        return Err(config_err("temperatures must not be empty"));
    }
    if temperatures.len() != rates.len() {
        return Err(config_err(format!(
            "{} temperatures but {} rates",
            temperatures.len(),
            rates.len()
        )));
    }
    let baths: Vec<(f64, f64)> = temperatures.iter().copied().zip(rates.iter().copied()).collect();
    SystemConfig::resonant(omega, &baths).map_err(|e| ctx.core(e))
}

fn rule(ctx: &Ctx, kind: RuleKind, threshold: f64) -> Result<DecisionRule, CliError> {
    match kind {
        RuleKind::InstanceMean => Ok(DecisionRule::InstanceMean),
        RuleKind::Fixed => DecisionRule::fixed(threshold).map_err(|e| ctx.core(e)),
    }
}

fn line(name: &str, points: Vec<(f64, f64)>) -> Series {
    Series {
        name: name.to_string(),
        points,
        style: Style::Line,
    }
}

/// Runs the resolved config. `source` is the original config text, if any.
pub fn execute(config: &RunConfig, source: Option<&str>) -> Result<Output, CliError> {
    let ctx = Ctx { source };
    match config.kind() {
        Kind::Thermalize => thermalize(&ctx, config),
        Kind::SweepGamma => sweep(&ctx, config),
        Kind::ClassifyGamma | Kind::ClassifyTemp => classify(&ctx, config),
        Kind::Collide => collide(&ctx, config),
        Kind::Steady => steady(&ctx, config),
        Kind::TransmonBudget => transmon(&ctx, config),
        Kind::Verify => Ok(run_verify(config)),
    }
}

fn thermalize(ctx: &Ctx, config: &RunConfig) -> Result<Output, CliError> {
    let p = config.thermalize.as_ref().expect("resolved");
    if p.rates.is_empty() {
        return Err(config_err("rates must list at least one curve"));
    }
    let systems = p
        .rates
        .iter()
        .map(|r| system(ctx, p.omega, &p.temperatures, r))
        .collect::<Result<Vec<_>, _>>()?;
    for s in &systems {
        let max_dt = max_stable_dt(s);
        if p.dt > max_dt {
            return Err(CliError::Guard(format!(
                "{}dt={} exceeds the stability limit {max_dt:.6}",
                config::key_line(ctx.source.unwrap_or(""), "dt")
                    .map(|l| format!("line {l}: "))
                    .unwrap_or_default(),
                p.dt
            )));
        }
    }
    let curves = thermalization_curves(&systems, p.t_end, p.dt, p.sample_every).map_err(|e| ctx.core(e))?;

    let n = systems.len();
    let mut columns = vec!["time".to_string()];
    columns.extend((1..=n).map(|i| format!("T_S_curve{i}")));
    let mut table = ResultTable::new(columns, metadata(config));
    for (k, &t) in curves.times.iter().enumerate() {
        let mut row = vec![t];
        row.extend(curves.temperatures.iter().map(|c| c[k]));
        table.push(row);
    }
    let summary = systems
        .iter()
        .zip(&curves.temperatures)
        .enumerate()
        .map(|(i, (s, c))| {
            format!(
                "curve{}: rates={:?} final T_S={} analytic T_S^ss={}",
                i + 1,
                p.rates[i],
                format_value(*c.last().expect("nonempty")),
                format_value(steady_temperature(s))
            )
        })
        .collect();
    let series = curves
        .temperatures
        .iter()
        .enumerate()
        .map(|(i, c)| line(&format!("curve{}", i + 1), curves.times.iter().copied().zip(c.iter().copied()).collect()))
        .collect();
    Ok(Output {
        table,
        summary,
        plot: Plot {
            title: "thermalization".into(),
            x_label: "time".into(),
            y_label: "T_S".into(),
            series,
        },
        failure: None,
    })
}

fn sweep(ctx: &Ctx, config: &RunConfig) -> Result<Output, CliError> {
    let p = config.sweep_gamma.as_ref().expect("resolved");
    let points = gamma_sweep(p.t1, p.t2, p.gamma_total, p.points, p.omega).map_err(|e| ctx.core(e))?;
    let mut table = ResultTable::new(["delta_gamma", "gamma1", "gamma2", "T_S_ss"], metadata(config));
    for q in &points {
        table.push(vec![q.delta_gamma, q.gamma1, q.gamma2, q.steady_temperature]);
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|q| (q.delta_gamma, q.steady_temperature)).collect();
    let summary = vec![format!(
        "{} points: T_S^ss from {} to {}, max chord deviation {}",
        points.len(),
        format_value(xy[0].1),
        format_value(xy[xy.len() - 1].1),
        format_value(verify::chord_deviation(&xy))
    )];
    Ok(Output {
        table,
        summary,
        plot: Plot {
            title: "steady temperature vs rate imbalance".into(),
            x_label: "delta_gamma".into(),
            y_label: "T_S_ss".into(),
            series: vec![line("T_S_ss", xy)],
        },
        failure: None,
    })
}

fn classify(ctx: &Ctx, config: &RunConfig) -> Result<Output, CliError> {
    let (space, n, rule, omega, epochs, lr, names) = match config.kind() {
        Kind::ClassifyGamma => {
            let p = config.classify_gamma.as_ref().expect("resolved");
            (
                FeatureSpace::Gamma {
                    t1: p.t1,
                    t2: p.t2,
                    rates: (p.rate_min, p.rate_max),
                },
                p.points,
                rule(ctx, p.rule, p.threshold)?,
                p.omega,
                p.max_epochs,
                p.learning_rate,
                ["gamma1", "gamma2"],
            )
        }
        _ => {
            let p = config.classify_temp.as_ref().expect("resolved");
            (
                FeatureSpace::Temperature {
                    gamma: p.gamma,
                    temperatures: (p.t_min, p.t_max),
                },
                p.points,
                rule(ctx, p.rule, p.threshold)?,
                p.omega,
                p.max_epochs,
                p.learning_rate,
                ["T1", "T2"],
            )
        }
    };
    let points = generate_instances(space, n, rule, omega, config.seed()).map_err(|e| ctx.core(e))?;
    let fit = perceptron_fit(&points, epochs, lr);

    let mut table = ResultTable::new(
        [names[0], names[1], "T_S_ss", "label", "predicted"],
        metadata(config),
    );
    for q in &points {
        let predicted = match &fit {
            Ok(model) => model.predict(&q.features).sign(),
            Err(_) => f64::NAN,
        };
        table.push(vec![q.features[0], q.features[1], q.steady_temperature, q.label.sign(), predicted]);
    }
    let class1 = points.iter().filter(|q| q.label == Label::Class1).count();
    let fit_line = match &fit {
        Ok(model) => format!(
            "separable: w=[{}, {}] b={} training errors={}",
            format_value(model.weights[0]),
            format_value(model.weights[1]),
            format_value(model.bias),
            model.training_errors(&points)
        ),
        Err(e) => format!("not separable: {e}"),
    };
    let summary = vec![
        format!("{} instances, {class1} Class1, {} Class2", points.len(), points.len() - class1),
        fit_line,
    ];
    let by_label = |label: Label| -> Vec<(f64, f64)> {
        points
            .iter()
            .filter(|q: &&LabeledPoint| q.label == label)
            .map(|q| (q.features[0], q.features[1]))
            .collect()
    };
    Ok(Output {
        table,
        summary,
        plot: Plot {
            title: format!("{} instances", config.kind()),
            x_label: names[0].into(),
            y_label: names[1].into(),
            series: vec![
                Series {
                    name: "Class1".into(),
                    points: by_label(Label::Class1),
                    style: Style::Scatter,
                },
                Series {
                    name: "Class2".into(),
                    points: by_label(Label::Class2),
                    style: Style::Scatter,
                },
            ],
        },
        failure: None,
    })
}

fn collide(ctx: &Ctx, config: &RunConfig) -> Result<Output, CliError> {
    let p = config.collide.as_ref().expect("resolved");
    if p.temperatures.len() != p.probabilities.len() {
        return Err(config_err(format!(
            "{} temperatures but {} probabilities",
            p.temperatures.len(),
            p.probabilities.len()
        )));
    }
    if p.collisions == 0 {
        return Err(config_err("collisions must be > 0"));
    }
    let reservoirs: Vec<(f64, f64)> = p
        .temperatures
        .iter()
        .copied()
        .zip(p.probabilities.iter().copied())
        .collect();
    let schedule = match p.schedule {
        ScheduleKind::Mixture => Schedule::Mixture,
        ScheduleKind::Sampled => Schedule::Sampled { seed: config.seed() },
    };
    let cc = CollisionConfig::new(p.h, p.j, p.tau, &reservoirs, schedule)
        .and_then(|c| c.with_record_every(p.record_every))
        .map_err(|e| ctx.core(e))?;
    let traj = run_collisions(&DensityMatrix::ground(), &cc, p.collisions).map_err(|e| ctx.core(e))?;
    let mut table = ResultTable::new(["collision", "T_S", "p_excited"], metadata(config));
    for ((&k, s), &t) in traj.indices.iter().zip(&traj.states).zip(&traj.temperatures) {
        table.push(vec![k as f64, t, s.excited_population()]);
    }
    let summary = vec![format!(
        "final T_S={} after {} collisions",
        format_value(traj.final_temperature()),
        p.collisions
    )];
    let xy = traj.indices.iter().map(|&k| k as f64).zip(traj.temperatures.iter().copied()).collect();
    Ok(Output {
        table,
        summary,
        plot: Plot {
            title: "collision model".into(),
            x_label: "collision".into(),
            y_label: "T_S".into(),
            series: vec![line("T_S", xy)],
        },
        failure: None,
    })
}

fn steady(ctx: &Ctx, config: &RunConfig) -> Result<Output, CliError> {
    let p = config.steady.as_ref().expect("resolved");
    let s = system(ctx, p.omega, &p.temperatures, &p.rates)?;
    let rho = steady_state(&s);
    let t = steady_temperature(&s);
    let mean = mean_bath_temperature(&s);
    let mut table = ResultTable::new(["T_S_ss", "p_excited", "p_ground", "T_mean"], metadata(config));
    table.push(vec![t, rho.excited_population(), rho.ground_population(), mean]);
    let summary = vec![format!(
        "T_S^ss = {} (p_e={}, p_g={}; mean bath T={})",
        format_value(t),
        format_value(rho.excited_population()),
        format_value(rho.ground_population()),
        format_value(mean)
    )];
    Ok(Output {
        table,
        summary,
        plot: Plot {
            title: "steady temperature".into(),
            x_label: "bath".into(),
            y_label: "T".into(),
            series: vec![
                Series {
                    name: "baths".into(),
                    points: p.temperatures.iter().enumerate().map(|(i, &t)| (i as f64, t)).collect(),
                    style: Style::Scatter,
                },
                line("T_S_ss", vec![(0.0, t), ((p.temperatures.len() - 1) as f64, t)]),
            ],
        },
        failure: None,
    })
}

fn transmon(ctx: &Ctx, config: &RunConfig) -> Result<Output, CliError> {
    let p = config.transmon_budget.as_ref().expect("resolved");
    let budget =
        TimingBudget::new(p.tau_int_ns, p.tau_pr_ns, p.tau_r_ns, p.collisions, p.t1_us).map_err(|e| ctx.core(e))?;
    let report = budget_report(&budget);
    let mut table = ResultTable::new(
        ["total_us", "t1_us", "feasible", "classical_baseline_us", "speedup"],
        metadata(config),
    );
    table.push(vec![
        report.total_us,
        report.t1_us,
        if report.feasible { 1.0 } else { 0.0 },
        report.classical_baseline_us,
        report.speedup,
    ]);
    Ok(Output {
        table,
        summary: vec![report.to_string()],
        plot: Plot {
            title: "timing budget".into(),
            x_label: "collisions".into(),
            y_label: "time (us)".into(),
            series: vec![
                line("run time", vec![(0.0, 0.0), (p.collisions as f64, report.total_us)]),
                line("T1", vec![(0.0, report.t1_us), (p.collisions as f64, report.t1_us)]),
            ],
        },
        failure: None,
    })
}

fn run_verify(config: &RunConfig) -> Output {
    let outcomes = verify::run_all();
    let mut table = ResultTable::new(["criterion", "passed"], metadata(config));
    for o in &outcomes {
        table.push(vec![o.id as f64, if o.passed { 1.0 } else { 0.0 }]);
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id.to_string()).collect();
    let failure = (!failed.is_empty()).then(|| {
        CliError::Verify(format!(
            "{} of {} criteria failed: {}",
            failed.len(),
            outcomes.len(),
            failed.join(", ")
        ))
    });
    Output {
        table,
        summary: outcomes.iter().map(ToString::to_string).collect(),
        plot: Plot {
            title: "verification".into(),
            x_label: "criterion".into(),
            y_label: "passed".into(),
            series: vec![Series {
                name: "passed".into(),
                points: outcomes
                    .iter()
                    .map(|o| (o.id as f64, if o.passed { 1.0 } else { 0.0 }))
                    .collect(),
                style: Style::Scatter,
            }],
        },
        failure,
    }
}
