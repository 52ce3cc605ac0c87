//! Run configuration.
//!
//! A config is a TOML document with an `[experiment]` table naming the
//! experiment kind, plus at most one parameter section for that kind. Every
//! table rejects unknown keys. Missing keys take the defaults below, and the
//! fully resolved config is echoed into each output file.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Thermalize,
    SweepGamma,
    ClassifyGamma,
    ClassifyTemp,
    Collide,
    Steady,
    TransmonBudget,
    Verify,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Thermalize,
        Kind::SweepGamma,
        Kind::ClassifyGamma,
        Kind::ClassifyTemp,
        Kind::Collide,
        Kind::Steady,
        Kind::TransmonBudget,
        Kind::Verify,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Thermalize => "thermalize",
            Kind::SweepGamma => "sweep-gamma",
            Kind::ClassifyGamma => "classify-gamma",
            Kind::ClassifyTemp => "classify-temp",
            Kind::Collide => "collide",
            Kind::Steady => "steady",
            Kind::TransmonBudget => "transmon-budget",
            Kind::Verify => "verify",
        }
    }

    /// Name of the parameter table, if the kind takes parameters.
    pub fn section(self) -> Option<&'static str> {
        match self {
            Kind::Thermalize => Some("thermalize"),
            Kind::SweepGamma => Some("sweep_gamma"),
            Kind::ClassifyGamma => Some("classify_gamma"),
            Kind::ClassifyTemp => Some("classify_temp"),
            Kind::Collide => Some("collide"),
            Kind::Steady => Some("steady"),
            Kind::TransmonBudget => Some("transmon_budget"),
            Kind::Verify => None,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    /// Threshold is the instance's own mean bath temperature.
    InstanceMean,
    /// Threshold is the `threshold` key.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleKind {
    Mixture,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub version: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Ground-state relaxation toward the steady state, one curve per rate set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thermalize {
    pub omega: f64,
    pub temperatures: Vec<f64>,
    /// One rate vector per curve, each as long as `temperatures`.
    pub rates: Vec<Vec<f64>>,
    pub t_end: f64,
    pub dt: f64,
    /// Spacing of output rows in time units.
    pub sample_every: f64,
}

impl Default for Thermalize {
    fn default() -> Self {
        Self {
            omega: 1.0,
            temperatures: vec![3.0, 1.0],
            rates: vec![vec![0.1, 0.1], vec![0.1, 0.05], vec![0.05, 0.1]],
            t_end: 2000.0,
            dt: 0.01,
            sample_every: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepGamma {
    pub omega: f64,
    pub t1: f64,
    pub t2: f64,
    pub gamma_total: f64,
    pub points: usize,
}

impl Default for SweepGamma {
    fn default() -> Self {
        Self {
            omega: 1.0,
            t1: 3.0,
            t2: 1.0,
            gamma_total: 0.08,
            points: 41,
        }
    }
}

/// Random rate pairs at fixed bath temperatures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifyGamma {
    pub omega: f64,
    pub t1: f64,
    pub t2: f64,
    pub rate_min: f64,
    pub rate_max: f64,
    pub points: usize,
    pub rule: RuleKind,
    pub threshold: f64,
    pub max_epochs: usize,
    pub learning_rate: f64,
}

impl Default for ClassifyGamma {
    fn default() -> Self {
        Self {
            omega: 1.0,
            t1: 3.0,
            t2: 1.0,
            rate_min: 0.005,
            rate_max: 0.1,
            points: 20,
            rule: RuleKind::InstanceMean,
            threshold: 2.0,
            max_epochs: 1000,
            learning_rate: 1.0,
        }
    }
}

/// Random temperature pairs at one shared rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifyTemp {
    pub omega: f64,
    pub gamma: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub rule: RuleKind,
    pub threshold: f64,
    pub max_epochs: usize,
    pub learning_rate: f64,
}

impl Default for ClassifyTemp {
    fn default() -> Self {
        Self {
            omega: 1.0,
            gamma: 0.02,
            t_min: 1.0,
            t_max: 5.0,
            points: 20,
            rule: RuleKind::Fixed,
            threshold: 3.0,
            max_epochs: 1000,
            learning_rate: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Collide {
    pub h: f64,
    pub j: f64,
    pub tau: f64,
    pub temperatures: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub schedule: ScheduleKind,
    pub collisions: usize,
    pub record_every: usize,
}

impl Default for Collide {
    fn default() -> Self {
        Self {
            h: 1.0,
            j: 0.05,
            tau: 1.0,
            temperatures: vec![3.0, 1.0],
            probabilities: vec![0.5, 0.5],
            schedule: ScheduleKind::Mixture,
            collisions: 10_000,
            record_every: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Steady {
    pub omega: f64,
    pub temperatures: Vec<f64>,
    pub rates: Vec<f64>,
}

impl Default for Steady {
    fn default() -> Self {
        Self {
            omega: 1.0,
            temperatures: vec![3.0, 1.0],
            rates: vec![0.1, 0.1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransmonBudget {
    pub tau_int_ns: f64,
    pub tau_pr_ns: f64,
    pub tau_r_ns: f64,
    pub collisions: u64,
    pub t1_us: f64,
}

impl Default for TransmonBudget {
    fn default() -> Self {
        Self {
            tau_int_ns: 5.0,
            tau_pr_ns: 0.0,
            tau_r_ns: 0.0,
            collisions: 2000,
            t1_us: 20.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
    #[serde(default)]
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thermalize: Option<Thermalize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_gamma: Option<SweepGamma>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classify_gamma: Option<ClassifyGamma>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classify_temp: Option<ClassifyTemp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collide: Option<Collide>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steady: Option<Steady>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transmon_budget: Option<TransmonBudget>,
}

/// 1-based line of byte offset `at` in `text`.
fn line_at(text: &str, at: usize) -> usize {
    text[..at.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// 1-based line of the first assignment to `key`, if any.
pub fn key_line(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let l = l.trim_start();
        l.strip_prefix(key)
            .is_some_and(|rest| rest.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

/// Parses config text without resolving defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let config: RunConfig = toml::from_str(text).map_err(|e| {
        let msg = e.message().trim().replace('\n', " ");
        match e.span() {
            Some(span) => CliError::Config(format!("line {}: {msg}", line_at(text, span.start))),
            None => CliError::Config(msg),
        }
    })?;
    if config.experiment.kind.is_none() {
        let at = text
            .lines()
            .position(|l| l.trim() == "[experiment]")
            .map(|i| format!("line {}: ", i + 1))
            .unwrap_or_default();
        return Err(CliError::Config(format!("{at}missing experiment kind")));
    }
    Ok(config)
}

impl RunConfig {
    /// Default config for `kind`.
    pub fn defaults(kind: Kind) -> Self {
        let mut config = Self {
            experiment: Experiment {
                kind: Some(kind),
                seed: None,
            },
            ..Self::default()
        };
        config.fill_defaults();
        config
    }

    pub fn kind(&self) -> Kind {
        self.experiment.kind.expect("resolved config has a kind")
    }

    pub fn seed(&self) -> u64 {
        self.experiment.seed.unwrap_or(DEFAULT_SEED)
    }

    fn present_sections(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let flags = [
            (self.thermalize.is_some(), "thermalize"),
            (self.sweep_gamma.is_some(), "sweep_gamma"),
            (self.classify_gamma.is_some(), "classify_gamma"),
            (self.classify_temp.is_some(), "classify_temp"),
            (self.collide.is_some(), "collide"),
            (self.steady.is_some(), "steady"),
            (self.transmon_budget.is_some(), "transmon_budget"),
        ];
        for (present, name) in flags {
            if present {
                out.push(name);
            }
        }
        out
    }

    fn fill_defaults(&mut self) {
        match self.kind() {
            Kind::Thermalize => drop(self.thermalize.get_or_insert_with(Default::default)),
            Kind::SweepGamma => drop(self.sweep_gamma.get_or_insert_with(Default::default)),
            Kind::ClassifyGamma => drop(self.classify_gamma.get_or_insert_with(Default::default)),
            Kind::ClassifyTemp => drop(self.classify_temp.get_or_insert_with(Default::default)),
            Kind::Collide => drop(self.collide.get_or_insert_with(Default::default)),
            Kind::Steady => drop(self.steady.get_or_insert_with(Default::default)),
            Kind::TransmonBudget => drop(self.transmon_budget.get_or_insert_with(Default::default)),
            Kind::Verify => {}
        }
        self.experiment.seed.get_or_insert(DEFAULT_SEED);
    }

    /// Checks the config against the subcommand and fills every default.
    ///
    /// `seed` overrides the config's seed.
    pub fn resolve(mut self, subcommand: Kind, seed: Option<u64>) -> Result<Self, CliError> {
        let kind = self.kind();
        if kind != subcommand {
            return Err(CliError::Config(format!(
                "config is for `{kind}` but the subcommand is `{subcommand}`"
            )));
        }
        let expected = kind.section();
        if let Some(other) = self.present_sections().into_iter().find(|s| Some(*s) != expected) {
            return Err(CliError::Config(format!(
                "section [{other}] does not apply to experiment kind `{kind}`"
            )));
        }
        if let Some(seed) = seed {
            self.experiment.seed = Some(seed);
        }
        if self.seed() > i64::MAX as u64 {
            return Err(CliError::Config(format!("seed {} exceeds {}", self.seed(), i64::MAX)));
        }
        self.fill_defaults();
        self.meta = Some(Meta {
            version: env!("CARGO_PKG_VERSION").to_string(),
        });
        Ok(self)
    }

    /// The resolved config as TOML; feeding it back reproduces the run.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> String {
        parse_config(text).unwrap_err().to_string()
    }

    #[test]
    fn empty_experiment_section_is_missing_kind() {
        assert_eq!(err("[experiment]\n"), "error[config]: line 1: missing experiment kind");
        assert_eq!(err(""), "error[config]: missing experiment kind");
    }

    #[test]
    fn duplicate_key_is_rejected_with_line() {
        let e = err("[experiment]\nkind = \"steady\"\n[steady]\nomega = 1.0\nomega = 2.0\n");
        assert!(e.contains("line 5"), "{e}");
        assert!(e.contains("duplicate"), "{e}");
    }

    #[test]
    fn unknown_key_is_rejected_with_line() {
        let e = err("[experiment]\nkind = \"steady\"\n[steady]\ntemperatres = [3.0, 1.0]\n");
        assert!(e.contains("line 4"), "{e}");
        assert!(e.contains("temperatres"), "{e}");
    }

    #[test]
    fn unknown_kind_is_rejected() {
        let e = err("[experiment]\nkind = \"anneal\"\n");
        assert!(e.contains("line 2"), "{e}");
    }

    #[test]
    fn full_thermalize_config_echoes_values() {
        let text = "[experiment]\nkind = \"thermalize\"\n\n[thermalize]\nomega = 1.0\ntemperatures = [3.0, 1.0]\n\
                    rates = [[0.1, 0.1], [0.1, 0.05], [0.05, 0.1]]\n";
        let config = parse_config(text).unwrap().resolve(Kind::Thermalize, None).unwrap();
        let th = config.thermalize.as_ref().unwrap();
        assert_eq!(th.temperatures, [3.0, 1.0]);
        assert_eq!(th.rates, [vec![0.1, 0.1], vec![0.1, 0.05], vec![0.05, 0.1]]);
        assert_eq!(th.t_end, 2000.0);
        let echoed = config.to_toml();
        assert!(echoed.contains("temperatures = [3.0, 1.0]"), "{echoed}");
    }

    #[test]
    fn resolved_config_round_trips() {
        for kind in Kind::ALL {
            let config = RunConfig::defaults(kind).resolve(kind, Some(7)).unwrap();
            let again = parse_config(&config.to_toml()).unwrap().resolve(kind, None).unwrap();
            assert_eq!(config, again, "{kind}");
        }
    }

    #[test]
    fn kind_must_match_subcommand() {
        let config = parse_config("[experiment]\nkind = \"steady\"\n").unwrap();
        assert!(config.resolve(Kind::Collide, None).is_err());
    }

    #[test]
    fn foreign_section_rejected() {
        let config = parse_config("[experiment]\nkind = \"steady\"\n[collide]\nh = 1.0\n").unwrap();
        let e = config.resolve(Kind::Steady, None).unwrap_err().to_string();
        assert!(e.contains("[collide]"), "{e}");
    }

    #[test]
    fn key_line_finds_assignments() {
        let text = "[a]\n  tau = 1\ntau_x = 2\n";
        assert_eq!(key_line(text, "tau"), Some(2));
        assert_eq!(key_line(text, "tau_x"), Some(3));
        assert_eq!(key_line(text, "h"), None);
    }
}
