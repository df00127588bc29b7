//! Experiment configuration files.
//!
//! Configs are TOML with one section per concern. Every table rejects keys it
//! does not know, so a typo fails loudly instead of silently using a default.
//!
//! ```toml
//! [experiment]
//! id = "two_arm"
//! policy = "thompson"
//! horizon = 10000
//! runs = 100
//! seed = 7
//! checkpoints = [100, 1000, 10000]
//!
//! [delay]
//! kind = "fixed"
//! steps = 10
//!
//! [instance]
//! unique_optimum = true
//!
//! [[instance.arms]]
//! law = "bernoulli"
//! mu = 0.5
//!
//! [[instance.arms]]
//! law = "scaled_beta"
//! a = 2.0
//! b = 3.0
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use toml::Spanned;
use tsbandit::bandit::{ArmLaw, ArmModel, BanditError, BanditInstance};
use tsbandit::{DelayModel, PolicyKind, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(String),
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("{0}")]
    Unanchored(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Serde adapter for types that round-trip through `Display`/`FromStr`.
mod as_str {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(de::Error::custom)
    }
}

/// Reward law of one arm, tagged by `law`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum ArmSpec {
    Bernoulli { mu: f64 },
    Discrete { values: Vec<f64>, probs: Vec<f64> },
    ScaledBeta { a: f64, b: f64 },
    Uniform { lo: f64, hi: f64 },
    Constant { c: f64 },
}

impl ArmSpec {
    pub fn to_law(&self) -> ArmLaw {
        match self.clone() {
            ArmSpec::Bernoulli { mu } => ArmLaw::Bernoulli { mu },
            ArmSpec::Discrete { values, probs } => ArmLaw::Discrete { values, probs },
            ArmSpec::ScaledBeta { a, b } => ArmLaw::ScaledBeta { a, b },
            ArmSpec::Uniform { lo, hi } => ArmLaw::Uniform { lo, hi },
            ArmSpec::Constant { c } => ArmLaw::Constant { c },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    /// Reject instances whose best mean is shared by two arms.
    #[serde(default)]
    pub unique_optimum: bool,
    pub arms: Vec<Spanned<ArmSpec>>,
}

impl InstanceSpec {
    pub fn bernoulli(means: &[f64], unique_optimum: bool) -> Self {
        Self {
            unique_optimum,
            arms: means
                .iter()
                .map(|&mu| Spanned::new(0..0, ArmSpec::Bernoulli { mu }))
                .collect(),
        }
    }

    fn arm_line(&self, source: Option<&str>, arm: usize) -> Option<usize> {
        let span = self.arms.get(arm)?.span();
        let source = source?;
        (span.end > 0).then(|| line_of(source, span.start))
    }

    /// Builds the instance, anchoring arm errors to the arm's line in `source`.
    pub fn build(&self, source: Option<&str>) -> Result<BanditInstance, ConfigError> {
        let anchored = |arm: usize, message: String| match self.arm_line(source, arm) {
            Some(line) => ConfigError::Invalid { line, message },
            None => ConfigError::Unanchored(message),
        };
        let mut models = Vec::with_capacity(self.arms.len());
        for (arm, spec) in self.arms.iter().enumerate() {
            let model = ArmModel::new(spec.get_ref().to_law()).map_err(|e| anchored(arm, format!("arm {arm}: {e}")))?;
            models.push(model);
        }
        let built = if self.unique_optimum {
            BanditInstance::with_unique_optimum(models)
        } else {
            BanditInstance::new(models)
        };
        built.map_err(|e| match e {
            BanditError::InvalidArm { arm, .. } | BanditError::TiedOptimum { arm, .. } => anchored(arm, e.to_string()),
            other => ConfigError::Unanchored(format!("instance: {other}")),
        })
    }
}

/// Feedback delay, tagged by `kind`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DelaySpec {
    #[default]
    None,
    Fixed {
        steps: u64,
    },
    Batch {
        size: u64,
    },
}

impl From<DelaySpec> for DelayModel {
    fn from(spec: DelaySpec) -> Self {
        match spec {
            DelaySpec::None => DelayModel::None,
            DelaySpec::Fixed { steps } => DelayModel::Fixed(steps),
            DelaySpec::Batch { size } => DelayModel::Batch(size),
        }
    }
}

impl fmt::Display for DelaySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        DelayModel::from(*self).fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub id: String,
    #[serde(with = "as_str")]
    pub policy: PolicyKind,
    pub horizon: u64,
    pub runs: usize,
    pub seed: u64,
    /// Empty means "the horizon only".
    #[serde(default)]
    pub checkpoints: Vec<u64>,
    #[serde(default)]
    pub diagnostics: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub delay: DelaySpec,
    pub instance: InstanceSpec,
}

/// A parsed and validated experiment.
#[derive(Debug, Clone)]
pub struct ResolvedExperiment {
    pub config: ExperimentConfig,
    pub instance: BanditInstance,
    pub run: RunConfig,
}

impl ExperimentConfig {
    pub fn from_toml(source: &str) -> Result<Self, ConfigError> {
        toml::from_str(source).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<(Self, String), ConfigError> {
        let source = read(path)?;
        Ok((Self::from_toml(&source)?, source))
    }

    /// The resolved-config echo; parses back to an equal config.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("experiment configs always serialize")
    }

    pub fn run_config(&self) -> RunConfig {
        let e = &self.experiment;
        RunConfig::new(e.horizon, e.seed, e.policy)
            .with_checkpoints(e.checkpoints.clone())
            .with_delay(self.delay.into())
            .with_diagnostics(e.diagnostics)
    }

    /// Checks every invariant the simulator relies on. `source`, when given,
    /// is the text the config was parsed from and is used to report line numbers.
    pub fn resolve(&self, source: Option<&str>) -> Result<ResolvedExperiment, ConfigError> {
        let anchored = |key: &str, message: String| match source.and_then(|s| key_line(s, key)) {
            Some(line) => ConfigError::Invalid { line, message },
            None => ConfigError::Unanchored(message),
        };
        if self.experiment.runs == 0 {
            return Err(anchored("runs", "runs must be >= 1".into()));
        }
        let run = self.run_config();
        if let Err(e) = run.validate() {
            let msg = e.to_string();
            let key = if msg.contains("checkpoint") {
                "checkpoints"
            } else if msg.contains("horizon") {
                "horizon"
            } else {
                "kind"
            };
            return Err(anchored(key, msg));
        }
        let instance = self.instance.build(source)?;
        Ok(ResolvedExperiment {
            config: self.clone(),
            instance,
            run,
        })
    }
}

pub(crate) fn read(path: &std::path::Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// 1-based line containing byte `offset`.
pub(crate) fn line_of(source: &str, offset: usize) -> usize {
    source.as_bytes()[..offset.min(source.len())]
        .iter()
        .filter(|&&b| b == b'\n')
        .count()
        + 1
}

/// 1-based line of the first `key = ...` assignment.
pub(crate) fn key_line(source: &str, key: &str) -> Option<usize> {
    source
        .lines()
        .position(|l| {
            l.trim_start()
                .strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map(|i| i + 1)
}

/// Parameter grid for a sweep. Empty lists fall back to the base experiment.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub policies: Vec<String>,
    #[serde(default)]
    pub delays: Vec<DelaySpec>,
    #[serde(default)]
    pub horizons: Vec<u64>,
    /// Gaps of a two-arm Bernoulli instance `(best_mean, best_mean − Δ)`.
    /// When set, replaces `[instance]`.
    #[serde(default)]
    pub gaps: Vec<f64>,
    #[serde(default = "default_best_mean")]
    pub best_mean: f64,
}

fn default_best_mean() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub delay: DelaySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceSpec>,
    pub grid: GridSpec,
}

impl SweepConfig {
    pub fn from_toml(source: &str) -> Result<Self, ConfigError> {
        toml::from_str(source).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<(Self, String), ConfigError> {
        let source = read(path)?;
        Ok((Self::from_toml(&source)?, source))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sweep configs always serialize")
    }
}

/// Horizons and kinds for `bounds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    pub horizons: Vec<f64>,
    #[serde(default)]
    pub kinds: Vec<String>,
    /// Constant of the shape-only curve.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub instance: InstanceSpec,
    pub bounds: BoundsSection,
}

impl BoundsConfig {
    pub fn from_toml(source: &str) -> Result<Self, ConfigError> {
        toml::from_str(source).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::from_toml(&read(path)?)
    }
}

/// Parses a policy name, for grids and flags.
pub fn parse_policy(name: &str) -> Result<PolicyKind, ConfigError> {
    PolicyKind::from_str(name).map_err(|e| ConfigError::Unanchored(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[experiment]
id = "minimal"
policy = "thompson"
horizon = 1000
runs = 10
seed = 1
checkpoints = [10, 100, 1000]

[[instance.arms]]
law = "bernoulli"
mu = 0.5

[[instance.arms]]
law = "bernoulli"
mu = 0.4
"#;

    #[test]
    fn minimal_config_parses() {
        let cfg = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(cfg.experiment.policy, PolicyKind::Thompson);
        assert_eq!(cfg.delay, DelaySpec::None);
        let r = cfg.resolve(Some(MINIMAL)).unwrap();
        assert_eq!(r.instance.len(), 2);
        assert_eq!(r.run.checkpoints(), vec![10, 100, 1000]);
    }

    #[test]
    fn resolved_echo_round_trips() {
        let mut cfg = ExperimentConfig::from_toml(MINIMAL).unwrap();
        cfg.delay = DelaySpec::Batch { size: 4 };
        cfg.instance
            .arms
            .push(Spanned::new(0..0, ArmSpec::ScaledBeta { a: 0.1, b: 2.5 }));
        cfg.instance.arms.push(Spanned::new(
            0..0,
            ArmSpec::Discrete {
                values: vec![0.0, 0.3, 1.0],
                probs: vec![0.2, 0.3, 0.5],
            },
        ));
        let echo = cfg.to_toml();
        assert_eq!(ExperimentConfig::from_toml(&echo).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_are_rejected_with_a_line() {
        let bad = MINIMAL.replace("seed = 1", "seed = 1\nsead = 2");
        let err = ExperimentConfig::from_toml(&bad).unwrap_err().to_string();
        assert!(err.contains("sead"), "{err}");
        assert!(err.contains("line 8"), "{err}");

        let bad = MINIMAL.replace("mu = 0.4", "mu = 0.4\nsigma = 1.0");
        let err = ExperimentConfig::from_toml(&bad).unwrap_err().to_string();
        assert!(err.contains("sigma"), "{err}");
    }

    #[test]
    fn unknown_law_and_policy_are_rejected() {
        let bad = MINIMAL.replacen("law = \"bernoulli\"", "law = \"gaussian\"", 1);
        assert!(ExperimentConfig::from_toml(&bad).is_err());
        let bad = MINIMAL.replace("thompson", "greedy");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
    }

    #[test]
    fn tied_unique_optimum_names_the_arm() {
        let src = MINIMAL.replacen(
            "[[instance.arms]]",
            "[instance]\nunique_optimum = true\n\n[[instance.arms]]",
            1,
        ) + "\n[[instance.arms]]\nlaw = \"bernoulli\"\nmu = 0.5\n";
        let cfg = ExperimentConfig::from_toml(&src).unwrap();
        let err = cfg.resolve(Some(&src)).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("arm 2"), "{text}");
        let ConfigError::Invalid { line, .. } = err else {
            panic!("expected a line-anchored error, got {text}");
        };
        assert_eq!(src.lines().nth(line - 1).unwrap().trim(), "[[instance.arms]]");
    }

    #[test]
    fn invalid_arm_is_anchored() {
        let bad = MINIMAL.replace("mu = 0.4", "mu = 1.4");
        let cfg = ExperimentConfig::from_toml(&bad).unwrap();
        let err = cfg.resolve(Some(&bad)).unwrap_err();
        assert!(matches!(err, ConfigError::Invalid { line: 14, .. }), "{err}");
    }

    #[test]
    fn checkpoint_errors_point_at_the_key() {
        let bad = MINIMAL.replace("[10, 100, 1000]", "[10, 100, 5000]");
        let cfg = ExperimentConfig::from_toml(&bad).unwrap();
        let err = cfg.resolve(Some(&bad)).unwrap_err();
        assert!(matches!(err, ConfigError::Invalid { line: 8, .. }), "{err}");
    }

    #[test]
    fn delay_sections() {
        for (text, want) in [
            ("kind = \"none\"", DelaySpec::None),
            ("kind = \"fixed\"\nsteps = 10", DelaySpec::Fixed { steps: 10 }),
            ("kind = \"batch\"\nsize = 3", DelaySpec::Batch { size: 3 }),
        ] {
            let src = format!("{MINIMAL}\n[delay]\n{text}\n");
            assert_eq!(ExperimentConfig::from_toml(&src).unwrap().delay, want);
        }
        let src = format!("{MINIMAL}\n[delay]\nkind = \"fixed\"\nsize = 3\n");
        assert!(ExperimentConfig::from_toml(&src).is_err());
    }
}
